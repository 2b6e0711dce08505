import pytest

from epiplan import errors
from epiplan.pcp import (
    brute_force_match,
    instance_from_json,
    instance_to_json,
    make_instance,
    matched_word,
)


def test_single_equal_block():
    inst = make_instance([("01", "01")])
    assert brute_force_match(inst, 4) == (1,)
    assert matched_word(inst, (1,)) == "01"


def test_mismatched_first_symbols_never_match():
    inst = make_instance([("0", "1")])
    assert brute_force_match(inst, 12) is None


def test_worked_example():
    inst = make_instance([("1", "101"), ("10", "00"), ("011", "11")])
    match = brute_force_match(inst, 4)
    assert match == (1, 3, 2, 3)
    assert matched_word(inst, match) == "101110011"


def test_determinism():
    inst = make_instance([("1", "101"), ("10", "00"), ("011", "11")])
    assert brute_force_match(inst, 4) == brute_force_match(inst, 4)


def test_shortest_then_lexicographic():
    # both block 1 and block 2 match alone; the lexicographically first wins
    inst = make_instance([("1", "1"), ("0", "0")])
    assert brute_force_match(inst, 3) == (1,)


def test_empty_words_are_first_class():
    inst = make_instance([("", "")])
    assert brute_force_match(inst, 2) == (1,)
    assert matched_word(inst, (1,)) == ""
    inst2 = make_instance([("01", "0"), ("", "1")])
    match = brute_force_match(inst2, 4)
    assert match is not None
    assert matched_word(inst2, match)


def test_matched_word_errors():
    inst = make_instance([("1", "101"), ("10", "00"), ("011", "11")])
    with pytest.raises(errors.NotAMatch):
        matched_word(inst, (1, 2))
    with pytest.raises(errors.NotAMatch):
        matched_word(inst, ())
    with pytest.raises(errors.NotAMatch):
        matched_word(inst, (9,))


def test_validation():
    with pytest.raises(ValueError):
        make_instance([])
    with pytest.raises(ValueError):
        make_instance([("0", "2")])
    with pytest.raises(ValueError):
        brute_force_match(make_instance([("0", "0")]), 0)


def test_match_found_by_oracle_always_validates():
    import random

    from epiplan.suites import _random_instance

    rng = random.Random(31)
    for _ in range(200):
        inst = _random_instance(rng)
        match = brute_force_match(inst, 5)
        if match is not None:
            matched_word(inst, match)


def test_json_round_trip():
    inst = make_instance([("1", "101"), ("", "0")])
    assert instance_from_json(instance_to_json(inst)) == inst
