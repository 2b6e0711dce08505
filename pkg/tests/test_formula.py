import pytest

from epiplan import errors
from epiplan.formula import (
    And,
    FalseF,
    Know,
    Not,
    Prop,
    and_,
    diamond,
    evaluate,
    evaluate_at,
    formula_from_json,
    formula_to_json,
    implies,
    know,
    modal_depth,
    not_,
    or_,
    parse,
    prop,
    to_text,
    true_,
)
from epiplan.kripke import EpistemicState, make_model
from epiplan.reduction import k1


def test_desugaring():
    assert true_() == Not(FalseF())
    assert or_(prop("a"), prop("b")) == Not(And(Not(Prop("a")), Not(Prop("b"))))
    assert diamond(0, prop("p")) == Not(Know(0, Not(Prop("p"))))
    assert implies(prop("a"), prop("b")) == or_(not_(prop("a")), prop("b"))


def test_proposition_names():
    for name in ("#", "#1", "#2", "ntF", "0"):
        assert prop(name) == Prop(name)
    for bad in ("", "a b", "true", "K", "p-q"):
        with pytest.raises(ValueError):
            prop(bad)


def test_modal_depth():
    assert modal_depth(prop("p")) == 0
    assert modal_depth(know(0, and_(prop("p"), diamond(0, prop("q"))))) == 2
    # the add-block trigger precondition has depth exactly 1
    pre = and_(prop("root"), diamond(0, prop("stg1")))
    assert modal_depth(pre) == 1
    assert modal_depth(diamond(1, know(0, prop("p")))) == 1 + modal_depth(know(0, prop("p")))


def test_parse_examples():
    assert parse("K{0} !stg1") == Know(0, Not(Prop("stg1")))
    assert parse("<K{0}> empty") == diamond(0, prop("empty"))
    assert parse("(a | b) & K{0} !symb_marker") == and_(
        or_(prop("a"), prop("b")), know(0, not_(prop("symb_marker")))
    )
    # single-agent shorthand and precedence
    assert parse("K p") == know(0, prop("p"))
    assert parse("a & b | c") == or_(and_(prop("a"), prop("b")), prop("c"))
    assert parse("a -> b -> c") == implies(prop("a"), implies(prop("b"), prop("c")))
    assert parse("!a & b") == and_(not_(prop("a")), prop("b"))


def test_parse_errors_carry_positions():
    with pytest.raises(errors.FormulaSyntaxError) as info:
        parse("a & ")
    assert info.value.position == 4
    with pytest.raises(errors.FormulaSyntaxError):
        parse("K{x} p")
    with pytest.raises(errors.FormulaSyntaxError):
        parse("(a | b")


@pytest.mark.parametrize(
    "text",
    [
        "false",
        "true",
        "a",
        "#1",
        "!a",
        "a & b & c",
        "a | (b & c)",
        "K{0} (a -> b)",
        "<K{1}> !lp",
        "K{0} !stg1 & root",
        "a -> b",
    ],
)
def test_round_trip(text):
    f = parse(text)
    assert parse(to_text(f)) == f


def test_round_trip_random():
    import random

    from epiplan.suites import random_formula

    rng = random.Random(5)
    for _ in range(300):
        f = random_formula(rng, 3, 2)
        assert parse(to_text(f)) == f


def test_evaluate_on_initial_state():
    s = k1.initial_state()
    assert evaluate(s, parse("<K> empty"))
    assert evaluate(s, true_())
    assert evaluate(s, parse("K !0"))
    assert evaluate_at(s, "w_empty", prop("empty"))
    assert evaluate_at(s, "w_{0,a}", parse("0 & a"))
    with pytest.raises(errors.UnknownWorld):
        evaluate_at(s, "w_z", prop("empty"))


def test_unknown_agent():
    m = make_model(["w"], 1, [set()], {})
    s = EpistemicState(m, "w")
    with pytest.raises(errors.UnknownAgent):
        evaluate(s, know(3, prop("p")))


def test_json_round_trip():
    f = parse("K{1} (a -> !b) & <K{0}> #1")
    assert formula_from_json(formula_to_json(f)) == f
