"""Compiler-level checks: counts, shorthands, oracles, witnesses, failure."""
import pytest

from epiplan import errors
from epiplan.action import FailureAt, applicable, apply_plan, product_update
from epiplan.bisim import bisimilar, canonical_key
from epiplan.formula import and_, diamond, evaluate, know, not_, or_, parse, prop
from epiplan.frames import PROFILES, satisfies
from epiplan.pcp import brute_force_match, make_instance, matched_word
from epiplan.problem import problem_from_json, problem_to_json, validate_problem
from epiplan.reduction import (
    Variant,
    failed_state_check,
    match_to_plan,
    module,
    oracle_state,
    plan_match_prefix,
    reduce_instance,
    sat_to_ep,
    shorthand,
)

EXAMPLE = make_instance([("1", "101"), ("10", "00"), ("011", "11")])


def test_action_counts():
    assert len(reduce_instance(EXAMPLE, Variant.K1).actions) == 6          # n + 1 + 2
    assert len(reduce_instance(EXAMPLE, Variant.MULTI_S5).actions) == 7    # n + 1 + 3
    assert len(reduce_instance(EXAMPLE, Variant.KTB1).actions) == 8        # n + 1 + 4
    assert len(reduce_instance(EXAMPLE, Variant.S4_1).actions) == 7        # n + 1 + 3


def test_k1_goal_formula():
    goal = module(Variant.K1).goal()
    tail = and_(or_(prop("a"), prop("b")), know(0, not_(or_(prop("0"), prop("1")))))
    failed = and_(or_(prop("a"), prop("b")), know(0, not_(prop("ntF"))))
    assert goal == and_(know(0, not_(prop("empty"))), know(0, and_(tail, not_(failed))))


def test_shorthands():
    assert shorthand(Variant.K1, "failed") == and_(
        or_(prop("a"), prop("b")), know(0, not_(prop("ntF")))
    )
    assert shorthand(Variant.K1, "loop_a") == and_(prop("a"), diamond(0, prop("lp")))
    assert shorthand(Variant.S4_1, "nxt", "#") == or_(prop("0"), prop("1"))
    assert shorthand(Variant.KTB1, "nxt", "0") == prop("#1")
    assert shorthand(Variant.MULTI_S5, "ag1") == parse("root | 0 | 1")
    with pytest.raises(errors.UnknownShorthand):
        shorthand(Variant.K1, "nope")
    with pytest.raises(errors.UnknownShorthand):
        shorthand(Variant.MULTI_S5, "tail", "7")


def test_oracle_flavors():
    s = oracle_state(Variant.K1, "", "", "plain")
    assert set(s.model.worlds) == {"w_root", "w_a", "w_b", "w_ntF"}
    loop = oracle_state(Variant.K1, "10", "0", "loop")
    chain_a = [w for w in loop.model.worlds if w.startswith("w_{a,")]
    chain_b = [w for w in loop.model.worlds if w.startswith("w_{b,")]
    assert len(chain_a) == 2 and len(chain_b) == 1
    with pytest.raises(errors.IllegalFlavor):
        oracle_state(Variant.K1, "", "", "minus_hash1")
    with pytest.raises(errors.IllegalFlavor):
        oracle_state(Variant.MULTI_S5, "", "", "minus_hash2")
    with pytest.raises(ValueError):
        oracle_state(Variant.K1, "12", "", "plain")


def test_initial_state_not_bisimilar_to_empty_loop_family():
    for variant in Variant:
        mod = module(variant)
        assert not bisimilar(mod.initial_state(), mod.family("", "", "loop"))


@pytest.mark.parametrize("variant", list(Variant))
def test_witness_plan_reaches_goal(variant):
    match = brute_force_match(EXAMPLE, 4)
    plan = match_to_plan(EXAMPLE, match, variant)
    problem = reduce_instance(EXAMPLE, variant)
    validate_problem(problem)
    final = apply_plan(problem.initial, problem.actions, plan, minimize=True)
    assert not isinstance(final, FailureAt)
    assert evaluate(final, problem.goal)


def test_witness_plan_lengths():
    match = brute_force_match(EXAMPLE, 4)
    assert len(match_to_plan(EXAMPLE, match, Variant.K1)) == 14
    assert len(match_to_plan(EXAMPLE, match, Variant.MULTI_S5)) == 23
    assert len(match_to_plan(EXAMPLE, match, Variant.KTB1)) == 32
    assert len(match_to_plan(EXAMPLE, match, Variant.S4_1)) == 23
    with pytest.raises(errors.NotAMatch):
        match_to_plan(EXAMPLE, (1, 2), Variant.K1)


def test_dropping_last_removal_misses_goal():
    match = brute_force_match(EXAMPLE, 4)
    plan = match_to_plan(EXAMPLE, match, Variant.K1)
    problem = reduce_instance(EXAMPLE, Variant.K1)
    final = apply_plan(problem.initial, problem.actions, plan[:-1], minimize=True)
    assert not isinstance(final, FailureAt)
    assert not evaluate(final, problem.goal)


def test_plan_match_prefix():
    match = brute_force_match(EXAMPLE, 4)
    for variant in Variant:
        plan = match_to_plan(EXAMPLE, match, variant)
        assert plan_match_prefix(plan, variant) == match
    with pytest.raises(errors.NotAMatch):
        plan_match_prefix(["next_stage"], Variant.K1)


def test_failed_state_check_examples():
    mod = module(Variant.K1)
    clean = mod.family("10", "0", "plain")
    assert not failed_state_check(clean, Variant.K1)
    # first-stage states violate the stage clause at the root
    assert not failed_state_check(mod.family("10", "0", "loop"), Variant.K1)
    bad = product_update(mod.family("10", "0", "plain"), mod.build_actions(EXAMPLE)["remove_1"])
    assert failed_state_check(bad, Variant.K1)


@pytest.mark.parametrize("variant", list(Variant))
def test_failure_absorption_per_variant(variant):
    from epiplan.suites import run_failure_absorption

    report = run_failure_absorption(cases=25, variant=variant)
    assert report.ok, report.failures[:5]


def test_frames_validated_for_closed_variants():
    for variant, name in [
        (Variant.MULTI_S5, "S5"),
        (Variant.KTB1, "KTB"),
        (Variant.S4_1, "S4"),
    ]:
        problem = reduce_instance(EXAMPLE, variant)
        assert satisfies(problem.initial.model, PROFILES[name])
        validate_problem(problem)


def test_problem_json_round_trip():
    problem = reduce_instance(EXAMPLE, Variant.K1)
    doc = problem_to_json(problem)
    again = problem_to_json(problem_from_json(doc))
    assert again == doc


def test_sat_to_ep_structure():
    problem = sat_to_ep(parse("p & !q"))
    assert set(problem.initial.model.worlds) == {"0", "p", "q"}
    assert problem.initial.designated == "0"
    assert sorted(problem.actions) == ["delete_p", "delete_q"]
    assert satisfies(problem.initial.model, PROFILES["S5"])
    with pytest.raises(errors.InvalidProblem):
        sat_to_ep(parse("K p"))


def test_sat_to_ep_examples():
    from epiplan.planner import NoPlanExhausted, PlanFound, s5_single_agent_plan

    assert s5_single_agent_plan(sat_to_ep(parse("p & q"))).plan == ()
    assert s5_single_agent_plan(sat_to_ep(parse("p & !q"))).plan == ("delete_q",)
    assert isinstance(s5_single_agent_plan(sat_to_ep(parse("p & !p"))), NoPlanExhausted)


def test_keys_of_lemma_pairs_coincide():
    mod = module(Variant.K1)
    s = mod.family("10", "0", "loop")
    grown = product_update(s, mod.add_block(1, ("1", "101")))
    target = mod.family("101", "0101", "loop")
    assert canonical_key(grown) == canonical_key(target)
