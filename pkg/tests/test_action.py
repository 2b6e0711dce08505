import pytest

from epiplan import errors
from epiplan.action import (
    FailureAt,
    Separability,
    action_from_json,
    action_to_json,
    applicable,
    apply_plan,
    is_separable,
    make_action,
    product_update,
)
from epiplan.bisim import bisimilar
from epiplan.formula import and_, know, not_, parse, prop
from epiplan.pcp import make_instance
from epiplan.reduction import k1


def test_make_action_validation():
    pre = {"e": prop("p")}
    a = make_action(["e"], 1, [{("e", "e")}], pre, "e")
    assert a.pre("e") == prop("p")
    with pytest.raises(errors.DepthExceeded):
        make_action(["e"], 1, [set()], {"e": know(0, know(0, prop("p")))}, "e")
    with pytest.raises(errors.DanglingEventRef):
        make_action(["e"], 1, [set()], pre, "missing")
    with pytest.raises(errors.DanglingEventRef):
        make_action(["e"], 1, [{("e", "f")}], pre, "e")
    with pytest.raises(errors.DanglingEventRef):
        make_action(["e", "f"], 1, [set()], pre, "e")


def test_next_stage_shape():
    nx = k1.next_stage()
    assert nx.events == ("e_nx",)
    assert nx.relations[0] == frozenset({("e_nx", "e_nx")})
    from epiplan.formula import modal_depth

    assert modal_depth(nx.pre("e_nx")) == 1


def test_applicability_examples():
    s = k1.initial_state()
    ad1 = k1.add_block(1, ("1", "101"))
    assert applicable(s, ad1)
    assert not applicable(s, k1.remove_symbol("0"))
    # after the stage switch neither add-block nor the switch applies
    plain = k1.family("10", "0", "plain")
    assert not applicable(plain, ad1)
    assert not applicable(plain, k1.next_stage())


def test_agent_mismatch():
    from epiplan.reduction import multi

    with pytest.raises(errors.AgentMismatch):
        applicable(k1.initial_state(), multi.next_stage())


def test_product_update_not_applicable():
    with pytest.raises(errors.NotApplicable):
        product_update(k1.initial_state(), k1.remove_symbol("0"))


def test_product_update_world_order_and_valuation():
    s = k1.family("", "", "loop")
    p = product_update(s, k1.add_block(1, ("1", "")))
    # pair names and inherited valuations
    assert p.designated == "(w_root,e_s)"
    assert p.model.valuation_of("(w_root,e_s)") == frozenset({"root"})
    # worlds are ordered by (world order, event order)
    firsts = [w for w in p.model.worlds if w.startswith("(w_root")]
    assert firsts == ["(w_root,e_s)"]


def test_apply_plan():
    inst = make_instance([("1", "101"), ("10", "00"), ("011", "11")])
    actions = k1.build_actions(inst)
    s = k1.initial_state()
    assert apply_plan(s, actions, []) == s
    result = apply_plan(s, actions, ["remove_0"])
    assert result == FailureAt(0, "remove_0")
    with pytest.raises(errors.UnknownActionName):
        apply_plan(s, actions, ["fly"])
    # full witness plan reaches a goal state
    from epiplan.formula import evaluate

    plan = ["ad_1", "ad_3", "ad_2", "ad_3", "next_stage"] + ["remove_" + b for b in reversed("101110011")]
    assert len(plan) == 14
    final = apply_plan(s, actions, plan, minimize=True)
    assert not isinstance(final, FailureAt)
    assert evaluate(final, k1.goal())


def test_apply_plan_minimize_is_transparent():
    inst = make_instance([("1", "101"), ("10", "00")])
    actions = k1.build_actions(inst)
    s = k1.initial_state()
    plan = ["ad_1", "ad_2", "next_stage"]
    a = apply_plan(s, actions, plan, minimize=False)
    b = apply_plan(s, actions, plan, minimize=True)
    assert bisimilar(a, b)


def test_is_separable():
    single = lambda name, pre: make_action([name], 1, [{(name, name)}], {name: pre}, name)
    sep = {"x": single("x", prop("p")), "y": single("y", not_(prop("p")))}
    assert is_separable(sep) == Separability.SEPARABLE
    unk = {
        "x": single("x", parse("<K> p")),
        "y": single("y", parse("K q")),
    }
    assert is_separable(unk) == Separability.UNKNOWN
    # the compiled action set shares identical trigger preconditions
    inst = make_instance([("1", "101"), ("10", "00"), ("011", "11")])
    assert is_separable(k1.build_actions(inst)) == Separability.NOT_SEPARABLE


def test_action_json_round_trip():
    ad = k1.add_block(2, ("10", "00"))
    doc = action_to_json(ad)
    back = action_from_json(doc)
    assert action_to_json(back) == doc
    s = k1.family("1", "0", "loop")
    assert bisimilar(product_update(s, ad), product_update(s, back))
