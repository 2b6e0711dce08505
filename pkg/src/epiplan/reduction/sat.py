"""Propositional satisfiability as a single-agent S5 planning problem."""
from __future__ import annotations

from ..action import make_action
from ..errors import InvalidProblem
from ..formula import (
    And,
    FalseF,
    Formula,
    Not,
    Prop,
    diamond,
    modal_depth,
    not_,
    propositions,
)
from ..frames import profile
from ..kripke import EpistemicState, make_model
from ..problem import PlanningProblem

_HUB = "0"


def _possibilify(f: Formula) -> Formula:
    """Replace every proposition p with <K> p."""
    if isinstance(f, FalseF):
        return f
    if isinstance(f, Prop):
        return diamond(0, f)
    if isinstance(f, Not):
        return Not(_possibilify(f.sub))
    if isinstance(f, And):
        return And(_possibilify(f.left), _possibilify(f.right))
    raise TypeError(f"not a propositional formula: {f!r}")


def sat_to_ep(phi: Formula) -> PlanningProblem:
    """Compile a propositional formula into an S5 plan-existence instance.

    One world per variable plus a hub world, totally connected; deleting
    variable worlds picks a falsifying set, and the goal reads each
    variable p as <K> p (the p-world is still considered possible).
    """
    if modal_depth(phi) != 0:
        raise InvalidProblem("sat_to_ep needs a propositional formula")
    variables = sorted(propositions(phi))
    if _HUB in variables:
        raise InvalidProblem(f"variable name {_HUB!r} collides with the hub world")
    worlds = [_HUB] + variables
    total = {(u, v) for u in worlds for v in worlds}
    model = make_model(worlds, 1, [total], {p: {p} for p in variables})
    initial = EpistemicState(model, _HUB)
    actions = {}
    for p in variables:
        name = f"delete_{p}"
        actions[name] = make_action(
            [name], 1, [{(name, name)}], {name: not_(Prop(p))}, name
        )
    return PlanningProblem(
        initial=initial,
        actions=actions,
        goal=_possibilify(phi),
        logic=profile("S5"),
        meta={"kind": "sat", "variables": variables},
    )
