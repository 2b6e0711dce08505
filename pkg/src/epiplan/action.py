"""Event models, applicability, product update, and plan application.

An event model is a pointed Kripke frame whose events carry precondition
formulas.  Applying one to an epistemic state (the product update) keeps
exactly the world/event pairs whose world satisfies the event's
precondition; there are no postconditions, so valuations are inherited
from the source world unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from . import bisim
from .errors import (
    AgentMismatch,
    DanglingEventRef,
    DepthExceeded,
    NotApplicable,
    UnknownActionName,
)
from .formula import (
    And,
    FalseF,
    Formula,
    Know,
    Not,
    Prop,
    _eval,
    extension_mask,
    formula_from_json,
    formula_to_json,
    modal_depth,
)
from .kripke import EpistemicState, KripkeModel, Pair

__all__ = [
    "EventModel",
    "make_action",
    "applicable",
    "product_update",
    "apply_plan",
    "FailureAt",
    "Separability",
    "is_separable",
    "action_to_json",
    "action_from_json",
]


@dataclass(frozen=True)
class EventModel:
    """A pointed event frame with per-event preconditions.

    ``preconditions[i]`` belongs to ``events[i]``.  ``depth_bound`` caps
    the modal depth of every precondition (``None`` means unbounded); the
    planner requires bound 1.
    """

    events: tuple[str, ...]
    agents: int
    relations: tuple[frozenset[Pair], ...]
    preconditions: tuple[Formula, ...]
    designated: str
    depth_bound: int | None = 1

    def __post_init__(self):
        index = {e: i for i, e in enumerate(self.events)}
        succ = []
        for rel in self.relations:
            table: dict[str, list[str]] = {e: [] for e in self.events}
            for u, v in rel:
                table[u].append(v)
            for lst in table.values():
                lst.sort(key=index.__getitem__)
            succ.append({e: tuple(vs) for e, vs in table.items()})
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_succ", tuple(succ))

    def __contains__(self, event: str) -> bool:
        return event in self._index

    def pre(self, event: str) -> Formula:
        return self.preconditions[self._index[event]]

    def successors(self, agent: int, event: str) -> tuple[str, ...]:
        return self._succ[agent][event]


def make_action(
    events: Iterable[str],
    agent_count: int,
    relations: Iterable[Iterable[Pair]],
    pre: Mapping[str, Formula],
    designated: str,
    depth_bound: int | None = 1,
) -> EventModel:
    """Validate and build an event model.

    Rejects dangling event references and any precondition whose modal
    depth exceeds ``depth_bound``.
    """
    event_list = tuple(events)
    seen = set(event_list)
    if len(seen) != len(event_list):
        raise DanglingEventRef("duplicate event identifiers")
    rels = tuple(frozenset(tuple(p) for p in rel) for rel in relations)
    if len(rels) != agent_count:
        raise ValueError(f"expected {agent_count} relations, got {len(rels)}")
    for rel in rels:
        for u, v in rel:
            if u not in seen or v not in seen:
                raise DanglingEventRef(f"relation pair ({u!r}, {v!r}) references unknown event")
    if designated not in seen:
        raise DanglingEventRef(f"designated event {designated!r} not in event list")
    for e in pre:
        if e not in seen:
            raise DanglingEventRef(f"precondition given for unknown event {e!r}")
    pres = []
    for e in event_list:
        if e not in pre:
            raise DanglingEventRef(f"missing precondition for event {e!r}")
        f = pre[e]
        if depth_bound is not None:
            depth = modal_depth(f)
            if depth > depth_bound:
                raise DepthExceeded(e, depth, depth_bound)
        pres.append(f)
    return EventModel(event_list, agent_count, rels, tuple(pres), designated, depth_bound)


def applicable(state: EpistemicState, action: EventModel) -> bool:
    """Whether the action's designated precondition holds at the state."""
    if state.model.agents != action.agents:
        raise AgentMismatch(
            f"state has {state.model.agents} agent(s), action has {action.agents}"
        )
    return _eval(state.model, state.designated, action.pre(action.designated))


def product_update(state: EpistemicState, action: EventModel) -> EpistemicState:
    """The product of a state with an applicable action.

    Worlds are the pairs ``(u, e)`` with ``u`` satisfying ``pre(e)``,
    ordered by (world order, event order); a pair relates to another under
    an agent when both components do; valuations are inherited from the
    world component.
    """
    model = state.model
    if state.model.agents != action.agents:
        raise AgentMismatch(
            f"state has {state.model.agents} agent(s), action has {action.agents}"
        )
    cache: dict = {}
    holds = {e: extension_mask(model, action.pre(e), cache) for e in action.events}
    if not holds[action.designated] >> model.index_of(state.designated) & 1:
        raise NotApplicable(f"designated precondition fails at {state.designated!r}")
    sat: dict[str, list[str]] = {}
    for i, u in enumerate(model.worlds):
        row = [e for e in action.events if holds[e] >> i & 1]
        if row:
            sat[u] = row
    worlds = []
    vals = []
    name = {}
    for u, events in sat.items():
        for e in events:
            label = f"({u},{e})"
            name[(u, e)] = label
            worlds.append(label)
            vals.append(model.valuation_of(u))
    sat_sets = {u: set(events) for u, events in sat.items()}
    rels = []
    for a in range(model.agents):
        pairs = set()
        for u, events in sat.items():
            succ_rows = [
                (v, sat_sets[v]) for v in model.successors(a, u) if v in sat_sets
            ]
            for e in events:
                for f in action.successors(a, e):
                    for v, targets in succ_rows:
                        if f in targets:
                            pairs.add((name[(u, e)], name[(v, f)]))
        rels.append(frozenset(pairs))
    new_model = KripkeModel(tuple(worlds), model.agents, tuple(rels), tuple(vals))
    return EpistemicState(new_model, name[(state.designated, action.designated)])


@dataclass(frozen=True)
class FailureAt:
    """Reported by apply_plan: the first plan step that was inapplicable."""

    index: int
    action: str


def apply_plan(
    state: EpistemicState,
    actions: Mapping[str, EventModel],
    plan: Sequence[str],
    minimize: bool = False,
) -> EpistemicState | FailureAt:
    """Left fold of product updates over the plan.

    With ``minimize`` the state is quotiented by bisimulation after each
    step, which preserves applicability and goal truth.
    """
    for name in plan:
        if name not in actions:
            raise UnknownActionName(f"plan mentions unknown action {name!r}")
    current = state
    for i, name in enumerate(plan):
        action = actions[name]
        if not applicable(current, action):
            return FailureAt(i, name)
        current = product_update(current, action)
        if minimize:
            current = bisim.quotient(current)
    return current


class Separability(Enum):
    SEPARABLE = "separable"
    NOT_SEPARABLE = "not_separable"
    UNKNOWN = "unknown"


def _prop_abstract(f: Formula, atoms: dict[Formula, int]) -> tuple:
    """Formula over integers: propositions and Know-subtrees become atoms."""
    if isinstance(f, FalseF):
        return ("const", False)
    if isinstance(f, (Prop, Know)):
        if f not in atoms:
            atoms[f] = len(atoms)
        return ("atom", atoms[f])
    if isinstance(f, Not):
        return ("not", _prop_abstract(f.sub, atoms))
    if isinstance(f, And):
        return ("and", _prop_abstract(f.left, atoms), _prop_abstract(f.right, atoms))
    raise TypeError(f"not a formula: {f!r}")


def _abstract_eval(tree: tuple, assignment: int) -> bool:
    tag = tree[0]
    if tag == "const":
        return tree[1]
    if tag == "atom":
        return bool(assignment >> tree[1] & 1)
    if tag == "not":
        return not _abstract_eval(tree[1], assignment)
    return _abstract_eval(tree[1], assignment) and _abstract_eval(tree[2], assignment)


def _jointly_sat_abstract(f: Formula, g: Formula) -> bool:
    atoms: dict[Formula, int] = {}
    tf, tg = _prop_abstract(f, atoms), _prop_abstract(g, atoms)
    if len(atoms) > 22:
        return True  # too many atoms to enumerate; treat as possibly-sat
    return any(
        _abstract_eval(tf, m) and _abstract_eval(tg, m) for m in range(1 << len(atoms))
    )


def is_separable(actions: Mapping[str, EventModel]) -> Separability:
    """Best-effort check that no two actions can apply to the same state.

    Compares the designated-event preconditions pairwise on their
    propositional cores (knowledge subformulas abstracted to fresh atoms).
    A contradictory core proves the pair incompatible; a satisfiable core
    is conclusive only when no knowledge operators are involved or the two
    preconditions are syntactically identical.  Anything else is UNKNOWN.
    """
    pres = [actions[name].pre(actions[name].designated) for name in sorted(actions)]
    verdict = Separability.SEPARABLE
    for i in range(len(pres)):
        for j in range(i + 1, len(pres)):
            f, g = pres[i], pres[j]
            if not _jointly_sat_abstract(f, g):
                continue
            if f == g or (modal_depth(f) == 0 and modal_depth(g) == 0):
                return Separability.NOT_SEPARABLE
            verdict = Separability.UNKNOWN
    return verdict


# --- JSON encoding -------------------------------------------------------


def action_to_json(action: EventModel) -> dict[str, Any]:
    return {
        "agents": action.agents,
        "events": sorted(action.events),
        "relations": [sorted([u, v] for (u, v) in rel) for rel in action.relations],
        "pre": {e: formula_to_json(action.pre(e)) for e in action.events},
        "designated": action.designated,
        "depth_bound": action.depth_bound,
    }


def action_from_json(doc: Mapping[str, Any]) -> EventModel:
    return make_action(
        doc["events"],
        int(doc["agents"]),
        [[(u, v) for u, v in rel] for rel in doc["relations"]],
        {e: formula_from_json(f) for e, f in doc["pre"].items()},
        doc["designated"],
        doc.get("depth_bound"),
    )
