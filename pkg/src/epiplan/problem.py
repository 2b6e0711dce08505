"""The plan-existence problem instance: initial state, actions, goal, logic."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .action import EventModel, action_from_json, action_to_json
from .errors import InvalidProblem
from .formula import Formula, formula_from_json, formula_to_json, modal_depth
from .frames import LogicProfile, profile_from_json, profile_to_json, satisfies
from .kripke import EpistemicState, KripkeModel, state_from_json, state_to_json


@dataclass(frozen=True)
class PlanningProblem:
    """Initial state + named action set + goal formula + logic profile."""

    initial: EpistemicState
    actions: Mapping[str, EventModel]
    goal: Formula
    logic: LogicProfile
    meta: Mapping[str, Any] = field(default_factory=dict)


def validate_problem(problem: PlanningProblem, allow_deep: bool = False) -> None:
    """Raise InvalidProblem unless the instance is well formed.

    Checks: action names resolve to event models over the same agent count
    as the initial state; every precondition has modal depth at most 1
    (unless ``allow_deep``); the initial model and every action frame
    satisfy the logic profile's frame conditions.
    """
    agents = problem.initial.model.agents
    for name, action in problem.actions.items():
        if action.agents != agents:
            raise InvalidProblem(
                f"action {name!r} has {action.agents} agent(s), initial state has {agents}"
            )
        if not allow_deep:
            for e in action.events:
                depth = modal_depth(action.pre(e))
                if depth > 1:
                    raise InvalidProblem(
                        f"action {name!r} event {e!r} has precondition depth {depth} > 1"
                    )
    conds = problem.logic.conditions
    if not satisfies(problem.initial.model, conds):
        raise InvalidProblem("initial model violates the logic profile's frame conditions")
    for name, action in problem.actions.items():
        frame = KripkeModel(
            action.events,
            action.agents,
            action.relations,
            tuple(frozenset() for _ in action.events),
        )
        if not satisfies(frame, conds):
            raise InvalidProblem(
                f"action {name!r} violates the logic profile's frame conditions"
            )


def problem_to_json(problem: PlanningProblem) -> dict[str, Any]:
    doc = {
        "initial": state_to_json(problem.initial),
        "actions": {name: action_to_json(a) for name, a in problem.actions.items()},
        "goal": formula_to_json(problem.goal),
        "logic": profile_to_json(problem.logic),
    }
    if problem.meta:
        doc["meta"] = dict(problem.meta)
    return doc


def problem_from_json(doc: Mapping[str, Any]) -> PlanningProblem:
    return PlanningProblem(
        initial=state_from_json(doc["initial"]),
        actions={name: action_from_json(a) for name, a in doc["actions"].items()},
        goal=formula_from_json(doc["goal"]),
        logic=profile_from_json(doc["logic"]),
        meta=dict(doc.get("meta", {})),
    )
