"""Bounded plan-existence search over bisimulation-canonical states.

The general problem is undecidable, so the breadth-first search takes
explicit depth/node budgets and reports BoundReached when it stops for a
budget rather than because the reachable quotient space was exhausted;
callers must never read "not found within bounds" as "no plan".

For a single agent whose relation is (at least) Euclidean the problem is
decidable: actions can only shrink the state up to bisimulation, so plans
longer than the minimized initial state's world count are redundant and
the search below is complete.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .action import applicable, product_update
from .bisim import bisimilar, minimize_with_key, quotient
from .errors import NotEuclidean, NotSingleAgent
from .formula import evaluate
from .frames import FrameCondition, satisfies
from .kripke import EpistemicState, generated_submodel
from .problem import PlanningProblem, validate_problem

__all__ = [
    "SearchBudget",
    "SearchStats",
    "PlanFound",
    "NoPlanExhausted",
    "BoundReached",
    "SearchOutcome",
    "bfs_plan",
    "verify_plan",
    "s5_single_agent_plan",
]


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int
    max_nodes: int
    minimize_each_step: bool = True
    paranoid_bisim_check: bool = False

    def __post_init__(self):
        if self.max_depth < 0 or self.max_nodes <= 0:
            raise ValueError("bounds must be positive")


@dataclass
class SearchStats:
    nodes: int = 0
    dedup_hits: int = 0
    depth: int = 0


@dataclass(frozen=True)
class PlanFound:
    plan: tuple[str, ...]
    final_key: bytes
    stats: SearchStats

    exit_code = 0

    def to_json(self) -> dict:
        return {
            "outcome": "plan_found",
            "plan": list(self.plan),
            "final_key": self.final_key.hex(),
            "stats": vars(self.stats),
        }


@dataclass(frozen=True)
class NoPlanExhausted:
    stats: SearchStats

    exit_code = 1

    def to_json(self) -> dict:
        return {"outcome": "no_plan_exhausted", "stats": vars(self.stats)}


@dataclass(frozen=True)
class BoundReached:
    depth: int
    nodes: int
    stats: SearchStats

    exit_code = 2

    def to_json(self) -> dict:
        return {
            "outcome": "bound_reached",
            "depth": self.depth,
            "nodes": self.nodes,
            "stats": vars(self.stats),
        }


SearchOutcome = PlanFound | NoPlanExhausted | BoundReached


def _bfs(
    start: EpistemicState,
    actions,
    goal,
    max_depth: int,
    max_nodes: int,
    minimize: bool,
    paranoid: bool,
) -> SearchOutcome:
    stats = SearchStats(nodes=1)
    start_q, start_key = minimize_with_key(start)
    start = start_q if minimize else generated_submodel(start)
    if evaluate(start, goal):
        return PlanFound((), start_key, stats)
    names = sorted(actions)
    visited: dict[bytes, EpistemicState | None] = {
        start_key: start if paranoid else None
    }
    queue: deque[tuple[EpistemicState, tuple[str, ...]]] = deque([(start, ())])
    truncated = False
    while queue:
        state, plan = queue.popleft()
        stats.depth = max(stats.depth, len(plan))
        if len(plan) >= max_depth:
            truncated = True
            continue
        for name in names:
            action = actions[name]
            if not applicable(state, action):
                continue
            product = product_update(state, action)
            child, key = minimize_with_key(product)
            if not minimize:
                child = generated_submodel(product)
            child_plan = plan + (name,)
            if key in visited:
                stats.dedup_hits += 1
                if paranoid:
                    known = visited[key]
                    if known is not None and not bisimilar(known, child):
                        raise AssertionError(
                            "canonical key collision between non-bisimilar states"
                        )
                continue
            stats.nodes += 1
            stats.depth = max(stats.depth, len(child_plan))
            if evaluate(child, goal):
                return PlanFound(child_plan, key, stats)
            visited[key] = child if paranoid else None
            if stats.nodes >= max_nodes:
                return BoundReached(len(child_plan), stats.nodes, stats)
            queue.append((child, child_plan))
    if truncated:
        return BoundReached(max_depth, stats.nodes, stats)
    return NoPlanExhausted(stats)


def bfs_plan(
    problem: PlanningProblem,
    budget: SearchBudget,
    allow_deep_preconditions: bool = False,
) -> SearchOutcome:
    """Breadth-first plan search, deterministic in action-name order.

    Child states are generated in sorted action order and deduplicated by
    canonical key, so a PlanFound outcome carries the shortest plan and,
    among those, the lexicographically least.  Preconditions beyond modal
    depth 1 are refused unless explicitly allowed.
    """
    validate_problem(problem, allow_deep=allow_deep_preconditions)
    return _bfs(
        problem.initial,
        problem.actions,
        problem.goal,
        budget.max_depth,
        budget.max_nodes,
        budget.minimize_each_step,
        budget.paranoid_bisim_check,
    )


def verify_plan(problem: PlanningProblem, plan) -> bool:
    """Whether the plan applies from the initial state and reaches the goal."""
    from .action import FailureAt, apply_plan

    result = apply_plan(problem.initial, problem.actions, list(plan), minimize=True)
    if isinstance(result, FailureAt):
        return False
    return evaluate(result, problem.goal)


def s5_single_agent_plan(problem: PlanningProblem) -> SearchOutcome:
    """Complete decision procedure for one agent with a Euclidean relation.

    Up to bisimulation every applicable action only deletes worlds here,
    so it suffices to search plans no longer than the minimized initial
    state's world count; the result is always PlanFound or
    NoPlanExhausted, never BoundReached.
    """
    if problem.initial.model.agents != 1:
        raise NotSingleAgent(
            f"expected a single agent, got {problem.initial.model.agents}"
        )
    conds = problem.logic.conditions
    euclidean_ok = FrameCondition.EUCLIDEAN in conds or {
        FrameCondition.SYMMETRIC,
        FrameCondition.TRANSITIVE,
    } <= conds
    if not euclidean_ok:
        raise NotEuclidean("logic profile does not guarantee a Euclidean relation")
    if not satisfies(problem.initial.model, [FrameCondition.EUCLIDEAN]):
        raise NotEuclidean("initial model's relation is not Euclidean")
    validate_problem(problem)
    start = quotient(problem.initial)
    bound = len(start.model.worlds)
    outcome = _bfs(
        start,
        problem.actions,
        problem.goal,
        max_depth=bound,
        max_nodes=10**9,
        minimize=True,
        paranoid=False,
    )
    if isinstance(outcome, BoundReached):
        # The depth cutoff equals the state-space diameter, so hitting it
        # with an unexplored frontier still means exhaustion.
        return NoPlanExhausted(outcome.stats)
    return outcome
