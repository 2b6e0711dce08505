"""Kripke models and pointed epistemic states.

Models are immutable after construction; every transformation returns a
fresh value, so states can be shared freely (e.g. between search
branches).  World iteration order is the construction order, which keeps
all downstream operations deterministic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .errors import DanglingWorldRef, DuplicateWorld, UnknownWorld

Pair = tuple[str, str]


@dataclass(frozen=True)
class KripkeModel:
    """A finite Kripke model: worlds, per-agent relations, valuation.

    ``valuations[i]`` is the proposition set of ``worlds[i]``.  Use
    :func:`make_model` instead of the raw constructor; it validates and
    normalizes the input.
    """

    worlds: tuple[str, ...]
    agents: int
    relations: tuple[frozenset[Pair], ...]
    valuations: tuple[frozenset[str], ...]
    _index: dict = field(init=False, compare=False, repr=False, default=None)
    _succ: tuple = field(init=False, compare=False, repr=False, default=None)
    _masks: tuple = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self):
        index = {w: i for i, w in enumerate(self.worlds)}
        succ = []
        for rel in self.relations:
            table: dict[str, list[str]] = {w: [] for w in self.worlds}
            for u, v in rel:
                table[u].append(v)
            for lst in table.values():
                lst.sort(key=index.__getitem__)
            succ.append({w: tuple(vs) for w, vs in table.items()})
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_succ", tuple(succ))

    def __contains__(self, world: str) -> bool:
        return world in self._index

    def valuation_of(self, world: str) -> frozenset[str]:
        return self.valuations[self._index[world]]

    def successors(self, agent: int, world: str) -> tuple[str, ...]:
        """Successors of ``world`` under agent ``agent``, in world order."""
        return self._succ[agent][world]

    def index_of(self, world: str) -> int:
        return self._index[world]

    def masks(self):
        """Bitmask view for batch evaluation: (prop masks, successor masks).

        ``prop_masks[p]`` has bit i set when worlds[i] satisfies p;
        ``succ_masks[a][i]`` ORs ``1 << j`` over agent-a successors of
        worlds[i].  Built lazily and cached.
        """
        cached = getattr(self, "_masks", None)
        if cached is None:
            index = self._index
            prop_masks: dict[str, int] = {}
            for i, val in enumerate(self.valuations):
                bit = 1 << i
                for p in val:
                    prop_masks[p] = prop_masks.get(p, 0) | bit
            succ_masks = []
            for a in range(self.agents):
                table = self._succ[a]
                row = [0] * len(self.worlds)
                for w, vs in table.items():
                    m = 0
                    for v in vs:
                        m |= 1 << index[v]
                    row[index[w]] = m
                succ_masks.append(row)
            cached = (prop_masks, succ_masks)
            object.__setattr__(self, "_masks", cached)
        return cached

    @property
    def valuation(self) -> dict[str, frozenset[str]]:
        """Valuation as a mapping (a fresh dict each call)."""
        return {w: v for w, v in zip(self.worlds, self.valuations)}


def make_model(
    worlds: Iterable[str],
    agent_count: int,
    relations: Iterable[Iterable[Pair]],
    valuation: Mapping[str, Iterable[str]],
) -> KripkeModel:
    """Validate and build a model.

    ``relations`` has one pair collection per agent; ``valuation`` may omit
    worlds with an empty proposition set.  World order is preserved.
    """
    world_list = tuple(worlds)
    seen = set()
    for w in world_list:
        if w in seen:
            raise DuplicateWorld(f"duplicate world {w!r}")
        seen.add(w)
    if agent_count < 0:
        raise ValueError("agent count must be non-negative")
    rels = tuple(frozenset(tuple(p) for p in rel) for rel in relations)
    if len(rels) != agent_count:
        raise ValueError(f"expected {agent_count} relations, got {len(rels)}")
    for rel in rels:
        for u, v in rel:
            if u not in seen or v not in seen:
                raise DanglingWorldRef(f"relation pair ({u!r}, {v!r}) references unknown world")
    for w in valuation:
        if w not in seen:
            raise DanglingWorldRef(f"valuation references unknown world {w!r}")
    vals = tuple(frozenset(valuation.get(w, ())) for w in world_list)
    return KripkeModel(world_list, agent_count, rels, vals)


@dataclass(frozen=True)
class EpistemicState:
    """A pointed model: a Kripke model plus its designated (actual) world."""

    model: KripkeModel
    designated: str

    def __post_init__(self):
        if self.designated not in self.model:
            raise UnknownWorld(f"designated world {self.designated!r} not in model")


def pointed(model: KripkeModel, designated: str) -> EpistemicState:
    return EpistemicState(model, designated)


def restrict(model: KripkeModel, keep: Iterable[str]) -> KripkeModel:
    """Induced submodel on ``keep`` (relations and valuation restricted)."""
    keep_set = set(keep)
    for w in keep_set:
        if w not in model:
            raise DanglingWorldRef(f"cannot keep unknown world {w!r}")
    worlds = tuple(w for w in model.worlds if w in keep_set)
    rels = tuple(
        frozenset((u, v) for (u, v) in rel if u in keep_set and v in keep_set)
        for rel in model.relations
    )
    vals = tuple(model.valuation_of(w) for w in worlds)
    return KripkeModel(worlds, model.agents, rels, vals)


def generated_submodel(state: EpistemicState) -> EpistemicState:
    """Restrict to worlds reachable from the designated world.

    Reachability is over the union of all agents' relations, reflexively
    and transitively; the designated world is preserved.
    """
    model = state.model
    reachable = {state.designated}
    queue = deque([state.designated])
    while queue:
        w = queue.popleft()
        for a in range(model.agents):
            for v in model.successors(a, w):
                if v not in reachable:
                    reachable.add(v)
                    queue.append(v)
    if len(reachable) == len(model.worlds):
        return state
    return EpistemicState(restrict(model, reachable), state.designated)


# --- JSON encoding -------------------------------------------------------


def model_to_json(model: KripkeModel) -> dict[str, Any]:
    """Canonical JSON form: arrays sorted, empty valuations omitted."""
    return {
        "agents": model.agents,
        "worlds": sorted(model.worlds),
        "relations": [sorted([u, v] for (u, v) in rel) for rel in model.relations],
        "valuation": {
            w: sorted(v) for w, v in zip(model.worlds, model.valuations) if v
        },
    }


def model_from_json(doc: Mapping[str, Any]) -> KripkeModel:
    return make_model(
        doc["worlds"],
        int(doc["agents"]),
        [[(u, v) for u, v in rel] for rel in doc["relations"]],
        {w: props for w, props in doc.get("valuation", {}).items()},
    )


def state_to_json(state: EpistemicState) -> dict[str, Any]:
    doc = model_to_json(state.model)
    doc["designated"] = state.designated
    return doc


def state_from_json(doc: Mapping[str, Any]) -> EpistemicState:
    return EpistemicState(model_from_json(doc), doc["designated"])
