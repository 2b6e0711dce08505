"""Coarsest bisimulations, quotients, and canonical state fingerprints.

The refinement here is the naive iterated-splitting algorithm: start from
valuation classes and split by the per-agent sets of successor blocks
until nothing changes.  That is quadratic-ish but easy to audit, and the
states this engine handles are small.  Internally everything runs on
integer world indices, with successor-block sets packed into bitmask
integers.

Block numbering is canonical: each round renumbers blocks by sorting the
signatures themselves (not by first occurrence), so the final numbering
depends only on the isomorphism class of the reachable model.  That is
what makes ``canonical_key`` collision-free: equal keys hold exactly for
bisimilar states, because bisimilar states have isomorphic minimized
generated submodels and the key serializes that minimized model in
canonical block order.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Mapping

from .errors import AgentMismatch
from .kripke import EpistemicState, KripkeModel, generated_submodel

__all__ = [
    "Partition",
    "coarsest_bisimulation",
    "quotient",
    "bisimilar",
    "canonical_key",
    "canonical_key_hex",
    "minimize_with_key",
]


@dataclass(frozen=True)
class Partition:
    """A partition of a model's worlds into blocks ``0 .. count-1``."""

    block_of: Mapping[str, int]
    count: int

    def blocks(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.count)]
        for w, b in self.block_of.items():
            out[b].append(w)
        return out


def _indexed(model: KripkeModel):
    """Integer adjacency: per agent, per world index, successor indices."""
    index = {w: i for i, w in enumerate(model.worlds)}
    return [
        [tuple(index[v] for v in model.successors(a, w)) for w in model.worlds]
        for a in range(model.agents)
    ]


def _canonical_refine(valuations, succ) -> tuple[list[int], int]:
    """Refine to the coarsest autobisimulation with canonical block ids.

    ``valuations`` are per-index proposition sets, ``succ`` per-agent
    integer adjacency rows.  Returns (block id per index, block count);
    ids are ordered by signature value, so they are independent of world
    naming and ordering.
    """
    n = len(valuations)
    vals = [tuple(sorted(v)) for v in valuations]
    first = {v: r for r, v in enumerate(sorted(set(vals)))}
    rank = [first[v] for v in vals]
    count = len(first)
    while True:
        sigs = []
        for i in range(n):
            entry = [rank[i]]
            for row in succ:
                m = 0
                for j in row[i]:
                    m |= 1 << rank[j]
                entry.append(m)
            sigs.append(tuple(entry))
        by_sig = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [by_sig[s] for s in sigs]
        if len(by_sig) == count:
            return new, count
        rank, count = new, len(by_sig)


def coarsest_bisimulation(model: KripkeModel) -> Partition:
    """Partition refinement from valuation classes to the fixpoint."""
    block, count = _canonical_refine(model.valuations, _indexed(model))
    return Partition({w: block[i] for i, w in enumerate(model.worlds)}, count)


def _reachable_part(state: EpistemicState):
    """Names, valuations, adjacency and start index of the generated part."""
    model = state.model
    n = len(model.worlds)
    succ = _indexed(model)
    start = model.index_of(state.designated)
    reach = [False] * n
    reach[start] = True
    stack = [start]
    while stack:
        i = stack.pop()
        for row in succ:
            for j in row[i]:
                if not reach[j]:
                    reach[j] = True
                    stack.append(j)
    if all(reach):
        return list(model.worlds), list(model.valuations), succ, start
    kept = [i for i in range(n) if reach[i]]
    remap = {i: k for k, i in enumerate(kept)}
    names = [model.worlds[i] for i in kept]
    vals = [model.valuations[i] for i in kept]
    small = [[tuple(remap[j] for j in row[i]) for i in kept] for row in succ]
    return names, vals, small, remap[start]


def _minimize(state: EpistemicState):
    names, vals, succ, start = _reachable_part(state)
    block, count = _canonical_refine(vals, succ)
    rep = [-1] * count
    for i in range(len(names)):
        if rep[block[i]] < 0:
            rep[block[i]] = i
    return names, vals, succ, start, block, count, rep


def quotient(state: EpistemicState) -> EpistemicState:
    """Generated submodel quotiented by its coarsest bisimulation.

    The result is bisimilar to the input, idempotent, and uses the first
    world (in world order) of each block as the block's name.
    """
    names, vals, succ, start, block, count, rep = _minimize(state)
    if count == len(names) and len(names) == len(state.model.worlds):
        return state
    order = []
    seen = [False] * count
    for i in range(len(names)):
        b = block[i]
        if not seen[b]:
            seen[b] = True
            order.append(b)
    worlds = tuple(names[rep[b]] for b in order)
    rels = tuple(
        frozenset(
            (names[rep[block[i]]], names[rep[block[j]]]) for i in rep for j in row[i]
        )
        for row in succ
    )
    valuation = tuple(vals[rep[b]] for b in order)
    return EpistemicState(
        KripkeModel(worlds, state.model.agents, rels, valuation),
        names[rep[block[start]]],
    )


def minimize_with_key(state: EpistemicState) -> tuple[EpistemicState, bytes]:
    """Quotient the state and fingerprint the result in one pass.

    Key layout: agents, block count, designated block, then per block in
    canonical order its sorted valuation (length-prefixed UTF-8) and, per
    agent, its sorted successor-block ids as fixed-width big-endian ints.
    """
    names, vals, succ, start, block, count, rep = _minimize(state)
    pack = struct.pack
    out = bytearray(pack(">III", state.model.agents, count, block[start]))
    for b in range(count):
        i = rep[b]
        val = sorted(vals[i])
        out += pack(">I", len(val))
        for p in val:
            raw = p.encode("utf-8")
            out += pack(">I", len(raw))
            out += raw
        for row in succ:
            ranks = sorted({block[j] for j in row[i]})
            out += pack(f">I{len(ranks)}I", len(ranks), *ranks)
    key = bytes(out)
    if count == len(names) and len(names) == len(state.model.worlds):
        return state, key
    order = []
    seen = [False] * count
    for i in range(len(names)):
        b = block[i]
        if not seen[b]:
            seen[b] = True
            order.append(b)
    worlds = tuple(names[rep[b]] for b in order)
    rels = tuple(
        frozenset(
            (names[rep[block[i]]], names[rep[block[j]]]) for i in rep for j in row[i]
        )
        for row in succ
    )
    valuation = tuple(vals[rep[b]] for b in order)
    q = EpistemicState(
        KripkeModel(worlds, state.model.agents, rels, valuation),
        names[rep[block[start]]],
    )
    return q, key


def canonical_key(state: EpistemicState) -> bytes:
    """Bisimulation-invariant fingerprint; equal keys iff bisimilar states."""
    return minimize_with_key(state)[1]


def canonical_key_hex(state: EpistemicState) -> str:
    return canonical_key(state).hex()


def _disjoint_union(m1: KripkeModel, m2: KripkeModel) -> KripkeModel:
    worlds = tuple(f"0:{w}" for w in m1.worlds) + tuple(f"1:{w}" for w in m2.worlds)
    rels = tuple(
        frozenset((f"0:{u}", f"0:{v}") for (u, v) in r1)
        | frozenset((f"1:{u}", f"1:{v}") for (u, v) in r2)
        for r1, r2 in zip(m1.relations, m2.relations)
    )
    vals = m1.valuations + m2.valuations
    return KripkeModel(worlds, m1.agents, rels, vals)


def bisimilar(s1: EpistemicState, s2: EpistemicState) -> bool:
    """Whether the two pointed states are bisimilar."""
    if s1.model.agents != s2.model.agents:
        raise AgentMismatch(
            f"agent counts differ: {s1.model.agents} vs {s2.model.agents}"
        )
    g1, g2 = generated_submodel(s1), generated_submodel(s2)
    union = _disjoint_union(g1.model, g2.model)
    block, _ = _canonical_refine(union.valuations, _indexed(union))
    return (
        block[union.index_of(f"0:{g1.designated}")]
        == block[union.index_of(f"1:{g2.designated}")]
    )
