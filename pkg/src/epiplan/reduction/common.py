"""Shared machinery for the instance compilers."""
from __future__ import annotations

from typing import Iterable

from ..frames import FrameCondition, close_relation
from ..kripke import Pair


def cliques(*groups: Iterable[str]) -> set[Pair]:
    """All ordered pairs (including self-loops) inside each group."""
    out: set[Pair] = set()
    for group in groups:
        members = list(group)
        for u in members:
            for v in members:
                out.add((u, v))
    return out


def reflexive(pairs: Iterable[Pair], worlds: Iterable[str]) -> frozenset[Pair]:
    return close_relation(pairs, worlds, {FrameCondition.REFLEXIVE})


def refl_sym(pairs: Iterable[Pair], worlds: Iterable[str]) -> frozenset[Pair]:
    return close_relation(
        pairs, worlds, {FrameCondition.REFLEXIVE, FrameCondition.SYMMETRIC}
    )


def refl_trans(pairs: Iterable[Pair], worlds: Iterable[str]) -> frozenset[Pair]:
    return close_relation(
        pairs, worlds, {FrameCondition.REFLEXIVE, FrameCondition.TRANSITIVE}
    )


def check_words(qa: str, qb: str) -> None:
    for word in (qa, qb):
        if any(c not in "01" for c in word):
            raise ValueError(f"word {word!r} is not over the alphabet {{0,1}}")
