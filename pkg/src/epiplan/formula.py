"""Modal-formula AST, evaluation semantics, and the text syntax.

The AST has exactly five node kinds: falsum, proposition, negation,
conjunction, and the knowledge box.  Everything else (``true``,
disjunction, implication, the dual diamond) is sugar that desugars to
those five at construction time, so structural equality is equality up
to desugaring.

Concrete syntax::

    false | true | ident | !f | f & g | f | g | f -> g
    K{i} f | <K{i}> f          (K f abbreviates K{0} f)

with precedence ``!`` > ``&`` > ``|`` > ``->`` and parentheses.
Identifiers are nonempty runs of ``[A-Za-z0-9_#]``; ``#``, ``#1`` and
``#2`` are legal proposition names.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from .errors import FormulaSyntaxError, UnknownAgent

if TYPE_CHECKING:
    from .kripke import EpistemicState, KripkeModel


class Formula:
    """Base class of all formula nodes.  Instances are immutable."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<{to_text(self)}>"


@dataclass(frozen=True, repr=False)
class FalseF(Formula):
    __slots__ = ()


@dataclass(frozen=True, repr=False)
class Prop(Formula):
    name: str


@dataclass(frozen=True, repr=False)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Know(Formula):
    agent: int
    sub: Formula


_PROP_NAME = re.compile(r"[A-Za-z0-9_#]+\Z")
_RESERVED = {"false", "true", "K"}

_FALSE = FalseF()


def false_() -> Formula:
    return _FALSE


def prop(name: str) -> Formula:
    if not _PROP_NAME.match(name) or name in _RESERVED:
        raise ValueError(f"illegal proposition name {name!r}")
    return Prop(name)


def not_(f: Formula) -> Formula:
    return Not(f)


def and_(left: Formula, right: Formula) -> Formula:
    return And(left, right)


def know(agent: int, f: Formula) -> Formula:
    if agent < 0:
        raise ValueError("agent index must be non-negative")
    return Know(agent, f)


def true_() -> Formula:
    return Not(_FALSE)


def or_(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def implies(left: Formula, right: Formula) -> Formula:
    return or_(Not(left), right)


def diamond(agent: int, f: Formula) -> Formula:
    """The dual of the knowledge box: "considers f possible"."""
    return Not(know(agent, Not(f)))


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction; empty conjunction is true."""
    if not fs:
        return true_()
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    """Left-nested disjunction; empty disjunction is false."""
    if not fs:
        return _FALSE
    out = fs[0]
    for f in fs[1:]:
        out = or_(out, f)
    return out


@functools.lru_cache(maxsize=None)
def modal_depth(f: Formula) -> int:
    """Maximum nesting of knowledge operators in ``f``."""
    if isinstance(f, (FalseF, Prop)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.sub)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, Know):
        return 1 + modal_depth(f.sub)
    raise TypeError(f"not a formula: {f!r}")


def propositions(f: Formula) -> frozenset[str]:
    """All proposition names mentioned in ``f``."""
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Prop):
            out.add(g.name)
        elif isinstance(g, Not):
            stack.append(g.sub)
        elif isinstance(g, And):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, Know):
            stack.append(g.sub)
    return frozenset(out)


def _eval(model: KripkeModel, world: str, f: Formula) -> bool:
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Prop):
        return f.name in model.valuation_of(world)
    if isinstance(f, Not):
        return not _eval(model, world, f.sub)
    if isinstance(f, And):
        return _eval(model, world, f.left) and _eval(model, world, f.right)
    if isinstance(f, Know):
        if not 0 <= f.agent < model.agents:
            raise UnknownAgent(
                f"agent {f.agent} out of range for model with {model.agents} agent(s)"
            )
        return all(_eval(model, v, f.sub) for v in model.successors(f.agent, world))
    raise TypeError(f"not a formula: {f!r}")


def evaluate(state: EpistemicState, f: Formula) -> bool:
    """Truth of ``f`` at the designated world of ``state``."""
    return _eval(state.model, state.designated, f)


def evaluate_at(state: EpistemicState, world: str, f: Formula) -> bool:
    """Truth of ``f`` at an arbitrary world of ``state``'s model."""
    from .errors import UnknownWorld

    if world not in state.model:
        raise UnknownWorld(f"world {world!r} not in model")
    return _eval(state.model, world, f)


def extension_mask(model: KripkeModel, f: Formula, cache: dict | None = None) -> int:
    """Satisfying worlds of ``f`` as a bitmask over world indices.

    Computed bottom-up with a per-call memo on subformulas, so batch
    evaluation (every event precondition at every world, as in the
    product update) touches each distinct subformula once.
    """
    if cache is None:
        cache = {}
    hit = cache.get(f)
    if hit is not None:
        return hit
    prop_masks, succ_masks = model.masks()
    full = (1 << len(model.worlds)) - 1
    if isinstance(f, FalseF):
        out = 0
    elif isinstance(f, Prop):
        out = prop_masks.get(f.name, 0)
    elif isinstance(f, Not):
        out = full & ~extension_mask(model, f.sub, cache)
    elif isinstance(f, And):
        out = extension_mask(model, f.left, cache) & extension_mask(model, f.right, cache)
    elif isinstance(f, Know):
        if not 0 <= f.agent < model.agents:
            raise UnknownAgent(
                f"agent {f.agent} out of range for model with {model.agents} agent(s)"
            )
        sub = extension_mask(model, f.sub, cache)
        row = succ_masks[f.agent]
        out = 0
        bit = 1
        for i in range(len(model.worlds)):
            if row[i] & ~sub == 0:
                out |= bit
            bit <<= 1
    else:
        raise TypeError(f"not a formula: {f!r}")
    cache[f] = out
    return out


def extension(model: KripkeModel, f: Formula, cache: dict | None = None) -> frozenset[str]:
    """The set of worlds of ``model`` satisfying ``f``."""
    mask = extension_mask(model, f, cache)
    return frozenset(w for i, w in enumerate(model.worlds) if mask >> i & 1)


# --- text syntax ---------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(->|[()!&|<>{}]|[A-Za-z0-9_#]+)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
            break
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def next(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise FormulaSyntaxError(f"expected {tok!r}, found {self.peek()!r}", self.pos())
        self.next()

    def parse(self) -> Formula:
        f = self.implies()
        if self.peek() != "":
            raise FormulaSyntaxError(f"unexpected trailing {self.peek()!r}", self.pos())
        return f

    def implies(self) -> Formula:
        left = self.or_()
        if self.peek() == "->":
            self.next()
            return implies(left, self.implies())
        return left

    def or_(self) -> Formula:
        out = self.and_()
        while self.peek() == "|":
            self.next()
            out = or_(out, self.and_())
        return out

    def and_(self) -> Formula:
        out = self.unary()
        while self.peek() == "&":
            self.next()
            out = And(out, self.unary())
        return out

    def agent(self) -> int:
        if self.peek() != "{":
            return 0
        self.next()
        tok, pos = self.tokens[self.i][0], self.pos()
        if not tok.isdigit():
            raise FormulaSyntaxError("expected agent index", pos)
        self.next()
        self.expect("}")
        return int(tok)

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.next()
            return Not(self.unary())
        if tok == "K":
            self.next()
            return Know(self.agent(), self.unary())
        if tok == "<":
            self.next()
            self.expect("K")
            i = self.agent()
            self.expect(">")
            return diamond(i, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok, pos = self.peek(), self.pos()
        if tok == "(":
            self.next()
            f = self.implies()
            self.expect(")")
            return f
        if tok == "false":
            self.next()
            return _FALSE
        if tok == "true":
            self.next()
            return true_()
        if _PROP_NAME.match(tok) and tok not in _RESERVED:
            self.next()
            return Prop(tok)
        raise FormulaSyntaxError(f"expected a formula, found {tok!r}", pos)


def parse(text: str) -> Formula:
    """Parse the text syntax; raises FormulaSyntaxError with a position."""
    return _Parser(text).parse()


_PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = 1, 2, 3, 4


def _fmt(f: Formula, minimum: int) -> str:
    # Re-sugar the printable duals so output stays readable; parsing the
    # result desugars back to the identical tree.
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Know):
        return f"K{{{f.agent}}} {_fmt(f.sub, _PREC_UNARY)}"
    if isinstance(f, And):
        text = f"{_fmt(f.left, _PREC_AND)} & {_fmt(f.right, _PREC_AND + 1)}"
        return f"({text})" if minimum > _PREC_AND else text
    # f is a negation: check the sugared shapes first
    sub = f.sub
    if isinstance(sub, FalseF):
        return "true"
    if isinstance(sub, Know) and isinstance(sub.sub, Not):
        text = f"<K{{{sub.agent}}}> {_fmt(sub.sub.sub, _PREC_UNARY)}"
        return text
    if isinstance(sub, And) and isinstance(sub.left, Not) and isinstance(sub.right, Not):
        left, right = sub.left.sub, sub.right.sub
        text = f"{_fmt(left, _PREC_OR)} | {_fmt(right, _PREC_OR + 1)}"
        return f"({text})" if minimum > _PREC_OR else text
    return f"!{_fmt(sub, _PREC_UNARY)}"


def to_text(f: Formula) -> str:
    """Render ``f``; ``parse(to_text(f))`` is structurally ``f``."""
    return _fmt(f, 0)


# --- JSON encoding -------------------------------------------------------


def formula_to_json(f: Formula) -> dict[str, Any]:
    if isinstance(f, FalseF):
        return {"op": "false"}
    if isinstance(f, Prop):
        return {"op": "prop", "name": f.name}
    if isinstance(f, Not):
        return {"op": "not", "arg": formula_to_json(f.sub)}
    if isinstance(f, And):
        return {"op": "and", "left": formula_to_json(f.left), "right": formula_to_json(f.right)}
    if isinstance(f, Know):
        return {"op": "know", "agent": f.agent, "arg": formula_to_json(f.sub)}
    raise TypeError(f"not a formula: {f!r}")


def formula_from_json(doc: dict[str, Any]) -> Formula:
    op = doc.get("op")
    if op == "false":
        return _FALSE
    if op == "prop":
        return prop(doc["name"])
    if op == "not":
        return Not(formula_from_json(doc["arg"]))
    if op == "and":
        return And(formula_from_json(doc["left"]), formula_from_json(doc["right"]))
    if op == "know":
        return know(int(doc["agent"]), formula_from_json(doc["arg"]))
    raise ValueError(f"unknown formula op {op!r}")
