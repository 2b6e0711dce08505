"""Single-agent compiler for reflexive+transitive frames (profile S4).

The loop worlds come first here: root -> loop -> chain -> w_x, so adding
a block splices its symbols between the loop and the existing chain (the
stored word grows at the front).  Under transitivity every world sees its
whole downstream set, which changes the bookkeeping:

- no w_ntF / w_end copies exist; a chain world is the removable tail
  exactly when nothing of the expected next kind is visible below it;
- a failed removal strands the offending tail as a world that can no
  longer see any branch terminus (symb & K !term below), which keeps the
  goal's K !symb conjunct false forever;
- removals apply only while both branches still carry symbols, which the
  root can see directly (<K>(symb & a) etc.), so one branch can never be
  stripped past the other.

match_plan therefore applies the add-block actions in reverse match
order, so that the stored word equals the match's concatenation read
front to back and the removal suffix is identical to the other variants.
"""
from __future__ import annotations

from ..action import EventModel, make_action
from ..errors import IllegalFlavor, UnknownShorthand
from ..formula import Formula, and_, conj, diamond, disj, know, not_, or_, prop
from ..kripke import EpistemicState, make_model, restrict
from ..pcp import PcpInstance
from .common import check_words, refl_trans, reflexive

AGENTS = 1
PROFILE_NAME = "S4"
REMOVAL_ALPHABET = ("0", "1", "#")
FLAVORS = ("plain", "loop", "minus_hash")

_P = {name: prop(name) for name in ("0", "1", "#", "a", "b", "root", "stg1", "empty", "lp")}


def _k(f: Formula) -> Formula:
    return know(0, f)


def _maybe(f: Formula) -> Formula:
    return diamond(0, f)


def nxt(d: str) -> Formula:
    if d in ("0", "1"):
        return _P["#"]
    if d in ("#", "a", "b"):
        return or_(_P["0"], _P["1"])
    raise UnknownShorthand(f"nxt takes one of 0, 1, #, a, b; got {d!r}")


def symb() -> Formula:
    return disj(_P["0"], _P["1"], _P["#"])


def tail() -> Formula:
    return and_(
        symb(), disj(*(and_(_P[d], _k(not_(nxt(d)))) for d in ("0", "1", "#")))
    )


def loop_marker(x: str) -> Formula:
    return and_(_P[x], _maybe(_P["lp"]))


def term() -> Formula:
    """A branch terminus: branch-labelled but not a chain symbol."""
    return and_(or_(_P["a"], _P["b"]), not_(symb()))


def damaged() -> Formula:
    """A chain symbol that can no longer see any branch terminus."""
    return and_(symb(), _k(not_(term())))


def shorthand(name: str, arg: str | None = None) -> Formula:
    table = {"symb": symb, "tail": tail, "term": term, "damaged": damaged}
    if name in table:
        return table[name]()
    if name in ("loop_a", "loop_b"):
        name, arg = "loop", name[-1]
    if name == "loop":
        if arg not in ("a", "b"):
            raise UnknownShorthand("loop needs a branch argument 'a' or 'b'")
        return loop_marker(arg)
    if name == "nxt":
        if arg is None:
            raise UnknownShorthand("nxt needs a symbol argument")
        return nxt(arg)
    raise UnknownShorthand(f"no shorthand {name!r} in variant S4_1")


def _w(*parts: str) -> str:
    if len(parts) == 1:
        return f"w_{parts[0]}"
    if len(parts) == 2 and parts[0] in ("0", "1", "#"):
        return f"w_{parts[0]}({parts[1]})"
    return "w_{" + ",".join(parts) + "}"


def initial_state() -> EpistemicState:
    worlds = [_w(p) for p in ("root", "empty", "stg1", "a", "b", "lp")]
    val: dict[str, set[str]] = {w: {w[2:]} for w in worlds}
    edges = {(_w("root"), _w("empty")), (_w("root"), _w("stg1"))}
    for x in "ab":
        group = {}
        for p in ("0", "1", "#"):
            w = _w(p, x)
            worlds.append(w)
            val[w] = {p, x}
            group[p] = w
        for bt in "01":
            edges.add((_w("root"), group[bt]))
            edges.update({(group[bt], group["#"]), (group["#"], group[bt])})
            edges.add((group[bt], _w("lp")))
        edges.add((group["#"], _w(x)))
        edges.add((group["#"], _w("lp")))
    model = make_model(worlds, AGENTS, [refl_trans(edges, worlds)], val)
    return EpistemicState(model, _w("root"))


def family(qa: str, qb: str, flavor: str) -> EpistemicState:
    if flavor not in FLAVORS:
        raise IllegalFlavor(f"variant S4_1 has no flavor {flavor!r}")
    check_words(qa, qb)
    words = {"a": qa, "b": qb}
    worlds = [_w("root"), _w("a"), _w("b")]
    val: dict[str, set[str]] = {_w("root"): {"root"}, _w("a"): {"a"}, _w("b"): {"b"}}
    edges: set[tuple[str, str]] = set()
    chain_of: dict[str, list[str]] = {}
    for x in "ab":
        q = words[x]
        edges.add((_w("root"), _w(x)))
        chain: list[str] = []
        for j in range(1, len(q) + 1):
            bit, hsh = _w(x, str(j)), _w(x, str(j), "#")
            worlds.extend([bit, hsh])
            val[bit] = {q[j - 1], x}
            val[hsh] = {"#", x}
            edges.add((_w("root"), bit))
            edges.add((bit, hsh))
            edges.add((hsh, _w(x)))
            if chain:
                edges.add((chain[-1], bit))
            chain.extend([bit, hsh])
        chain_of[x] = chain
    if flavor == "loop":
        worlds.extend([_w("stg1"), _w("lp")])
        val[_w("stg1")] = {"stg1"}
        val[_w("lp")] = {"lp"}
        edges.add((_w("root"), _w("stg1")))
        for x in "ab":
            q = words[x]
            group = {}
            for p in ("0", "1", "#"):
                w = _w(p, x)
                worlds.append(w)
                val[w] = {p, x}
                group[p] = w
            for bt in "01":
                edges.add((_w("root"), group[bt]))
                edges.update({(group[bt], group["#"]), (group["#"], group[bt])})
                edges.add((group[bt], _w("lp")))
            edges.add((group["#"], _w("lp")))
            edges.add((group["#"], _w(x)))
            if q:
                edges.add((group["#"], chain_of[x][0]))
    model = make_model(worlds, AGENTS, [refl_trans(edges, worlds)], val)
    state = EpistemicState(model, _w("root"))
    if flavor == "minus_hash":
        drop = {chain_of[x][-1] for x in "ab" if words[x]}
        keep = [w for w in model.worlds if w not in drop]
        state = EpistemicState(restrict(model, keep), _w("root"))
    return state


def _e(*parts: str) -> str:
    return "e_" + (parts[0] if len(parts) == 1 else "{" + ",".join(parts) + "}")


def add_block(index: int, block: tuple[str, str]) -> EventModel:
    words = {"a": block[0], "b": block[1]}
    events = [_e("s"), _e("st")]
    pre: dict[str, Formula] = {
        _e("s"): and_(_P["root"], _maybe(_P["stg1"])),
        _e("st"): _P["stg1"],
    }
    edges: set[tuple[str, str]] = set()
    for x in "ab":
        word = words[x]
        ex, e01 = _e(x), _e("01", x)
        events.extend([ex, e01])
        pre[ex] = and_(_P[x], not_(loop_marker(x)))
        pre[e01] = or_(loop_marker(x), _P["lp"])
        edges.update({(_e("s"), _e("st")), (_e("s"), ex), (_e("s"), e01)})
        edges.add((e01, ex))
        prev = e01
        for j in range(1, len(word) + 1):
            bit, hsh = _e(x, str(j)), _e(x, str(j), "#")
            events.extend([bit, hsh])
            pre[bit] = and_(prop(word[j - 1]), loop_marker(x))
            pre[hsh] = and_(_P["#"], loop_marker(x))
            edges.update({(prev, bit), (bit, hsh), (bit, ex)})
            prev = hsh
        edges.add((prev, ex))
    return make_action(events, AGENTS, [refl_trans(edges, events)], pre, _e("s"))


def next_stage() -> EventModel:
    pre = or_(
        conj(not_(_P["stg1"]), _k(not_(_P["empty"])), _maybe(_P["stg1"])),
        and_(or_(_P["a"], _P["b"]), _k(not_(_P["lp"]))),
    )
    return make_action(["e_nx"], AGENTS, [{("e_nx", "e_nx")}], {"e_nx": pre}, "e_nx")


def remove_symbol(d: str) -> EventModel:
    main, fail, keep = f"e^{d}", f"e^{d}_fail", f"e^{d}_term"
    pre = {
        main: or_(
            conj(
                _P["root"],
                _k(not_(_P["stg1"])),
                _maybe(and_(symb(), _P["a"])),
                _maybe(and_(symb(), _P["b"])),
            ),
            and_(symb(), not_(tail())),
        ),
        fail: or_(and_(tail(), not_(_P[d])), damaged()),
        keep: term(),
    }
    edges = reflexive({(main, fail), (main, keep)}, [main, fail, keep])
    return make_action([main, fail, keep], AGENTS, [edges], pre, main)


def goal() -> Formula:
    return conj(_k(not_(_P["empty"])), _k(not_(_P["stg1"])), _k(not_(symb())))


def build_actions(inst: PcpInstance) -> dict[str, EventModel]:
    actions = {f"ad_{i}": add_block(i, block) for i, block in enumerate(inst.blocks, start=1)}
    actions["next_stage"] = next_stage()
    for d in REMOVAL_ALPHABET:
        actions[f"remove_{d}"] = remove_symbol(d)
    return actions


def match_plan(inst: PcpInstance, match, word: str) -> list[str]:
    # Blocks are spliced in at the front, so play the match backwards to
    # store the matched word front-to-back.
    plan = [f"ad_{i}" for i in reversed(match)]
    plan.append("next_stage")
    for bit in reversed(word):
        plan.extend(["remove_#", f"remove_{bit}"])
    return plan


def failed_state(state: EpistemicState) -> bool:
    from ..formula import evaluate_at

    model = state.model
    root = state.designated
    if not evaluate_at(state, root, and_(_P["root"], _k(not_(_P["stg1"])))):
        return False
    broken = damaged()
    return any(
        evaluate_at(state, w, broken) for w in model.successors(0, root) if w != root
    )
