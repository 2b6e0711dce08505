"""Single-agent compiler for unrestricted frames (logic profile K).

Encoding summary: the instance's candidate block sequence lives in two
chains hanging off w_root (one per row); the loop worlds w_{bt,x} let the
add-block actions splice new symbols onto the chain ends.  Auxiliary
worlds track bookkeeping facts a depth-1 precondition can see: w_empty
(nothing applied yet), w_stg1 (still in the adding stage), w_end (chain
end), w_ntF (no failed removal yet), w_lp (loop membership).

Chain worlds carry both their bit and their branch letter in the
valuation; the branch letter is what lets stage-two preconditions and the
goal recognize chain worlds as part of a row.
"""
from __future__ import annotations

from ..action import EventModel, make_action
from ..errors import IllegalFlavor, UnknownShorthand
from ..formula import Formula, and_, diamond, know, not_, or_, prop
from ..kripke import EpistemicState, make_model
from ..pcp import PcpInstance
from .common import check_words

AGENTS = 1
PROFILE_NAME = "K"
REMOVAL_ALPHABET = ("0", "1")
FLAVORS = ("plain", "loop")

_P = {name: prop(name) for name in ("0", "1", "a", "b", "root", "stg1", "empty", "end", "ntF", "lp")}


def _k(f: Formula) -> Formula:
    return know(0, f)


def _maybe(f: Formula) -> Formula:
    return diamond(0, f)


def _w(*parts: str) -> str:
    return "w_" + (parts[0] if len(parts) == 1 else "{" + ",".join(parts) + "}")


def symb() -> Formula:
    return or_(_P["0"], _P["1"])


def tail() -> Formula:
    return and_(or_(_P["a"], _P["b"]), _k(not_(symb())))


def last() -> Formula:
    return and_(_maybe(_P["end"]), _k(not_(_P["lp"])))


def failed() -> Formula:
    return and_(or_(_P["a"], _P["b"]), _k(not_(_P["ntF"])))


def loop_marker(x: str) -> Formula:
    return and_(_P[x], _maybe(_P["lp"]))


_SHORTHANDS = {
    "symb": lambda arg: symb(),
    "tail": lambda arg: tail(),
    "last": lambda arg: last(),
    "failed": lambda arg: failed(),
    "loop": lambda arg: loop_marker(arg),
}


def shorthand(name: str, arg: str | None = None) -> Formula:
    if name in ("loop_a", "loop_b"):
        name, arg = "loop", name[-1]
    if name not in _SHORTHANDS:
        raise UnknownShorthand(f"no shorthand {name!r} in variant K1")
    if name == "loop" and arg not in ("a", "b"):
        raise UnknownShorthand("loop needs a branch argument 'a' or 'b'")
    return _SHORTHANDS[name](arg)


def initial_state() -> EpistemicState:
    worlds = [_w("root"), _w("empty"), _w("stg1"), _w("a"), _w("b"), _w("end"), _w("ntF"), _w("lp")]
    val: dict[str, set[str]] = {w: {w[2:]} for w in worlds}
    edges = {(_w("root"), _w("empty")), (_w("root"), _w("stg1")),
             (_w("root"), _w("a")), (_w("root"), _w("b"))}
    for x in "ab":
        for bt in "01":
            loop = _w(bt, x)
            worlds.append(loop)
            val[loop] = {bt, x}
            edges.add((_w(x), loop))
            edges.update({(loop, _w("ntF")), (loop, _w("end")), (loop, _w("lp"))})
            edges.update({(_w("0", x), loop), (_w("1", x), loop)})
        edges.update({(_w(x), _w("end")), (_w(x), _w("ntF"))})
    model = make_model(worlds, AGENTS, [edges], val)
    return EpistemicState(model, _w("root"))


def family(qa: str, qb: str, flavor: str) -> EpistemicState:
    """The named block-sequence states: ``plain`` or ``loop``."""
    if flavor not in FLAVORS:
        raise IllegalFlavor(f"variant K1 has no flavor {flavor!r}")
    check_words(qa, qb)
    words = {"a": qa, "b": qb}
    worlds = [_w("root"), _w("a"), _w("b"), _w("ntF")]
    val: dict[str, set[str]] = {w: {w[2:]} for w in worlds}
    edges: set[tuple[str, str]] = set()
    for x in "ab":
        q = words[x]
        chain = [_w(x, str(j)) for j in range(1, len(q) + 1)]
        worlds.extend(chain)
        for j, w in enumerate(chain):
            val[w] = {q[j], x}
            edges.add((w, _w("ntF")))
        edges.add((_w("root"), _w(x)))
        edges.add((_w(x), _w("ntF")))
        if chain:
            edges.add((_w(x), chain[0]))
            for u, v in zip(chain, chain[1:]):
                edges.add((u, v))
    if flavor == "loop":
        extra = [_w("stg1")]
        for x in "ab":
            extra.extend([_w("0", x), _w("1", x)])
        extra.extend([_w("end"), _w("lp")])
        worlds.extend(extra)
        val[_w("stg1")] = {"stg1"}
        val[_w("end")] = {"end"}
        val[_w("lp")] = {"lp"}
        edges.add((_w("root"), _w("stg1")))
        for x in "ab":
            q = words[x]
            for bt in "01":
                loop = _w(bt, x)
                val[loop] = {bt, x}
                edges.update({(loop, _w("ntF")), (loop, _w("end")), (loop, _w("lp"))})
                edges.update({(_w("0", x), loop), (_w("1", x), loop)})
            anchor = _w(x, str(len(q))) if q else _w(x)
            edges.update({(anchor, _w("0", x)), (anchor, _w("1", x)), (anchor, _w("end"))})
    model = make_model(worlds, AGENTS, [edges], val)
    return EpistemicState(model, _w("root"))


def _e(*parts: str) -> str:
    return "e_" + (parts[0] if len(parts) == 1 else "{" + ",".join(parts) + "}")


def add_block(index: int, block: tuple[str, str]) -> EventModel:
    """The action that appends block ``index`` to both chains."""
    words = {"a": block[0], "b": block[1]}
    events = [_e("s"), _e("st"), _e("a"), _e("a", "lst"), _e("b"), _e("b", "lst"),
              _e("end"), _e("ntF"), _e("lp"), _e("01", "a"), _e("01", "b")]
    pre: dict[str, Formula] = {
        _e("s"): and_(_P["root"], _maybe(_P["stg1"])),
        _e("st"): _P["stg1"],
        _e("end"): _P["end"],
        _e("ntF"): _P["ntF"],
        # w_lp survives through a dedicated event so that only the loop
        # worlds keep seeing it; folding it into e_{01,x} would hand the
        # fresh chain end an lp successor and merge it into the loop.
        _e("lp"): _P["lp"],
    }
    edges: set[tuple[str, str]] = set()
    for x in "ab":
        ex, elst, e01 = _e(x), _e(x, "lst"), _e("01", x)
        pre[ex] = and_(_P[x], not_(last()))
        pre[elst] = and_(_P[x], last())
        pre[e01] = loop_marker(x)
        edges.update({(_e("s"), _e("st")), (_e("s"), ex), (_e("s"), elst)})
        edges.update({(ex, ex), (ex, _e("ntF")), (ex, elst), (elst, _e("ntF"))})
        edges.update({(e01, e01), (e01, _e("end")), (e01, _e("ntF")), (e01, _e("lp"))})
        word = words[x]
        chain = [_e(x, str(j)) for j in range(1, len(word) + 1)]
        events.extend(chain)
        for j, ev in enumerate(chain):
            pre[ev] = and_(prop(word[j]), loop_marker(x))
            edges.add((ev, _e("ntF")))
        if chain:
            edges.add((elst, chain[0]))
            for u, v in zip(chain, chain[1:]):
                edges.add((u, v))
            edges.update({(chain[-1], _e("end")), (chain[-1], e01)})
        else:
            edges.update({(elst, e01), (elst, _e("end"))})
    return make_action(events, AGENTS, [edges], pre, _e("s"))


def next_stage() -> EventModel:
    pre = or_(
        or_(
            and_(_k(not_(_P["empty"])), _maybe(_P["stg1"])),
            and_(or_(_P["a"], _P["b"]), _k(not_(_P["lp"]))),
        ),
        _P["ntF"],
    )
    return make_action(["e_nx"], AGENTS, [{("e_nx", "e_nx")}], {"e_nx": pre}, "e_nx")


def remove_symbol(bt: str) -> EventModel:
    """Stage-two action deleting bit ``bt`` from both chain ends."""
    main, fail, keep = f"e^{bt}", f"e^{bt}_fail", f"e^{bt}_ntF"
    pre = {
        main: or_(
            and_(_P["root"], _k(not_(_P["stg1"]))),
            and_(or_(_P["a"], _P["b"]), not_(tail())),
        ),
        fail: or_(and_(tail(), not_(_P[bt])), failed()),
        keep: _P["ntF"],
    }
    edges = {(main, main), (main, fail), (main, keep)}
    return make_action([main, fail, keep], AGENTS, [edges], pre, main)


def goal() -> Formula:
    return and_(_k(not_(_P["empty"])), _k(and_(tail(), not_(failed()))))


def build_actions(inst: PcpInstance) -> dict[str, EventModel]:
    actions = {f"ad_{i}": add_block(i, block) for i, block in enumerate(inst.blocks, start=1)}
    actions["next_stage"] = next_stage()
    for bt in REMOVAL_ALPHABET:
        actions[f"remove_{bt}"] = remove_symbol(bt)
    return actions


def match_plan(inst: PcpInstance, match, word: str) -> list[str]:
    plan = [f"ad_{i}" for i in match]
    plan.append("next_stage")
    plan.extend(f"remove_{bit}" for bit in reversed(word))
    return plan


def failed_state(state: EpistemicState) -> bool:
    """Witness-path check for a failed removal.

    Looks for a path from the designated world: first a branch world, then
    symbol worlds, ending in a world that is branch-labelled but can no
    longer reach w_ntF.
    """
    from ..formula import evaluate_at

    model = state.model
    root = state.designated
    if not evaluate_at(state, root, and_(_P["root"], _k(not_(_P["stg1"])))):
        return False
    branch = or_(_P["a"], _P["b"])
    fail_f, symb_f = failed(), symb()
    frontier = [w for w in model.successors(0, root) if evaluate_at(state, w, branch)]
    seen = set(frontier)
    while frontier:
        for w in frontier:
            if evaluate_at(state, w, fail_f):
                return True
        step = []
        for w in frontier:
            for v in model.successors(0, w):
                if v not in seen and evaluate_at(state, v, symb_f):
                    seen.add(v)
                    step.append(v)
        frontier = step
    return False
