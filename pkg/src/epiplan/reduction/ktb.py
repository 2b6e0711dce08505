"""Single-agent compiler for reflexive+symmetric frames (profile KTB).

Two separator symbols #1/#2 follow every chain bit so the undirected
chain keeps an orientation: the neighborhood of a symbol determines what
may legally come next (nxt below).  Every relation here is passed through
the reflexive-symmetric closure.

The stage-two machinery (next_stage, the removal actions, the goal) is a
transcription in the same style as the other variants, adjusted for
reflexivity: formulas that must not hold at a world can no longer be
falsified by that world simply lacking successors, so the root/branch
guards are explicit.  The chain-end bookkeeping worlds w_end(x) are part
of the loop-flavor family here, attached at the last #2 world.
"""
from __future__ import annotations

from ..action import EventModel, make_action
from ..errors import IllegalFlavor, UnknownShorthand
from ..formula import Formula, and_, conj, diamond, disj, know, not_, or_, prop
from ..kripke import EpistemicState, make_model, restrict
from ..pcp import PcpInstance
from .common import check_words, refl_sym

AGENTS = 1
PROFILE_NAME = "KTB"
REMOVAL_ALPHABET = ("0", "1", "#1", "#2")
FLAVORS = ("plain", "loop", "minus_hash1", "minus_hash2")

_P = {
    name: prop(name)
    for name in ("0", "1", "#1", "#2", "a", "b", "root", "stg1", "empty", "end", "ntF", "lp")
}


def _k(f: Formula) -> Formula:
    return know(0, f)


def _maybe(f: Formula) -> Formula:
    return diamond(0, f)


def nxt(d: str) -> Formula:
    if d in ("0", "1"):
        return _P["#1"]
    if d == "#1":
        return _P["#2"]
    if d in ("#2", "a", "b"):
        return or_(_P["0"], _P["1"])
    raise UnknownShorthand(f"nxt takes one of 0, 1, #1, #2, a, b; got {d!r}")


def symb() -> Formula:
    return disj(_P["0"], _P["1"], _P["#1"], _P["#2"])


def last() -> Formula:
    # The extra !end guard is required under reflexivity: an end world can
    # reach itself, so <K> end alone would mark it as a chain end.
    return conj(not_(_P["end"]), _maybe(_P["end"]), _k(not_(_P["lp"])))


def loop_marker(x: str) -> Formula:
    return and_(_P[x], _maybe(_P["lp"]))


def tail() -> Formula:
    branch = or_(_P["a"], _P["b"])
    cases = [and_(not_(symb()), _k(not_(nxt("a"))))]
    cases.extend(and_(_P[d], _k(not_(nxt(d)))) for d in ("0", "1", "#1", "#2"))
    return and_(branch, disj(*cases))


def failed() -> Formula:
    return and_(or_(_P["a"], _P["b"]), _k(not_(_P["ntF"])))


def shorthand(name: str, arg: str | None = None) -> Formula:
    table = {"symb": symb, "last": last, "tail": tail, "failed": failed}
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
    raise UnknownShorthand(f"no shorthand {name!r} in variant KTB1")


def _w(*parts: str) -> str:
    if len(parts) == 1:
        return f"w_{parts[0]}"
    if len(parts) == 2:
        return f"w_{parts[0]}({parts[1]})"
    return "w_{" + ",".join(parts) + "}"


def initial_state() -> EpistemicState:
    worlds = [_w(p) for p in ("root", "empty", "stg1", "a", "b", "lp")]
    val: dict[str, set[str]] = {w: {w[2:]} for w in worlds}
    edges = {(_w("root"), _w("empty")), (_w("root"), _w("stg1")),
             (_w("root"), _w("a")), (_w("root"), _w("b"))}
    for x in "ab":
        group = {}
        for p in ("0", "1", "#1", "#2", "ntF", "end"):
            w = _w(p, x)
            worlds.append(w)
            val[w] = {p, x}
            group[p] = w
        for bt in "01":
            edges.add((_w(x), group[bt]))
            edges.add((group[bt], group["#1"]))
            edges.add((group["#2"], group[bt]))
            edges.add((group[bt], group["ntF"]))
            edges.add((group[bt], _w("lp")))
        edges.add((group["#1"], group["#2"]))
        edges.add((group["#2"], group["end"]))
        edges.add((_w(x), group["end"]))
        edges.add((_w(x), group["ntF"]))
        edges.add((group["#1"], group["ntF"]))
        edges.add((group["#2"], group["ntF"]))
        edges.add((group["#1"], _w("lp")))
        edges.add((group["#2"], _w("lp")))
    model = make_model(worlds, AGENTS, [refl_sym(edges, worlds)], val)
    return EpistemicState(model, _w("root"))


def family(qa: str, qb: str, flavor: str) -> EpistemicState:
    if flavor not in FLAVORS:
        raise IllegalFlavor(f"variant KTB1 has no flavor {flavor!r}")
    check_words(qa, qb)
    words = {"a": qa, "b": qb}
    worlds = [_w("root"), _w("a"), _w("b"), _w("ntF", "a"), _w("ntF", "b")]
    val: dict[str, set[str]] = {
        _w("root"): {"root"},
        _w("a"): {"a"},
        _w("b"): {"b"},
        _w("ntF", "a"): {"ntF", "a"},
        _w("ntF", "b"): {"ntF", "b"},
    }
    edges: set[tuple[str, str]] = set()
    last_cells: dict[str, list[str]] = {}
    for x in "ab":
        q = words[x]
        ntf = _w("ntF", x)
        edges.add((_w("root"), _w(x)))
        edges.add((_w(x), ntf))
        prev = _w(x)
        cells: list[str] = []
        for j in range(1, len(q) + 1):
            bit, h1, h2 = _w(x, str(j)), _w(x, str(j), "#1"), _w(x, str(j), "#2")
            worlds.extend([bit, h1, h2])
            val[bit] = {q[j - 1], x}
            val[h1] = {"#1", x}
            val[h2] = {"#2", x}
            edges.update({(prev, bit), (bit, h1), (h1, h2)})
            edges.update({(bit, ntf), (h1, ntf), (h2, ntf)})
            prev = h2
            cells = [bit, h1, h2]
        last_cells[x] = cells
    if flavor == "loop":
        worlds.append(_w("stg1"))
        val[_w("stg1")] = {"stg1"}
        edges.add((_w("root"), _w("stg1")))
        worlds.append(_w("lp"))
        val[_w("lp")] = {"lp"}
        for x in "ab":
            q = words[x]
            group = {}
            for p in ("0", "1", "#1", "#2", "end"):
                w = _w(p, x)
                worlds.append(w)
                val[w] = {p, x}
                group[p] = w
            ntf = _w("ntF", x)
            for bt in "01":
                edges.update({(group[bt], group["#1"]), (group["#2"], group[bt])})
                edges.update({(group[bt], ntf), (group[bt], _w("lp"))})
            edges.add((group["#1"], group["#2"]))
            edges.update({(group["#1"], ntf), (group["#2"], ntf)})
            edges.update({(group["#1"], _w("lp")), (group["#2"], _w("lp"))})
            edges.add((group["#2"], group["end"]))
            anchor = last_cells[x][2] if q else _w(x)
            edges.update({(anchor, group["0"]), (anchor, group["1"]), (anchor, group["end"])})
    model = make_model(worlds, AGENTS, [refl_sym(edges, worlds)], val)
    state = EpistemicState(model, _w("root"))
    if flavor in ("minus_hash1", "minus_hash2"):
        drop = set()
        for x in "ab":
            if words[x]:
                drop.add(last_cells[x][2])
                if flavor == "minus_hash1":
                    drop.add(last_cells[x][1])
        keep = [w for w in model.worlds if w not in drop]
        state = EpistemicState(restrict(model, keep), _w("root"))
    return state


def _e(*parts: str) -> str:
    return "e_" + (parts[0] if len(parts) == 1 else "{" + ",".join(parts) + "}")


def add_block(index: int, block: tuple[str, str]) -> EventModel:
    words = {"a": block[0], "b": block[1]}
    events = [_e("s"), _e("st"), _e("end"), _e("ntF"), _e("lp")]
    pre: dict[str, Formula] = {
        _e("s"): and_(_P["root"], _maybe(_P["stg1"])),
        _e("st"): _P["stg1"],
        _e("end"): _P["end"],
        _e("ntF"): _P["ntF"],
        # Dedicated carrier for w_lp, as in the K-variant action: only the
        # loop event may reach it.
        _e("lp"): _P["lp"],
    }
    edges: set[tuple[str, str]] = set()
    for x in "ab":
        word = words[x]
        ex, elst = _e(x), _e(x, "lst")
        e01, ehh = _e("01", x), _e("##", x)
        events.extend([ex, elst, e01, ehh])
        pre[ex] = conj(_P[x], not_(_P["ntF"]), not_(_P["end"]), _k(not_(_P["lp"])), not_(last()))
        pre[elst] = and_(_P[x], last())
        # Two loop carriers: the chain-end attach may only reach the bit
        # loop worlds, so the separator loop worlds ride separately.
        pre[e01] = and_(or_(_P["0"], _P["1"]), loop_marker(x))
        pre[ehh] = and_(or_(_P["#1"], _P["#2"]), loop_marker(x))
        edges.update({(_e("s"), _e("st")), (_e("s"), ex), (_e("s"), elst)})
        edges.update({(ex, ex), (ex, _e("ntF")), (ex, elst), (elst, _e("ntF"))})
        edges.update({(e01, ehh), (e01, _e("ntF")), (e01, _e("lp"))})
        edges.update({(ehh, ehh), (ehh, _e("ntF")), (ehh, _e("lp")), (ehh, _e("end"))})
        prev = elst
        for j in range(1, len(word) + 1):
            bit, h1, h2 = _e(x, str(j)), _e(x, str(j), "#1"), _e(x, str(j), "#2")
            events.extend([bit, h1, h2])
            pre[bit] = and_(prop(word[j - 1]), loop_marker(x))
            pre[h1] = and_(_P["#1"], loop_marker(x))
            pre[h2] = and_(_P["#2"], loop_marker(x))
            edges.update({(prev, bit), (bit, h1), (h1, h2)})
            edges.update({(bit, _e("ntF")), (h1, _e("ntF")), (h2, _e("ntF"))})
            prev = h2
        if word:
            edges.update({(prev, e01), (prev, _e("end"))})
        else:
            edges.update({(elst, e01), (elst, _e("end"))})
    return make_action(events, AGENTS, [refl_sym(edges, events)], pre, _e("s"))


def next_stage() -> EventModel:
    pre = or_(
        conj(_P["root"], _k(not_(_P["empty"])), _maybe(_P["stg1"])),
        conj(or_(_P["a"], _P["b"]), not_(_P["end"]), _k(not_(_P["lp"]))),
    )
    return make_action(["e_nx"], AGENTS, [{("e_nx", "e_nx")}], {"e_nx": pre}, "e_nx")


def remove_symbol(d: str) -> EventModel:
    main, fail, keep = f"e^{d}", f"e^{d}_fail", f"e^{d}_ntF"
    pre = {
        main: or_(
            and_(_P["root"], _k(not_(_P["stg1"]))),
            conj(or_(_P["a"], _P["b"]), not_(_P["ntF"]), not_(tail())),
        ),
        fail: or_(conj(tail(), not_(_P[d]), not_(_P["ntF"])), failed()),
        keep: _P["ntF"],
    }
    edges = refl_sym({(main, fail), (main, keep)}, [main, fail, keep])
    return make_action([main, fail, keep], AGENTS, [edges], pre, main)


def goal() -> Formula:
    return and_(
        _k(not_(_P["empty"])),
        _k(and_(or_(_P["root"], tail()), not_(failed()))),
    )


def build_actions(inst: PcpInstance) -> dict[str, EventModel]:
    actions = {f"ad_{i}": add_block(i, block) for i, block in enumerate(inst.blocks, start=1)}
    actions["next_stage"] = next_stage()
    for d in REMOVAL_ALPHABET:
        actions[f"remove_{d}"] = remove_symbol(d)
    return actions


def match_plan(inst: PcpInstance, match, word: str) -> list[str]:
    plan = [f"ad_{i}" for i in match]
    plan.append("next_stage")
    for bit in reversed(word):
        plan.extend(["remove_#2", "remove_#1", f"remove_{bit}"])
    return plan


def failed_state(state: EpistemicState) -> bool:
    from ..formula import evaluate_at

    model = state.model
    root = state.designated
    if not evaluate_at(state, root, and_(_P["root"], _k(not_(_P["stg1"])))):
        return False
    branch = or_(_P["a"], _P["b"])
    fail_f, symb_f = failed(), symb()
    frontier = [w for w in model.successors(0, root)
                if w != root and evaluate_at(state, w, branch)]
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
