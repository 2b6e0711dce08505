"""Two-agent compiler for equivalence-relation frames (profile S5).

Both agents' relations are unions of disjoint cliques (every world not in
a listed clique is its own singleton class), and the chain alternates the
two agents' cliques with '#' separator worlds so every block symbol sits
an even number of clique-hops from the root.  Auxiliary worlds (w_ntF,
w_end) are duplicated per chain position because under equivalence
relations a shared copy would glue unrelated cliques together.

Agent 0 here plays the role of the relation that owns the root clique;
agent 1 owns the branch cliques.
"""
from __future__ import annotations

from ..action import EventModel, make_action
from ..errors import IllegalFlavor, UnknownShorthand
from ..formula import Formula, and_, conj, diamond, disj, know, not_, or_, prop
from ..kripke import EpistemicState, make_model, restrict
from ..pcp import PcpInstance
from .common import check_words, cliques, reflexive

AGENTS = 2
PROFILE_NAME = "S5"
REMOVAL_ALPHABET = ("0", "1", "#")
FLAVORS = ("plain", "loop", "minus_hash")

_P = {name: prop(name) for name in ("0", "1", "#", "a", "b", "root", "stg1", "empty", "end", "ntF")}


def _k(agent: int, f: Formula) -> Formula:
    return know(agent, f)


def _maybe(agent: int, f: Formula) -> Formula:
    return diamond(agent, f)


def ag1() -> Formula:
    return disj(_P["root"], _P["0"], _P["1"])


def ag2() -> Formula:
    return and_(or_(_P["a"], _P["b"]), not_(disj(_P["0"], _P["1"], _P["ntF"], _P["end"])))


def symb() -> Formula:
    return disj(_P["0"], _P["1"], _P["#"])


def last() -> Formula:
    return and_(ag2(), _maybe(1, _P["end"]))


def tail(i: int) -> Formula:
    if i == 1:
        return and_(ag1(), _k(0, not_(ag2())))
    if i == 2:
        return and_(ag2(), _k(1, not_(ag1())))
    raise UnknownShorthand("tail takes argument 1 or 2")


def okstate() -> Formula:
    return or_(
        and_(or_(_P["0"], _P["1"]), _maybe(0, _P["ntF"])),
        and_(
            conj(or_(_P["a"], _P["b"]), not_(_P["0"]), not_(_P["1"])),
            _maybe(1, _P["ntF"]),
        ),
    )


def shorthand(name: str, arg: str | None = None) -> Formula:
    table = {"ag1": ag1, "ag2": ag2, "symb": symb, "last": last, "okstate": okstate}
    if name in table:
        return table[name]()
    if name == "tail":
        if arg not in ("1", "2"):
            raise UnknownShorthand("tail takes argument 1 or 2")
        return tail(int(arg))
    raise UnknownShorthand(f"no shorthand {name!r} in variant MultiS5")


def _w(*parts: str) -> str:
    if len(parts) == 1:
        return f"w_{parts[0]}"
    return f"w_{parts[0]}({','.join(parts[1:])})"


def initial_state() -> EpistemicState:
    worlds = [_w(p) for p in ("root", "empty", "stg1", "a", "b")]
    val: dict[str, set[str]] = {w: {w[2:]} for w in worlds}
    per_branch: dict[str, list[str]] = {}
    for x in "ab":
        group = []
        for p in ("0", "1", "#", "ntF", "end"):
            w = _w(p, x)
            worlds.append(w)
            val[w] = {p, x}
            group.append(w)
        per_branch[x] = group
    r1 = cliques([_w("root"), _w("empty"), _w("stg1"), _w("a"), _w("b")],
                 per_branch["a"], per_branch["b"])
    r2 = cliques([_w("a")] + per_branch["a"], [_w("b")] + per_branch["b"])
    model = make_model(
        worlds, AGENTS, [reflexive(r1, worlds), reflexive(r2, worlds)], val
    )
    return EpistemicState(model, _w("root"))


def _chain_names(x: str, q: str):
    bits = [_w(x, str(j)) for j in range(1, len(q) + 1)]
    hashes = [_w(x, str(j), "#") for j in range(1, len(q) + 1)]
    ntf_bits = [_w("ntF", x, str(j)) for j in range(1, len(q) + 1)]
    ntf_hashes = [_w("ntF", x, str(j), "#") for j in range(1, len(q) + 1)]
    return bits, hashes, ntf_bits, ntf_hashes


def family(qa: str, qb: str, flavor: str) -> EpistemicState:
    if flavor not in FLAVORS:
        raise IllegalFlavor(f"variant MultiS5 has no flavor {flavor!r}")
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
    r1 = cliques([_w("root"), _w("a"), _w("b")])
    r2: set = set()
    names = {}
    for x in "ab":
        q = words[x]
        bits, hashes, ntf_bits, ntf_hashes = _chain_names(x, q)
        names[x] = (bits, hashes, ntf_bits, ntf_hashes)
        for j in range(len(q)):
            worlds.extend([bits[j], hashes[j], ntf_bits[j], ntf_hashes[j]])
            val[bits[j]] = {q[j], x}
            val[hashes[j]] = {"#", x}
            val[ntf_bits[j]] = {"ntF", x}
            val[ntf_hashes[j]] = {"ntF", x}
            r1 |= cliques([bits[j], hashes[j], ntf_bits[j]])
        head = {_w(x), _w("ntF", x)}
        if q:
            head.add(bits[0])
        r2 |= cliques(head)
        for j in range(len(q) - 1):
            r2 |= cliques([hashes[j], bits[j + 1], ntf_hashes[j]])
        if q:
            r2 |= cliques([hashes[-1], ntf_hashes[-1]])
    if flavor == "loop":
        worlds.append(_w("stg1"))
        val[_w("stg1")] = {"stg1"}
        r1 |= cliques([_w("root"), _w("stg1"), _w("a"), _w("b")])
        r2 |= cliques([_w("stg1")])
        for x in "ab":
            q = words[x]
            fresh = []
            for p in ("0", "1", "#", "end"):
                w = _w(p, x)
                worlds.append(w)
                val[w] = {p, x}
                fresh.append(w)
            ntf_tail = names[x][3][-1] if q else _w("ntF", x)
            tl = fresh + [ntf_tail]
            r1 |= cliques(tl)
            anchor = names[x][1][-1] if q else _w(x)
            r2 |= cliques(tl + [anchor])
    model = make_model(worlds, AGENTS, [reflexive(r1, worlds), reflexive(r2, worlds)], val)
    state = EpistemicState(model, _w("root"))
    if flavor == "minus_hash":
        drop = {names[x][1][-1] for x in "ab" if words[x]}
        keep = [w for w in model.worlds if w not in drop]
        state = EpistemicState(restrict(model, keep), _w("root"))
    return state


def _e(*parts: str) -> str:
    return "e_" + (parts[0] if len(parts) == 1 else "{" + ",".join(parts) + "}")


def add_block(index: int, block: tuple[str, str]) -> EventModel:
    words = {"a": block[0], "b": block[1]}
    events = [_e("s"), _e("st")]
    pre: dict[str, Formula] = {
        _e("s"): and_(_P["root"], _maybe(0, _P["stg1"])),
        _e("st"): _P["stg1"],
    }
    r1 = cliques([_e("s"), _e("st"), _e("a"), _e("b"), "e_a^eps", "e_b^eps"])
    r2 = cliques([_e("s")], [_e("st")])
    for x in "ab":
        word = words[x]
        ex, eps = _e(x), f"e_{x}^eps"
        elst, esmb, etl = _e(x, "lst"), _e(x, "smb"), _e(x, "{}")
        n1, n2, nlst = f"e_ntF^{{{x},1}}", f"e_ntF^{{{x},2}}", f"e_ntF^{{{x},lst}}"
        events.extend([ex, eps, elst, esmb, etl, n1, n2, nlst])
        pre[ex] = conj(_P[x], ag2(), not_(_P["#"]), not_(last()))
        pre[eps] = conj(_P[x], ag2(), not_(_P["#"]), last(), _k(0, not_(_P["end"])))
        pre[elst] = conj(_P[x], _P["#"], last(), _k(0, not_(_P["end"])))
        pre[esmb] = conj(_P[x], symb(), not_(last()))
        pre[etl] = conj(_P[x], _maybe(0, _P["end"]), disj(symb(), _P["ntF"], _P["end"]))
        pre[n1] = conj(_P[x], _P["ntF"], _k(0, not_(_P["end"])))
        pre[n2] = conj(_P[x], _P["ntF"], _k(0, not_(_P["end"])))
        pre[nlst] = conj(_P[x], _P["ntF"], _maybe(0, _P["end"]))
        bits = [_e(x, str(j)) for j in range(1, len(word) + 1)]
        hashes = [_e(x, str(j), "#") for j in range(1, len(word) + 1)]
        ntf_bits = [f"e_ntF({x},{j})" for j in range(1, len(word) + 1)]
        ntf_hashes = [f"e_ntF({x},{j},#)" for j in range(1, len(word))]
        events.extend(bits + hashes + ntf_bits + ntf_hashes)
        for j in range(len(word)):
            pre[bits[j]] = conj(_P[x], prop(word[j]), _maybe(0, _P["end"]))
            pre[hashes[j]] = conj(_P[x], _P["#"], _maybe(0, _P["end"]))
            pre[ntf_bits[j]] = conj(_P[x], _P["ntF"], _maybe(0, _P["end"]))
            r1 |= cliques([bits[j], hashes[j], ntf_bits[j]])
        for j in range(len(word) - 1):
            pre[ntf_hashes[j]] = conj(_P[x], _P["ntF"], _maybe(0, _P["end"]))
            r2 |= cliques([bits[j + 1], hashes[j], ntf_hashes[j]])
        # n1 rides along with the symbol events so that carried-over chain
        # worlds keep their ntF companions in the first relation.
        r1 |= cliques([esmb, elst, n1])
        r2 |= cliques([ex, n1, esmb])
        second = [eps, elst, n2, nlst] + ([bits[0]] if word else [etl])
        r2 |= cliques(second)
        if word:
            r2 |= cliques([hashes[-1], etl])
        else:
            # With an empty block word the chain-end bookkeeping world keeps
            # both of its roles, so its two carrier events must share the
            # first-relation clique with the tail events.
            r1 |= cliques([nlst, etl])
    all_events = list(events)
    return make_action(
        all_events,
        AGENTS,
        [reflexive(r1, all_events), reflexive(r2, all_events)],
        pre,
        _e("s"),
    )


def next_stage() -> EventModel:
    pre = or_(
        conj(
            or_(not_(_P["root"]), and_(_k(0, not_(_P["empty"])), _maybe(0, _P["stg1"]))),
            not_(_P["stg1"]),
            not_(and_(_maybe(0, _P["0"]), _maybe(0, _P["1"]))),
        ),
        _P["ntF"],
    )
    loop = {("e_nx", "e_nx")}
    return make_action(["e_nx"], AGENTS, [loop, loop], {"e_nx": pre}, "e_nx")


def remove_symbol(bt: str) -> EventModel:
    name = f"e^{bt}"
    pre = disj(
        and_(_P["root"], _k(0, not_(_P["stg1"]))),
        and_(
            _P["ntF"],
            or_(
                and_(_maybe(0, ag1()), _maybe(0, ag2())),
                and_(_maybe(1, ag1()), _maybe(1, ag2())),
            ),
        ),
        and_(ag1(), not_(conj(tail(1), _P[bt], _maybe(0, _P["ntF"])))),
        and_(ag2(), not_(conj(tail(2), _P[bt], _maybe(1, _P["ntF"])))),
    )
    loop = {(name, name)}
    return make_action([name], AGENTS, [loop, loop], {name: pre}, name)


def goal() -> Formula:
    return and_(
        _k(0, not_(_P["empty"])),
        _k(0, or_(not_(or_(_P["a"], _P["b"])), and_(tail(2), _maybe(1, _P["ntF"])))),
    )


def build_actions(inst: PcpInstance) -> dict[str, EventModel]:
    actions = {f"ad_{i}": add_block(i, block) for i, block in enumerate(inst.blocks, start=1)}
    actions["next_stage"] = next_stage()
    for bt in REMOVAL_ALPHABET:
        actions[f"remove_{bt}"] = remove_symbol(bt)
    return actions


def match_plan(inst: PcpInstance, match, word: str) -> list[str]:
    plan = [f"ad_{i}" for i in match]
    plan.append("next_stage")
    for bit in reversed(word):
        plan.extend(["remove_#", f"remove_{bit}"])
    return plan


def failed_state(state: EpistemicState) -> bool:
    """Alternating-clique witness path for a failed removal.

    Path positions alternate the two agents' relations starting with
    agent 0 out of the root; the terminal condition asks, for the agent
    whose clique would continue the alternation, that no w_ntF copy is
    reachable any more.
    """
    from ..formula import evaluate_at

    model = state.model
    root = state.designated
    if not evaluate_at(state, root, and_(_P["root"], _k(0, not_(_P["stg1"])))):
        return False
    branch = or_(_P["a"], _P["b"])
    marks = [_P[p] for p in ("a", "b", "0", "1", "#")]

    def is_failed(w: str, parity: int) -> bool:
        comp = 1 if parity % 2 == 1 else 0
        if not any(evaluate_at(state, w, m) for m in marks):
            return False
        return evaluate_at(state, w, _k(comp, not_(_P["ntF"])))

    frontier = [w for w in model.successors(0, root) if w != root
                and evaluate_at(state, w, branch)]
    parity = 1
    seen = {(w, 1) for w in frontier}
    while frontier:
        for w in frontier:
            if is_failed(w, parity):
                return True
        agent = 1 if parity % 2 == 1 else 0
        step = []
        for w in frontier:
            w_ag1 = evaluate_at(state, w, ag1())
            w_ag2 = evaluate_at(state, w, ag2())
            for v in model.successors(agent, w):
                if (v, 1 - parity % 2) in seen:
                    continue
                if w_ag1 and not evaluate_at(state, v, ag2()):
                    continue
                if w_ag2 and not evaluate_at(state, v, ag1()):
                    continue
                seen.add((v, 1 - parity % 2))
                step.append(v)
        frontier = step
        parity += 1
    return False
