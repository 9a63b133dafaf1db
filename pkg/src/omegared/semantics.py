"""Run semantics and decision procedures.

Bounded nondeterministic simulation works for every machine kind and only
ever yields decided verdicts that are certain: Rejected when exhaustive
search killed all branches, never Accepted (Buchi acceptance is a property
of infinite runs). Exact decisions exist for the decidable fragments:
lasso membership for Buchi automata, 1-counter machines and pushdown
automata, emptiness for Buchi pushdown automata, and lasso-pair membership
for 2-tape automata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice
from typing import Iterable

from ._graph import bfs_path, strongly_connected_components
from .machines import (
    BuchiNFA,
    BuchiPDA,
    KCounterAutomaton,
    MachineError,
    MachineSpec,
    TuringMachineSpec,
    TwoTapeAutomaton,
    Verdict,
)
from .words import AlphabetMismatch, LassoWord, PrefixSource, WordError


@dataclass(frozen=True)
class SimCaps:
    counter_cap: int = 100_000
    lambda_cap: int = 1_000
    branch_cap: int = 100_000

    def __post_init__(self) -> None:
        if min(self.counter_cap, self.lambda_cap, self.branch_cap) <= 0:
            raise MachineError("simulation caps must be positive")


@dataclass
class RunSummary:
    horizon: int
    letters_consumed: int = 0
    accepting_visits: int = 0
    alive_branches: int = 0
    dead_branches: int = 0
    capped: bool = False
    oscillations: int = 0
    max_head: int | None = None
    cell_visits: dict | None = None


class _Letters:
    """Lazy 1-based letter window over a prefix source."""

    def __init__(self, source: PrefixSource):
        self._it = source.letters()
        self._buf: list[str] = []

    def get(self, n: int) -> str:
        while len(self._buf) < n:
            self._buf.append(next(self._it))
        return self._buf[n - 1]


# ---------------------------------------------------------------------------
# Bounded simulation
# ---------------------------------------------------------------------------


def simulate_bounded(
    m: MachineSpec,
    x: PrefixSource,
    horizon: int,
    caps: SimCaps = SimCaps(),
    second: PrefixSource | None = None,
) -> tuple[Verdict, RunSummary]:
    """Exhaustive breadth-first run exploration up to `horizon` machine steps.

    Rejected is reported only when every branch died and no cap interfered,
    so it is stable under horizon increase. Buchi acceptance can never be
    certified positively in bounded time, so live searches end Unknown with
    evidence counters.
    """
    if horizon < 0:
        raise MachineError(f"horizon must be >= 0, got {horizon}")
    if isinstance(m, TuringMachineSpec):
        return tm_accepts_evidence(m, x, max(horizon, 1), caps)
    if isinstance(m, TwoTapeAutomaton):
        if second is None:
            raise MachineError("two-tape simulation needs a second word")
        return _simulate_two_tape(m, x, second, horizon, caps)
    if isinstance(m, (BuchiNFA, KCounterAutomaton, BuchiPDA)):
        return _simulate_word_machine(m, x, horizon, caps)
    raise MachineError(f"unsupported machine kind {m.kind!r}")


def _word_machine_steps(m):
    """Uniform transition view: (letter, enabled(extra), apply(extra), dst)."""
    if isinstance(m, BuchiNFA):
        return [(letter, None, None, src, dst) for src, letter, dst in m.transitions]
    if isinstance(m, KCounterAutomaton):
        out = []
        for src, letter, guard, dst, update in m.transitions:
            out.append((letter, ("counter", guard, update), None, src, dst))
        return out
    if isinstance(m, BuchiPDA):
        out = []
        for src, letter, top, dst, push in m.transitions:
            out.append((letter, ("stack", top, push), None, src, dst))
        return out
    raise AssertionError(m)


def _simulate_word_machine(m, x, horizon, caps) -> tuple[Verdict, RunSummary]:
    if x.alphabet != m.alphabet:
        raise AlphabetMismatch("input word alphabet differs from machine alphabet")
    letters = _Letters(x)
    by_src: dict[str, list] = {}
    for t in _word_machine_steps(m):
        by_src.setdefault(t[3], []).append(t)

    if isinstance(m, KCounterAutomaton):
        init_extra: tuple = (0,) * m.counters
    elif isinstance(m, BuchiPDA):
        init_extra = (m.bottom,)
    else:
        init_extra = ()

    summary = RunSummary(horizon=0)
    # branch: (state, extra, pos, accepting visits, consecutive lambda steps)
    frontier = [(m.initial, init_extra, 0, 1 if m.initial in m.accepting else 0, 0)]
    summary.accepting_visits = frontier[0][3]
    steps = 0
    while frontier and steps < horizon:
        steps += 1
        nxt = []
        for state, extra, pos, acc, lrun in frontier:
            moved = False
            for letter, gate, _, _, dst in by_src.get(state, ()):
                if letter is None:
                    if lrun + 1 > caps.lambda_cap:
                        summary.capped = True
                        continue
                    new_pos, new_lrun = pos, lrun + 1
                else:
                    if letters.get(pos + 1) != letter:
                        continue
                    new_pos, new_lrun = pos + 1, 0
                new_extra = extra
                if gate is not None and gate[0] == "counter":
                    _, guard, update = gate
                    if any((c == 0) != (g == 0) for c, g in zip(extra, guard)):
                        continue
                    new_extra = tuple(c + d for c, d in zip(extra, update))
                    if max(new_extra) > caps.counter_cap:
                        summary.capped = True
                        continue
                elif gate is not None and gate[0] == "stack":
                    _, top, push = gate
                    if not extra or extra[0] != top:
                        continue
                    new_extra = push + extra[1:]
                    if len(new_extra) > caps.counter_cap:
                        summary.capped = True
                        continue
                moved = True
                new_acc = acc + (1 if dst in m.accepting else 0)
                nxt.append((dst, new_extra, new_pos, new_acc, new_lrun))
                if new_pos > summary.letters_consumed:
                    summary.letters_consumed = new_pos
                if new_acc > summary.accepting_visits:
                    summary.accepting_visits = new_acc
            if not moved:
                summary.dead_branches += 1
        if len(nxt) > caps.branch_cap:
            summary.capped = True
            nxt = nxt[: caps.branch_cap]
        frontier = nxt
    summary.horizon = steps
    summary.alive_branches = len(frontier)
    if not frontier and not summary.capped:
        return Verdict.rejected(steps), summary
    return Verdict.unknown(horizon), summary


def _simulate_two_tape(m, x, y, horizon, caps) -> tuple[Verdict, RunSummary]:
    lx, ly = _Letters(x), _Letters(y)
    by_src: dict[str, list] = {}
    for src, u, v, dst in m.transitions:
        by_src.setdefault(src, []).append((u, v, dst))

    def matches(lz, pos, word) -> bool:
        return all(lz.get(pos + i + 1) == s for i, s in enumerate(word))

    summary = RunSummary(horizon=0)
    frontier = [(m.initial, 0, 0, 1 if m.initial in m.accepting else 0, 0)]
    steps = 0
    while frontier and steps < horizon:
        steps += 1
        nxt = []
        for state, p1, p2, acc, lrun in frontier:
            moved = False
            for u, v, dst in by_src.get(state, ()):
                if not u and not v:
                    if lrun + 1 > caps.lambda_cap:
                        summary.capped = True
                        continue
                    new_lrun = lrun + 1
                else:
                    new_lrun = 0
                if not matches(lx, p1, u) or not matches(ly, p2, v):
                    continue
                moved = True
                new_acc = acc + (1 if dst in m.accepting else 0)
                nxt.append((dst, p1 + len(u), p2 + len(v), new_acc, new_lrun))
                summary.letters_consumed = max(summary.letters_consumed, p1 + len(u) + p2 + len(v))
                summary.accepting_visits = max(summary.accepting_visits, new_acc)
            if not moved:
                summary.dead_branches += 1
        if len(nxt) > caps.branch_cap:
            summary.capped = True
            nxt = nxt[: caps.branch_cap]
        frontier = nxt
    summary.horizon = steps
    summary.alive_branches = len(frontier)
    if not frontier and not summary.capped:
        return Verdict.rejected(steps), summary
    return Verdict.unknown(horizon), summary


def tm_accepts_evidence(
    m: TuringMachineSpec, x: PrefixSource, horizon: int, caps: SimCaps = SimCaps()
) -> tuple[Verdict, RunSummary]:
    """Configuration-closure exploration with oscillation screening.

    Configurations record only the cells rewritten away from the input. A
    branch reaching an already-seen configuration is pruned: its futures are
    futures of the first occurrence, and a run confined to finitely many
    configurations revisits one forever, i.e. keeps some head position
    recurring, which is exactly an oscillating (hence rejecting) run. So when
    the closure is exhausted within the horizon, every surviving infinite run
    oscillates or dies and the word is certainly rejected.
    """
    if horizon < 1:
        raise MachineError(f"horizon must be >= 1, got {horizon}")
    if x.alphabet != m.input_alphabet:
        raise AlphabetMismatch("input word alphabet differs from machine input alphabet")
    letters = _Letters(x)
    one_prime = m.acceptance == "one-prime"
    by_key: dict[tuple[str, str], list] = {}
    for src, read, dst, write, move in m.transitions:
        if one_prime and dst not in m.accepting:
            continue  # a run through a non-accepting state can never 1'-accept
        by_key.setdefault((src, read), []).append((dst, write, move))

    summary = RunSummary(horizon=0, max_head=0, cell_visits={})
    if one_prime and m.initial not in m.accepting:
        summary.horizon = 0
        return Verdict.rejected(0), summary

    start = (m.initial, 1, frozenset())
    visited = {start}
    frontier = [start]
    summary.accepting_visits = 1 if m.initial in m.accepting else 0
    steps = 0
    while frontier and steps < horizon:
        steps += 1
        nxt = []
        for state, head, overlay in frontier:
            summary.cell_visits[head] = summary.cell_visits.get(head, 0) + 1
            if head > summary.max_head:
                summary.max_head = head
            if head > summary.letters_consumed:
                summary.letters_consumed = head
            over = dict(overlay)
            read = over.get(head, letters.get(head))
            moved = False
            for dst, write, move in by_key.get((state, read), ()):
                new_head = head + (1 if move == "R" else -1 if move == "L" else 0)
                if new_head < 1:
                    continue  # left edge: dead branch by convention
                new_over = dict(over)
                if write == letters.get(head):
                    new_over.pop(head, None)
                else:
                    new_over[head] = write
                cfg = (dst, new_head, frozenset(new_over.items()))
                moved = True
                if dst in m.accepting:
                    summary.accepting_visits += 1
                if cfg in visited:
                    summary.oscillations += 1
                    continue
                visited.add(cfg)
                nxt.append(cfg)
            if not moved:
                summary.dead_branches += 1
        if len(visited) > caps.branch_cap:
            summary.capped = True
            break
        frontier = nxt
    summary.horizon = steps
    summary.alive_branches = len(frontier)
    if not frontier and not summary.capped:
        return Verdict.rejected(steps), summary
    return Verdict.unknown(horizon), summary


# ---------------------------------------------------------------------------
# Exact lasso membership for Buchi automata
# ---------------------------------------------------------------------------


def lasso_member_nfa(m: BuchiNFA, w: LassoWord) -> bool:
    """w in L(m), decided on the product of m with w's phase structure.

    Every product edge consumes one letter, so any reachable cycle through an
    accepting state is an accepting run on w and conversely.
    """
    if w.alphabet != m.alphabet:
        raise AlphabetMismatch("lasso alphabet differs from machine alphabet")
    by_key: dict[tuple[str, str], list[str]] = {}
    for src, letter, dst in m.transitions:
        by_key.setdefault((src, letter), []).append(dst)

    def succ(node):
        q, p = node
        return [(d, w.phase_next(p)) for d in by_key.get((q, w.phase_letter(p)), ())]

    start = (m.initial, 0)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for s in succ(node):
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    for comp in strongly_connected_components(seen, succ):
        comp_set = set(comp)
        has_edge = any(s in comp_set for node in comp for s in succ(node))
        if has_edge and any(q in m.accepting for q, _ in comp):
            return True
    return False


# ---------------------------------------------------------------------------
# Buchi pushdown emptiness by saturation
# ---------------------------------------------------------------------------


@dataclass
class _PDS:
    """Internal pushdown system: hashable states, rules with push length <= 2."""

    rules: list  # (src, letter-or-None, top, dst, push tuple)
    initial_head: tuple
    accepting: set
    alphabet_hint: object = None


@dataclass
class EmptinessResult:
    empty: bool
    witness: LassoWord | None
    heads: int = 0
    pop_items: int = 0


def _normalize_rules(rules) -> list:
    """Split pushes longer than 2 through fresh non-accepting states/symbols."""
    out = []
    for idx, (src, letter, top, dst, push) in enumerate(rules):
        if len(push) <= 2:
            out.append((src, letter, top, dst, tuple(push)))
            continue
        n = len(push)
        # (src, top) -> aux chain building push[0..n-1] two symbols at a time.
        prev_state, prev_sym = src, top
        prev_letter = letter
        for i in range(n - 2):
            aux_state = ("#aux", idx, i)
            aux_sym = ("#sym", idx, i)
            out.append((prev_state, prev_letter, prev_sym, aux_state, (aux_sym, push[n - 1 - i])))
            prev_state, prev_sym, prev_letter = aux_state, aux_sym, None
        out.append((prev_state, prev_letter, prev_sym, dst, (push[0], push[1])))
    return out


def _pds_emptiness(pds: _PDS) -> tuple[bool, tuple | None, dict]:
    """Returns (empty, witness (u, v) letter tuples or None, stats).

    The pop relation holds items (p, g, q, fa, fl): the machine can move from
    stack top g in state p to state q with that g popped, somewhere visiting
    an accepting state (fa) and/or consuming at least one letter (fl). Letter
    progress must be tracked because acceptance requires reading the whole
    omega-word: an accepting loop of pure lambda moves accepts nothing.
    """
    rules = _normalize_rules(pds.rules)
    acc = pds.accepting

    def state_acc(s) -> bool:
        return s in acc

    pops: dict[tuple, set] = {}  # (p, g) -> {(q, fa, fl)}
    deriv: dict[tuple, tuple] = {}  # item -> derivation
    worklist: list[tuple] = []

    def add_item(p, g, q, fa, fl, how) -> None:
        entry = (q, fa, fl)
        bucket = pops.setdefault((p, g), set())
        if entry in bucket:
            return
        bucket.add(entry)
        item = (p, g, q, fa, fl)
        deriv[item] = how
        worklist.append(item)

    swap_by: dict[tuple, list] = {}  # (dst, pushed sym) -> rules with |push| == 1
    push2_by: dict[tuple, list] = {}  # (dst, push[0]) -> rules with |push| == 2
    second_wait: dict[tuple, list] = {}  # (mid state, push[1]) -> [(rule, item1)]
    for r in rules:
        src, letter, top, dst, push = r
        if len(push) == 0:
            add_item(src, top, dst, state_acc(src) or state_acc(dst), letter is not None, ("pop", r))
        elif len(push) == 1:
            swap_by.setdefault((dst, push[0]), []).append(r)
        else:
            push2_by.setdefault((dst, push[0]), []).append(r)

    def combine2(r, item1, item2) -> None:
        src, letter, top, dst, push = r
        _, _, q1, fa1, fl1 = item1
        _, _, q2, fa2, fl2 = item2
        add_item(
            src,
            top,
            q2,
            state_acc(src) or fa1 or fa2,
            (letter is not None) or fl1 or fl2,
            ("push2", r, item1, item2),
        )

    while worklist:
        item = worklist.pop()
        p, g, q, fa, fl = item
        for r in swap_by.get((p, g), ()):
            src, letter, top, dst, push = r
            add_item(src, top, q, state_acc(src) or fa, (letter is not None) or fl, ("swap", r, item))
        for r in push2_by.get((p, g), ()):
            push1 = r[4][1]
            second_wait.setdefault((q, push1), []).append((r, item))
            for entry in list(pops.get((q, push1), ())):
                combine2(r, item, (q, push1) + entry)
        for r, item1 in list(second_wait.get((p, g), ())):
            combine2(r, item1, item)

    # Head graph: nodes (state, top), edges tagged with acceptance/letter flags.
    edges_by_src: dict[tuple, list] = {}

    def head_edges(node):
        if node in edges_by_src:
            return edges_by_src[node]
        out = []
        for r in by_head.get(node, ()):
            src, letter, top, dst, push = r
            fa0, fl0 = state_acc(src), letter is not None
            if len(push) >= 1:
                out.append(((dst, push[0]), fa0, fl0, ("step", r)))
            if len(push) == 2:
                for q, fa, fl in pops.get((dst, push[0]), ()):
                    out.append(((q, push[1]), fa0 or fa, fl0 or fl, ("steppop", r, (dst, push[0], q, fa, fl))))
        edges_by_src[node] = out
        return out

    by_head: dict[tuple, list] = {}
    for r in rules:
        by_head.setdefault((r[0], r[2]), []).append(r)

    start = pds.initial_head
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for succ, _, _, _ in head_edges(node):
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        frontier = nxt

    stats = {"heads": len(seen), "pop_items": len(deriv)}

    def succ_nodes(node):
        return [e[0] for e in head_edges(node)]

    target = None
    for comp in strongly_connected_components(seen, succ_nodes):
        comp_set = set(comp)
        fa_edge = fl_edge = None
        has_edge = False
        for node in comp:
            for succ, fa, fl, tag in head_edges(node):
                if succ not in comp_set:
                    continue
                has_edge = True
                if fa and fa_edge is None:
                    fa_edge = (node, succ, tag)
                if fl and fl_edge is None:
                    fl_edge = (node, succ, tag)
        if has_edge and fa_edge is not None and fl_edge is not None:
            target = (comp_set, fa_edge, fl_edge)
            break
    if target is None:
        return True, None, stats

    # Witness extraction: expand pop items back into the letters they consume.
    expand_memo: dict[tuple, tuple] = {}

    def expand(item) -> tuple:
        if item in expand_memo:
            return expand_memo[item]
        how = deriv[item]
        if how[0] == "pop":
            r = how[1]
            res: tuple = (r[1],) if r[1] is not None else ()
        elif how[0] == "swap":
            r, sub = how[1], how[2]
            head = (r[1],) if r[1] is not None else ()
            res = head + expand(sub)
        else:
            r, sub1, sub2 = how[1], how[2], how[3]
            head = (r[1],) if r[1] is not None else ()
            res = head + expand(sub1) + expand(sub2)
        expand_memo[item] = res
        return res

    def edge_letters(tag) -> tuple:
        if tag[0] == "step":
            r = tag[1]
            return (r[1],) if r[1] is not None else ()
        r, it = tag[1], tag[2]
        head = (r[1],) if r[1] is not None else ()
        return head + expand(it)

    comp_set, fa_edge, fl_edge = target

    def labelled(node):
        return [((succ), edge_letters(tag)) for succ, fa, fl, tag in head_edges(node)]

    def labelled_in_comp(node):
        return [(succ, lab) for succ, lab in labelled(node) if succ in comp_set]

    entry, u_labels = bfs_path(start, comp_set, labelled)
    walk_letters: list = []
    cur = entry
    for via_src, via_dst, via_tag in (fa_edge, fl_edge):
        _, labels = bfs_path(cur, {via_src}, labelled_in_comp)
        for lab in labels:
            walk_letters.extend(lab)
        walk_letters.extend(edge_letters(via_tag))
        cur = via_dst
    _, labels = bfs_path(cur, {entry}, labelled_in_comp)
    for lab in labels:
        walk_letters.extend(lab)

    u = tuple(s for lab in u_labels for s in lab)
    v = tuple(walk_letters)
    return False, (u, v), stats


_INDEX_CACHE: dict[int, tuple] = {}


def _cached(machine, build):
    key = id(machine)
    hit = _INDEX_CACHE.get(key)
    if hit is not None and hit[0] is machine:
        return hit[1]
    value = build()
    if len(_INDEX_CACHE) > 8:
        _INDEX_CACHE.clear()
    _INDEX_CACHE[key] = (machine, value)
    return value


def counter_to_pda(m: KCounterAutomaton) -> BuchiPDA:
    """The {bottom, unit} pushdown form of a 1-counter machine.

    The counter value n is held as n unit symbols above the permanent bottom.
    """
    if m.counters != 1:
        raise MachineError("only 1-counter machines translate to the two-symbol pushdown form")
    bottom, unit = "Z0", "I"
    transitions = set()
    for src, letter, (g,), dst, (d,) in m.transitions:
        if g == 0:
            push = (bottom,) if d == 0 else (unit, bottom)
            transitions.add((src, letter, bottom, dst, push))
        else:
            push = {0: (unit,), 1: (unit, unit), -1: ()}[d]
            transitions.add((src, letter, unit, dst, push))
    return BuchiPDA(
        states=m.states,
        alphabet=m.alphabet,
        stack_alphabet=(bottom, unit),
        initial=m.initial,
        accepting=m.accepting,
        transitions=frozenset(transitions),
    )


def nfa_to_pda(m: BuchiNFA) -> BuchiPDA:
    bottom = "Z0"
    return BuchiPDA(
        states=m.states,
        alphabet=m.alphabet,
        stack_alphabet=(bottom,),
        initial=m.initial,
        accepting=m.accepting,
        transitions=frozenset(
            (src, letter, bottom, dst, (bottom,)) for src, letter, dst in m.transitions
        ),
    )


def _as_pda(m) -> BuchiPDA:
    if isinstance(m, BuchiPDA):
        return m
    if isinstance(m, KCounterAutomaton):
        return counter_to_pda(m)
    if isinstance(m, BuchiNFA):
        return nfa_to_pda(m)
    raise MachineError(f"machine kind {m.kind!r} has no pushdown form")


def buchi_pushdown_emptiness(m) -> EmptinessResult:
    """Exact emptiness for Buchi pushdown / 1-counter / Buchi automata.

    Non-emptiness always comes with an ultimately periodic witness word
    assembled from the discovered pumpable accepting loop.
    """
    pda = _as_pda(m)
    pds = _PDS(
        rules=list(pda.transitions),
        initial_head=(pda.initial, pda.bottom),
        accepting=set(pda.accepting),
    )
    empty, wit, stats = _pds_emptiness(pds)
    witness = None
    if wit is not None:
        u, v = wit
        witness = LassoWord(u, v, m.alphabet)
    return EmptinessResult(empty, witness, stats["heads"], stats["pop_items"])


def empty_buchi_pushdown(m) -> bool:
    return buchi_pushdown_emptiness(m).empty


def _pda_index(pda: BuchiPDA):
    def build():
        by_letter: dict[str | None, dict[str, list]] = {}
        for src, letter, top, dst, push in pda.transitions:
            by_letter.setdefault(letter, {}).setdefault(src, []).append((top, dst, push))
        return by_letter

    return _cached(pda, build)


def lasso_member_pushdown(m, w: LassoWord) -> bool:
    """w in L(m) for pushdown / 1-counter machines, decided exactly.

    Builds the product of the machine with w's phase structure, restricted to
    pairs reachable when the stack is ignored (a sound over-approximation
    that keeps the product small), and runs pushdown emptiness on it. The
    letter-progress flag of the emptiness check enforces complete runs: a
    member must be consumed entirely.
    """
    pda = _as_pda(m)
    if w.alphabet != m.alphabet:
        raise AlphabetMismatch("lasso alphabet differs from machine alphabet")
    by_letter = _pda_index(pda)

    start = (pda.initial, 0)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for q, p in frontier:
            succs = []
            for top, dst, push in by_letter.get(None, {}).get(q, ()):
                succs.append((dst, p))
            for top, dst, push in by_letter.get(w.phase_letter(p), {}).get(q, ()):
                succs.append((dst, w.phase_next(p)))
            for s in succs:
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt

    rules = []
    for q, p in seen:
        for top, dst, push in by_letter.get(None, {}).get(q, ()):
            rules.append(((q, p), None, top, (dst, p), push))
        letter = w.phase_letter(p)
        for top, dst, push in by_letter.get(letter, {}).get(q, ()):
            rules.append(((q, p), letter, top, (dst, w.phase_next(p)), push))
    pds = _PDS(
        rules=rules,
        initial_head=(start, pda.bottom),
        accepting={(q, p) for q, p in seen if q in pda.accepting},
    )
    empty, _, _ = _pds_emptiness(pds)
    return not empty


# ---------------------------------------------------------------------------
# Lasso-pair membership for 2-tape automata
# ---------------------------------------------------------------------------


@dataclass
class PhaseGraph:
    """Finite quotient of (state, tape-1 position, tape-2 position).

    Positions beyond each lasso's spoke are collapsed modulo its cycle. An
    infinite accepting computation eventually lives inside one strongly
    connected component, which must contain an accepting node and, because
    both input words are infinite, cycles with positive progress on each
    tape; conversely such a component stitches into an accepting run.
    """

    initial: tuple
    nodes: frozenset
    edges: tuple  # (src, dst, letters consumed on tape 1, letters consumed on tape 2)
    accepting: frozenset


def _two_tape_index(m: TwoTapeAutomaton):
    def build():
        by_src: dict[str, list] = {}
        for src, u, v, dst in m.transitions:
            by_src.setdefault(src, []).append((u, v, dst))
        return by_src

    return _cached(m, build)


def _phase_consume(w: LassoWord, p: int, wordt: tuple[str, ...]) -> int | None:
    for s in wordt:
        if w.phase_letter(p) != s:
            return None
        p = w.phase_next(p)
    return p


def build_phase_graph(m: TwoTapeAutomaton, w1: LassoWord, w2: LassoWord) -> PhaseGraph:
    if w1.alphabet != m.alphabet1 or w2.alphabet != m.alphabet2:
        raise AlphabetMismatch("lasso alphabets differ from the machine tape alphabets")
    by_src = _two_tape_index(m)
    start = (m.initial, 0, 0)
    seen = {start}
    frontier = [start]
    edges = []
    while frontier:
        nxt = []
        for node in frontier:
            q, p1, p2 = node
            for u, v, dst in by_src.get(q, ()):
                np1 = _phase_consume(w1, p1, u)
                if np1 is None:
                    continue
                np2 = _phase_consume(w2, p2, v)
                if np2 is None:
                    continue
                succ = (dst, np1, np2)
                edges.append((node, succ, len(u), len(v)))
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        frontier = nxt
    accepting = frozenset(n for n in seen if n[0] in m.accepting)
    return PhaseGraph(start, frozenset(seen), tuple(edges), accepting)


def lasso_pair_member_two_tape(m: TwoTapeAutomaton, w1: LassoWord, w2: LassoWord) -> bool:
    graph = build_phase_graph(m, w1, w2)
    succs: dict = {}
    for src, dst, du, dv in graph.edges:
        succs.setdefault(src, []).append(dst)

    for comp in strongly_connected_components(graph.nodes, lambda n: succs.get(n, ())):
        comp_set = set(comp)
        if not comp_set & graph.accepting:
            continue
        has1 = has2 = False
        for src, dst, du, dv in graph.edges:
            if src in comp_set and dst in comp_set:
                has1 = has1 or du > 0
                has2 = has2 or dv > 0
                if has1 and has2:
                    break
        if has1 and has2:
            return True
    return False
