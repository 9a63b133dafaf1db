"""Machine data model, validation and the line-based text format.

All machine values are immutable and validated eagerly at construction; it is
impossible to hold an invalid machine obtained through this module. States
and symbols are strings, the empty-input label (lambda) is represented as
None internally and as `@` in the text format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .words import Alphabet, WordError

MOVES = ("L", "R", "S")
LAMBDA_TOKEN = "@"


class MachineError(ValueError):
    pass


class MachineSyntaxError(MachineError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class MachineSemanticsError(MachineError):
    pass


@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome: decided answers vs bounded-search evidence."""

    status: str
    horizon: int | None = None

    _ALLOWED = ("accepted", "rejected", "unknown")

    def __post_init__(self) -> None:
        if self.status not in self._ALLOWED:
            raise MachineError(f"bad verdict status {self.status!r}")
        if self.status == "unknown" and self.horizon is None:
            raise MachineError("unknown verdict must carry the exhausted horizon")

    @classmethod
    def accepted(cls) -> "Verdict":
        return cls("accepted")

    @classmethod
    def rejected(cls, horizon: int | None = None) -> "Verdict":
        return cls("rejected", horizon)

    @classmethod
    def unknown(cls, horizon: int) -> "Verdict":
        return cls("unknown", horizon)

    @property
    def is_accepted(self) -> bool:
        return self.status == "accepted"

    @property
    def is_rejected(self) -> bool:
        return self.status == "rejected"

    @property
    def is_unknown(self) -> bool:
        return self.status == "unknown"


def _check_states(states, initial, accepting) -> None:
    if not states:
        raise MachineSemanticsError("machine needs at least one state")
    if len(set(states)) != len(states):
        raise MachineSemanticsError("duplicate state names")
    if initial not in states:
        raise MachineSemanticsError(f"initial state {initial!r} not declared")
    for q in accepting:
        if q not in states:
            raise MachineSemanticsError(f"accepting state {q!r} not declared")


@dataclass(frozen=True)
class BuchiNFA:
    states: tuple[str, ...]
    alphabet: Alphabet
    initial: str
    accepting: frozenset[str]
    transitions: frozenset[tuple[str, str, str]]  # (src, letter, dst)

    kind = "buchi-nfa"

    def __post_init__(self) -> None:
        _check_states(self.states, self.initial, self.accepting)
        declared = set(self.states)
        for src, letter, dst in self.transitions:
            if src not in declared or dst not in declared:
                raise MachineSemanticsError(f"undeclared state in transition {src}->{dst}")
            if letter not in self.alphabet:
                raise MachineSemanticsError(f"undeclared letter {letter!r}")


@dataclass(frozen=True)
class KCounterAutomaton:
    states: tuple[str, ...]
    alphabet: Alphabet
    initial: str
    accepting: frozenset[str]
    counters: int
    real_time: bool
    # (src, letter-or-None, guard vector in {0,1}^k, dst, update vector in {-1,0,1}^k)
    transitions: frozenset[tuple[str, str | None, tuple[int, ...], str, tuple[int, ...]]]

    kind = "buchi-counter"

    def __post_init__(self) -> None:
        _check_states(self.states, self.initial, self.accepting)
        if self.counters < 1:
            raise MachineSemanticsError("counter machines need k >= 1")
        declared = set(self.states)
        k = self.counters
        for src, letter, guard, dst, update in self.transitions:
            if src not in declared or dst not in declared:
                raise MachineSemanticsError(f"undeclared state in transition {src}->{dst}")
            if letter is not None and letter not in self.alphabet:
                raise MachineSemanticsError(f"undeclared letter {letter!r}")
            if self.real_time and letter is None:
                raise MachineSemanticsError("real-time machine must not have lambda transitions")
            if len(guard) != k or len(update) != k:
                raise MachineSemanticsError("guard/update arity must equal counter count")
            for g in guard:
                if g not in (0, 1):
                    raise MachineSemanticsError(f"guard entries must be 0 or 1, got {g}")
            for m, (g, d) in enumerate(zip(guard, update), 1):
                if d not in (-1, 0, 1):
                    raise MachineSemanticsError(f"update entries must be -1, 0 or 1, got {d}")
                if g == 0 and d == -1:
                    raise MachineSemanticsError(
                        f"counter {m}: update -1 under a zero guard is forbidden"
                    )


@dataclass(frozen=True)
class BuchiPDA:
    states: tuple[str, ...]
    alphabet: Alphabet
    stack_alphabet: tuple[str, ...]  # first symbol is the bottom marker
    initial: str
    accepting: frozenset[str]
    # (src, letter-or-None, top, dst, pushed string top-first)
    transitions: frozenset[tuple[str, str | None, str, str, tuple[str, ...]]]

    kind = "buchi-pda"

    def __post_init__(self) -> None:
        _check_states(self.states, self.initial, self.accepting)
        if not self.stack_alphabet:
            raise MachineSemanticsError("stack alphabet must be non-empty")
        if len(set(self.stack_alphabet)) != len(self.stack_alphabet):
            raise MachineSemanticsError("duplicate stack symbols")
        declared = set(self.states)
        stack = set(self.stack_alphabet)
        bottom = self.bottom
        for src, letter, top, dst, push in self.transitions:
            if src not in declared or dst not in declared:
                raise MachineSemanticsError(f"undeclared state in transition {src}->{dst}")
            if letter is not None and letter not in self.alphabet:
                raise MachineSemanticsError(f"undeclared letter {letter!r}")
            if top not in stack or any(s not in stack for s in push):
                raise MachineSemanticsError("undeclared stack symbol in transition")
            if top == bottom:
                if not push or push[-1] != bottom:
                    raise MachineSemanticsError(
                        "replacement for the bottom symbol must keep it at the bottom"
                    )
                if bottom in push[:-1]:
                    raise MachineSemanticsError("bottom symbol may appear only at the bottom")
            elif bottom in push:
                raise MachineSemanticsError("bottom symbol may not be pushed above the bottom")

    @property
    def bottom(self) -> str:
        return self.stack_alphabet[0]


@dataclass(frozen=True)
class TwoTapeAutomaton:
    states: tuple[str, ...]
    alphabet1: Alphabet
    alphabet2: Alphabet
    initial: str
    accepting: frozenset[str]
    # (src, word read on tape 1, word read on tape 2, dst)
    transitions: frozenset[tuple[str, tuple[str, ...], tuple[str, ...], str]]

    kind = "two-tape"

    def __post_init__(self) -> None:
        _check_states(self.states, self.initial, self.accepting)
        declared = set(self.states)
        for src, u, v, dst in self.transitions:
            if src not in declared or dst not in declared:
                raise MachineSemanticsError(f"undeclared state in transition {src}->{dst}")
            self.alphabet1.restrict_check(u)
            self.alphabet2.restrict_check(v)


@dataclass(frozen=True)
class TuringMachineSpec:
    states: tuple[str, ...]
    input_alphabet: Alphabet
    tape_alphabet: Alphabet
    initial: str
    accepting: frozenset[str]
    acceptance: str  # "one-prime" | "buchi"
    # (src, read symbol, dst, written symbol, move)
    transitions: frozenset[tuple[str, str, str, str, str]]

    kind = "turing"

    def __post_init__(self) -> None:
        _check_states(self.states, self.initial, self.accepting)
        if self.acceptance not in ("one-prime", "buchi"):
            raise MachineSemanticsError(f"bad acceptance mode {self.acceptance!r}")
        for s in self.input_alphabet:
            if s not in self.tape_alphabet:
                raise MachineSemanticsError("input alphabet must be contained in tape alphabet")
        declared = set(self.states)
        for src, read, dst, write, move in self.transitions:
            if src not in declared or dst not in declared:
                raise MachineSemanticsError(f"undeclared state in transition {src}->{dst}")
            if read not in self.tape_alphabet or write not in self.tape_alphabet:
                raise MachineSemanticsError("undeclared tape symbol in transition")
            if move not in MOVES:
                raise MachineSemanticsError(f"bad move {move!r}")


MachineSpec = Union[BuchiNFA, KCounterAutomaton, BuchiPDA, TwoTapeAutomaton, TuringMachineSpec]


def is_counter_free(m: KCounterAutomaton) -> bool:
    """True iff no transition changes any counter."""
    if not isinstance(m, KCounterAutomaton):
        raise MachineError("is_counter_free expects a counter machine")
    return all(all(d == 0 for d in update) for _, _, _, _, update in m.transitions)


def counter_free_to_nfa(m: KCounterAutomaton) -> BuchiNFA:
    """The Buchi automaton induced by a real-time counter-free machine.

    Counters stay at zero forever, so only all-zero-guard transitions can fire.
    """
    if not is_counter_free(m):
        raise MachineError("machine is not counter-free")
    if not m.real_time:
        raise MachineError("induced automaton is defined for real-time machines")
    zero = (0,) * m.counters
    return BuchiNFA(
        states=m.states,
        alphabet=m.alphabet,
        initial=m.initial,
        accepting=m.accepting,
        transitions=frozenset(
            (src, letter, dst)
            for src, letter, guard, dst, _ in m.transitions
            if guard == zero and letter is not None
        ),
    )


def _prefix_compatible(u: tuple[str, ...], v: tuple[str, ...]) -> bool:
    n = min(len(u), len(v))
    return u[:n] == v[:n]


def is_deterministic(m: MachineSpec) -> bool:
    """No state admits two distinct simultaneously-enabled transitions."""
    if isinstance(m, BuchiNFA):
        seen = set()
        for src, letter, _ in m.transitions:
            if (src, letter) in seen:
                return False
            seen.add((src, letter))
        return True
    if isinstance(m, KCounterAutomaton):
        by_state: dict[str, list] = {}
        for t in m.transitions:
            by_state.setdefault(t[0], []).append(t)
        for ts in by_state.values():
            for i, (_, a1, g1, _, _) in enumerate(ts):
                for _, a2, g2, _, _ in ts[i + 1 :]:
                    letters_clash = a1 == a2 or a1 is None or a2 is None
                    if letters_clash and g1 == g2:
                        return False
        return True
    if isinstance(m, TwoTapeAutomaton):
        by_state = {}
        for t in m.transitions:
            by_state.setdefault(t[0], []).append(t)
        for ts in by_state.values():
            for i, (_, u1, v1, _) in enumerate(ts):
                for _, u2, v2, _ in ts[i + 1 :]:
                    if _prefix_compatible(u1, u2) and _prefix_compatible(v1, v2):
                        return False
        return True
    raise MachineError(f"determinism test unsupported for machine kind {m.kind!r}")


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def _fmt_letter(letter: str | None) -> str:
    return LAMBDA_TOKEN if letter is None else letter


def _parse_letter(tok: str) -> str | None:
    return None if tok == LAMBDA_TOKEN else tok


def _fmt_quoted(wordt: tuple[str, ...]) -> str:
    joiner = "" if all(len(s) == 1 for s in wordt) else " "
    return '"' + joiner.join(wordt) + '"'


def serialize_machine(m: MachineSpec) -> str:
    """Canonical text for a machine; parse(serialize(m)) equals m."""
    out = [f"kind: {m.kind}"]
    if isinstance(m, KCounterAutomaton):
        out.append(f"counters: {m.counters}")
        out.append(f"realtime: {'true' if m.real_time else 'false'}")
        out.append("alphabet: " + " ".join(m.alphabet))
    elif isinstance(m, BuchiNFA):
        out.append("alphabet: " + " ".join(m.alphabet))
    elif isinstance(m, BuchiPDA):
        out.append("alphabet: " + " ".join(m.alphabet))
        out.append("stack: " + " ".join(m.stack_alphabet))
    elif isinstance(m, TwoTapeAutomaton):
        out.append("alphabet1: " + " ".join(m.alphabet1))
        out.append("alphabet2: " + " ".join(m.alphabet2))
    elif isinstance(m, TuringMachineSpec):
        out.append("input: " + " ".join(m.input_alphabet))
        out.append("tape: " + " ".join(m.tape_alphabet))
        out.append(f"acceptance: {m.acceptance}")
    out.append("states: " + " ".join(m.states))
    out.append(f"initial: {m.initial}")
    out.append("accepting: " + " ".join(sorted(m.accepting)))

    lines = []
    if isinstance(m, BuchiNFA):
        for src, letter, dst in sorted(m.transitions):
            lines.append(f"delta: {src} {letter} -> {dst}")
    elif isinstance(m, KCounterAutomaton):
        def key(t):
            src, letter, guard, dst, update = t
            return (src, _fmt_letter(letter), guard, dst, update)

        for src, letter, guard, dst, update in sorted(m.transitions, key=key):
            g = " ".join(str(x) for x in guard)
            d = " ".join(str(x) for x in update)
            lines.append(f"delta: {src} {_fmt_letter(letter)} [{g}] -> {dst} [{d}]")
    elif isinstance(m, BuchiPDA):
        def key(t):
            src, letter, top, dst, push = t
            return (src, _fmt_letter(letter), top, dst, push)

        for src, letter, top, dst, push in sorted(m.transitions, key=key):
            suffix = (" " + " ".join(push)) if push else ""
            lines.append(f"delta: {src} {_fmt_letter(letter)} {top} -> {dst}{suffix}")
    elif isinstance(m, TwoTapeAutomaton):
        for src, u, v, dst in sorted(m.transitions):
            lines.append(f"delta: {src} {_fmt_quoted(u)} {_fmt_quoted(v)} -> {dst}")
    elif isinstance(m, TuringMachineSpec):
        for src, read, dst, write, move in sorted(m.transitions):
            lines.append(f"delta: {src} {read} -> {dst} {write} {move}")
    return "\n".join(out + lines) + "\n"


class _Lines:
    def __init__(self, text: str):
        self.fields: dict[str, tuple[str, int]] = {}
        self.deltas: list[tuple[str, int]] = []
        for no, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise MachineSyntaxError("expected `key: value`", no)
            key, value = line.split(":", 1)
            key, value = key.strip(), value.strip()
            if key == "delta":
                self.deltas.append((value, no))
            elif key in self.fields:
                raise MachineSyntaxError(f"duplicate field {key!r}", no)
            else:
                self.fields[key] = (value, no)

    def need(self, key: str):
        if key not in self.fields:
            raise MachineSyntaxError(f"missing field {key!r}")
        return self.fields[key][0]

    def tokens(self, key: str) -> tuple[str, ...]:
        return tuple(self.need(key).split())


def _split_arrow(value: str, line: int) -> tuple[list[str], list[str]]:
    if "->" not in value:
        raise MachineSyntaxError("transition needs `->`", line)
    lhs, rhs = value.split("->", 1)
    return lhs.split(), rhs.split()


_GUARD_WORDS = {"0": 0, "1": 1, "zero": 0, "nonzero": 1}
_UPDATE_WORDS = {"-1": -1, "0": 0, "1": 1, "+1": 1}


def _parse_bracket_vec(toks: list[str], table, what: str, line: int) -> tuple[int, ...]:
    if not toks or not toks[0].startswith("[") or not toks[-1].endswith("]"):
        raise MachineSyntaxError(f"expected bracketed {what} vector", line)
    inner = " ".join(toks)[1:-1].split()
    out = []
    for t in inner:
        if t not in table:
            raise MachineSyntaxError(f"bad {what} entry {t!r}", line)
        out.append(table[t])
    return tuple(out)


def _take_bracket_group(toks: list[str], line: int) -> tuple[list[str], list[str]]:
    if not toks or not toks[0].startswith("["):
        raise MachineSyntaxError("expected `[`", line)
    for i, t in enumerate(toks):
        if t.endswith("]"):
            return toks[: i + 1], toks[i + 1 :]
    raise MachineSyntaxError("unclosed `[`", line)


def _parse_quoted_pair(value: str, line: int) -> tuple[str, tuple[str, ...], tuple[str, ...], str]:
    # two-tape transition: src "u" "v" -> dst
    lhs, rhs = value.split("->", 1) if "->" in value else (None, None)
    if lhs is None:
        raise MachineSyntaxError("transition needs `->`", line)
    dst = rhs.split()
    if len(dst) != 1:
        raise MachineSyntaxError("two-tape transition needs one target state", line)
    lhs = lhs.strip()
    parts = lhs.split(None, 1)
    if len(parts) != 2:
        raise MachineSyntaxError("two-tape transition needs `src \"u\" \"v\"`", line)
    src, quoted = parts
    segs = []
    rest = quoted.strip()
    for _ in range(2):
        if not rest.startswith('"'):
            raise MachineSyntaxError("expected quoted tape word", line)
        end = rest.find('"', 1)
        if end < 0:
            raise MachineSyntaxError("unterminated quote", line)
        segs.append(rest[1:end])
        rest = rest[end + 1 :].strip()
    if rest:
        raise MachineSyntaxError(f"unexpected trailing tokens {rest!r}", line)

    def toks(part: str) -> tuple[str, ...]:
        if not part:
            return ()
        if any(ch.isspace() for ch in part):
            return tuple(part.split())
        return tuple(part)

    return src, toks(segs[0]), toks(segs[1]), dst[0]


def parse_machine(text: str) -> MachineSpec:
    """Parse the line-based machine format (UTF-8, `#` comments)."""
    lines = _Lines(text)
    kind = lines.need("kind")
    try:
        if kind == "buchi-nfa":
            return _parse_nfa(lines)
        if kind == "buchi-counter":
            return _parse_counter(lines)
        if kind == "buchi-pda":
            return _parse_pda(lines)
        if kind == "two-tape":
            return _parse_two_tape(lines)
        if kind == "turing":
            return _parse_turing(lines)
    except WordError as exc:
        raise MachineSemanticsError(str(exc)) from exc
    raise MachineSyntaxError(f"unknown machine kind {kind!r}", lines.fields["kind"][1])


def _common(lines: _Lines):
    states = lines.tokens("states")
    initial = lines.need("initial")
    accepting = frozenset(lines.tokens("accepting"))
    return states, initial, accepting


def _parse_nfa(lines: _Lines) -> BuchiNFA:
    alphabet = Alphabet(lines.tokens("alphabet"))
    states, initial, accepting = _common(lines)
    transitions = set()
    for value, no in lines.deltas:
        lhs, rhs = _split_arrow(value, no)
        if len(lhs) != 2 or len(rhs) != 1:
            raise MachineSyntaxError("nfa transition is `src letter -> dst`", no)
        transitions.add((lhs[0], lhs[1], rhs[0]))
    return BuchiNFA(states, alphabet, initial, accepting, frozenset(transitions))


def _parse_counter(lines: _Lines) -> KCounterAutomaton:
    alphabet = Alphabet(lines.tokens("alphabet"))
    states, initial, accepting = _common(lines)
    try:
        counters = int(lines.need("counters"))
    except ValueError as exc:
        raise MachineSyntaxError("counters must be an integer") from exc
    realtime_raw = lines.need("realtime").lower()
    if realtime_raw not in ("true", "false"):
        raise MachineSyntaxError("realtime must be true or false")
    transitions = set()
    for value, no in lines.deltas:
        lhs, rhs = _split_arrow(value, no)
        if len(lhs) < 3:
            raise MachineSyntaxError("counter transition is `src letter [g..] -> dst [d..]`", no)
        src, letter_tok = lhs[0], lhs[1]
        guard_toks, leftover = _take_bracket_group(lhs[2:], no)
        if leftover:
            raise MachineSyntaxError("unexpected tokens before `->`", no)
        guard = _parse_bracket_vec(guard_toks, _GUARD_WORDS, "guard", no)
        if len(rhs) < 2:
            raise MachineSyntaxError("counter transition needs `dst [d..]`", no)
        dst = rhs[0]
        update_toks, leftover = _take_bracket_group(rhs[1:], no)
        if leftover:
            raise MachineSyntaxError("unexpected trailing tokens", no)
        update = _parse_bracket_vec(update_toks, _UPDATE_WORDS, "update", no)
        if len(guard) != counters or len(update) != counters:
            raise MachineSyntaxError(
                f"guard/update arity {len(guard)}/{len(update)} != counters {counters}", no
            )
        for g, d in zip(guard, update):
            if g == 0 and d == -1:
                raise MachineSemanticsError(
                    f"line {no}: a zero-guarded counter may only stay or increment "
                    f"(update must be 0 or +1)"
                )
        transitions.add((src, _parse_letter(letter_tok), guard, dst, update))
    return KCounterAutomaton(
        states,
        alphabet,
        initial,
        accepting,
        counters,
        realtime_raw == "true",
        frozenset(transitions),
    )


def _parse_pda(lines: _Lines) -> BuchiPDA:
    alphabet = Alphabet(lines.tokens("alphabet"))
    stack = lines.tokens("stack")
    states, initial, accepting = _common(lines)
    transitions = set()
    for value, no in lines.deltas:
        lhs, rhs = _split_arrow(value, no)
        if len(lhs) != 3 or len(rhs) < 1:
            raise MachineSyntaxError("pda transition is `src letter top -> dst push..`", no)
        transitions.add((lhs[0], _parse_letter(lhs[1]), lhs[2], rhs[0], tuple(rhs[1:])))
    return BuchiPDA(states, alphabet, stack, initial, accepting, frozenset(transitions))


def _parse_two_tape(lines: _Lines) -> TwoTapeAutomaton:
    alphabet1 = Alphabet(lines.tokens("alphabet1"))
    alphabet2 = Alphabet(lines.tokens("alphabet2"))
    states, initial, accepting = _common(lines)
    transitions = set()
    for value, no in lines.deltas:
        transitions.add(_parse_quoted_pair(value, no))
    return TwoTapeAutomaton(states, alphabet1, alphabet2, initial, accepting, frozenset(transitions))


def _parse_turing(lines: _Lines) -> TuringMachineSpec:
    input_alphabet = Alphabet(lines.tokens("input"))
    tape_alphabet = Alphabet(lines.tokens("tape"))
    acceptance = lines.need("acceptance")
    states, initial, accepting = _common(lines)
    transitions = set()
    for value, no in lines.deltas:
        lhs, rhs = _split_arrow(value, no)
        if len(lhs) != 2 or len(rhs) != 3:
            raise MachineSyntaxError("turing transition is `src read -> dst write move`", no)
        transitions.add((lhs[0], lhs[1], rhs[0], rhs[1], rhs[2]))
    return TuringMachineSpec(
        states, input_alphabet, tape_alphabet, initial, accepting, acceptance, frozenset(transitions)
    )
