"""Alphabets, finite words, lasso words and prefix sources.

Positions are 1-based throughout: the first letter of a word is letter(1).
An ultimately periodic omega-word u.v^omega is stored as a LassoWord with
spoke u and cycle v, normalized so that structural equality coincides with
equality of the denoted omega-words.
"""

from __future__ import annotations

import math
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import islice
from typing import Iterator

DEFAULT_MAX_PREFIX = 10_000_000
MAX_PREFIX_ENV = "OMEGARED_MAX_PREFIX"


class WordError(ValueError):
    pass


class AlphabetMismatch(WordError):
    pass


class PrefixCeilingExceeded(WordError):
    pass


def max_prefix_letters() -> int:
    """Ceiling on materialized prefix length, overridable via the environment."""
    raw = os.environ.get(MAX_PREFIX_ENV)
    if raw is None:
        return DEFAULT_MAX_PREFIX
    try:
        value = int(raw)
    except ValueError as exc:
        raise WordError(f"bad {MAX_PREFIX_ENV} value: {raw!r}") from exc
    if value <= 0:
        raise WordError(f"{MAX_PREFIX_ENV} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise WordError("alphabet must be non-empty")
        seen = set()
        for s in self.symbols:
            if not s or any(ch.isspace() for ch in s) or ";" in s or "#" in s:
                raise WordError(f"bad symbol name {s!r}")
            if s in seen:
                raise WordError(f"duplicate symbol {s!r}")
            seen.add(s)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.symbols

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def extend(self, *extra: str) -> "Alphabet":
        """Alphabet with `extra` symbols appended (duplicates rejected)."""
        return Alphabet(self.symbols + tuple(extra))

    def restrict_check(self, symbols) -> None:
        for s in symbols:
            if s not in self:
                raise AlphabetMismatch(f"symbol {s!r} not in alphabet {self.symbols}")


# The designated alphabets used by the reduction pipeline.
SIGMA = Alphabet(("a", "b"))
GAMMA = SIGMA.extend("E")
OMEGA = GAMMA.extend("A", "B", "F", "0")
OMEGA_PRIME = OMEGA.extend("C")


@dataclass(frozen=True)
class FiniteWord:
    symbols: tuple[str, ...]
    alphabet: Alphabet

    def __post_init__(self) -> None:
        self.alphabet.restrict_check(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def letter(self, n: int) -> str:
        """1-based letter access."""
        if not 1 <= n <= len(self.symbols):
            raise WordError(f"position {n} out of range 1..{len(self.symbols)}")
        return self.symbols[n - 1]

    def concat(self, other: "FiniteWord") -> "FiniteWord":
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch("concat of words over different alphabets")
        return FiniteWord(self.symbols + other.symbols, self.alphabet)

    def is_prefix_of(self, other: "FiniteWord") -> bool:
        return self.symbols == other.symbols[: len(self.symbols)]


def word(text_symbols, alphabet: Alphabet) -> FiniteWord:
    return FiniteWord(tuple(text_symbols), alphabet)


class PrefixSource(ABC):
    """Deterministic producer of the letters of a fixed omega-word.

    letter(n) is 1-based random access; prefix(n) materializes the first n
    letters and is bounded by max_prefix_letters(). Implementations must be
    prefix-consistent, which holds by construction since both views derive
    from the same letter function or stream.
    """

    @property
    @abstractmethod
    def alphabet(self) -> Alphabet: ...

    @abstractmethod
    def letter(self, n: int) -> str: ...

    def letters(self) -> Iterator[str]:
        n = 1
        while True:
            yield self.letter(n)
            n += 1

    def prefix(self, n: int) -> FiniteWord:
        if n < 0:
            raise WordError(f"prefix length must be >= 0, got {n}")
        ceiling = max_prefix_letters()
        if n > ceiling:
            raise PrefixCeilingExceeded(
                f"prefix request of {n} letters exceeds ceiling {ceiling}"
            )
        return FiniteWord(tuple(islice(self.letters(), n)), self.alphabet)


def _primitive_root(cycle: tuple[str, ...]) -> tuple[str, ...]:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            return cycle[:d]
    return cycle


@dataclass(frozen=True)
class LassoWord(PrefixSource):
    """The omega-word spoke . cycle^omega, canonically normalized.

    Normalization reduces the cycle to its primitive root and rolls cycle
    letters out of the spoke (u.a and cycle v.a become u with cycle a.v), so
    two LassoWords denote the same omega-word iff they are equal.
    """

    spoke: tuple[str, ...]
    cycle: tuple[str, ...]
    _alphabet: Alphabet

    def __post_init__(self) -> None:
        if not self.cycle:
            raise WordError("lasso cycle must be non-empty")
        self._alphabet.restrict_check(self.spoke)
        self._alphabet.restrict_check(self.cycle)
        cycle = _primitive_root(self.cycle)
        spoke = self.spoke
        while spoke and spoke[-1] == cycle[-1]:
            spoke = spoke[:-1]
            cycle = (cycle[-1],) + cycle[:-1]
        object.__setattr__(self, "spoke", spoke)
        object.__setattr__(self, "cycle", cycle)

    @property
    def alphabet(self) -> Alphabet:
        return self._alphabet

    def letter(self, n: int) -> str:
        if n < 1:
            raise WordError(f"position must be >= 1, got {n}")
        if n <= len(self.spoke):
            return self.spoke[n - 1]
        return self.cycle[(n - len(self.spoke) - 1) % len(self.cycle)]

    # Phase view used by the decision procedures: phase p in [0, h+c) means
    # the next letter to read is letter(p+1) with p collapsed to the cycle.
    @property
    def num_phases(self) -> int:
        return len(self.spoke) + len(self.cycle)

    def phase_letter(self, p: int) -> str:
        h = len(self.spoke)
        return self.spoke[p] if p < h else self.cycle[p - h]

    def phase_next(self, p: int) -> int:
        n = self.num_phases
        return p + 1 if p + 1 < n else len(self.spoke)

    def __str__(self) -> str:
        return format_lasso(self)


def lasso(spoke, cycle, alphabet: Alphabet) -> LassoWord:
    return LassoWord(tuple(spoke), tuple(cycle), alphabet)


def lasso_letter(w: LassoWord, n: int) -> str:
    return w.letter(n)


def parse_lasso(text: str, alphabet: Alphabet) -> LassoWord:
    """Parse the `u;v` lasso syntax.

    Each side is a symbol sequence; sides containing whitespace are split on
    it (multi-character symbols), otherwise every character is one symbol.
    `;a` denotes a^omega and `a b;c` denotes ab.c^omega.
    """
    if text.count(";") != 1:
        raise WordError(f"lasso text needs exactly one ';': {text!r}")
    spoke_text, cycle_text = text.split(";")

    def toks(part: str) -> tuple[str, ...]:
        part = part.strip()
        if not part:
            return ()
        if any(ch.isspace() for ch in part):
            return tuple(part.split())
        return tuple(part)

    cycle = toks(cycle_text)
    if not cycle:
        raise WordError(f"lasso cycle must be non-empty: {text!r}")
    return LassoWord(toks(spoke_text), cycle, alphabet)


def format_lasso(w: LassoWord) -> str:
    joiner = "" if all(len(s) == 1 for s in w.spoke + w.cycle) else " "
    return joiner.join(w.spoke) + ";" + joiner.join(w.cycle)


@dataclass(frozen=True)
class ConcatSource(PrefixSource):
    head: FiniteWord
    tail: PrefixSource

    def __post_init__(self) -> None:
        if self.head.alphabet != self.tail.alphabet:
            raise AlphabetMismatch("concat of word and source over different alphabets")

    @property
    def alphabet(self) -> Alphabet:
        return self.head.alphabet

    def letter(self, n: int) -> str:
        if n < 1:
            raise WordError(f"position must be >= 1, got {n}")
        if n <= len(self.head):
            return self.head.symbols[n - 1]
        return self.tail.letter(n - len(self.head))


def concat(u: FiniteWord, w: PrefixSource) -> PrefixSource:
    """u . w: letters of u, then the letters of w.

    When w is a lasso the result is again a lasso with u prepended to the
    spoke; otherwise a generic prefix source is returned.
    """
    if isinstance(w, LassoWord):
        if u.alphabet != w.alphabet:
            raise AlphabetMismatch("concat of word and lasso over different alphabets")
        return LassoWord(u.symbols + w.spoke, w.cycle, w.alphabet)
    return ConcatSource(u, w)


@dataclass(frozen=True)
class InterleaveSource(PrefixSource):
    left: PrefixSource
    right: PrefixSource

    def __post_init__(self) -> None:
        if self.left.alphabet != self.right.alphabet:
            raise AlphabetMismatch("interleave over different alphabets")

    @property
    def alphabet(self) -> Alphabet:
        return self.left.alphabet

    def letter(self, n: int) -> str:
        if n < 1:
            raise WordError(f"position must be >= 1, got {n}")
        q, r = divmod(n, 2)
        return self.left.letter(q + 1) if r else self.right.letter(q)


def interleave(x: PrefixSource, y: PrefixSource) -> PrefixSource:
    """The shuffle z with z(2n-1) = x(n) and z(2n) = y(n).

    Lasso inputs yield a lasso output: the spoke covers both spokes and the
    cycle is the doubled lcm of the input cycles, then normalized.
    """
    if x.alphabet != y.alphabet:
        raise AlphabetMismatch("interleave over different alphabets")
    if isinstance(x, LassoWord) and isinstance(y, LassoWord):
        h = max(len(x.spoke), len(y.spoke))
        c = math.lcm(len(x.cycle), len(y.cycle))
        src = InterleaveSource(x, y)
        spoke = tuple(src.letter(i) for i in range(1, 2 * h + 1))
        cycle = tuple(src.letter(i) for i in range(2 * h + 1, 2 * h + 2 * c + 1))
        return LassoWord(spoke, cycle, x.alphabet)
    return InterleaveSource(x, y)


def cantor_pair(i: int, j: int) -> int:
    """The pairing bijection b(i, j) = (i+j-1)(i+j-2)/2 + j on positive integers."""
    if i < 1 or j < 1:
        raise WordError(f"pairing arguments must be >= 1, got ({i}, {j})")
    return (i + j - 1) * (i + j - 2) // 2 + j


def row_decompose(sigma: PrefixSource, i: int, count: int) -> FiniteWord:
    """Row i of sigma seen as a family: letters sigma(b(i, 1)) .. sigma(b(i, count))."""
    if i < 1:
        raise WordError(f"row index must be >= 1, got {i}")
    if count < 0:
        raise WordError(f"count must be >= 0, got {count}")
    return FiniteWord(
        tuple(sigma.letter(cantor_pair(i, j)) for j in range(1, count + 1)),
        sigma.alphabet,
    )
