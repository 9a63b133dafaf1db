"""The coding functions theta, hk, phik, h and the fixed word alpha.

Each coding is exposed both as a streaming prefix source and as exact
big-integer block arithmetic (letter-at-position). Block exponents grow as
S^n or K^n, so positions are handled as exact ints and prefix requests are
bounded by the configurable ceiling in omegared.words.

The is_*_image_prefix scanners are hand-written pattern matchers intended as
independent oracles for the complement-pattern automata; they never consult
the constructed machines.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Iterator

from .words import (
    Alphabet,
    FiniteWord,
    LassoWord,
    PrefixSource,
    WordError,
)

# Defaults used by the reduction pipeline on the two-letter input alphabet:
# the padding base (3*(|Sigma|+2))^3 and the product of the first 8 primes.
THETA_S_PAPER = 1728
HK_K_PAPER = 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19  # 9699690


def theta_s_default(input_alphabet: Alphabet) -> int:
    k = len(input_alphabet) + 2
    return (3 * k) ** 3


@dataclass(frozen=True)
class ThetaParams:
    base: int  # S
    input_alphabet: Alphabet
    pad: str = "E"

    def __post_init__(self) -> None:
        if self.base < 1:
            raise WordError(f"theta base must be >= 1, got {self.base}")
        if self.pad in self.input_alphabet:
            raise WordError(f"pad {self.pad!r} must not be an input symbol")

    @property
    def output_alphabet(self) -> Alphabet:
        return self.input_alphabet.extend(self.pad)


@dataclass(frozen=True)
class HKParams:
    base: int  # K
    input_alphabet: Alphabet
    marker_a: str = "A"
    marker_b: str = "B"
    zero: str = "0"

    def __post_init__(self) -> None:
        if self.base < 2:
            raise WordError(f"hk base must be >= 2, got {self.base}")
        extra = (self.marker_a, self.marker_b, self.zero)
        if len(set(extra)) != 3:
            raise WordError("hk marker letters must be distinct")
        for s in extra:
            if s in self.input_alphabet:
                raise WordError(f"marker {s!r} must not be an input symbol")

    @property
    def output_alphabet(self) -> Alphabet:
        return self.input_alphabet.extend(self.marker_a, self.marker_b, self.zero)


@dataclass(frozen=True)
class PhiKParams:
    base: int  # K
    input_alphabet: Alphabet
    pad: str = "F"

    def __post_init__(self) -> None:
        if self.base < 2:
            raise WordError(f"phik base must be >= 2, got {self.base}")
        if self.pad in self.input_alphabet:
            raise WordError(f"pad {self.pad!r} must not be an input symbol")

    @property
    def output_alphabet(self) -> Alphabet:
        return self.input_alphabet.extend(self.pad)


@dataclass(frozen=True)
class ThetaSource(PrefixSource):
    """x(1) E^S x(2) E^{S^2} x(3) E^{S^3} ..."""

    params: ThetaParams
    inner: PrefixSource

    def __post_init__(self) -> None:
        if self.inner.alphabet != self.params.input_alphabet:
            raise WordError("theta input alphabet mismatch")

    @property
    def alphabet(self) -> Alphabet:
        return self.params.output_alphabet

    def letters(self) -> Iterator[str]:
        s = self.params.base
        for n in count(1):
            yield self.inner.letter(n)
            block = s**n
            for _ in range(block):
                yield self.params.pad

    def letter(self, n: int) -> str:
        if n < 1:
            raise WordError(f"position must be >= 1, got {n}")
        s = self.params.base
        end = 0  # end of segment m: m + s + s^2 + ... + s^m
        for m in count(1):
            start = end + 1
            end += 1 + s**m
            if n <= end:
                return self.inner.letter(m) if n == start else self.params.pad
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class HKSource(PrefixSource):
    """A 0^K x(1) B 0^{K^2} A 0^{K^2} x(2) B 0^{K^3} A 0^{K^3} x(3) B ..."""

    params: HKParams
    inner: PrefixSource

    def __post_init__(self) -> None:
        if self.inner.alphabet != self.params.input_alphabet:
            raise WordError("hk input alphabet mismatch")

    @property
    def alphabet(self) -> Alphabet:
        return self.params.output_alphabet

    def letters(self) -> Iterator[str]:
        p = self.params
        k = p.base
        for n in count(1):
            yield p.marker_a
            for _ in range(k**n):
                yield p.zero
            yield self.inner.letter(n)
            yield p.marker_b
            for _ in range(k ** (n + 1)):
                yield p.zero

    def letter(self, n: int) -> str:
        if n < 1:
            raise WordError(f"position must be >= 1, got {n}")
        p = self.params
        k = p.base
        end = 0  # segment m: A 0^{k^m} x(m) B 0^{k^{m+1}}
        for m in count(1):
            start = end + 1
            seg = 3 + k**m + k ** (m + 1)
            end += seg
            if n <= end:
                off = n - start  # 0-based offset in segment
                if off == 0:
                    return p.marker_a
                if off <= k**m:
                    return p.zero
                if off == k**m + 1:
                    return self.inner.letter(m)
                if off == k**m + 2:
                    return p.marker_b
                return p.zero
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class PhiKSource(PrefixSource):
    """F^{K-1} x(1) F^{K-1} x(2) ... : content letters sit at multiples of K."""

    params: PhiKParams
    inner: PrefixSource

    def __post_init__(self) -> None:
        if self.inner.alphabet != self.params.input_alphabet:
            raise WordError("phik input alphabet mismatch")

    @property
    def alphabet(self) -> Alphabet:
        return self.params.output_alphabet

    def letter(self, n: int) -> str:
        if n < 1:
            raise WordError(f"position must be >= 1, got {n}")
        q, r = divmod(n, self.params.base)
        return self.inner.letter(q) if r == 0 else self.params.pad


@dataclass(frozen=True)
class HSource(PrefixSource):
    """C 0 x(1) C 0^2 x(2) C 0^3 x(3) ..."""

    inner: PrefixSource
    marker: str = "C"
    zero: str = "0"

    def __post_init__(self) -> None:
        if self.marker in self.inner.alphabet:
            raise WordError(f"marker {self.marker!r} must not be an input symbol")
        if self.zero not in self.inner.alphabet:
            raise WordError(f"zero letter {self.zero!r} must be an input symbol")

    @property
    def alphabet(self) -> Alphabet:
        return self.inner.alphabet.extend(self.marker)

    def letter(self, n: int) -> str:
        if n < 1:
            raise WordError(f"position must be >= 1, got {n}")
        end = 0  # segment m: C 0^m x(m), length m + 2
        for m in count(1):
            start = end + 1
            end += m + 2
            if n <= end:
                off = n - start
                if off == 0:
                    return self.marker
                if off <= m:
                    return self.zero
                return self.inner.letter(m)
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class AlphaSource(PrefixSource):
    """C 0 C 0^2 C 0^3 ..."""

    _alphabet: Alphabet
    marker: str = "C"
    zero: str = "0"

    def __post_init__(self) -> None:
        if self.marker not in self._alphabet or self.zero not in self._alphabet:
            raise WordError("alpha letters must belong to the alphabet")

    @property
    def alphabet(self) -> Alphabet:
        return self._alphabet

    def letter(self, n: int) -> str:
        if n < 1:
            raise WordError(f"position must be >= 1, got {n}")
        end = 0  # segment m: C 0^m, length m + 1
        for m in count(1):
            start = end + 1
            end += m + 1
            if n <= end:
                return self.marker if n == start else self.zero
        raise AssertionError("unreachable")


def theta_source(p: ThetaParams, x: PrefixSource) -> ThetaSource:
    return ThetaSource(p, x)


def theta_prefix(p: ThetaParams, x: PrefixSource, n: int) -> FiniteWord:
    return ThetaSource(p, x).prefix(n)


def hk_source(p: HKParams, x: PrefixSource) -> HKSource:
    return HKSource(p, x)


def hk_prefix(p: HKParams, x: PrefixSource, n: int) -> FiniteWord:
    return HKSource(p, x).prefix(n)


def phik_source(p: PhiKParams, x: PrefixSource) -> PrefixSource:
    """phik image; ultimately periodic inputs stay lassos (period times K)."""
    if isinstance(x, LassoWord):
        src = PhiKSource(p, x)
        k = p.base
        h, c = len(x.spoke), len(x.cycle)
        spoke = tuple(src.letter(i) for i in range(1, k * h + 1))
        cycle = tuple(src.letter(i) for i in range(k * h + 1, k * (h + c) + 1))
        return LassoWord(spoke, cycle, src.alphabet)
    return PhiKSource(p, x)


def phik_prefix(p: PhiKParams, x: PrefixSource, n: int) -> FiniteWord:
    return PhiKSource(p, x).prefix(n)


def h_source(x: PrefixSource, marker: str = "C", zero: str = "0") -> HSource:
    return HSource(x, marker, zero)


def h_prefix(x: PrefixSource, n: int, marker: str = "C", zero: str = "0") -> FiniteWord:
    return HSource(x, marker, zero).prefix(n)


def alpha_source(alphabet: Alphabet, marker: str = "C", zero: str = "0") -> AlphaSource:
    return AlphaSource(alphabet, marker, zero)


def alpha_prefix(n: int, alphabet: Alphabet | None = None) -> FiniteWord:
    from .words import OMEGA_PRIME

    return AlphaSource(alphabet or OMEGA_PRIME).prefix(n)


# ---------------------------------------------------------------------------
# Image-prefix scanners (independent oracles).
#
# Each _scan_* returns the 0-based index of the first letter that cannot be
# extended to an image of the coding, or None when the word is a valid image
# prefix. The scan is a direct transliteration of the block grammar.
# ---------------------------------------------------------------------------


def _scan_theta(p: ThetaParams, symbols: tuple[str, ...]) -> int | None:
    s = p.base
    pos = 0
    n = len(symbols)
    for m in count(1):
        if pos >= n:
            return None
        if symbols[pos] not in p.input_alphabet:
            return pos
        pos += 1
        block = s**m
        run = min(block, n - pos)
        for i in range(run):
            if symbols[pos + i] != p.pad:
                return pos + i
        pos += run
        if run < block:
            return None
    return None


def _scan_hk(p: HKParams, symbols: tuple[str, ...]) -> int | None:
    k = p.base
    pos = 0
    n = len(symbols)

    def expect(sym_ok, length) -> int | None:
        """Consume `length` positions checked by sym_ok; -1 means exhausted."""
        nonlocal pos
        run = min(length, n - pos)
        for i in range(run):
            if not sym_ok(symbols[pos + i]):
                return pos + i
        pos += run
        return -1 if run < length else None

    for m in count(1):
        for ok, length in (
            (lambda c: c == p.marker_a, 1),
            (lambda c: c == p.zero, k**m),
            (lambda c: c in p.input_alphabet, 1),
            (lambda c: c == p.marker_b, 1),
            (lambda c: c == p.zero, k ** (m + 1)),
        ):
            r = expect(ok, length)
            if r == -1:
                return None
            if r is not None:
                return r
    return None


def _scan_phik(p: PhiKParams, symbols: tuple[str, ...]) -> int | None:
    k = p.base
    for i, c in enumerate(symbols, 1):
        if i % k == 0:
            if c not in p.input_alphabet:
                return i - 1
        elif c != p.pad:
            return i - 1
    return None


def _scan_h(
    symbols: tuple[str, ...], inner: Alphabet, marker: str = "C", zero: str = "0"
) -> int | None:
    pos = 0
    n = len(symbols)
    for m in count(1):
        if pos >= n:
            return None
        if symbols[pos] != marker:
            return pos
        pos += 1
        run = min(m, n - pos)
        for i in range(run):
            if symbols[pos + i] != zero:
                return pos + i
        pos += run
        if run < m:
            return None
        if pos >= n:
            return None
        if symbols[pos] not in inner:
            return pos
        pos += 1
    return None


def is_theta_image_prefix(p: ThetaParams, w: FiniteWord) -> bool:
    return _scan_theta(p, w.symbols) is None


def is_hk_image_prefix(p: HKParams, w: FiniteWord) -> bool:
    return _scan_hk(p, w.symbols) is None


def is_phik_image_prefix(p: PhiKParams, w: FiniteWord) -> bool:
    return _scan_phik(p, w.symbols) is None


def is_h_image_prefix(w: FiniteWord, inner: Alphabet, marker: str = "C", zero: str = "0") -> bool:
    return _scan_h(w.symbols, inner, marker, zero) is None


def is_image_prefix(kind: str, w: FiniteWord, *, params=None, inner: Alphabet | None = None) -> bool:
    """Dispatcher over the coding kinds: theta, hk, phik, h."""
    if kind == "theta":
        return is_theta_image_prefix(params, w)
    if kind == "hk":
        return is_hk_image_prefix(params, w)
    if kind == "phik":
        return is_phik_image_prefix(params, w)
    if kind == "h":
        return is_h_image_prefix(w, inner)
    raise WordError(f"unknown coding kind {kind!r}")


def first_image_rejection(kind: str, w: LassoWord, bound: int, *, params=None, inner: Alphabet | None = None) -> int | None:
    """Least n <= bound with prefix(n) not an image prefix, or None.

    Uses the scanner's first-violation index: prefix(n) is rejected exactly
    when the violation index is < n.
    """
    symbols = w.prefix(bound).symbols
    if kind == "theta":
        idx = _scan_theta(params, symbols)
    elif kind == "hk":
        idx = _scan_hk(params, symbols)
    elif kind == "phik":
        idx = _scan_phik(params, symbols)
    elif kind == "h":
        idx = _scan_h(symbols, inner)
    else:
        raise WordError(f"unknown coding kind {kind!r}")
    return None if idx is None else idx + 1
