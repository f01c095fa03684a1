"""Reduced words in free groups.

A word is stored as a tuple of syllables ``(generator, exponent)`` with
positive generator indices and nonzero exponents, adjacent syllables on
distinct generators.  The empty tuple is the identity ``e``.

Text syntax: ``e`` for the identity, otherwise syllables ``x<k>^<m>`` joined
by ``.`` (``^1`` may be omitted), e.g. ``x1.x2^-1.x1^3``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

DEFAULT_CAP = 10**6
INT64_MAX = 2**63 - 1

Syllable = tuple[int, int]


class WordSyntaxError(ValueError):
    """Malformed or unreduced word text; ``column`` is 1-based."""

    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} (column {column} in {text!r})")
        self.text = text
        self.column = column


class ResourceCapError(RuntimeError):
    pass


def _merge(out: list[list[int]], gen: int, exp: int) -> None:
    if out and out[-1][0] == gen:
        out[-1][1] += exp
        if out[-1][1] == 0:
            out.pop()
    elif exp:
        out.append([gen, exp])


@dataclass(frozen=True, order=False)
class ReducedWord:
    syllables: tuple[Syllable, ...] = ()

    def __post_init__(self):
        prev = None
        for gen, exp in self.syllables:
            if not isinstance(gen, int) or gen < 1:
                raise ValueError(f"generator index must be a positive integer, got {gen!r}")
            if exp == 0:
                raise ValueError("zero exponent in syllable")
            if gen == prev:
                raise ValueError(f"adjacent syllables on generator x{gen}: word is not reduced")
            prev = gen

    # -- construction -------------------------------------------------
    @classmethod
    def from_syllables(cls, syllables: Iterable[Sequence[int]]) -> "ReducedWord":
        """Build a word from arbitrary syllables, reducing freely."""
        out: list[list[int]] = []
        for gen, exp in syllables:
            _merge(out, int(gen), int(exp))
        return cls(tuple((g, e) for g, e in out))

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "ReducedWord":
        """Build from signed letters: ``k`` is x_k, ``-k`` is x_k^{-1}."""
        return cls.from_syllables((abs(a), 1 if a > 0 else -1) for a in letters)

    @classmethod
    def generator(cls, k: int, exp: int = 1) -> "ReducedWord":
        return cls(((k, exp),)) if exp else cls()

    @classmethod
    def parse(cls, text: str, auto_reduce: bool = False) -> "ReducedWord":
        return parse_word(text, auto_reduce=auto_reduce)

    # -- group operations ---------------------------------------------
    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return reduce_concat(self, other)

    def __pow__(self, n: int) -> "ReducedWord":
        base = self if n >= 0 else self.inverse()
        result = IDENTITY
        for _ in range(abs(n)):
            result = result * base
        return result

    def inverse(self) -> "ReducedWord":
        return ReducedWord(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    @property
    def length(self) -> int:
        return len(self)

    def is_identity(self) -> bool:
        return not self.syllables

    def letters(self) -> tuple[int, ...]:
        out = []
        for g, e in self.syllables:
            out.extend([g if e > 0 else -g] * abs(e))
        return tuple(out)

    def max_generator(self) -> int:
        return max((g for g, _ in self.syllables), default=0)

    def cyclic_length(self) -> int:
        """Length of the cyclic reduction (conjugacy-minimal representative)."""
        letters = list(self.letters())
        i, j = 0, len(letters) - 1
        while i < j and letters[i] == -letters[j]:
            i += 1
            j -= 1
        return max(j - i + 1, 0)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"ReducedWord({format_word(self)!r})"


IDENTITY = ReducedWord()


def reduce_concat(w1: ReducedWord, w2: ReducedWord) -> ReducedWord:
    """Fully reduced product ``w1 * w2``."""
    a = list(w1.syllables)
    b = list(w2.syllables)
    i = 0
    while a and i < len(b) and a[-1][0] == b[i][0]:
        gen, e = a.pop()
        e += b[i][1]
        i += 1
        if e:
            a.append((gen, e))
            break
    return ReducedWord(tuple(a) + tuple(b[i:]))


def inverse(w: ReducedWord) -> ReducedWord:
    return w.inverse()


def word_length(w: ReducedWord) -> int:
    return len(w)


# -- text form ----------------------------------------------------------
_SYLLABLE = re.compile(r"x(\d+)(?:\^(-?\d+))?")


def format_word(w: ReducedWord) -> str:
    if not w.syllables:
        return "e"
    return ".".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in w.syllables)


def parse_word(text: str, auto_reduce: bool = False) -> ReducedWord:
    """Parse the dotted syllable syntax.

    Unreduced input (zero exponents, repeated adjacent generators) is
    rejected unless ``auto_reduce`` is set, in which case it is reduced.
    """
    s = text.strip()
    if s == "e":
        return IDENTITY
    if not s:
        raise WordSyntaxError("empty word", text, 1)
    offset = len(text) - len(text.lstrip())
    raw: list[Syllable] = []
    pos = 0
    for part in s.split("."):
        m = _SYLLABLE.fullmatch(part)
        if m is None:
            raise WordSyntaxError(f"bad syllable {part!r}", text, offset + pos + 1)
        gen = int(m.group(1))
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if gen < 1:
            raise WordSyntaxError("generator index must be >= 1", text, offset + pos + 1)
        if not auto_reduce:
            if exp == 0:
                raise WordSyntaxError("zero exponent", text, offset + pos + 1)
            if raw and raw[-1][0] == gen:
                raise WordSyntaxError(f"unreduced: repeated generator x{gen}", text, offset + pos + 1)
        raw.append((gen, exp))
        pos += len(part) + 1
    return ReducedWord.from_syllables(raw)


# -- enumeration and counting --------------------------------------------
def count_words(k: int, n: int, max_value: Optional[int] = INT64_MAX) -> int:
    """Number of reduced words of length ``n`` in F_k: 2k(2k-1)^(n-1), and 1 for n=0."""
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    value = 1 if n == 0 else 2 * k * (2 * k - 1) ** (n - 1)
    if max_value is not None and value > max_value:
        raise OverflowError(f"count_words({k}, {n}) exceeds {max_value}")
    return value


def _letter_order(k: int) -> list[int]:
    # x1 < x1^-1 < x2 < x2^-1 < ...
    out = []
    for g in range(1, k + 1):
        out.extend([g, -g])
    return out


def iter_words(k: int, n: int) -> Iterator[ReducedWord]:
    """Reduced words of length exactly ``n`` over x_1..x_k, in lexicographic
    letter order (generator ascending, positive before negative)."""
    order = _letter_order(k)

    def rec(prefix: list[int], remaining: int):
        if remaining == 0:
            yield ReducedWord.from_letters(prefix)
            return
        last = prefix[-1] if prefix else 0
        for a in order:
            if a == -last:
                continue
            prefix.append(a)
            yield from rec(prefix, remaining - 1)
            prefix.pop()

    yield from rec([], n)


def enumerate_words(k: int, n: int, cap: int = DEFAULT_CAP) -> list[ReducedWord]:
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    total = count_words(k, n, max_value=None)
    if total > cap:
        raise ResourceCapError(f"{total} words of length {n} in F_{k} exceed cap {cap}")
    return list(iter_words(k, n))


@lru_cache(maxsize=64)
def ball(k: int, radius: int, cap: int = DEFAULT_CAP) -> tuple[ReducedWord, ...]:
    """All reduced words of length <= radius, ordered by length then lexicographically."""
    total = sum(count_words(k, n, max_value=None) for n in range(radius + 1))
    if total > cap:
        raise ResourceCapError(f"{total} words in the radius-{radius} ball of F_{k} exceed cap {cap}")
    out: list[ReducedWord] = []
    for n in range(radius + 1):
        out.extend(iter_words(k, n))
    return tuple(out)


# -- coset obstruction scan ------------------------------------------------
@dataclass(frozen=True)
class GeneratorSet:
    indices: tuple[int, ...]
    symmetric: bool = True

    def __post_init__(self):
        if not self.indices:
            raise ValueError("generator set must be nonempty")
        if any(i < 1 for i in self.indices):
            raise ValueError("generator indices must be positive")
        object.__setattr__(self, "indices", tuple(sorted(set(self.indices))))

    @classmethod
    def first(cls, n: int, symmetric: bool = True) -> "GeneratorSet":
        return cls(tuple(range(1, n + 1)), symmetric)

    def contains(self, w: ReducedWord) -> bool:
        if len(w.syllables) != 1:
            return False
        gen, exp = w.syllables[0]
        if gen not in self.indices:
            return False
        return exp == 1 or (self.symmetric and exp == -1)


@dataclass(frozen=True)
class ScanResult:
    max_hits: int
    witness: Optional[tuple[ReducedWord, ReducedWord]]
    pairs_scanned: int


def cyclic_coset_scan(
    S: GeneratorSet,
    L: int,
    N: int,
    cap: int = DEFAULT_CAP,
    extra_generators: int = 1,
) -> ScanResult:
    """Largest number of exponents n in [1..N] with g*w^n in S u S^-1.

    Words g (|g| <= L) and w (1 <= |w| <= L) range over the generators of S
    plus ``extra_generators`` fresh ones.  A small maximum certifies that no
    cyclic coset g<w> is almost contained in the generator set on this window.
    """
    if L < 1 or N < 1:
        raise ValueError("need L >= 1 and N >= 1")
    target = S if S.symmetric else GeneratorSet(S.indices, True)
    k = max(S.indices) + extra_generators
    words = ball(k, L, cap)
    gs = words
    ws = words[1:]
    work = len(gs) * len(ws) * N
    if work > cap:
        raise ResourceCapError(f"scan of {work} products exceeds cap {cap}")
    best, witness = 0, None
    for w in ws:
        c = w.cyclic_length()
        for g in gs:
            lg = len(g)
            hits = 0
            p = g
            for n in range(1, N + 1):
                # |g w^n| >= n*c - |g|; once above 1 no later power can hit
                if n * c - lg > 1:
                    break
                p = p * w
                if len(p) == 1 and target.contains(p):
                    hits += 1
            if hits > best:
                best, witness = hits, (g, w)
    return ScanResult(best, witness, len(gs) * len(ws))
