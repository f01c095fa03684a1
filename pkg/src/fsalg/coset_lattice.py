"""Cosets of sublattices of Z^d and sets in their coset ring.

A set U is given by integer cosets A_l, B_k with chi_U = sum chi_{A_l} - sum chi_{B_k}.
:func:`extract_almost_coset` finds a coset of a rank >= 1 lattice that U
contains up to finitely many points.

Lattices are kept in row-style Hermite normal form computed with exact
Python integers.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

Vector = tuple[int, ...]


class InvalidExpressionError(ValueError):
    pass


class NoInfiniteCosetError(ValueError):
    pass


class CosetFileError(ValueError):
    pass


# -- Hermite normal form -------------------------------------------------
def _echelon(rows: Sequence[Sequence[int]], d: int, track: bool = False):
    """Row-reduce integer rows over Z on the first ``d`` columns.

    Returns (hnf, transforms, kernel): the nonzero HNF rows, for each of them
    the coefficient vector producing it from the input rows, and a basis of
    the integer relations among the input rows (only when ``track``).
    """
    m = len(rows)
    A = [list(map(int, r)) + ([int(i == j) for j in range(m)] if track else []) for i, r in enumerate(rows)]
    r = 0
    for col in range(d):
        while True:
            live = [i for i in range(r, m) if A[i][col]]
            if not live:
                break
            p = min(live, key=lambda i: abs(A[i][col]))
            A[r], A[p] = A[p], A[r]
            done = True
            for i in range(r + 1, m):
                if A[i][col]:
                    q = A[i][col] // A[r][col]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    if A[i][col]:
                        done = False
            if done:
                break
        if r < m and A[r][col]:
            if A[r][col] < 0:
                A[r] = [-x for x in A[r]]
            piv = A[r][col]
            for i in range(r):
                q = A[i][col] // piv
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
            r += 1
    hnf = [tuple(row[:d]) for row in A[:r]]
    if not track:
        return hnf, None, None
    return hnf, [row[d:] for row in A[:r]], [row[d:] for row in A[r:]]


def hnf(rows: Iterable[Sequence[int]], d: int) -> tuple[Vector, ...]:
    rows = [tuple(int(x) for x in r) for r in rows]
    if any(len(r) != d for r in rows):
        raise ValueError(f"all rows must have length {d}")
    return tuple(_echelon(rows, d)[0])


def _pivot(row: Vector) -> int:
    return next(i for i, x in enumerate(row) if x)


def _reduce(v: Sequence[int], basis: Sequence[Vector]) -> tuple[list[int], list[int]]:
    """Reduce v modulo the HNF rows: pivot entries land in [0, pivot)."""
    v = list(v)
    coeffs = []
    for row in basis:
        c = _pivot(row)
        q = v[c] // row[c]
        coeffs.append(q)
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return v, coeffs


@dataclass(frozen=True)
class Lattice:
    dim: int
    basis: tuple[Vector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", hnf(self.basis, self.dim))

    @classmethod
    def full(cls, d: int) -> "Lattice":
        return cls(d, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @classmethod
    def zero(cls, d: int) -> "Lattice":
        return cls(d, ())

    @classmethod
    def diagonal(cls, *moduli: int) -> "Lattice":
        d = len(moduli)
        return cls(d, tuple(tuple(m if i == j else 0 for j in range(d)) for i, m in enumerate(moduli) if m))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self) -> float:
        """[Z^d : L], infinite below full rank."""
        if self.rank < self.dim:
            return math.inf
        return math.prod(row[_pivot(row)] for row in self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(_reduce(v, self.basis)[0])

    def __and__(self, other: "Lattice") -> "Lattice":
        return lattice_intersect(self, other)

    def __add__(self, other: "Lattice") -> "Lattice":
        _check_dim(self.dim, other.dim)
        return Lattice(self.dim, self.basis + other.basis)

    def points(self, radius: int) -> Iterator[Vector]:
        """Lattice points a = c B with coefficients c ordered by max-norm shell, then lexicographically."""
        for c in _shell_coefficients(self.rank, radius):
            yield tuple(sum(ci * row[j] for ci, row in zip(c, self.basis)) for j in range(self.dim))


def _check_dim(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def _shell_coefficients(r: int, radius: int) -> Iterator[tuple[int, ...]]:
    if r == 0:
        yield ()
        return
    for R in range(radius + 1):
        yield from _shell(r, R)


def _shell(r: int, R: int) -> Iterator[tuple[int, ...]]:
    """Integer vectors of length r with max-norm exactly R, in lexicographic order."""
    if r == 1:
        yield from ((-R,), (R,)) if R else ((0,),)
        return
    for x in range(-R, R + 1):
        if abs(x) == R:
            for rest in itertools.product(range(-R, R + 1), repeat=r - 1):
                yield (x,) + rest
        else:
            for rest in _shell(r - 1, R):
                yield (x,) + rest


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """L1 n L2 from the integer relations c1 B1 + c2 B2 = 0 among the stacked bases."""
    _check_dim(L1.dim, L2.dim)
    if not L1.basis or not L2.basis:
        return Lattice.zero(L1.dim)
    n1 = len(L1.basis)
    _, _, kernel = _echelon(L1.basis + L2.basis, L1.dim, track=True)
    gens = [tuple(sum(c * row[j] for c, row in zip(k[:n1], L1.basis)) for j in range(L1.dim)) for k in kernel]
    return Lattice(L1.dim, gens)


# -- cosets ---------------------------------------------------------------
@dataclass(frozen=True)
class Coset:
    anchor: Vector
    lattice: Lattice

    def __post_init__(self):
        a = tuple(int(x) for x in self.anchor)
        _check_dim(len(a), self.lattice.dim)
        object.__setattr__(self, "anchor", tuple(_reduce(a, self.lattice.basis)[0]))

    @classmethod
    def of(cls, anchor: Sequence[int], basis: Sequence[Sequence[int]] = ()) -> "Coset":
        return cls(tuple(anchor), Lattice(len(anchor), tuple(tuple(r) for r in basis)))

    @property
    def dim(self) -> int:
        return self.lattice.dim

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def contains(self, p: Sequence[int]) -> bool:
        return self.lattice.contains([x - y for x, y in zip(p, self.anchor)])

    def contains_many(self, P: np.ndarray) -> np.ndarray:
        """Vectorised membership for an (N, d) integer array."""
        V = np.asarray(P, dtype=np.int64) - np.array(self.anchor, dtype=np.int64)
        for row in self.lattice.basis:
            c = _pivot(row)
            q = V[:, c] // row[c]
            V = V - q[:, None] * np.array(row, dtype=np.int64)
        return ~V.any(axis=1)

    def __str__(self) -> str:
        if self.dim == 1:
            step = self.lattice.basis[0][0] if self.rank else 0
            return f"{self.anchor[0]}+{step}Z" if step else f"{{{self.anchor[0]}}}"
        return f"{list(self.anchor)}+span{[list(r) for r in self.lattice.basis]}"


def coset_intersect(c1: Coset, c2: Coset) -> Optional[Coset]:
    """a1 + L1 meets a2 + L2 iff a2 - a1 = x1 B1 + x2 B2 for integer x1, x2."""
    _check_dim(c1.dim, c2.dim)
    d = c1.dim
    B1, B2 = c1.lattice.basis, c2.lattice.basis
    diff = [y - x for x, y in zip(c1.anchor, c2.anchor)]
    stacked = B1 + B2
    if not stacked:
        return c1 if not any(diff) else None
    H, T, _ = _echelon(stacked, d, track=True)
    rem, coeffs = _reduce(diff, H)
    if any(rem):
        return None
    x = [sum(q * t[i] for q, t in zip(coeffs, T)) for i in range(len(stacked))]
    point = [a + sum(xi * row[j] for xi, row in zip(x[:len(B1)], B1)) for j, a in enumerate(c1.anchor)]
    return Coset(tuple(point), lattice_intersect(c1.lattice, c2.lattice))


# -- coset-ring expressions ------------------------------------------------
@dataclass(frozen=True)
class CosetExpr:
    dim: int
    positives: tuple[Coset, ...]
    negatives: tuple[Coset, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "positives", tuple(self.positives))
        object.__setattr__(self, "negatives", tuple(self.negatives))
        for c in self.positives + self.negatives:
            _check_dim(self.dim, c.dim)

    def indicator(self, p: Sequence[int]) -> int:
        return sum(c.contains(p) for c in self.positives) - sum(c.contains(p) for c in self.negatives)

    def indicator_many(self, P: np.ndarray) -> np.ndarray:
        out = np.zeros(len(P), dtype=np.int64)
        for c in self.positives:
            out += c.contains_many(P)
        for c in self.negatives:
            out -= c.contains_many(P)
        return out

    def cosets(self) -> list[tuple[int, Coset]]:
        return [(1, c) for c in self.positives] + [(-1, c) for c in self.negatives]


def membership(U: CosetExpr, p: Sequence[int]) -> bool:
    _check_dim(U.dim, len(p))
    v = U.indicator(p)
    if v not in (0, 1):
        raise InvalidExpressionError(f"indicator is {v} at {tuple(p)}; expected 0 or 1")
    return v == 1


def box_points(d: int, radius: int) -> np.ndarray:
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def validate_on_box(U: CosetExpr, radius: int = 200) -> Optional[Vector]:
    """First box point where the indicator leaves {0, 1}, or None."""
    P = box_points(U.dim, radius)
    chi = U.indicator_many(P)
    bad = np.flatnonzero((chi != 0) & (chi != 1))
    return tuple(int(x) for x in P[bad[0]]) if bad.size else None


@dataclass(frozen=True)
class Extraction:
    coset: Coset
    exceptions: tuple[Vector, ...]


def extract_almost_coset(U: CosetExpr, search_cap: int = 20000) -> Extraction:
    """Coset c of a rank >= 1 lattice and finite E with c minus E inside U.

    Pick a point p of a positive coset such that the cosets of rank >= 1
    through p contribute exactly 1 and their lattices meet in a lattice K of
    rank >= 1.  Every other coset C = a + L is then either avoided by passing
    to p + (K n L), which misses C because p does, or, when K n L has rank 0,
    meets p + K in at most one point, which becomes an exception.
    """
    cosets = U.cosets()
    infinite = [c for s, c in cosets if c.rank >= 1]
    for A in (c for s, c in cosets if s > 0 and c.rank >= 1):
        budget = search_cap
        for off in A.lattice.points(radius=10**9):
            budget -= 1
            if budget < 0:
                break
            p = tuple(a + o for a, o in zip(A.anchor, off))
            through = [(s, c) for s, c in cosets if c.rank >= 1 and c.contains(p)]
            if sum(s for s, _ in through) != 1:
                continue
            K = Lattice.full(U.dim)
            for _, c in through:
                K = K & c.lattice
            if K.rank == 0:
                continue
            skipped = []
            for s, c in cosets:
                if c.contains(p):
                    continue  # contains p + K, or is the single point p (checked below)
                KL = K & c.lattice
                if KL.rank >= 1:
                    K = KL
                else:
                    skipped.append(c)
            base = Coset(p, K)
            exc = set()
            for c in skipped:
                hit = coset_intersect(base, c)
                if hit is not None and not membership(U, hit.anchor):
                    exc.add(hit.anchor)
            if not membership(U, p):
                exc.add(p)
            return Extraction(base, tuple(sorted(exc)))
    if not infinite:
        raise NoInfiniteCosetError("no infinite coset: every coset in the expression is finite")
    raise NoInfiniteCosetError(f"no infinite coset found within {search_cap} candidate points per coset")


# -- JSON ---------------------------------------------------------------------
def _coset_from_json(obj, d: int, where: str) -> Coset:
    try:
        anchor = [int(x) for x in obj["anchor"]]
        basis = [[int(x) for x in row] for row in obj.get("basis", [])]
    except (KeyError, TypeError, ValueError) as e:
        raise CosetFileError(f"{where}: malformed coset ({e})") from None
    if len(anchor) != d or any(len(row) != d for row in basis):
        raise CosetFileError(f"{where}: expected vectors of length {d}")
    return Coset.of(anchor, basis)


def expr_from_json(obj) -> CosetExpr:
    if not isinstance(obj, dict) or "dim" not in obj:
        raise CosetFileError("expected an object with 'dim', 'positives', 'negatives'")
    d = int(obj["dim"])
    pos = [_coset_from_json(c, d, f"positives[{i}]") for i, c in enumerate(obj.get("positives", []))]
    neg = [_coset_from_json(c, d, f"negatives[{i}]") for i, c in enumerate(obj.get("negatives", []))]
    return CosetExpr(d, tuple(pos), tuple(neg))


def expr_to_json(U: CosetExpr) -> dict:
    def enc(c: Coset):
        return {"anchor": list(c.anchor), "basis": [list(r) for r in c.lattice.basis]}
    return {"dim": U.dim, "positives": [enc(c) for c in U.positives], "negatives": [enc(c) for c in U.negatives]}


def load_expr(path) -> CosetExpr:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise CosetFileError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    return expr_from_json(obj)
