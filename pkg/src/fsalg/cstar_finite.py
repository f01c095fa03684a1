"""Block-matrix model of B(G) for a finite group G.

For a catalog of irreps U_i of dimensions d_i, a function f on G is stored
together with its blocks::

    M_i = (d_i/|G|) * sum_g f(g) U_i(g)^*,      f(g) = sum_i tr(M_i U_i(g)).

With this convention the pairing with x in C[G] is
``<f, x> = sum_g f(g) x(g) = sum_i tr(M_i X_i)`` where ``X_i = sum_g x(g) U_i(g)``,
so the B(G) norm is the sum of the trace norms of the blocks, f is positive
definite iff every block is positive semidefinite, the support of a
positive f is the blockwise range projection and its central support is
the set of nonzero blocks.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from . import linalg
from .groups import GroupData

TOL = 1e-9
RANK_REL = 1e-8


class NotPositiveError(ValueError):
    pass


class PreconditionError(ValueError):
    """A stated precondition of an operation does not hold; ``which`` names it."""

    def __init__(self, which: str, message: str):
        super().__init__(f"{which}: {message}")
        self.which = which


class Relation(str, enum.Enum):
    ABSOLUTELY_CONTINUOUS = "absolutely_continuous"
    SINGULAR = "singular"
    NEITHER = "neither"


# -- functionals ----------------------------------------------------------
@dataclass(frozen=True, eq=False)
class BlockFunctional:
    group: GroupData
    values: np.ndarray
    blocks: tuple[np.ndarray, ...]

    @classmethod
    def from_values(cls, G: GroupData, values) -> "BlockFunctional":
        return to_blocks(G, values)

    @classmethod
    def from_blocks(cls, G: GroupData, blocks) -> "BlockFunctional":
        blocks = tuple(np.array(M, dtype=complex) for M in blocks)
        return cls(G, from_blocks(G, blocks), blocks)

    def __add__(self, other: "BlockFunctional") -> "BlockFunctional":
        _same_group(self, other)
        return BlockFunctional(self.group, self.values + other.values,
                               tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "BlockFunctional") -> "BlockFunctional":
        return self + (-1.0) * other

    def __neg__(self) -> "BlockFunctional":
        return (-1.0) * self

    def __mul__(self, c) -> "BlockFunctional":
        if not np.isscalar(c):
            return NotImplemented
        return BlockFunctional(self.group, c * self.values, tuple(c * M for M in self.blocks))

    __rmul__ = __mul__

    def __call__(self, g: int) -> complex:
        return complex(self.values[g])

    def block_norms(self) -> np.ndarray:
        return np.array([np.linalg.norm(M, 2) if M.size else 0.0 for M in self.blocks])

    def allclose(self, other: "BlockFunctional", tol: float = TOL) -> bool:
        return bool(np.abs(self.values - other.values).max() <= tol)


def _same_group(f: BlockFunctional, g: BlockFunctional) -> None:
    if f.group is not g.group:
        raise ValueError("functionals live on different groups")


def to_blocks(G: GroupData, values) -> BlockFunctional:
    f = np.asarray(values, dtype=complex)
    if f.shape != (G.order,):
        raise ValueError(f"expected {G.order} values, got shape {f.shape}")
    n = G.order
    blocks = tuple(
        (r.dim / n) * np.einsum("g,gba->ab", f, r.matrices.conj()) for r in G.catalog
    )
    return BlockFunctional(G, f.copy(), blocks)


def from_blocks(G: GroupData, blocks) -> np.ndarray:
    out = np.zeros(G.order, dtype=complex)
    for M, r in zip(blocks, G.catalog):
        out += np.einsum("ab,gba->g", M, r.matrices)
    return out


def element_blocks(G: GroupData, x) -> tuple[np.ndarray, ...]:
    """Image of x in C[G] under every irrep: X_i = sum_g x(g) U_i(g)."""
    x = np.asarray(x, dtype=complex)
    return tuple(np.einsum("g,gab->ab", x, r.matrices) for r in G.catalog)


def pairing(f: BlockFunctional, X_blocks) -> complex:
    return complex(sum(np.trace(M @ X) for M, X in zip(f.blocks, X_blocks)))


def delta_e(G: GroupData) -> BlockFunctional:
    v = np.zeros(G.order, dtype=complex)
    v[0] = 1.0
    return to_blocks(G, v)


def character(G: GroupData, label_or_index) -> BlockFunctional:
    i = label_or_index if isinstance(label_or_index, int) else G.catalog.index(label_or_index)
    return to_blocks(G, G.catalog[i].character)


def matrix_coefficient(G: GroupData, irrep, a: int, b: int) -> BlockFunctional:
    """g -> <e_a, U(g) e_b> for the given irrep."""
    i = irrep if isinstance(irrep, int) else G.catalog.index(irrep)
    return to_blocks(G, G.catalog[i].matrices[:, a, b])


def kernel_matrix(f: BlockFunctional) -> np.ndarray:
    """The positive-definiteness kernel [f(s^-1 t)]_{s,t}."""
    T = f.group.model.mult
    inv = f.group.model.inv
    return f.values[T[inv]]


# -- projections and partial isometries ------------------------------------
@dataclass(frozen=True, eq=False)
class BlockProjection:
    blocks: tuple[np.ndarray, ...]

    def nonzero(self, tol: float = TOL) -> tuple[bool, ...]:
        return tuple(bool(P.size and np.abs(P).max() > tol) for P in self.blocks)

    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(P).real)) for P in self.blocks)

    def is_central(self, tol: float = TOL) -> bool:
        for P in self.blocks:
            d = P.shape[0]
            if not (np.abs(P).max(initial=0.0) <= tol or np.abs(P - np.eye(d)).max() <= tol):
                return False
        return True

    def is_projection(self, tol: float = TOL) -> bool:
        return all(np.abs(P @ P - P).max(initial=0.0) <= tol and np.abs(P - P.conj().T).max(initial=0.0) <= tol
                   for P in self.blocks)

    def __matmul__(self, other: "BlockProjection") -> "BlockProjection":
        return BlockProjection(tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    def is_zero(self, tol: float = TOL) -> bool:
        return not any(self.nonzero(tol))

    def allclose(self, other: "BlockProjection", tol: float = 1e-6) -> bool:
        return all(np.abs(a - b).max(initial=0.0) <= tol for a, b in zip(self.blocks, other.blocks))

    def leq(self, other: "BlockProjection", tol: float = 1e-8) -> bool:
        """P <= Q for projections, i.e. QP = P."""
        return all(np.abs(q @ p - p).max(initial=0.0) <= tol for p, q in zip(self.blocks, other.blocks))


@dataclass(frozen=True, eq=False)
class BlockPartialIsometry:
    blocks: tuple[np.ndarray, ...]

    def is_partial_isometry(self, tol: float = TOL) -> bool:
        return all(np.abs(V @ V.conj().T @ V - V).max(initial=0.0) <= tol for V in self.blocks)

    def initial_projection(self) -> BlockProjection:
        return BlockProjection(tuple(V.conj().T @ V for V in self.blocks))

    def adjoint(self) -> tuple[np.ndarray, ...]:
        return tuple(V.conj().T for V in self.blocks)


def _opnorms(blocks) -> list[float]:
    return [abs(M[0, 0]) if M.shape == (1, 1) else float(np.linalg.norm(M, 2)) if M.size else 0.0
            for M in blocks]


def _rank_tol(blocks, norms=None) -> float:
    norms = _opnorms(blocks) if norms is None else norms
    return linalg.rank_tolerance(max(norms, default=0.0), RANK_REL)


# -- norms and positivity -------------------------------------------------
def bg_norm(f: BlockFunctional) -> float:
    return float(sum(linalg.trace_norm(M) for M in f.blocks))


def hermiticity_deviation(f: BlockFunctional) -> float:
    return max((float(np.abs(M - M.conj().T).max()) for M in f.blocks), default=0.0)


def is_positive(f: BlockFunctional, tol: float = TOL) -> bool:
    if hermiticity_deviation(f) > tol:
        return False
    return all(linalg.eigvalsh(M)[0] >= -tol for M in f.blocks)


def _require_positive(f: BlockFunctional, what: str = "f") -> None:
    if not is_positive(f):
        raise NotPositiveError(f"{what} is not positive definite")


def polar(f: BlockFunctional) -> tuple[BlockPartialIsometry, BlockFunctional]:
    """Blockwise M_i = V_i P_i with P_i = |M_i| and V_i^* V_i = range(P_i)."""
    tol = _rank_tol(f.blocks)
    Vs, Ps = [], []
    for M in f.blocks:
        U, s, Vh = linalg.svd(M)
        keep = s > tol
        Ur, sr, Vr = U[:, keep], s[keep], Vh[keep, :]
        Vs.append(Ur @ Vr)
        Ps.append(Vr.conj().T @ (sr[:, None] * Vr))
    return BlockPartialIsometry(tuple(Vs)), BlockFunctional.from_blocks(f.group, Ps)


def support(f: BlockFunctional) -> BlockProjection:
    """Range projection of each block of a positive functional."""
    _require_positive(f)
    tol = _rank_tol(f.blocks)
    out = []
    for M in f.blocks:
        w, V = linalg.eigh(M)
        B = V[:, w > tol]
        out.append(B @ B.conj().T)
    return BlockProjection(tuple(out))


def nonzero_blocks(f: BlockFunctional) -> tuple[bool, ...]:
    norms = _opnorms(f.blocks)
    tol = _rank_tol(f.blocks, norms)
    return tuple(bool(n > tol) for n in norms)


def central_support(f: BlockFunctional) -> BlockProjection:
    return BlockProjection(tuple(
        np.eye(M.shape[0], dtype=complex) if nz else np.zeros_like(M)
        for M, nz in zip(f.blocks, nonzero_blocks(f))
    ))


def support_relation(f: BlockFunctional, g: BlockFunctional) -> Relation:
    a, b = nonzero_blocks(f), nonzero_blocks(g)
    if all(y for x, y in zip(a, b) if x):
        return Relation.ABSOLUTELY_CONTINUOUS
    if not any(x and y for x, y in zip(a, b)):
        return Relation.SINGULAR
    return Relation.NEITHER


def lebesgue(f: BlockFunctional, g: BlockFunctional) -> tuple[BlockFunctional, BlockFunctional]:
    """Split f into the part living on zs(g) and the part singular to g."""
    _same_group(f, g)
    mask = nonzero_blocks(g)
    zero = [np.zeros_like(M) for M in f.blocks]
    f1 = [M if m else z for M, m, z in zip(f.blocks, mask, zero)]
    f2 = [z if m else M for M, m, z in zip(f.blocks, mask, zero)]
    return BlockFunctional.from_blocks(f.group, f1), BlockFunctional.from_blocks(f.group, f2)


@dataclass(frozen=True)
class Predicates:
    is_tracial: bool
    is_gns_faithful: Optional[bool]  # None when f is not positive


def predicates(f: BlockFunctional, tol: float = TOL) -> Predicates:
    tracial = all(
        np.abs(M - (np.trace(M) / M.shape[0]) * np.eye(M.shape[0])).max() <= tol for M in f.blocks
    )
    if not is_positive(f, tol):
        return Predicates(tracial, None)
    s = support(f)
    zs = central_support(f)
    return Predicates(tracial, s.allclose(zs, 1e-6))


def gns_faithful_approx(f: BlockFunctional, eps: float) -> BlockFunctional:
    """Add eps/(2B) * (I/d_i) on each of the B nonzero blocks of a positive f."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    _require_positive(f)
    mask = nonzero_blocks(f)
    B = sum(mask)
    if B == 0:
        raise ValueError("f = 0 has no GNS faithful approximation with the same central support")
    blocks = []
    for M, m in zip(f.blocks, mask):
        d = M.shape[0]
        blocks.append(M + (eps / (2 * B)) * np.eye(d) / d if m else M.copy())
    return BlockFunctional.from_blocks(f.group, blocks)


# -- translations ---------------------------------------------------------
def translate(G: GroupData, values, a: int, b: int) -> np.ndarray:
    """t -> f(a t b)."""
    values = np.asarray(values)
    T = G.model.mult
    return values[T[T[a, :], b]]


def translate_matrix(G: GroupData, values) -> np.ndarray:
    """Rows are all two-sided translates t -> f(a t b), indexed by (a, b)."""
    values = np.asarray(values, dtype=complex)
    T = G.model.mult
    idx = T[T]  # idx[a, t, b] = (a t) b
    return values[idx].transpose(0, 2, 1).reshape(G.order**2, G.order)


def translate_span_dim(G: GroupData, values) -> int:
    M = translate_matrix(G, values)
    s = linalg.svdvals(M)
    return int(np.sum(s > linalg.rank_tolerance(s[0] if s.size else 0.0, RANK_REL)))


# -- tensor products and supports of products ---------------------------------
@dataclass(frozen=True, eq=False)
class TensorDecomposition:
    i: int
    j: int
    multiplicities: tuple[int, ...]
    intertwiner: np.ndarray  # columns: consecutive copies of each irrep, irrep order
    slots: tuple[tuple[int, int], ...]  # (irrep l, first column) for each copy


@lru_cache(maxsize=None)
def tensor_decompose(G: GroupData, i: int, j: int) -> TensorDecomposition:
    """Decompose U_i (x) U_j into irreps with an explicit unitary intertwiner W.

    W^* (U_i(g) (x) U_j(g)) W is block diagonal with m_l copies of U_l(g),
    checked on every group element.
    """
    cat = G.catalog
    n = G.order
    ri, rj = cat[i], cat[j]
    chi = ri.character * rj.character
    D = ri.dim * rj.dim
    T = np.einsum("gab,gcd->gacbd", ri.matrices, rj.matrices).reshape(n, D, D)
    mults = []
    for rl in cat:
        m = np.vdot(rl.character, chi) / n
        if abs(m - round(m.real)) > 1e-8:
            raise ValueError(f"non-integer multiplicity {m} for irrep {rl.label or rl}: catalog invalid")
        mults.append(int(round(m.real)))
    cols, slots = [], []
    for l, (rl, m) in enumerate(zip(cat, mults)):
        if m == 0:
            continue
        dl = rl.dim
        # isotypic projection refined to the (0,0) matrix unit picks one vector per copy
        P00 = (dl / n) * np.einsum("g,gab->ab", rl.matrices[:, 0, 0].conj(), T)
        V = linalg.range_basis(P00, tol=0.5)
        if V.shape[1] != m:
            raise ValueError(f"isotypic component of irrep {l} has wrong dimension")
        for c in range(m):
            slots.append((l, len(cols)))
            for a in range(dl):
                Pa0 = (dl / n) * np.einsum("g,gab->ab", rl.matrices[:, a, 0].conj(), T)
                cols.append(Pa0 @ V[:, c])
    W = np.column_stack(cols)
    blockdiag = np.zeros((n, D, D), dtype=complex)
    for l, start in slots:
        dl = cat[l].dim
        blockdiag[:, start:start + dl, start:start + dl] = cat[l].matrices
    err = np.abs(np.einsum("ba,gbc,cd->gad", W.conj(), T, W) - blockdiag).max()
    if err > 1e-9 or np.abs(W.conj().T @ W - np.eye(D)).max() > 1e-9:
        raise ValueError(f"intertwiner check failed (err {err:.3g})")
    return TensorDecomposition(i, j, tuple(mults), W, tuple(slots))


def coproduct_block(G: GroupData, p: BlockProjection, i: int, j: int) -> np.ndarray:
    """The (i, j) block of Delta(p), i.e. W (sum over copies of p_l) W^*."""
    td = tensor_decompose(G, i, j)
    D = td.intertwiner.shape[0]
    inner = np.zeros((D, D), dtype=complex)
    for l, start in td.slots:
        dl = G.catalog[l].dim
        inner[start:start + dl, start:start + dl] = p.blocks[l]
    return td.intertwiner @ inner @ td.intertwiner.conj().T


def product_support_min(f: BlockFunctional, g: BlockFunctional) -> BlockProjection:
    """Smallest projection p with Delta(p) >= s(f) (x) s(g).

    For each block pair, an orthonormal basis of range(s(f)_i (x) s(g)_j) is
    pushed through the tensor intertwiner; the component vectors landing in
    copies of irrep l span the range of p_l.
    """
    _same_group(f, g)
    G = f.group
    sf, sg = support(f), support(g)
    comps: list[list[np.ndarray]] = [[] for _ in G.catalog]
    for i, Pi in enumerate(sf.blocks):
        Bi = linalg.range_basis(Pi, tol=0.5)
        if Bi.shape[1] == 0:
            continue
        for j, Pj in enumerate(sg.blocks):
            Bj = linalg.range_basis(Pj, tol=0.5)
            if Bj.shape[1] == 0:
                continue
            td = tensor_decompose(G, i, j)
            Y = td.intertwiner.conj().T @ np.kron(Bi, Bj)
            for l, start in td.slots:
                comps[l].append(Y[start:start + G.catalog[l].dim, :])
    out = []
    for l, r in enumerate(G.catalog):
        if comps[l]:
            out.append(linalg.range_projection(np.hstack(comps[l]), tol=RANK_REL))
        else:
            out.append(np.zeros((r.dim, r.dim), dtype=complex))
    return BlockProjection(tuple(out))


def pointwise_product(f: BlockFunctional, g: BlockFunctional) -> BlockFunctional:
    _same_group(f, g)
    return to_blocks(f.group, f.values * g.values)


def iterated_abscont_check(f1: BlockFunctional, f2: BlockFunctional, g1: BlockFunctional,
                           g2: BlockFunctional, require_faithful: bool = True) -> bool:
    """Whether g1*g2 << f1*f2 given g_i << f_i with f_i GNS faithful.

    Precondition failures raise :class:`PreconditionError`; with
    ``require_faithful=False`` the faithfulness precondition is skipped so
    that counterexamples can be evaluated.
    """
    for name, h in (("f1", f1), ("f2", f2), ("g1", g1), ("g2", g2)):
        if not is_positive(h):
            raise PreconditionError(f"{name}_positive", f"{name} is not positive definite")
    if require_faithful:
        for name, h in (("f1", f1), ("f2", f2)):
            if not predicates(h).is_gns_faithful:
                raise PreconditionError(f"{name}_gns_faithful", f"{name} is not GNS faithful")
    for a, x, b, y in (("g1", g1, "f1", f1), ("g2", g2, "f2", f2)):
        if support_relation(x, y) is not Relation.ABSOLUTELY_CONTINUOUS:
            raise PreconditionError(f"{a}_abscont_{b}", f"{a} is not absolutely continuous w.r.t. {b}")
    lhs = pointwise_product(g1, g2)
    rhs = pointwise_product(f1, f2)
    return support_relation(lhs, rhs) is Relation.ABSOLUTELY_CONTINUOUS


# -- spectra and functional calculus ------------------------------------------
def _distinct(values, tol: float) -> list[complex]:
    out: list[complex] = []
    for z in sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag)):
        if not any(abs(z - w) <= tol for w in out):
            out.append(z)
    return out


def spectrum(values, tol: float = 1e-12) -> list[complex]:
    """Spectrum of f in the pointwise algebra of a finite group: its range."""
    return _distinct(values, tol)


def has_natural_spectrum(values) -> bool:
    # on a finite group the Gelfand space is the group itself
    return True


class CalculusDomainError(ValueError):
    pass


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[complex, ...]  # ascending powers

    def defined_at(self, z: complex) -> bool:
        return True

    def __call__(self, z):
        out = 0
        for c in reversed(self.coeffs):
            out = out * z + c
        return out


@dataclass(frozen=True)
class Rational:
    num: Polynomial
    den: Polynomial
    tol: float = 1e-12

    def defined_at(self, z: complex) -> bool:
        return abs(self.den(z)) > self.tol

    def __call__(self, z):
        return self.num(z) / self.den(z)


@dataclass(frozen=True)
class LocallyConstant:
    """Constant value on each open disc (center, radius); undefined elsewhere."""

    pieces: tuple[tuple[complex, float, complex], ...]

    def _hits(self, z):
        return [v for c, r, v in self.pieces if abs(z - c) < r]

    def defined_at(self, z: complex) -> bool:
        vals = self._hits(z)
        return bool(vals) and all(v == vals[0] for v in vals)

    def __call__(self, z):
        return self._hits(z)[0]


IDENTITY_FN = Polynomial((0, 1))
SQUARE_FN = Polynomial((0, 0, 1))


def pointwise_calculus(values, F) -> np.ndarray:
    """t -> F(f(t)) for a holomorphic descriptor defined near the range of f."""
    values = np.asarray(values)
    for z in values:
        if not F.defined_at(z):
            raise CalculusDomainError(f"descriptor undefined at value {z}")
    return np.array([F(z) for z in values], dtype=values.dtype if values.dtype == object else complex)


# -- extension from a subgroup ---------------------------------------------
def extend_by_zero(G: GroupData, f_H, embedding: Sequence[int]) -> np.ndarray:
    """Extend a function on a subgroup H (listed via ``embedding`` into G) by zero."""
    emb = [int(x) for x in embedding]
    if len(set(emb)) != len(emb) or not G.model.is_subgroup(emb):
        raise PreconditionError("subgroup", "embedding image is not a subgroup of G")
    f_H = np.asarray(f_H)
    if f_H.shape != (len(emb),):
        raise ValueError("f_H must have one value per subgroup element")
    out = np.zeros(G.order, dtype=f_H.dtype if f_H.dtype == object else complex)
    if out.dtype == object:
        out[:] = 0
    out[emb] = f_H
    return out


@dataclass(frozen=True)
class ExtensionCheck:
    products: tuple  # value of the identity's left side at each element of G
    identity_holds: bool
    range_holds: bool


def _is_exact(x) -> bool:
    return hasattr(x, "free_symbols")  # sympy expression


def _equal(a, b, tol: float) -> bool:
    if _is_exact(a) or _is_exact(b):
        import sympy

        return sympy.simplify(sympy.expand_complex(a - b)) == 0
    return abs(complex(a) - complex(b)) <= tol


def prz_identity_check(G: GroupData, f_H, embedding: Sequence[int], lam, tol: float = 0.0) -> ExtensionCheck:
    """Check (f~ - lam 1_G)(g~ - (1/lam) 1_{G\\H}) == 1_G pointwise, with g = 1/(f - lam) on H.

    Values may be exact (sympy) numbers, in which case equality is exact;
    floats are compared with ``tol``.  Also checks range(f~) = f(H) u {0}.
    """
    f_H = np.asarray(f_H)
    if _equal(lam, 0, 0.0) or any(_equal(v, lam, 0.0) for v in f_H):
        raise PreconditionError("lambda", "lambda lies in f(H) u {0}")
    emb = [int(x) for x in embedding]
    ft = extend_by_zero(G, f_H, emb)
    g_H = np.array([1 / (v - lam) for v in f_H], dtype=f_H.dtype if f_H.dtype == object else complex)
    gt = extend_by_zero(G, g_H, emb)
    in_H = set(emb)
    products = []
    for t in range(G.order):
        off = 0 if t in in_H else 1 / lam
        products.append((ft[t] - lam) * (gt[t] - off))
    holds = all(_equal(p, 1, tol) for p in products)
    rng_G = list(ft)
    rng_H = list(f_H) + [0]
    range_ok = all(any(_equal(a, b, max(tol, 1e-12)) for b in rng_H) for a in rng_G) and \
        all(any(_equal(a, b, max(tol, 1e-12)) for b in rng_G) for a in rng_H)
    return ExtensionCheck(tuple(products), holds, range_ok)


# -- random samples ---------------------------------------------------------
def random_functional(G: GroupData, rng: np.random.Generator, positive: bool = False,
                      zero_prob: float = 0.3, low_rank: bool = True) -> BlockFunctional:
    """Random element of B(G) with randomly vanishing blocks.

    Positive samples have blocks A A^* with A of random width, so supports
    are frequently proper subprojections.
    """
    blocks = []
    for r in G.catalog:
        d = r.dim
        if rng.random() < zero_prob:
            blocks.append(np.zeros((d, d), dtype=complex))
            continue
        if positive:
            width = int(rng.integers(1, d + 1)) if low_rank else d
            A = rng.normal(size=(d, width)) + 1j * rng.normal(size=(d, width))
            blocks.append(A @ A.conj().T)
        else:
            blocks.append(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return BlockFunctional.from_blocks(G, blocks)


def random_contraction_blocks(G: GroupData, rng: np.random.Generator) -> tuple[np.ndarray, ...]:
    """Random x in C*(G) with operator norm exactly one."""
    blocks = [rng.normal(size=(r.dim, r.dim)) + 1j * rng.normal(size=(r.dim, r.dim)) for r in G.catalog]
    norm = max(np.linalg.norm(X, 2) for X in blocks)
    return tuple(X / norm for X in blocks)
