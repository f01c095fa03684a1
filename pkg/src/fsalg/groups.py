"""Finite groups with complete catalogs of unitary irreducible representations.

Bundled catalogs: cyclic groups Z_n (n <= 12), S_3, D_4 and Q_8.  Other
groups are loaded from JSON group files, which are always validated::

    {"name": ..., "order": n, "elements": [labels],
     "mult": [[row-major index table]],
     "irreps": [{"dim": d, "label": optional,
                 "matrices": [per element: d*d row-major [re, im] pairs]}]}
"""
from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

HOM_TOL = 1e-10
CHAR_TOL = 1e-8

GROUP_DIR_ENV = "FSALG_GROUP_DIR"


class GroupFileError(ValueError):
    """Structurally invalid group data (shape or index errors, bad JSON)."""


class CatalogInvalid(ValueError):
    """A group/catalog pair failed validation."""

    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(f"{f.check}: {f.detail}" for f in report.failures))
        self.report = report


@dataclass(frozen=True, eq=False)
class FiniteGroupModel:
    """Multiplication table over elements 0..n-1; element 0 is the identity."""

    name: str
    elements: tuple[str, ...]
    mult: np.ndarray
    inv: np.ndarray = field(init=False)

    def __post_init__(self):
        n = len(self.elements)
        table = np.asarray(self.mult)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise GroupFileError(f"{self.name}: multiplication table is not square")
        if table.shape[0] != n:
            raise GroupFileError(f"{self.name}: table size {table.shape[0]} != {n} elements")
        if n == 0:
            raise GroupFileError(f"{self.name}: empty group")
        if not np.issubdtype(table.dtype, np.integer):
            raise GroupFileError(f"{self.name}: table entries must be integers")
        if table.min() < 0 or table.max() >= n:
            bad = np.argwhere((table < 0) | (table >= n))[0]
            raise GroupFileError(f"{self.name}: table index out of range at {tuple(bad)}")
        table = table.astype(np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "mult", table)
        inv = np.full(n, -1, dtype=np.int64)
        for g in range(n):
            hits = np.flatnonzero(table[g] == 0)
            if hits.size:
                inv[g] = hits[0]
        inv.setflags(write=False)
        object.__setattr__(self, "inv", inv)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, g: int, h: int) -> int:
        return int(self.mult[g, h])

    def index(self, label: str) -> int:
        return self.elements.index(label)

    def is_subgroup(self, subset: Sequence[int]) -> bool:
        s = set(int(x) for x in subset)
        if 0 not in s:
            return False
        return all(self.mult[a, b] in s for a in s for b in s)


@dataclass(frozen=True, eq=False)
class Irrep:
    dim: int
    matrices: np.ndarray  # (order, dim, dim)
    label: str = ""

    @property
    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)


@dataclass(frozen=True, eq=False)
class IrrepCatalog:
    irreps: tuple[Irrep, ...]

    def __len__(self) -> int:
        return len(self.irreps)

    def __iter__(self):
        return iter(self.irreps)

    def __getitem__(self, i: int) -> Irrep:
        return self.irreps[i]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(r.dim for r in self.irreps)

    def index(self, label: str) -> int:
        for i, r in enumerate(self.irreps):
            if r.label == label:
                return i
        raise KeyError(label)

    def canonical(self) -> "IrrepCatalog":
        """Irreps sorted by dimension, then by character (values compared as
        (-re, -im) pairs, so the trivial character comes first)."""

        def key(r: Irrep):
            chi = r.character
            return (r.dim, tuple((-round(z.real, 9) + 0.0, -round(z.imag, 9) + 0.0) for z in chi))

        return IrrepCatalog(tuple(sorted(self.irreps, key=key)))


@dataclass(frozen=True)
class Failure:
    check: str
    detail: str
    witness: tuple = ()


@dataclass
class ValidationReport:
    group: str
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, check: str, detail: str, witness: tuple = ()) -> None:
        self.failures.append(Failure(check, detail, witness))


def validate_model(model: FiniteGroupModel, cat: Optional[IrrepCatalog] = None) -> ValidationReport:
    """Exhaustively check the group axioms and every catalog invariant."""
    rep = ValidationReport(model.name)
    n = model.order
    T = model.mult
    if not (np.array_equal(T[0], np.arange(n)) and np.array_equal(T[:, 0], np.arange(n))):
        bad = next(g for g in range(n) if T[0, g] != g or T[g, 0] != g)
        rep.fail("identity", f"element 0 is not a two-sided identity (fails at {bad})", (bad,))
    # (gh)k == g(hk) for all triples
    lhs = T[T, :]  # lhs[g, h, k] = T[T[g,h], k]
    rhs = T[:, T]  # rhs[g, h, k] = T[g, T[h,k]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        g, h, k = (int(x) for x in bad[0])
        rep.fail("associativity", f"({g}*{h})*{k} != {g}*({h}*{k})", (g, h, k))
    for g in range(n):
        ig = model.inv[g]
        if ig < 0 or T[ig, g] != 0:
            rep.fail("inverse", f"element {g} has no two-sided inverse", (g,))
            break
    if cat is None:
        return rep
    for i, r in enumerate(cat.irreps):
        U = np.asarray(r.matrices)
        if U.shape != (n, r.dim, r.dim):
            rep.fail("shape", f"irrep {i} has matrices of shape {U.shape}", (i,))
            return rep
    if rep.failures:
        return rep
    total = 0
    chars = []
    for i, r in enumerate(cat.irreps):
        U = r.matrices
        total += r.dim**2
        prod = np.einsum("gab,hbc->ghac", U, U)
        err = np.abs(prod - U[T]).max(axis=(2, 3))
        if err.max() > HOM_TOL:
            g, h = (int(x) for x in np.unravel_index(np.argmax(err), err.shape))
            rep.fail("homomorphism", f"irrep {i}: U({g})U({h}) != U({g}*{h}) (err {err.max():.3g})", (i, g, h))
        eye = np.eye(r.dim)
        uerr = np.abs(np.einsum("gba,gbc->gac", U.conj(), U) - eye).max(axis=(1, 2))
        if uerr.max() > HOM_TOL:
            g = int(np.argmax(uerr))
            rep.fail("unitarity", f"irrep {i}: U({g}) not unitary (err {uerr.max():.3g})", (i, g))
        chi = r.character
        chars.append(chi)
        norm = float(np.vdot(chi, chi).real) / n
        if abs(norm - 1.0) > CHAR_TOL:
            rep.fail("irreducibility", f"irrep {i}: <chi,chi> = {norm:.12g}", (i,))
    if total != n:
        rep.fail("completeness", f"sum of squared dimensions {total} != |G| = {n}")
    for i, j in itertools.combinations(range(len(chars)), 2):
        ip = abs(np.vdot(chars[i], chars[j])) / n
        if ip > CHAR_TOL:
            rep.fail("inequivalence", f"irreps {i} and {j} have <chi_i,chi_j> = {ip:.3g}", (i, j))
    return rep


@dataclass(frozen=True, eq=False)
class GroupData:
    model: FiniteGroupModel
    catalog: IrrepCatalog

    @property
    def name(self) -> str:
        return self.model.name

    @property
    def order(self) -> int:
        return self.model.order


def make_group(name, elements, mult, irreps, validate=True, canonical=True) -> GroupData:
    model = FiniteGroupModel(name, tuple(elements), np.asarray(mult, dtype=np.int64))
    cat = IrrepCatalog(tuple(irreps))
    if canonical:
        cat = cat.canonical()
    if validate:
        report = validate_model(model, cat)
        if not report.ok:
            raise CatalogInvalid(report)
    return GroupData(model, cat)


# -- bundled catalogs -----------------------------------------------------
def cyclic(n: int) -> GroupData:
    if not 1 <= n <= 12:
        raise ValueError("bundled cyclic groups are Z_1 .. Z_12")
    a = np.arange(n)
    mult = (a[:, None] + a[None, :]) % n
    irreps = []
    for j in range(n):
        mats = np.exp(2j * np.pi * j * a / n).reshape(n, 1, 1)
        irreps.append(Irrep(1, mats, f"chi{j}"))
    return make_group(f"Z{n}", [str(x) for x in a], mult, irreps)


def _perm_table(perms):
    index = {p: i for i, p in enumerate(perms)}
    # (g*h)(x) = g(h(x))
    return [[index[tuple(g[h[x]] for x in range(len(g)))] for h in perms] for g in perms]


def symmetric3() -> GroupData:
    perms = list(itertools.permutations(range(3)))
    labels = ["".join(str(x) for x in p) for p in perms]
    mult = _perm_table(perms)
    sign = []
    for p in perms:
        inversions = sum(1 for i, j in itertools.combinations(range(3), 2) if p[i] > p[j])
        sign.append(-1.0 if inversions % 2 else 1.0)
    triv = Irrep(1, np.ones((6, 1, 1), dtype=complex), "triv")
    sgn = Irrep(1, np.array(sign, dtype=complex).reshape(6, 1, 1), "sgn")
    # standard rep: permutation action on the complement of (1,1,1),
    # basis e1 = (1,-1,0)/sqrt2, e2 = (1,1,-2)/sqrt6
    B = np.array([[1, -1, 0], [1, 1, -2]], dtype=float).T
    B /= np.linalg.norm(B, axis=0)
    mats = []
    for p in perms:
        P = np.zeros((3, 3))
        for x in range(3):
            P[p[x], x] = 1.0
        mats.append(B.T @ P @ B)
    std = Irrep(2, np.array(mats, dtype=complex), "std")
    return make_group("S3", labels, mult, [triv, sgn, std])


def dihedral4() -> GroupData:
    # element r^a s^b has index a + 4b; (r^a s^b)(r^c s^d) = r^(a + (-1)^b c) s^(b+d)
    idx = [(a, b) for b in range(2) for a in range(4)]
    labels = [(f"r{a}" if a else "") + ("s" if b else "") or "e" for a, b in idx]

    def mul(x, y):
        (a, b), (c, d) = x, y
        return ((a + (-1) ** b * c) % 4, (b + d) % 2)

    mult = [[idx.index(mul(x, y)) for y in idx] for x in idx]
    irreps = []
    for er, es, lab in [(1, 1, "triv"), (1, -1, "chi_r"), (-1, 1, "chi_s"), (-1, -1, "chi_rs")]:
        vals = [er**a * es**b for a, b in idx]
        irreps.append(Irrep(1, np.array(vals, dtype=complex).reshape(8, 1, 1), lab))
    R = np.array([[0, -1], [1, 0]], dtype=complex)
    S = np.array([[1, 0], [0, -1]], dtype=complex)
    mats = [np.linalg.matrix_power(R, a) @ np.linalg.matrix_power(S, b) for a, b in idx]
    irreps.append(Irrep(2, np.array(mats), "std"))
    return make_group("D4", labels, mult, irreps)


def quaternion8() -> GroupData:
    one = np.eye(2, dtype=complex)
    qi = np.array([[1j, 0], [0, -1j]])
    qj = np.array([[0, 1], [-1, 0]], dtype=complex)
    qk = qi @ qj
    base = [("1", one), ("i", qi), ("j", qj), ("k", qk)]
    labels, mats = [], []
    for name, M in base:
        labels += [name, "-" + name]
        mats += [M, -M]

    def find(M):
        for t, X in enumerate(mats):
            if np.allclose(X, M):
                return t
        raise AssertionError

    mult = [[find(A @ B) for B in mats] for A in mats]
    irreps = []
    for si, sj, lab in [(1, 1, "triv"), (1, -1, "chi_i"), (-1, 1, "chi_j"), (-1, -1, "chi_k")]:
        unit = {"1": 1, "i": si, "j": sj, "k": si * sj}
        vals = [unit[lab_.lstrip("-")] for lab_ in labels]
        irreps.append(Irrep(1, np.array(vals, dtype=complex).reshape(8, 1, 1), lab))
    irreps.append(Irrep(2, np.array(mats), "std"))
    return make_group("Q8", labels, mult, irreps)


def bundled_names() -> list[str]:
    return [f"Z{n}" for n in range(1, 13)] + ["S3", "D4", "Q8"]


_BUILDERS = {"S3": symmetric3, "D4": dihedral4, "Q8": quaternion8}
_CACHE: dict[str, GroupData] = {}


def bundled(name: str) -> GroupData:
    """Bundled catalog by name; a ``<name>.json`` in $FSALG_GROUP_DIR takes precedence."""
    env = os.environ.get(GROUP_DIR_ENV)
    if env:
        path = Path(env) / f"{name}.json"
        if path.exists():
            return load_group(path)
    if name not in _CACHE:
        if name in _BUILDERS:
            _CACHE[name] = _BUILDERS[name]()
        elif name.startswith("Z") and name[1:].isdigit():
            _CACHE[name] = cyclic(int(name[1:]))
        else:
            raise KeyError(f"no bundled group {name!r}; known: {', '.join(bundled_names())}")
    return _CACHE[name]


# -- JSON group files -----------------------------------------------------
def group_to_json(G: GroupData) -> dict:
    irreps = []
    for r in G.catalog:
        flat = r.matrices.reshape(G.order, -1)
        entry = {"dim": r.dim}
        if r.label:
            entry["label"] = r.label
        entry["matrices"] = [[[float(z.real), float(z.imag)] for z in row] for row in flat]
        irreps.append(entry)
    return {
        "name": G.name,
        "order": G.order,
        "elements": list(G.model.elements),
        "mult": G.model.mult.tolist(),
        "irreps": irreps,
    }


def dump_group(G: GroupData, path) -> None:
    Path(path).write_text(json.dumps(group_to_json(G), indent=1) + "\n", encoding="utf-8")


def group_from_json(data: dict) -> GroupData:
    try:
        name = str(data["name"])
        order = int(data["order"])
        elements = [str(x) for x in data["elements"]]
        mult = data["mult"]
        raw_irreps = data["irreps"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupFileError(f"missing or malformed field: {exc}") from exc
    if len(elements) != order:
        raise GroupFileError(f"order {order} but {len(elements)} element labels")
    try:
        table = np.array(mult, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise GroupFileError(f"multiplication table is not an integer matrix: {exc}") from exc
    irreps = []
    for i, entry in enumerate(raw_irreps):
        d = int(entry["dim"])
        try:
            arr = np.array(entry["matrices"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise GroupFileError(f"irrep {i}: matrices are not numeric pairs") from exc
        if arr.size != order * d * d * 2 or arr.shape[-1] != 2:
            raise GroupFileError(f"irrep {i}: expected {order} matrices of {d}x{d} [re, im] pairs")
        mats = (arr[..., 0] + 1j * arr[..., 1]).reshape(order, d, d)
        irreps.append(Irrep(d, mats, str(entry.get("label", ""))))
    return make_group(name, elements, table, irreps, validate=True, canonical=True)


def load_group(path) -> GroupData:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupFileError(f"{path}: JSON error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return group_from_json(data)
