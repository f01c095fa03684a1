"""Verification suites: named collections of numeric checks with a report."""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import cstar_finite as C
from . import coset_lattice as CL
from . import free_pdf as FP
from . import groups
from .free_words import GeneratorSet, ReducedWord, count_words, cyclic_coset_scan, enumerate_words


@dataclass(frozen=True)
class Case:
    id: str
    anchor: str
    passed: bool
    measured: dict
    tolerance: float
    witness: Optional[dict] = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


@dataclass
class VerificationReport:
    suite: str
    seed: int
    tol: float
    cases: list[Case] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.cases)

    def counts(self) -> tuple[int, int]:
        n_pass = sum(c.passed for c in self.cases)
        return n_pass, len(self.cases) - n_pass


class UnknownSuiteError(KeyError):
    pass


class _Builder:
    def __init__(self, prefix: str):
        self.prefix = prefix
        self.cases: list[Case] = []

    def add(self, name: str, anchor: str, passed: bool, measured: dict, tol: float,
            witness: Optional[dict] = None) -> None:
        passed = bool(passed)
        if not passed and witness is None:
            witness = dict(measured)
        self.cases.append(Case(f"{self.prefix}/{name}", anchor, passed, measured, tol,
                               None if passed else witness))

    def close(self, name: str, anchor: str, got: float, want: float, tol: float) -> None:
        self.add(name, anchor, abs(got - want) <= tol, {"got": got, "want": want}, tol)


# -- random samples shared with the test suite --------------------------------
def random_lattice(rng: np.random.Generator, d: int, max_index: int = 12, rank: Optional[int] = None) -> CL.Lattice:
    rank = d if rank is None else rank
    if rank == 0:
        return CL.Lattice.zero(d)
    while True:
        rows = [tuple(int(x) for x in rng.integers(-4, 5, size=d)) for _ in range(rank)]
        L = CL.Lattice(d, rows)
        if L.rank != rank:
            continue
        if rank < d or L.index() <= max_index:
            return L


def random_coset(rng: np.random.Generator, d: int, rank: Optional[int] = None, max_index: int = 12) -> CL.Coset:
    L = random_lattice(rng, d, max_index, rank)
    return CL.Coset(tuple(int(x) for x in rng.integers(-6, 7, size=d)), L)


def random_coset_expr(rng: np.random.Generator, d: Optional[int] = None, max_neg: int = 4) -> CL.CosetExpr:
    """A minus the union of up to ``max_neg`` cosets, written by inclusion-exclusion.

    Subtracted cosets mix full-rank lattices of index <= 12 with lines (in
    Z^2) and single points, so both the avoidance and the exception branch
    of the extraction get exercised.
    """
    d = int(rng.integers(1, 3)) if d is None else d
    A = CL.Coset(tuple(int(x) for x in rng.integers(-3, 4, size=d)),
                 CL.Lattice.full(d) if rng.random() < 0.5 else random_lattice(rng, d, 4))
    subs = []
    for _ in range(int(rng.integers(1, max_neg + 1))):
        u = rng.random()
        rank = 0 if u < 0.15 else (1 if d == 2 and u < 0.4 else d)
        subs.append(random_coset(rng, d, rank))
    pos, neg = [A], []
    for size in range(1, len(subs) + 1):
        for combo in itertools.combinations(range(len(subs)), size):
            cur: Optional[CL.Coset] = A
            for i in combo:
                cur = CL.coset_intersect(cur, subs[i])
                if cur is None:
                    break
            if cur is not None:
                (neg if size % 2 else pos).append(cur)
    return CL.CosetExpr(d, tuple(pos), tuple(neg))


def random_word(rng: np.random.Generator, k: int, max_len: int) -> ReducedWord:
    letters = []
    for _ in range(int(rng.integers(0, max_len + 1))):
        choices = [a for g in range(1, k + 1) for a in (g, -g) if not letters or a != -letters[-1]]
        letters.append(int(choices[int(rng.integers(len(choices)))]))
    return ReducedWord.from_letters(letters)


def exception_bound(U: CL.CosetExpr) -> float:
    return math.prod(c.lattice.index() for c in U.negatives)


def check_extraction(U: CL.CosetExpr, ex: CL.Extraction, radius: int = 200) -> Optional[dict]:
    """Box-scan verification of c minus exceptions inside U; returns a witness on failure."""
    if ex.coset.rank < 1:
        return {"reason": "rank 0 coset"}
    if len(ex.exceptions) > exception_bound(U):
        return {"reason": "too many exceptions", "count": len(ex.exceptions)}
    P = CL.box_points(U.dim, radius)
    inside = ex.coset.contains_many(P)
    for e in ex.exceptions:
        inside &= ~(P == np.array(e)).all(axis=1)
    chi = U.indicator_many(P[inside])
    bad = np.flatnonzero(chi != 1)
    if bad.size:
        return {"reason": "point outside U", "point": [int(x) for x in P[inside][bad[0]]]}
    return None


# -- suites ------------------------------------------------------------------
def _s3_named():
    G = groups.bundled("S3")
    phi1 = C.matrix_coefficient(G, "std", 0, 0)
    phi2 = C.matrix_coefficient(G, "std", 1, 1)
    return G, phi1, phi2


def suite_s3_supports(seed: int, tol: float) -> list[Case]:
    b = _Builder("s3-supports")
    G, phi1, phi2 = _s3_named()
    a = "norm additivity without singularity"
    b.close("norm-phi1", a, C.bg_norm(phi1), 1.0, tol)
    b.close("norm-phi2", a, C.bg_norm(phi2), 1.0, tol)
    b.close("norm-sum", a, C.bg_norm(phi1 + phi2), 2.0, tol)
    b.close("norm-diff", a, C.bg_norm(phi1 - phi2), 2.0, tol)
    prod = C.support(phi1) @ C.support(phi2)
    err = max(float(np.abs(P).max()) for P in prod.blocks)
    b.add("support-orthogonal", "supports s(phi1) s(phi2) = 0", err <= C.RANK_REL, {"max_entry": err}, C.RANK_REL)
    z1, z2 = C.central_support(phi1), C.central_support(phi2)
    std = G.catalog.index("std")
    same = z1.allclose(z2) and z1.nonzero() == tuple(i == std for i in range(len(G.catalog)))
    b.add("central-support-equal", "equal central supports on the 2-dim block", same,
          {"zs_phi1": list(z1.nonzero()), "zs_phi2": list(z2.nonzero())}, 1e-6)
    return b.cases


def suite_s3_tensor(seed: int, tol: float) -> list[Case]:
    b = _Builder("s3-tensor")
    G, h1, _ = _s3_named()
    std, sgn = G.catalog.index("std"), G.catalog.index("sgn")
    td = C.tensor_decompose(G, std, std)
    b.add("std-squared", "std (x) std = triv + sgn + std", td.multiplicities == (1, 1, 1),
          {"multiplicities": list(td.multiplicities)}, 0.0)
    f = C.character(G, "std")
    rel = C.support_relation(f, h1)
    b.add("f-abscont-h1", "trace function absolutely continuous w.r.t. h1",
          rel is C.Relation.ABSOLUTELY_CONTINUOUS, {"relation": rel.value}, 0.0)
    f2, h2 = C.pointwise_product(f, f), C.pointwise_product(h1, h1)
    zf = C.central_support(f2).nonzero()
    b.add("f-squared-full", "central support of f^2 is the identity", all(zf), {"blocks": list(zf)}, 0.0)
    zh = C.central_support(h2).nonzero()
    b.add("h1-squared-no-sign", "central support of h1^2 misses the sign block", not zh[sgn],
          {"blocks": list(zh)}, 0.0)
    rel2 = C.support_relation(f2, h2)
    b.add("squares-not-abscont", "f^2 not absolutely continuous w.r.t. h1^2",
          rel2 is not C.Relation.ABSOLUTELY_CONTINUOUS, {"relation": rel2.value}, 0.0)
    return b.cases


def suite_norms(seed: int, tol: float, trials: int = 100) -> list[Case]:
    b = _Builder("norms")
    rng = np.random.default_rng(seed)
    for name in groups.bundled_names():
        G = groups.bundled(name)
        worst_rt = worst_dual = worst_add = worst_leb = 0.0
        dual_violations = 0
        for _ in range(trials):
            f = C.random_functional(G, rng)
            worst_rt = max(worst_rt, float(np.abs(C.from_blocks(G, C.to_blocks(G, f.values).blocks) - f.values).max()))
            v, _ = C.polar(f)
            n = C.bg_norm(f)
            worst_dual = max(worst_dual, abs(abs(C.pairing(f, v.adjoint())) - n))
            x = C.random_contraction_blocks(G, rng)
            if abs(C.pairing(f, x)) > n + tol:
                dual_violations += 1
            g = C.random_functional(G, rng)
            f1, f2 = C.lebesgue(f, g)
            worst_leb = max(worst_leb, abs(C.bg_norm(f1) + C.bg_norm(f2) - n))
            if C.support_relation(f2, g) is C.Relation.SINGULAR and C.bg_norm(f2) > 0:
                al, be = rng.normal(size=2) + 1j * rng.normal(size=2)
                h = al * f1 + be * f2
                worst_add = max(worst_add, abs(C.bg_norm(h) - abs(al) * C.bg_norm(f1) - abs(be) * C.bg_norm(f2)))
        b.add(f"{name}-roundtrip", "Fourier transform round trip", worst_rt <= tol, {"max_err": worst_rt}, tol)
        b.add(f"{name}-duality", "norm attained at the polar partial isometry", worst_dual <= tol and dual_violations == 0,
              {"max_err": worst_dual, "violations": dual_violations}, tol)
        b.add(f"{name}-lebesgue", "Lebesgue decomposition norm additivity", worst_leb <= tol, {"max_err": worst_leb}, tol)
        b.add(f"{name}-singular-additivity", "singular functionals have additive norms", worst_add <= tol,
              {"max_err": worst_add}, tol)
    return b.cases


def suite_haagerup(seed: int, tol: float) -> list[Case]:
    b = _Builder("haagerup")
    p = FP.HaagerupParam(0.5, 2)
    rep = FP.haagerup_l2_report(p)
    partial = math.fsum(p.r ** (2 * len(w)) for n in range(11) for w in enumerate_words(2, n)) + \
        math.fsum(count_words(2, n, None) * p.r ** (2 * n) for n in range(11, 31))
    b.add("l2-norm", "l2 norm of r^|x| with the identity term", abs(rep.norm_sq - 5.0) <= 1e-6 and rep.q == 0.75,
          {"norm_sq": rep.norm_sq, "q": rep.q}, 1e-6)
    tail = FP.haagerup_l2_tail_bound(p, 30)
    b.add("l2-tail", "length <= 30 partial sum within the geometric tail bound",
          0 <= rep.norm_sq - partial <= tail + 1e-12, {"partial_sum": partial, "tail_bound": tail}, tail)
    m = FP.haagerup_min_l2_power(FP.HaagerupParam(0.8, 2))
    direct = next(j for j in range(1, 100) if 3 * 0.8 ** (2 * j) < 1)
    b.add("min-power", "smallest m with (2k-1) r^(2m) < 1", m == 3 == direct, {"m": m, "direct": direct}, 0.0)
    chi = FP.chi_pairing_report(p, 2)
    brute = math.fsum(FP.haagerup_eval(p, w) for w in enumerate_words(2, 2))
    b.add("chi-pairing", "pairing with the length-2 sphere", abs(chi.pairing - 3.0) <= tol and abs(brute - 3.0) <= tol,
          {"pairing": chi.pairing, "brute": brute}, tol)
    at = FP.chi_pairing_report(FP.HaagerupParam(1 / math.sqrt(3), 2), 2)
    b.add("regime-at", "critical radius 1/sqrt(2k-1)", at.regime is FP.Regime.AT, {"regime": at.regime.value}, 0.0)
    above = FP.chi_pairing_report(FP.HaagerupParam(0.9, 2), 1)
    b.add("regime-above", "pairing outgrows the Haagerup bound",
          above.regime is FP.Regime.ABOVE and above.first_violation is not None,
          {"first_violation": above.first_violation}, 0.0)
    worst = math.inf
    for r in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9):
        for k in (1, 2, 3):
            pr = FP.HaagerupParam(r, k)
            cert = FP.gram_psd_check(lambda w, pr=pr: FP.haagerup_eval(pr, w), k, 3, tol)
            worst = min(worst, cert.min_eigenvalue)
    b.add("gram-psd", "Gram matrices of r^|x| are PSD", worst >= -tol, {"min_eigenvalue": worst}, tol)
    neg = FP.gram_psd_check(FP.exploding_control(), 2, 2, tol)
    b.add("gram-negative-control", "non positive definite control is rejected", neg.min_eigenvalue < -0.01,
          {"min_eigenvalue": neg.min_eigenvalue}, 0.01)
    return b.cases


def suite_riesz(seed: int, tol: float, words: int = 500) -> list[Case]:
    b = _Builder("riesz")
    rng = np.random.default_rng(seed)
    geo = FP.riesz_classify(FP.RieszSpec.geometric(0.5, 0.5))
    b.add("geometric", "a_k = 2^-k lies in l2",
          geo.label is FP.RieszClass.IN_L2 and abs(geo.beta - 1 / 3) <= 1e-12 and abs(geo.gamma - 2 / 45) <= 1e-12,
          {"class": geo.label.value, "beta": geo.beta, "gamma": geo.gamma}, 1e-12)
    const = FP.riesz_classify(FP.RieszSpec.constant(0.5))
    b.add("constant", "beta infinite gives singularity", const.label is FP.RieszClass.SINGULAR,
          {"class": const.label.value}, 0.0)
    fin = FP.riesz_classify(FP.RieszSpec.finite(0.5, 0.5))
    b.add("finite", "finite coefficients (1/2, 1/2)",
          fin.label is FP.RieszClass.IN_L2 and abs(fin.beta - 0.5) <= 1e-12 and abs(fin.gamma - 0.125) <= 1e-12,
          {"class": fin.label.value, "beta": fin.beta, "gamma": fin.gamma}, 1e-12)
    log = FP.RieszSpec.log_law(0.5, 1.0)
    b.add("log-law-powers", "all powers singular for 1/(2 log(10+k))", FP.powers_all_singular(log),
          {"powers_all_singular": FP.powers_all_singular(log)}, 0.0)
    classes = [FP.riesz_classify(FP.riesz_power(log, m)).label.value for m in range(1, 6)]
    b.add("log-law-power-classes", "every power classified singular",
          all(c == FP.RieszClass.SINGULAR.value for c in classes), {"classes": classes}, 0.0)
    worst = 0.0
    specs = [FP.RieszSpec.finite(0.5, 0.3, 0.2j), FP.RieszSpec.geometric(0.5, 0.7), FP.RieszSpec.power_law(0.4 + 0.2j, 0.25), log]
    for _ in range(words):
        spec = specs[int(rng.integers(len(specs)))]
        w = random_word(rng, 4, 8)
        m = int(rng.integers(1, 6))
        worst = max(worst, abs(FP.riesz_eval(FP.riesz_power(spec, m), w) - FP.riesz_eval(spec, w) ** m))
    b.add("power-identity", "R^m evaluated pointwise", worst <= 1e-12, {"max_err": worst}, 1e-12)
    cert = FP.gram_psd_check(lambda w: FP.riesz_eval(FP.RieszSpec.constant(0.5), w), 3, 3, tol)
    b.add("gram-psd", "Riesz product Gram matrix is PSD", cert.passed, {"min_eigenvalue": cert.min_eigenvalue}, tol)
    return b.cases


def coset_corpus() -> list[tuple[str, CL.CosetExpr, Optional[CL.Extraction]]]:
    """Named expressions with their expected extraction (None: only verify)."""
    Z = lambda a, m: CL.Coset.of((a,), [(m,)] if m else [])
    full2 = CL.Coset.of((0, 0), [(1, 0), (0, 1)])
    return [
        ("z-minus-2z-and-1mod4", CL.CosetExpr(1, (Z(0, 1),), (Z(0, 2), Z(1, 4))),
         CL.Extraction(Z(3, 4), ())),
        ("z2-minus-index2", CL.CosetExpr(2, (full2,), (CL.Coset.of((0, 0), [(2, 0), (0, 1)]),)),
         CL.Extraction(CL.Coset.of((1, 0), [(2, 0), (0, 1)]), ())),
        ("z-minus-origin", CL.CosetExpr(1, (Z(0, 1),), (Z(0, 0),)), CL.Extraction(Z(0, 1), ((0,),))),
        ("z-minus-odd", CL.CosetExpr(1, (Z(0, 1),), (Z(1, 2),)), None),
        ("z2-minus-axis-line", CL.CosetExpr(2, (full2,), (CL.Coset.of((0, 0), [(1, 0)]),)), None),
        ("line-minus-points", CL.CosetExpr(2, (CL.Coset.of((0, 0), [(1, 1)]),),
                                            (CL.Coset.of((0, 0)), CL.Coset.of((3, 3)))), None),
    ]


def suite_coset(seed: int, tol: float, trials: int = 100) -> list[Case]:
    b = _Builder("coset")
    anchor = "almost contained infinite coset"
    for name, U, expect in coset_corpus():
        ex = CL.extract_almost_coset(U)
        wit = check_extraction(U, ex)
        ok = wit is None and (expect is None or ex == expect)
        b.add(f"fixed-{name}", anchor, ok,
              {"coset": str(ex.coset), "exceptions": [list(e) for e in ex.exceptions]}, 0.0, wit)
    rng = np.random.default_rng(seed)
    failures, first = 0, None
    done = 0
    while done < trials:
        U = random_coset_expr(rng)
        P = CL.box_points(U.dim, 40 if U.dim == 2 else 200)
        if int((U.indicator_many(P) == 1).sum()) < 50:
            continue  # too sparse to be certainly infinite; draw again
        done += 1
        try:
            wit = check_extraction(U, CL.extract_almost_coset(U))
        except CL.NoInfiniteCosetError as e:
            wit = {"error": str(e)}
        if wit is not None:
            failures += 1
            first = first or {"expr": CL.expr_to_json(U), **wit}
    b.add("random", anchor, failures == 0, {"trials": trials, "failures": failures}, 0.0, first)
    return b.cases


def suite_prz(seed: int, tol: float) -> list[Case]:
    import sympy

    b = _Builder("prz")
    G = groups.bundled("S3")
    A3 = [G.model.index(lbl) for lbl in ("012", "120", "201")]
    w = sympy.exp(2 * sympy.pi * sympy.I / 3)
    f = np.array([sympy.Integer(1), w, w**2], dtype=object)
    res = C.prz_identity_check(G, f, A3, sympy.Integer(2))
    b.add("identity", "inverse identity on A3 in S3, exact", res.identity_holds,
          {"products": [str(sympy.simplify(p)) for p in res.products]}, 0.0)
    b.add("range", "range of the extension is f(H) plus 0", res.range_holds, {}, 0.0)
    try:
        C.prz_identity_check(G, f, A3, w)
        rejected = False
    except C.PreconditionError:
        rejected = True
    b.add("lambda-in-range", "lambda in f(H) is rejected", rejected, {"rejected": rejected}, 0.0)
    return b.cases


def suite_product_support(seed: int, tol: float, trials: int = 200) -> list[Case]:
    b = _Builder("product-support")
    rng = np.random.default_rng(seed)
    for name in groups.bundled_names():
        G = groups.bundled(name)
        failures, first = 0, None
        for _ in range(trials):
            f = C.random_functional(G, rng, positive=True)
            g = C.random_functional(G, rng, positive=True)
            p = C.product_support_min(f, g)
            s = C.support(C.pointwise_product(f, g))
            if not p.allclose(s, 1e-6):
                failures += 1
                first = first or {"ranks_min": list(p.ranks()), "ranks_support": list(s.ranks())}
        b.add(name, "support of a product is the least dominated projection", failures == 0,
              {"pairs": trials, "failures": failures}, 1e-6, first)
    return b.cases


def suite_words(seed: int, tol: float) -> list[Case]:
    b = _Builder("words")
    res = cyclic_coset_scan(GeneratorSet.first(5), 2, 20)
    b.add("scan-5-2-20", "no cyclic coset almost inside the generators", res.max_hits <= 2,
          {"max_hits": res.max_hits, "pairs": res.pairs_scanned}, 0.0)
    counts = all(count_words(k, n) == len(enumerate_words(k, n)) for k in (1, 2, 3) for n in range(7))
    b.add("counts", "2k(2k-1)^(n-1) words of length n", counts, {"ok": counts}, 0.0)
    return b.cases


SUITES: dict[str, Callable[[int, float], list[Case]]] = {
    "s3-supports": suite_s3_supports,
    "s3-tensor": suite_s3_tensor,
    "norms": suite_norms,
    "haagerup": suite_haagerup,
    "riesz": suite_riesz,
    "coset": suite_coset,
    "prz": suite_prz,
    "product-support": suite_product_support,
    "words": suite_words,
}


def suite_names() -> list[str]:
    return list(SUITES) + ["all"]


def run_suite(name: str, seed: int = 0, tol: float = 1e-9) -> VerificationReport:
    if name != "all" and name not in SUITES:
        raise UnknownSuiteError(name)
    start = time.perf_counter()
    cases: list[Case] = []
    for key in (SUITES if name == "all" else [name]):
        cases.extend(SUITES[key](seed, tol))
    ids = [c.id for c in cases]
    if len(set(ids)) != len(ids):
        raise AssertionError("duplicate case ids")
    cases.sort(key=lambda c: c.id)
    return VerificationReport(name, seed, tol, cases, time.perf_counter() - start)
