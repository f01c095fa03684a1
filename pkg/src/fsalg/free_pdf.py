"""Positive definite functions on free groups.

Covers Haagerup functions r^|x|, free products of normalised positive
definite functions on the cyclic factors, and free Riesz products
v_k = delta_e + a_k delta_{x_k} + conj(a_k) delta_{x_k^-1}.  Infinite sums
over the coefficient families are taken from closed forms, never from
samples.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np
from scipy.special import zeta

from .free_words import DEFAULT_CAP, IDENTITY, ReducedWord, ResourceCapError, ball, count_words

TOL = 1e-9
GAMMA_TOL = 1e-12  # slack on the gamma <= 1 boundary for rounding in beta^2 - sum |a|^4

Evaluator = Callable[[ReducedWord], complex]


# -- Haagerup functions -----------------------------------------------------
@dataclass(frozen=True)
class HaagerupParam:
    r: float
    k: int

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError(f"r must lie in (0, 1), got {self.r}")
        if self.k < 1:
            raise ValueError(f"rank must be >= 1, got {self.k}")


def haagerup_eval(p: HaagerupParam, w: ReducedWord) -> float:
    if w.max_generator() > p.k:
        raise ValueError(f"word {w} uses a generator beyond x{p.k}")
    return p.r ** len(w)


@dataclass(frozen=True)
class L2Report:
    q: float
    norm_sq: Optional[float]
    in_l2: bool


def haagerup_l2_report(p: HaagerupParam) -> L2Report:
    """Squared l2 norm of r^|x|, identity term included.

    Summing r^(2n) over the 2k(2k-1)^(n-1) words of length n gives
    1 + 2k/(2k-1) * q/(1-q) with q = (2k-1) r^2, finite iff q < 1.
    """
    k2 = 2 * p.k - 1
    q = k2 * p.r**2
    if q >= 1:
        return L2Report(q, None, False)
    return L2Report(q, 1.0 + (2 * p.k / k2) * q / (1.0 - q), True)


def haagerup_l2_partial_sum(p: HaagerupParam, N: int) -> float:
    """sum over |x| <= N of r^(2|x|), by word counts."""
    return math.fsum(count_words(p.k, n, max_value=None) * p.r ** (2 * n) for n in range(N + 1))


def haagerup_l2_tail_bound(p: HaagerupParam, N: int) -> float:
    q = (2 * p.k - 1) * p.r**2
    return (2 * p.k / (2 * p.k - 1)) * q ** (N + 1) / (1 - q)


def haagerup_min_l2_power(p: HaagerupParam) -> int:
    """Smallest m >= 1 with (2k-1) r^(2m) < 1, i.e. f_r^m in l2."""
    k2 = 2 * p.k - 1
    if k2 == 1:
        return 1
    m = max(math.floor(math.log(k2) / (2 * math.log(1 / p.r))) + 1, 1)
    # settle the floating estimate with exact rational arithmetic on r
    r2 = Fraction(p.r) ** 2
    while m > 1 and k2 * r2 ** (m - 1) < 1:
        m -= 1
    while not k2 * r2**m < 1:
        m += 1
    return m


class Regime(str, enum.Enum):
    BELOW = "below"
    AT = "at"
    ABOVE = "above"


@dataclass(frozen=True)
class ChiReport:
    pairing: float
    haagerup_bound: float
    regime: Regime
    first_violation: Optional[int] = None  # smallest n with pairing > bound, regime above only


def _log_pairing(p: HaagerupParam, n: int) -> float:
    return n * math.log(p.r) + math.log(2 * p.k) + (n - 1) * math.log(2 * p.k - 1)


def _log_bound(p: HaagerupParam, n: int) -> float:
    return math.log(n + 1) + 0.5 * (math.log(2 * p.k) + (n - 1) * math.log(2 * p.k - 1))


def chi_pairing_report(p: HaagerupParam, n: int, scan: int = 200, rtol: float = 1e-12) -> ChiReport:
    """Pairing of f_r with the length-n sphere indicator against the Haagerup bound.

    The bound (n+1) ||chi_n||_2 is what any element of B_lambda must satisfy;
    for r above 1/sqrt(2k-1) the pairing eventually exceeds it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lp, lb = _log_pairing(p, n), _log_bound(p, n)
    if lb < 700:
        # small enough to evaluate directly from the sphere size
        size = count_words(p.k, n, max_value=None)
        pairing = p.r**n * size if lp < 700 else math.inf
        bound = (n + 1) * math.sqrt(size)
    else:
        pairing = math.exp(lp) if lp < 700 else math.inf
        bound = math.inf
    crit = 1.0 / math.sqrt(2 * p.k - 1)
    if math.isclose(p.r, crit, rel_tol=rtol):
        regime = Regime.AT
    else:
        regime = Regime.ABOVE if p.r > crit else Regime.BELOW
    first = None
    if regime is Regime.ABOVE:
        first = next((m for m in range(1, scan + 1) if _log_pairing(p, m) > _log_bound(p, m)), None)
    return ChiReport(pairing, bound, regime, first)


# -- free products --------------------------------------------------------
FactorFunction = Callable[[int], complex]


class MissingFactorError(KeyError):
    pass


def free_product_eval(factors: Union[Mapping[int, FactorFunction], Sequence[FactorFunction]],
                      w: ReducedWord) -> complex:
    """phi(x) = prod of phi_{i}(m) over the syllables x_i^m of the reduced word."""
    out: complex = 1.0
    for gen, exp in w.syllables:
        if isinstance(factors, Mapping):
            phi = factors.get(gen)
        else:
            phi = factors[gen - 1] if gen <= len(factors) else None
        if phi is None:
            raise MissingFactorError(f"no factor function for generator x{gen}")
        out *= phi(exp)
    return out


def haagerup_factor(r: float) -> FactorFunction:
    return lambda n: r ** abs(n)


# -- free Riesz products -----------------------------------------------------
class Kind(str, enum.Enum):
    FINITE = "finite"
    GEOMETRIC = "geometric"  # a_k = c q^(k-1)
    POWER_LAW = "power_law"  # a_k = c k^(-p)
    LOG_LAW = "log_law"  # a_k = c / log(10+k)^p


class InconsistentFlagsError(ValueError):
    pass


@dataclass(frozen=True)
class RieszFlags:
    beta_finite: bool
    gamma_finite: bool
    gamma_le_one: bool
    all_powers_diverge: bool


@dataclass(frozen=True)
class RieszSpec:
    kind: Kind
    params: tuple = ()
    flags: Optional[RieszFlags] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        params = tuple(self.params)
        if self.kind is Kind.FINITE:
            params = tuple(complex(a) for a in params)
            if not params:
                raise ValueError("finite spec needs at least one coefficient")
            for a in params:
                if not 0 < abs(a) <= 0.5 + 1e-15:
                    raise ValueError(f"coefficient {a} must satisfy 0 < |a| <= 1/2")
        else:
            if len(params) != 2:
                raise ValueError(f"{self.kind.value} spec needs (c, exponent)")
            c, e = complex(params[0]), float(params[1])
            if not 0 < abs(c) <= 0.5 + 1e-15:
                raise ValueError("|c| must lie in (0, 1/2]")
            if self.kind is Kind.GEOMETRIC and not 0 < e <= 1:
                raise ValueError("geometric ratio q must lie in (0, 1]")
            if self.kind in (Kind.POWER_LAW, Kind.LOG_LAW) and e < 0:
                raise ValueError("decay exponent must be >= 0")
            params = (c, e)
        object.__setattr__(self, "params", params)
        if self.flags is not None:
            actual = riesz_flags(self)
            if actual != self.flags:
                raise InconsistentFlagsError(
                    f"declared flags {self.flags} disagree with the {self.kind.value} family: {actual}")

    @classmethod
    def finite(cls, *alphas) -> "RieszSpec":
        return cls(Kind.FINITE, alphas)

    @classmethod
    def geometric(cls, c, q) -> "RieszSpec":
        return cls(Kind.GEOMETRIC, (c, q))

    @classmethod
    def constant(cls, c) -> "RieszSpec":
        return cls(Kind.GEOMETRIC, (c, 1.0))

    @classmethod
    def power_law(cls, c, p) -> "RieszSpec":
        return cls(Kind.POWER_LAW, (c, p))

    @classmethod
    def log_law(cls, c, p) -> "RieszSpec":
        return cls(Kind.LOG_LAW, (c, p))

    def alpha(self, k: int) -> complex:
        if k < 1:
            raise ValueError("generator index must be >= 1")
        if self.kind is Kind.FINITE:
            return self.params[k - 1] if k <= len(self.params) else 0j
        c, e = self.params
        if self.kind is Kind.GEOMETRIC:
            return c * e ** (k - 1)
        if self.kind is Kind.POWER_LAW:
            return c * k ** (-e)
        return c / math.log(10 + k) ** e

    def support_size(self) -> Optional[int]:
        return len(self.params) if self.kind is Kind.FINITE else None


def riesz_eval(spec: RieszSpec, w: ReducedWord) -> complex:
    out: complex = 1.0
    for gen, exp in w.syllables:
        if abs(exp) >= 2:
            return 0j
        a = spec.alpha(gen)
        out *= a if exp == 1 else a.conjugate()
        if out == 0:
            return 0j
    return out


def riesz_factors(spec: RieszSpec) -> Callable[[int], FactorFunction]:
    """Factor function v_k on the k-th copy of Z."""
    def factor(k: int) -> FactorFunction:
        a = spec.alpha(k)
        return lambda n: 1.0 if n == 0 else a if n == 1 else a.conjugate() if n == -1 else 0j
    return factor


def riesz_power(spec: RieszSpec, m: int) -> RieszSpec:
    """Spec whose coefficients are a_k^m; every family is closed under powers."""
    if m < 1:
        raise ValueError("power must be >= 1")
    if m == 1:
        return spec
    if spec.kind is Kind.FINITE:
        return RieszSpec(Kind.FINITE, tuple(a**m for a in spec.params))
    c, e = spec.params
    new_e = e**m if spec.kind is Kind.GEOMETRIC else e * m
    return RieszSpec(spec.kind, (c**m, new_e))


def _sums(spec: RieszSpec) -> tuple[float, float]:
    """(sum |a_k|^2, sum |a_k|^4), either possibly infinite."""
    if spec.kind is Kind.FINITE:
        a2 = [abs(a) ** 2 for a in spec.params]
        return math.fsum(a2), math.fsum(x * x for x in a2)
    c, e = spec.params
    c2 = abs(c) ** 2
    if spec.kind is Kind.GEOMETRIC:
        if e >= 1:
            return math.inf, math.inf
        return c2 / (1 - e**2), c2**2 / (1 - e**4)
    if spec.kind is Kind.POWER_LAW:
        s2 = c2 * float(zeta(2 * e)) if 2 * e > 1 else math.inf
        s4 = c2**2 * float(zeta(4 * e)) if 4 * e > 1 else math.inf
        return s2, s4
    # 1/log(10+k)^p decays slower than any power of k
    return math.inf, math.inf


def riesz_beta_gamma(spec: RieszSpec) -> tuple[float, float]:
    """beta = sum |a_k|^2 and gamma = sum_{k != l} |a_k|^2 |a_l|^2 = beta^2 - sum |a_k|^4."""
    b, s4 = _sums(spec)
    if math.isinf(b):
        return math.inf, math.inf
    return b, max(b * b - s4, 0.0)


def _all_powers_diverge(spec: RieszSpec) -> bool:
    if spec.kind is Kind.FINITE:
        return False
    c, e = spec.params
    if spec.kind is Kind.GEOMETRIC:
        return e >= 1
    if spec.kind is Kind.POWER_LAW:
        return e == 0  # sum k^(-2mp) converges once 2mp > 1
    return True


def riesz_flags(spec: RieszSpec) -> RieszFlags:
    b, g = riesz_beta_gamma(spec)
    return RieszFlags(
        beta_finite=not math.isinf(b),
        gamma_finite=not math.isinf(g),
        gamma_le_one=g <= 1 + GAMMA_TOL,
        all_powers_diverge=_all_powers_diverge(spec),
    )


class RieszClass(str, enum.Enum):
    IN_L2 = "in_l2"
    IN_B_LAMBDA = "in_B_lambda"
    SINGULAR = "singular_to_B_lambda"
    OUTSIDE_BOUND = "outside_B_lambda_bound"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Classification:
    label: RieszClass
    beta: float
    gamma: float


def riesz_classify(spec: RieszSpec) -> Classification:
    b, g = riesz_beta_gamma(spec)
    finite = not math.isinf(b)
    if finite and g < 1:
        label = RieszClass.IN_L2
    elif finite and g <= 1 + GAMMA_TOL:
        label = RieszClass.IN_B_LAMBDA
    elif not finite:
        label = RieszClass.SINGULAR
    elif b > 2:
        label = RieszClass.OUTSIDE_BOUND
    else:
        label = RieszClass.UNKNOWN
    return Classification(label, b, g)


def powers_all_singular(spec: RieszSpec) -> bool:
    """Whether every power R^m is singular: a_k -> 0 while sum |a_k|^(2m) diverges for all m."""
    if spec.kind is Kind.FINITE:
        return False
    c, e = spec.params
    tends_to_zero = {
        Kind.GEOMETRIC: e < 1,
        Kind.POWER_LAW: e > 0,
        Kind.LOG_LAW: e > 0,
    }[spec.kind]
    return tends_to_zero and _all_powers_diverge(spec)


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def _complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if not re.fullmatch(rf"(?:{_NUM})?(?:[-+]?(?:{_NUM})?i)?", t) or not t:
        raise ValueError(f"bad complex number {text!r}")
    t = re.sub(r"(^|[-+])i$", r"\g<1>1i", t)
    return complex(t.replace("i", "j"))


def parse_riesz_spec(text: str) -> RieszSpec:
    """Text form: ``finite:0.5,0.3+0.1i``, ``geometric:c=0.5,q=0.5``,
    ``constant:c=0.5``, ``powerlaw:c=0.5,p=0.25``, ``loglaw:c=0.5,p=1``."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"missing ':' in Riesz spec {text!r}")
    kind = kind.strip().lower()
    if kind == "finite":
        return RieszSpec.finite(*[_complex(t) for t in rest.split(",")])
    kv = {}
    for item in rest.split(","):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"expected key=value, got {item!r}")
        kv[key.strip()] = val.strip()
    try:
        if kind == "geometric":
            return RieszSpec.geometric(_complex(kv["c"]), float(kv["q"]))
        if kind == "constant":
            return RieszSpec.constant(_complex(kv["c"]))
        if kind in ("powerlaw", "power_law"):
            return RieszSpec.power_law(_complex(kv["c"]), float(kv["p"]))
        if kind in ("loglaw", "log_law"):
            return RieszSpec.log_law(_complex(kv["c"]), float(kv["p"]))
    except KeyError as e:
        raise ValueError(f"missing parameter {e.args[0]!r} for {kind}") from None
    raise ValueError(f"unknown Riesz family {kind!r}")


# -- positive definiteness certificates ------------------------------------------
@dataclass(frozen=True)
class GramCertificate:
    word_set_size: int
    min_eigenvalue: float
    tolerance: float
    hermitian_deviation: float = 0.0

    @property
    def passed(self) -> bool:
        return self.min_eigenvalue >= -self.tolerance


@lru_cache(maxsize=16)
def _gram_words(k: int, L: int, cap: int) -> tuple[tuple[ReducedWord, ...], tuple[tuple[ReducedWord, ...], ...]]:
    words = ball(k, L, cap)
    inv = [w.inverse() for w in words]
    return words, tuple(tuple(a * t for t in words) for a in inv)


def gram_matrix(f: Evaluator, k: int, L: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """[f(s^-1 t)] over all words s, t of length <= L."""
    words, prods = _gram_words(k, L, cap)
    if len(words) ** 2 > cap:
        raise ResourceCapError(f"Gram matrix of {len(words)} words exceeds cap {cap}")
    cache: dict[ReducedWord, complex] = {}
    n = len(words)
    G = np.empty((n, n), dtype=complex)
    for i, row in enumerate(prods):
        for j, w in enumerate(row):
            v = cache.get(w)
            if v is None:
                v = cache[w] = complex(f(w))
            G[i, j] = v
    return G


def gram_psd_check(f: Evaluator, k: int, L: int, tol: float = TOL, cap: int = DEFAULT_CAP) -> GramCertificate:
    G = gram_matrix(f, k, L, cap)
    dev = float(np.abs(G - G.conj().T).max())
    w = np.linalg.eigvalsh(0.5 * (G + G.conj().T))
    return GramCertificate(len(G), float(w[0]), tol, dev)


def exploding_control(base: float = 1.5) -> Evaluator:
    """u(e) = 1, u(x) = base^|x| otherwise: violates |u| <= 1, hence not positive definite."""
    return lambda w: 1.0 if w.is_identity() else base ** len(w)


# -- general Haagerup functions -------------------------------------------
@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str


def general_haagerup_validate(u: Evaluator, words, tol: float = TOL) -> list[Violation]:
    """Check u(e)=1, |u| <= 1, conj u(x) = u(x^-1) and u(xy) = u(x)u(y) when |xy| = |x|+|y|."""
    words = list(dict.fromkeys(words))
    wset = set(words)
    if IDENTITY not in wset:
        raise ValueError("word set must contain e")
    if any(w.inverse() not in wset for w in words):
        raise ValueError("word set must be closed under inverses")
    vals = {w: complex(u(w)) for w in words}
    out: list[Violation] = []
    if abs(vals[IDENTITY] - 1) > tol:
        out.append(Violation("unit", (IDENTITY,), f"u(e) = {vals[IDENTITY]}"))
    for w in words:
        if abs(vals[w]) > 1 + tol:
            out.append(Violation("contractive", (w,), f"|u({w})| = {abs(vals[w])}"))
    for w in words:
        if abs(vals[w].conjugate() - vals[w.inverse()]) > tol:
            out.append(Violation("hermitian", (w,), f"conj u({w}) != u({w.inverse()})"))
    for x in words:
        for y in words:
            xy = x * y
            if xy in wset and len(xy) == len(x) + len(y) and not (x.is_identity() or y.is_identity()):
                if abs(vals[xy] - vals[x] * vals[y]) > tol:
                    out.append(Violation("multiplicative", (x, y),
                                         f"u({xy}) = {vals[xy]} but u({x})u({y}) = {vals[x] * vals[y]}"))
    return out
