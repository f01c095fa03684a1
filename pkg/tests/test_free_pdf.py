import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsalg import free_pdf as F
from fsalg.free_words import IDENTITY, ReducedWord, count_words, enumerate_words, iter_words


def random_word(rng, k, max_len):
    letters = []
    for _ in range(int(rng.integers(0, max_len + 1))):
        a = int(rng.integers(1, k + 1)) * int(rng.choice([-1, 1]))
        if letters and letters[-1] == -a:
            continue
        letters.append(a)
    return ReducedWord.from_letters(letters)


words_st = st.lists(st.integers(1, 4).flatmap(lambda g: st.sampled_from([g, -g])), max_size=12) \
    .map(ReducedWord.from_letters)
alpha_st = st.complex_numbers(max_magnitude=0.5, allow_nan=False, allow_infinity=False) \
    .filter(lambda z: abs(z) > 1e-3)


# -- Haagerup functions -----------------------------------------------------
def test_haagerup_param_validation():
    for r in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            F.HaagerupParam(r, 2)
    with pytest.raises(ValueError):
        F.HaagerupParam(0.5, 0)
    with pytest.raises(ValueError):
        F.haagerup_eval(F.HaagerupParam(0.5, 1), ReducedWord.parse("x2"))


def test_haagerup_eval():
    p = F.HaagerupParam(0.5, 2)
    assert F.haagerup_eval(p, IDENTITY) == 1
    assert F.haagerup_eval(p, ReducedWord.parse("x1^2.x2^-1")) == 0.125


def test_l2_report_examples():
    rep = F.haagerup_l2_report(F.HaagerupParam(0.5, 2))
    assert rep.q == pytest.approx(0.75) and rep.in_l2
    assert rep.norm_sq == pytest.approx(5.0, abs=1e-12)
    crit = F.haagerup_l2_report(F.HaagerupParam(1 / math.sqrt(3) + 1e-12, 2))
    assert not crit.in_l2 and crit.norm_sq is None
    # Z: sum r^{2|n|} = (1 + r^2)/(1 - r^2)
    assert F.haagerup_l2_report(F.HaagerupParam(0.5, 1)).norm_sq == pytest.approx(1.25 / 0.75)


@pytest.mark.parametrize("k,r", [(1, 0.3), (2, 0.5), (2, 0.55), (3, 0.4)])
def test_partial_sums_by_enumeration(k, r):
    p = F.HaagerupParam(r, k)
    for N in range(5):
        brute = math.fsum(r ** (2 * len(w)) for w in enumerate_words(k, N) if len(w) <= N)
        brute = math.fsum(r ** (2 * len(w)) for n in range(N + 1) for w in iter_words(k, n))
        assert F.haagerup_l2_partial_sum(p, N) == pytest.approx(brute, rel=1e-13)
    rep = F.haagerup_l2_report(p)
    for N in (0, 5, 30):
        total = F.haagerup_l2_partial_sum(p, N) + F.haagerup_l2_tail_bound(p, N)
        assert total == pytest.approx(rep.norm_sq, rel=1e-12)


def test_partial_sum_gap_at_thirty():
    p = F.HaagerupParam(0.5, 2)
    gap = F.haagerup_l2_report(p).norm_sq - F.haagerup_l2_partial_sum(p, 30)
    assert gap == pytest.approx(F.haagerup_l2_tail_bound(p, 30), rel=1e-9)
    assert gap > 1e-6  # geometric tail (4/3) 0.75^31 / 0.25


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.floats(0.01, 0.99))
def test_min_power_matches_direct_inequality(k, r):
    p = F.HaagerupParam(r, k)
    m = F.haagerup_min_l2_power(p)
    exact = Fraction(r)
    assert (2 * k - 1) * exact ** (2 * m) < 1
    assert m == 1 or not (2 * k - 1) * exact ** (2 * (m - 1)) < 1


def test_min_power_examples():
    assert F.haagerup_min_l2_power(F.HaagerupParam(0.8, 2)) == 3
    assert F.haagerup_min_l2_power(F.HaagerupParam(0.5, 2)) == 1
    assert F.haagerup_min_l2_power(F.HaagerupParam(0.99, 1)) == 1


def test_chi_pairing_examples():
    rep = F.chi_pairing_report(F.HaagerupParam(0.5, 2), 2)
    assert rep.pairing == pytest.approx(3.0, abs=1e-12)
    assert rep.pairing == pytest.approx(sum(0.5 ** len(w) for w in iter_words(2, 2)))
    assert rep.haagerup_bound == pytest.approx(3 * math.sqrt(12))
    assert rep.regime is F.Regime.BELOW and rep.first_violation is None
    assert F.chi_pairing_report(F.HaagerupParam(1 / math.sqrt(3), 2), 3).regime is F.Regime.AT
    with pytest.raises(ValueError):
        F.chi_pairing_report(F.HaagerupParam(0.5, 2), 0)


@pytest.mark.parametrize("k,r", [(2, 0.6), (2, 0.9), (3, 0.5)])
def test_chi_first_violation_by_counts(k, r):
    rep = F.chi_pairing_report(F.HaagerupParam(r, k), 1)
    assert rep.regime is F.Regime.ABOVE
    n = rep.first_violation
    assert n is not None

    def over(m):
        c = count_words(k, m, max_value=None)
        return r**m * c > (m + 1) * math.sqrt(c)

    assert over(n) and not any(over(m) for m in range(1, n))


def test_chi_large_n_is_finite_or_inf():
    rep = F.chi_pairing_report(F.HaagerupParam(0.9, 3), 5000)
    assert rep.pairing == math.inf or rep.pairing > rep.haagerup_bound


# -- free products ---------------------------------------------------------------
def test_free_product_matches_haagerup(rng):
    p = F.HaagerupParam(0.7, 3)
    fac = [F.haagerup_factor(0.7)] * 3
    for _ in range(500):
        w = random_word(rng, 3, 15)
        assert abs(F.free_product_eval(fac, w) - F.haagerup_eval(p, w)) <= 1e-12


def test_free_product_missing_factor():
    with pytest.raises(F.MissingFactorError):
        F.free_product_eval([F.haagerup_factor(0.5)], ReducedWord.parse("x1.x2"))
    with pytest.raises(F.MissingFactorError):
        F.free_product_eval({2: F.haagerup_factor(0.5)}, ReducedWord.parse("x1"))
    assert F.free_product_eval({}, IDENTITY) == 1


def test_riesz_eval_matches_free_product(rng):
    spec = F.RieszSpec.finite(0.5, 0.3 + 0.2j, -0.1j)
    factor = F.riesz_factors(spec)
    fac = {k: factor(k) for k in range(1, 5)}
    for _ in range(500):
        w = random_word(rng, 4, 8)
        assert abs(F.riesz_eval(spec, w) - F.free_product_eval(fac, w)) <= 1e-15


def test_riesz_eval_examples():
    spec = F.RieszSpec.finite(0.5, 0.3)
    assert F.riesz_eval(spec, ReducedWord.parse("x1.x2")) == pytest.approx(0.15)
    assert F.riesz_eval(spec, ReducedWord.parse("x1^2")) == 0
    assert F.riesz_eval(spec, ReducedWord.parse("x3")) == 0
    assert F.riesz_eval(spec, IDENTITY) == 1
    z = F.RieszSpec.finite(0.3 + 0.4j)
    assert F.riesz_eval(z, ReducedWord.parse("x1^-1")) == pytest.approx(0.3 - 0.4j)


@settings(max_examples=300, deadline=None)
@given(st.lists(alpha_st, min_size=1, max_size=4), words_st, st.integers(1, 5))
def test_power_identity_finite(alphas, w, m):
    spec = F.RieszSpec.finite(*alphas)
    lhs = F.riesz_eval(F.riesz_power(spec, m), w)
    assert abs(lhs - F.riesz_eval(spec, w) ** m) <= 1e-12


def test_power_identity_families(rng):
    for spec in (F.RieszSpec.geometric(0.5, 0.5), F.RieszSpec.power_law(0.4j, 0.7),
                 F.RieszSpec.log_law(-0.5, 1), F.RieszSpec.constant(0.5)):
        for m in (2, 3):
            pw = F.riesz_power(spec, m)
            for _ in range(100):
                w = random_word(rng, 6, 10)
                assert abs(F.riesz_eval(pw, w) - F.riesz_eval(spec, w) ** m) <= 1e-12


# -- Riesz sums and classification ------------------------------------------------
def test_beta_gamma_closed_forms():
    b, g = F.riesz_beta_gamma(F.RieszSpec.geometric(0.5, 0.5))
    assert abs(b - 1 / 3) <= 1e-12 and abs(g - 2 / 45) <= 1e-12
    b, _ = F.riesz_beta_gamma(F.RieszSpec.power_law(0.5, 1))
    assert b == pytest.approx(0.25 * math.pi**2 / 6, rel=1e-12)
    assert F.riesz_beta_gamma(F.RieszSpec.constant(0.5)) == (math.inf, math.inf)


@pytest.mark.parametrize("spec", [F.RieszSpec.geometric(0.5, 0.5), F.RieszSpec.geometric(0.3j, 0.9),
                                  F.RieszSpec.power_law(0.5, 1.0), F.RieszSpec.power_law(0.2, 0.8)])
def test_beta_gamma_truncated_sums(spec):
    a2 = np.array([abs(spec.alpha(k)) ** 2 for k in range(1, 200001)])
    b, g = F.riesz_beta_gamma(spec)
    assert b == pytest.approx(a2.sum(), rel=1e-3)
    assert g == pytest.approx(a2.sum() ** 2 - (a2**2).sum(), rel=3e-3)


@settings(max_examples=200, deadline=None)
@given(st.lists(alpha_st, min_size=1, max_size=8))
def test_gamma_pair_sum(alphas):
    a2 = [abs(a) ** 2 for a in alphas]
    brute = sum(a2[i] * a2[j] for i in range(len(a2)) for j in range(len(a2)) if i != j)
    assert F.riesz_beta_gamma(F.RieszSpec.finite(*alphas))[1] == pytest.approx(brute, abs=1e-12)


def test_classification_examples():
    R = F.RieszClass
    assert F.riesz_classify(F.RieszSpec.geometric(0.5, 0.5)).label is R.IN_L2
    assert F.riesz_classify(F.RieszSpec.finite(0.5, 0.5)).label is R.IN_L2
    assert F.riesz_classify(F.RieszSpec.constant(0.5)).label is R.SINGULAR
    assert F.riesz_classify(F.RieszSpec.power_law(0.5, 0.25)).label is R.SINGULAR
    assert F.riesz_classify(F.RieszSpec.log_law(0.5, 1)).label is R.SINGULAR
    assert F.riesz_classify(F.RieszSpec.finite(*[0.5] * 12)).label is R.OUTSIDE_BOUND
    assert F.riesz_classify(F.RieszSpec.finite(*[0.5] * 8)).label is R.UNKNOWN
    # five coefficients of modulus 20^(-1/4): gamma = 20 * (1/20) = 1
    a = 20 ** -0.25
    c = F.riesz_classify(F.RieszSpec.finite(*[a] * 5))
    assert c.gamma == pytest.approx(1.0, abs=1e-12)
    assert c.label is R.IN_B_LAMBDA


def test_powers_all_singular():
    assert F.powers_all_singular(F.RieszSpec.log_law(0.5, 1))
    assert not F.powers_all_singular(F.RieszSpec.constant(0.5))  # a_k does not tend to 0
    assert not F.powers_all_singular(F.RieszSpec.power_law(0.5, 0.25))  # R^4 is in l2
    assert not F.powers_all_singular(F.RieszSpec.finite(0.5))
    spec = F.RieszSpec.power_law(0.5, 0.25)
    assert F.riesz_classify(F.riesz_power(spec, 4)).label is F.RieszClass.IN_L2


def test_flags_consistency():
    spec = F.RieszSpec.geometric(0.5, 0.5)
    flags = F.riesz_flags(spec)
    assert flags == F.RieszFlags(True, True, True, False)
    F.RieszSpec(F.Kind.GEOMETRIC, (0.5, 0.5), flags)
    with pytest.raises(F.InconsistentFlagsError):
        F.RieszSpec(F.Kind.GEOMETRIC, (0.5, 1.0), flags)
    with pytest.raises(F.InconsistentFlagsError):
        F.RieszSpec(F.Kind.LOG_LAW, (0.5, 1.0), F.RieszFlags(True, True, True, True))


def test_spec_validation():
    for bad in [(), (0.6,), (0,)]:
        with pytest.raises(ValueError):
            F.RieszSpec.finite(*bad)
    with pytest.raises(ValueError):
        F.RieszSpec.geometric(0.5, 1.5)
    with pytest.raises(ValueError):
        F.RieszSpec.power_law(0.5, -1)
    with pytest.raises(ValueError):
        F.RieszSpec.finite(0.5).alpha(0)


def test_parse_riesz_spec():
    assert F.parse_riesz_spec("finite:0.5,0.3+0.1i").params == (0.5, 0.3 + 0.1j)
    assert F.parse_riesz_spec("finite:0.5i").params == (0.5j,)
    assert F.parse_riesz_spec("geometric:c=0.5,q=0.5") == F.RieszSpec.geometric(0.5, 0.5)
    assert F.parse_riesz_spec("constant:c=0.5") == F.RieszSpec.constant(0.5)
    assert F.parse_riesz_spec("powerlaw:c=0.5,p=0.25") == F.RieszSpec.power_law(0.5, 0.25)
    assert F.parse_riesz_spec("loglaw:c=0.5,p=1") == F.RieszSpec.log_law(0.5, 1)
    for bad in ("finite", "finite:0.5,abc", "geometric:c=0.5", "wavy:c=1", "constant:0.5", "finite:0.9"):
        with pytest.raises(ValueError):
            F.parse_riesz_spec(bad)


# -- Gram certificates -----------------------------------------------------------
@pytest.mark.parametrize("r", [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_gram_haagerup_passes(r, k):
    p = F.HaagerupParam(r, k)
    cert = F.gram_psd_check(lambda w: F.haagerup_eval(p, w), k, 3)
    assert cert.passed and cert.hermitian_deviation == 0
    assert cert.word_set_size == sum(count_words(k, n) for n in range(4))


@pytest.mark.parametrize("alphas", [(0.5,), (0.5, 0.5), (0.5, 0.3j, -0.2), (0.5 * np.exp(1j), 0.1, 0.5j)])
def test_gram_riesz_passes(alphas):
    spec = F.RieszSpec.finite(*alphas)
    cert = F.gram_psd_check(lambda w: F.riesz_eval(spec, w), len(alphas), 3)
    assert cert.passed and cert.hermitian_deviation <= 1e-15


def test_gram_matches_direct_construction():
    f = lambda w: 0.4 ** len(w) * (1 + 0.1 * w.max_generator())
    words = [w for n in range(3) for w in iter_words(2, n)]
    direct = np.array([[f(s.inverse() * t) for t in words] for s in words])
    assert np.allclose(F.gram_matrix(f, 2, 2), direct)


def test_negative_controls():
    cert = F.gram_psd_check(F.exploding_control(), 2, 3)
    assert not cert.passed and cert.min_eigenvalue < -0.01
    # on Z, 1 + a(z + 1/z) is a positive measure only when |a| <= 1/2
    riesz_like = lambda w: {0: 1.0, 1: 0.9}.get(len(w), 0.0)
    assert not F.gram_psd_check(riesz_like, 1, 2).passed


def test_gram_cap():
    from fsalg.free_words import ResourceCapError
    with pytest.raises(ResourceCapError):
        F.gram_matrix(lambda w: 1.0, 3, 3, cap=1000)


def test_general_haagerup_validate():
    words = [w for n in range(3) for w in iter_words(2, n)]
    assert F.general_haagerup_validate(lambda w: 0.5 ** len(w), words) == []
    spec = F.RieszSpec.finite(0.5, 0.3j)
    # Riesz products vanish on x1^2 while u(x1)^2 != 0
    viol = F.general_haagerup_validate(lambda w: F.riesz_eval(spec, w), words)
    assert viol and {v.axiom for v in viol} == {"multiplicative"}
    axioms = {v.axiom for v in F.general_haagerup_validate(F.exploding_control(), words)}
    assert axioms == {"contractive"}
    assert {v.axiom for v in F.general_haagerup_validate(lambda w: 0.5j ** len(w), words)} >= {"hermitian"}
    assert {v.axiom for v in F.general_haagerup_validate(lambda w: 0.5, words)} >= {"unit"}
    with pytest.raises(ValueError):
        F.general_haagerup_validate(lambda w: 1.0, [ReducedWord.parse("x1")])
    with pytest.raises(ValueError):
        F.general_haagerup_validate(lambda w: 1.0, [IDENTITY, ReducedWord.parse("x1")])


def test_gram_examples():
    p = F.HaagerupParam(0.5, 2)
    cert = F.gram_psd_check(lambda w: F.haagerup_eval(p, w), 2, 2)
    assert cert.word_set_size == 17 and cert.passed  # 1 + 4 + 12 words of length <= 2
    ones = F.gram_psd_check(lambda w: 1.0, 2, 2)
    assert abs(ones.min_eigenvalue) <= 1e-12 and ones.passed
    assert F.gram_psd_check(lambda w: F.riesz_eval(F.RieszSpec.finite(0.5, 0.5), w), 2, 2).passed


def test_validate_axiom_examples():
    words = [w for n in range(3) for w in iter_words(1, n)]
    u = lambda w: 0.9 if w.is_identity() else 0.5 ** len(w)
    assert [v.axiom for v in F.general_haagerup_validate(u, words)] == ["unit"]
    table = {0: 1.0, 1: 0.6, 2: 0.5}
    viol = F.general_haagerup_validate(lambda w: table[len(w)], words)
    assert {v.axiom for v in viol} == {"multiplicative"}
    x1 = ReducedWord.parse("x1")
    assert any(v.witness == (x1, x1) for v in viol)


def test_riesz_power_examples():
    spec = F.RieszSpec.constant(0.5)
    assert F.riesz_power(spec, 2).alpha(7) == 0.25
    assert F.riesz_power(spec, 1) is spec
    fin = F.RieszSpec.finite(0.5, 0.3)
    assert F.riesz_eval(F.riesz_power(fin, 2), ReducedWord.parse("x1.x2")) == pytest.approx(0.0225)
    with pytest.raises(ValueError):
        F.riesz_power(fin, 0)


@pytest.mark.parametrize("spec", [F.RieszSpec.log_law(0.5, 1), F.RieszSpec.log_law(0.3j, 2.5)])
def test_singular_powers_stay_singular(spec):
    assert F.powers_all_singular(spec)
    for m in range(1, 6):
        assert F.riesz_classify(F.riesz_power(spec, m)).label is F.RieszClass.SINGULAR
