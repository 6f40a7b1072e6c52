"""The phase-transition sum Sigma(lam, v), its exact rearrangement, partial
Poisson mass against scipy, predictor exponents, and the regime classifier."""

import math
import random
from fractions import Fraction

import pytest
from scipy import stats

from multlab import (
    classify_regime,
    e_factor,
    g_exponent,
    h_k,
    key_identity_rhs,
    main_term,
    partial_poisson,
    poisson_params,
    poisson_sum,
    poisson_sum_log,
    prop14_rhs,
    v_sequence,
)
from multlab.poisson import LOG4


def test_poisson_sum_exact_values():
    assert poisson_sum(3, 1) == 3
    assert poisson_sum(2, 2) == Fraction(3)
    assert poisson_sum(1, 3) == Fraction(25, 18)
    assert poisson_sum(0, 5) == 0
    assert isinstance(poisson_sum(Fraction(1, 2), 4), Fraction)


def test_poisson_sum_float_matches_exact():
    rng = random.Random(1)
    for _ in range(40):
        lam = Fraction(rng.randint(0, 60), rng.randint(1, 7))
        v = rng.randint(1, 40)
        exact = poisson_sum(lam, v)
        approx = poisson_sum(float(lam), v)
        assert approx == pytest.approx(float(exact), rel=1e-12)


def test_poisson_sum_log_path_consistent():
    # v above the direct-float cap exercises the log-sum-exp branch
    exact = poisson_sum(Fraction(50), 180)
    via_log = poisson_sum(50.0, 180)
    assert via_log == pytest.approx(float(exact), rel=1e-9)
    assert poisson_sum_log(7.5, 20) == pytest.approx(
        math.log(poisson_sum(7.5, 20)), rel=1e-12
    )
    assert poisson_sum_log(0.0, 5) == -math.inf


def test_poisson_sum_validation():
    with pytest.raises(ValueError):
        poisson_sum(3, 0)
    with pytest.raises(ValueError):
        poisson_sum(-1, 3)
    with pytest.raises(ValueError):
        poisson_sum_log(3.0, 0)


def test_key_identity_example():
    assert key_identity_rhs(3, 2) == Fraction(21, 4)
    assert poisson_sum(3, 2) == Fraction(21, 4)
    assert key_identity_rhs(3.0, 2) == pytest.approx(5.25, rel=1e-15)


def test_key_identity_exact_property():
    rng = random.Random(9)
    for _ in range(60):
        lam = Fraction(rng.randint(0, 80), rng.randint(1, 9))
        v = rng.randint(1, 50)
        assert poisson_sum(lam, v) == key_identity_rhs(lam, v)


def test_key_identity_float_range_guard():
    with pytest.raises(ValueError):
        key_identity_rhs(800.0, 10)
    with pytest.raises(ValueError):
        key_identity_rhs(5.0, 200)


def test_partial_poisson_matches_scipy():
    for lam in (0.5, 3.0, 47.2, 1000.0):
        for z in (-3.0, -0.5, 0.0, 2.7, 31.0):
            k_top = math.floor(lam + z)
            if k_top < 0:
                continue
            ours = partial_poisson(lam, z)
            ref = stats.poisson.cdf(k_top, lam)
            assert ours == pytest.approx(ref, rel=1e-9)


def test_partial_poisson_edges():
    assert partial_poisson(4.0, -4.0) == pytest.approx(math.exp(-4.0), rel=1e-12)
    assert partial_poisson(4.0, -5.0) == 0.0
    with pytest.raises(ValueError):
        partial_poisson(0.0, 1.0)
    with pytest.raises(ValueError):
        partial_poisson(2e6, 0.0)


def test_partial_poisson_gaussian_limit():
    # median error shrinks like 1/sqrt(lam); Phi(+-1) reached to ~1%
    errs = [abs(partial_poisson(lam, 0.0) - 0.5) for lam in (1e2, 1e3, 1e4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.005
    phi1 = 0.8413447460685429
    assert partial_poisson(1e4, 100.0) == pytest.approx(phi1, abs=0.01)
    assert partial_poisson(1e4, -100.0) == pytest.approx(1 - phi1, abs=0.01)


def test_g_exponent_branches():
    assert g_exponent(0.5) == 0.5
    assert g_exponent(1.0) == pytest.approx(0.08607133205593431, abs=1e-15)
    # continuity at the branch point delta = 1/log 4
    left = g_exponent(1 / LOG4 - 1e-12)
    right = g_exponent(1 / LOG4 + 1e-12)
    assert left == pytest.approx(1 - 1 / LOG4, abs=1e-9)
    assert right == pytest.approx(1 - 1 / LOG4, abs=1e-9)
    for bad in (0.0, -0.2, 1.2):
        with pytest.raises(ValueError):
            g_exponent(bad)


def test_e_factor_branches():
    assert e_factor(100.0, 0.5) == pytest.approx(1 / LOG4 - 0.5)
    assert e_factor(100.0, 0.72) == pytest.approx(0.1)  # floor 1/sqrt(loglog y)
    assert e_factor(100.0, 1.0) == pytest.approx(
        1.0 / (1000.0 * (1 - 1 / LOG4) ** 2), rel=1e-12
    )
    # near the branch point the gap term loses to the 1/loglog floor
    assert e_factor(100.0, 1 / LOG4 + 1e-6) == pytest.approx(
        1.0 / (100.0**1.5 * 1e-2), rel=1e-9
    )
    with pytest.raises(ValueError):
        e_factor(0.0, 0.5)
    with pytest.raises(ValueError):
        e_factor(10.0, 0.0)


def test_main_term_closed_form_point():
    x = math.e**math.e
    # loglog y = 1 makes both the G power and E collapse: x * e^{-1}
    assert main_term(x, x, 0.5) == pytest.approx(math.exp(math.e - 1.0), rel=1e-12)
    with pytest.raises(ValueError):
        main_term(10.0, 2.0, 0.5)  # y <= e
    with pytest.raises(ValueError):
        main_term(10.0, 20.0, 0.5)  # x < y


def test_prop14_rhs_v1_collapse():
    x = math.exp(3.0)  # loglog y in [log 2, 2 log 2): v = 1, Sigma = lam
    for delta in (0.3, 0.8, 1.0):
        expected = x / 9.0 * 2.0 * delta * math.log(3.0)
        assert prop14_rhs(x, x, delta) == pytest.approx(expected, rel=1e-12)


def test_predictor_vs_prop14_window():
    # the two forms agree up to the envelope of Sigma: ratio stays moderate
    for delta in (0.3, 0.6, 0.9, 1.0):
        ratio = main_term(1e12, 1e6, delta) / prop14_rhs(1e12, 1e6, delta)
        assert 1e-2 <= ratio <= 1e2


def test_classify_regime_examples():
    assert classify_regime(100.0, 100, 0.1).regime == "iii"
    assert classify_regime(110.0, 100, 0.05).regime == "iii"  # ties go to iii
    assert classify_regime(50.0, 100, 0.1).regime == "i"
    assert classify_regime(200.0, 100, 0.3).regime == "ii"
    assert classify_regime(90.0, 100, 0.2).regime == "iv"
    assert classify_regime(121.0, 100, 0.3).regime == "v"


def test_classify_regime_report_consistency():
    rng = random.Random(12)
    seen = set()
    for _ in range(200):
        lam = rng.uniform(1.0, 400.0)
        v = rng.randint(1, 300)
        eps = rng.choice((0.05, 0.1, 0.3))
        rep = classify_regime(lam, v, eps)
        assert rep.regime in {"i", "ii", "iii", "iv", "v"}
        seen.add(rep.regime)
        assert rep.theta == lam - v
        assert rep.ratio == pytest.approx(
            math.exp(rep.log_exact_sum - rep.log_envelope), rel=1e-12
        )
        assert rep.log_last_term <= rep.log_exact_sum + 1e-12
    assert seen == {"i", "ii", "iii", "iv", "v"}


def test_classify_regime_validation():
    with pytest.raises(ValueError):
        classify_regime(10.0, 0, 0.1)
    with pytest.raises(ValueError):
        classify_regime(0.0, 5, 0.1)
    with pytest.raises(ValueError):
        classify_regime(10.0, 5, 1.0)


def test_h_k_examples():
    assert h_k(2, 1) == 1
    assert h_k(2, 2) == 2
    assert h_k(10, 5) == 1
    assert v_sequence(10, 9) == [9, 5, 4, 3, 2, 1, 0]
    with pytest.raises(ValueError):
        h_k(1, 1)  # ratio never drops to 1/2
    with pytest.raises(ValueError):
        h_k(0, 3)


def test_h_k_minimality():
    rng = random.Random(5)
    nontrivial = 0
    for _ in range(80):
        lam = Fraction(rng.randint(2, 60), rng.randint(1, 4))
        k = rng.randint(1, 30)

        def ratio(m):
            # lam^(k-m) k! / ((k-m)! lam^k), exactly
            r = Fraction(1)
            for i in range(1, m + 1):
                r = r * (k - i + 1) / lam
            return r

        try:
            n = h_k(lam, k)
        except ValueError:
            assert min(ratio(m) for m in range(1, k + 1)) > Fraction(1, 2)
            continue
        assert ratio(n) <= Fraction(1, 2)
        assert all(ratio(m) > Fraction(1, 2) for m in range(1, n))
        if n > 1:
            nontrivial += 1
    assert nontrivial >= 3


def test_v_sequence_regime_v_style():
    seq = v_sequence(500, 100)
    assert seq == list(range(100, 0, -1))
    assert seq[-1] <= 1
    with pytest.raises(ValueError):
        v_sequence(500, 0)


def test_poisson_params():
    p = poisson_params(5.0, 0.5)
    assert (p.lam, p.v, p.theta) == (5.0, 7, -2.0)
    with pytest.raises(ValueError):
        poisson_params(0.5, 0.5)  # v would be 0
    with pytest.raises(ValueError):
        poisson_params(5.0, 0.0)
    with pytest.raises(ValueError):
        poisson_params(5.0, 1.5)
