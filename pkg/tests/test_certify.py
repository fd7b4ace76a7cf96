import math

import mpmath
import numpy as np
import pytest

from qplane import certify, qmatrix, spectrum
from qplane.certify import MACHINE, AssumptionError
from qplane.qmatrix import IndexWindow

from conftest import LAMBDA_70_1

mpmath.mp.prec = 250

EPS = MACHINE.eps


def test_machine_constants():
    assert MACHINE.eps_r == 2.0 ** -52
    assert MACHINE.eps == math.sqrt(2.0) * (2.0 + 2.0 ** -52) * 2.0 ** -52
    assert MACHINE.eps <= 6.5e-16


def test_sum2_bound_values():
    assert certify.sum2_bound(1, 1, 0, 0, EPS) == 2 * EPS
    eta = 1e-10
    assert certify.sum2_bound(0, 0, eta, eta, EPS) == 2 * (eta * (1 + EPS))
    got = certify.sum2_bound(1, 2, 1e-16, 0, 6.5e-16)
    expected = 6.5e-16 * 3 + 1e-16 * (1 + 6.5e-16)
    assert got == pytest.approx(expected, rel=1e-15)
    with pytest.raises(ValueError):
        certify.sum2_bound(-1, 0, 0, 0, EPS)


def test_sumn_bound_m2_consistency():
    got = certify.sumn_bound([1, 1], [0, 0], EPS)
    assert 2 * EPS <= got <= 2 * EPS * (1 + 1e-8)


def test_sumn_bound_m141():
    got = certify.sumn_bound([1.0] * 141, [0.0] * 141, EPS)
    exact = float((
        (1 + mpmath.mpf(EPS)) ** 140 - 1) * 141)
    assert exact <= got <= exact * (1 + 1e-8)
    # ~ 141 * 140 * eps
    assert got == pytest.approx(141 * 140 * EPS, rel=1e-3)


def test_sumn_bound_zeros():
    assert certify.sumn_bound([0.0] * 5, [0.0] * 5, EPS) == 0.0


def test_sumn_bound_validation():
    with pytest.raises(ValueError):
        certify.sumn_bound([1.0], [0.0], EPS)
    with pytest.raises(ValueError):
        certify.sumn_bound([1.0, 1.0], [0.0], EPS)


def test_prod_bound_values():
    assert certify.prod_bound(1, 1, 0, EPS) == EPS
    assert certify.prod_bound(0, 123.0, 55.0, EPS) == 0.0
    got = certify.prod_bound(2, 0.5, 1e-13, EPS)
    assert got == pytest.approx(EPS + 2e-13 * (1 + EPS), rel=1e-15)


def test_alpha_beta_at_headline_size():
    n, d = 141, 1e-13
    a = certify.alpha_fn(n, d, 6.5e-16)
    b = certify.beta_fn(n, d, 6.5e-16)
    assert a <= 4 * d
    assert b <= 7 * d
    assert 0.0 <= a <= b
    # upper bounds of the exact expressions
    E = mpmath.mpf(6.5e-16)
    q = (1 + E) ** (n - 1) - 1
    a_exact = q + (1 + q) * (mpmath.mpf(d) * (1 + E) + E)
    b_exact = q + (1 + q) * (E + a_exact * (1 + E))
    assert mpmath.mpf(a) >= a_exact
    assert mpmath.mpf(b) >= b_exact
    assert mpmath.mpf(a) <= a_exact * (1 + mpmath.mpf(1e-8))
    assert mpmath.mpf(b) <= b_exact * (1 + mpmath.mpf(1e-8))


def test_alpha_boundary_delta():
    a = certify.alpha_fn(2, 0.1, 1e-16)
    assert a == pytest.approx(0.1, rel=1e-3)


def test_bounds_monotone_grid():
    ns = [2, 10, 141, 1000]
    ds = [1e-14, 1e-13, 1e-3, 0.1]
    es = [1e-17, 1e-16, 6.5e-16]
    for f in (certify.alpha_fn, certify.beta_fn):
        for n in ns:
            for d in ds:
                for e in es:
                    v = f(n, d, e)
                    assert f(n + 5, d, e) >= v
                    assert f(n, d * 1.5, e) >= v
                    assert f(n, d, e * 1.5) >= v


def test_beta_le_7delta_under_assumptions():
    for n in [2, 50, 141, 1000, 5000]:
        for d in [1e-14, 1e-13, 1e-6, 0.1]:
            if n * EPS <= d <= 0.1:
                assert certify.beta_fn(n, d, EPS) <= 7 * d


def test_norm2_numeric_order():
    x = np.array([0.5 + 0.5j, 0.5 - 0.5j])
    got = certify.norm2_numeric(x)
    acc = complex(0.0)
    for xi in x:
        acc = acc + complex(xi) * complex(xi).conjugate()
    assert got == acc.real


def test_rayleigh_k0_by_hand():
    Q = qmatrix.build(IndexWindow(0))
    x = np.array([1.0 + 0j])
    d = 1e-13
    r, ledger = certify.rayleigh_certified(Q, x, d)
    assert r == 0.5
    assert ledger.error_bound == pytest.approx((14 * d * 1 + 5 * d * 0.5),
                                               rel=1e-8)
    assert ledger.assumptions_ok


def test_rayleigh_certified_deterministic(spectrum_70):
    Q, res = spectrum_70
    x = certify.normalize_for_certification(res.eigenvectors[:, 0])
    r1, led1 = certify.rayleigh_certified(Q, x)
    r2, led2 = certify.rayleigh_certified(Q, x)
    assert r1 == r2
    assert led1.error_bound == led2.error_bound


def test_rayleigh_headline(spectrum_70):
    Q, res = spectrum_70
    x = certify.normalize_for_certification(res.eigenvectors[:, 0])
    r, ledger = certify.rayleigh_certified(Q, x, 1e-13)
    assert r >= 1.00007
    assert ledger.error_bound <= 1e-9
    assert 14 * 1e-13 * 141 <= 2.8e-10
    # matches the iterative eigenvalue on the same matrix and vector
    assert abs(r - res.eigenvalues[0]) <= 1e-12


def test_rayleigh_requires_matching_length():
    Q = qmatrix.build(IndexWindow(1))
    with pytest.raises(ValueError):
        certify.rayleigh_certified(Q, np.ones(2, dtype=complex))


def test_assumption_violation_names_flag(spectrum_70):
    Q, res = spectrum_70
    x = certify.normalize_for_certification(res.eigenvectors[:, 0])
    with pytest.raises(AssumptionError) as info:
        certify.rayleigh_certified(Q, x, 1e-20)
    assert info.value.flag in ("eps_le_delta", "n_eps_le_delta")
    assert info.value.ledger is not None
    with pytest.raises(AssumptionError) as info:
        certify.rayleigh_certified(Q, x, 0.5)
    assert info.value.flag == "delta_le_0.1"
    with pytest.raises(AssumptionError) as info:
        certify.rayleigh_certified(Q, 2.0 * x, 1e-13)
    assert info.value.flag == "norm_within_eps"


def test_normalize_for_certification(rng):
    for n in (7, 141):
        for _ in range(10):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            y = certify.normalize_for_certification(x)
            assert abs(certify.norm2_numeric(y) - 1.0) <= EPS
    with pytest.raises(ValueError):
        certify.normalize_for_certification(np.zeros(3, dtype=complex))


def test_estimate_delta_k0():
    assert certify.estimate_delta(0) <= 2.0 ** -53


def test_estimate_delta_protocol():
    naive = certify.estimate_delta(70, "naive")
    stable = certify.estimate_delta(70, "stable")
    assert naive <= 3e-14
    assert stable <= 2e-15
    # the stable rearrangement beats the cancellation-prone form
    assert stable < naive


def test_certify_70_exceeds(spectrum_70):
    del spectrum_70  # warm cache only
    v = certify.certify_counterexample(70, 1e-13)
    assert v.exceeded_one
    assert v.certified_lower_bound >= 1.00007 - 1e-9
    assert v.ledger.assumptions_ok
    assert v.certified_lower_bound == v.ledger.rayleigh_num - v.ledger.error_bound


def test_certify_35_is_false_verdict():
    v = certify.certify_counterexample(35, 1e-13)
    assert not v.exceeded_one
    assert v.certified_lower_bound < 1.0
    assert v.ledger.assumptions_ok


def test_certify_68_exceeds():
    v = certify.certify_counterexample(68, 1e-13)
    assert v.exceeded_one


def test_verdict_json_roundtrip():
    v = certify.certify_counterexample(35, 1e-13)
    d = v.to_json()
    assert set(d) == {"certified_lower_bound", "exceeded_one", "ledger"}
    assert d["ledger"]["n"] == 71
    assert isinstance(v.dumps(), str)


def test_headline_value_pinned(spectrum_70):
    _, res = spectrum_70
    assert abs(res.eigenvalues[0] - LAMBDA_70_1) <= 1e-9
