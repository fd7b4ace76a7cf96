import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from qplane.xprec import (
    DDComplex,
    DDReal,
    dd_exp,
    dd_log,
    fused_product_add,
    quick_two_sum,
    two_prod,
    two_sum,
)

mpmath.mp.prec = 250


def frac(x: DDReal) -> Fraction:
    return Fraction(x.hi) + Fraction(x.lo)


def test_two_sum_exact(rng):
    for _ in range(2000):
        a = float(rng.standard_normal() * 10.0 ** rng.integers(-20, 20))
        b = float(rng.standard_normal() * 10.0 ** rng.integers(-20, 20))
        s, e = two_sum(a, b)
        assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


def test_two_prod_exact(rng):
    for _ in range(2000):
        a = float(rng.standard_normal() * 10.0 ** rng.integers(-15, 15))
        b = float(rng.standard_normal() * 10.0 ** rng.integers(-15, 15))
        p, e = two_prod(a, b)
        assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_add_identity():
    r = DDReal(1.0) + DDReal(0.0)
    assert (r.hi, r.lo) == (1.0, 0.0)


def test_add_nonoverlapping_split():
    r = DDReal(1.0) + DDReal(2.0 ** -80)
    assert (r.hi, r.lo) == (1.0, 2.0 ** -80)


def test_add_tenths_matches_rational():
    # dd images of exact 1/10 and 2/10, summed, against exact 3/10
    tenth = DDReal(0.1, float(Fraction(1, 10) - Fraction(0.1)))
    fifth = DDReal(0.2, float(Fraction(2, 10) - Fraction(0.2)))
    s = tenth + fifth
    err = abs(frac(s) - Fraction(3, 10))
    assert err < Fraction(1, 10 ** 30)


def test_mul_identity(rng):
    for _ in range(100):
        x = float(rng.standard_normal())
        r = DDReal(x) * DDReal(1.0)
        assert (r.hi, r.lo) == (x, 0.0)


def test_mul_exact_integer():
    v = DDReal.from_int(2 ** 30 + 1)
    r = v * v
    assert frac(r) == Fraction(2 ** 30 + 1) ** 2
    assert r.lo != 0.0  # genuinely split across the two limbs


def test_third_times_three():
    third = DDReal(1.0) / DDReal(3.0)
    r = third * DDReal(3.0)
    assert abs(frac(r) - 1) <= Fraction(1, 2 ** 100)


def test_add_mul_random_against_rational(rng):
    for _ in range(500):
        a = DDReal(float(rng.standard_normal())) * DDReal(float(rng.standard_normal()))
        b = DDReal(float(rng.standard_normal())) * DDReal(float(rng.standard_normal()))
        s = a + b
        exact = frac(a) + frac(b)
        if exact != 0:
            assert abs(frac(s) - exact) <= abs(exact) / Fraction(2 ** 100)
        p = a * b
        exact = frac(a) * frac(b)
        if exact != 0:
            assert abs(frac(p) - exact) <= abs(exact) / Fraction(2 ** 100)


def test_renorm_idempotent(rng):
    for _ in range(500):
        x = DDReal(float(rng.standard_normal()),
                   float(rng.standard_normal() * 1e-14))
        once = x.renorm()
        twice = once.renorm()
        assert (once.hi, once.lo) == (twice.hi, twice.lo)


def test_overflow_propagates():
    r = DDReal(1e300) * DDReal(1e300)
    assert not r.is_finite()


def test_compare_and_neg():
    assert DDReal(1.0, 1e-20) > DDReal(1.0)
    assert -DDReal(2.0, -1e-18) < DDReal(0.0)
    assert abs(DDReal(-3.0)) == DDReal(3.0)


def test_division_accuracy(rng):
    for _ in range(300):
        a = float(rng.standard_normal())
        b = float(rng.standard_normal())
        if abs(b) < 1e-3:
            continue
        q = DDReal(a) / DDReal(b)
        exact = Fraction(a) / Fraction(b)
        assert abs(frac(q) - exact) <= abs(exact) / Fraction(2 ** 95)


def test_dd_log_accuracy(rng):
    for _ in range(200):
        x = float(np.exp(rng.uniform(-6, 12)))
        got = dd_log(DDReal(x))
        exact = mpmath.log(mpmath.mpf(x))
        err = abs(mpmath.mpf(got.hi) + mpmath.mpf(got.lo) - exact)
        assert err <= abs(exact) * mpmath.mpf(2) ** -95 + mpmath.mpf(2) ** -130


def test_dd_exp_accuracy(rng):
    for _ in range(200):
        x = float(rng.uniform(-20, 20))
        got = dd_exp(DDReal(x))
        exact = mpmath.exp(mpmath.mpf(x))
        err = abs(mpmath.mpf(got.hi) + mpmath.mpf(got.lo) - exact)
        assert err <= exact * mpmath.mpf(2) ** -95


def test_dd_log_domain_and_exp_range():
    with pytest.raises(ValueError):
        dd_log(DDReal(-1.0))
    with pytest.raises(OverflowError):
        dd_exp(DDReal(1000.0))


def test_ddcomplex_mul_matches_complex(rng):
    for _ in range(200):
        a = complex(rng.standard_normal(), rng.standard_normal())
        b = complex(rng.standard_normal(), rng.standard_normal())
        r = DDComplex.from_complex(a) * DDComplex.from_complex(b)
        assert abs(r.to_complex() - a * b) <= 1e-15 * abs(a * b) + 1e-300


def test_fused_product_add(rng):
    for _ in range(500):
        a = float(rng.standard_normal() * 100)
        b = float(rng.standard_normal() * 100)
        c = float(rng.standard_normal() * 100)
        got = fused_product_add(a, b, c)
        exact = Fraction(a) * Fraction(b) + Fraction(c)
        # within 1 ulp of the exact fused result
        assert abs(Fraction(got) - exact) <= Fraction(math.ulp(got) if got else 1e-300)


def test_quick_two_sum_invariant():
    s, e = quick_two_sum(1.0, 2.0 ** -60)
    assert s == 1.0 and e == 2.0 ** -60
