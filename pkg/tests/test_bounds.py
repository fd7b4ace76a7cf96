import math

import pytest

from qplane import bounds


def test_psi_limit():
    assert bounds.psi(0.0) == 1.0


def test_psi_at_one():
    assert bounds.psi(1.0) == pytest.approx(math.log(2.0), abs=1e-16)


def test_psi_middle_between():
    v = bounds.psi(0.5)
    assert v == pytest.approx(math.log(1.5) / 0.5, abs=1e-16)
    assert bounds.psi(1.0) < v < bounds.psi(0.0)


def test_psi_domain():
    with pytest.raises(ValueError):
        bounds.psi(-1.0)


def test_psi_strictly_decreasing_grid():
    prev = math.inf
    t = -0.99
    while t < 10.0:
        v = bounds.psi(t)
        assert v < prev
        prev = v
        t += 0.037


def test_psi_series_branch_continuous():
    # the series takeover at |t| = 1e-4 should be seamless
    for t in (1e-4 - 1e-9, 1e-4 + 1e-9, -1e-4 + 1e-9, -1e-4 - 1e-9):
        assert bounds.psi(t) == pytest.approx(math.log1p(t) / t, rel=1e-12)


def test_kernel_diagonal_value():
    assert bounds.kernel_k(1.0, 1.0) == pytest.approx(1.0 / (8 * math.pi ** 2),
                                                      rel=1e-15)


def test_kernel_heaviside_gate():
    assert bounds.kernel_k(-1.0, 2.0) == 0.0
    assert bounds.kernel_k(2.0, 0.0) == 0.0


def test_kernel_hardy_bound_at_1_3():
    v = bounds.kernel_k(1.0, 3.0)
    assert v <= (1.0 / (4 * math.pi)) * (1.0 / (math.pi * 4.0))


def test_kernel_symmetric_nonneg_bounded(rng):
    for _ in range(10 ** 4):
        x, y = rng.uniform(1e-3, 50.0, size=2)
        v = bounds.kernel_k(x, y)
        assert v == bounds.kernel_k(y, x)
        assert 0.0 <= v <= 1.0 / (4 * math.pi ** 2 * (x + y))


def test_enclosure_constants_printed_digits():
    assert f"{bounds.LOWER:.7f}" == "-0.5641896"
    assert f"{bounds.UPPER:.7f}" == "1.0740884"
    enc = bounds.SpectralEnclosure()
    assert enc.lower < enc.wb_lower < 0.0 < 1.0 < enc.wb_upper < enc.upper


def test_enclosure_check_passes(computed_rows):
    for k, (res, lam_min) in computed_rows.items():
        rep = bounds.enclosure_check(res.eigenvalues + [lam_min])
        assert rep.passed
        assert not rep.violations
        assert rep.margin_upper >= bounds.UPPER - 1.0015


def test_enclosure_check_fails_named():
    rep = bounds.enclosure_check([1.2])
    assert not rep.passed
    assert any("upper" in v for v in rep.violations)
    assert any("wb_upper" in v for v in rep.violations)
    d = rep.to_json()
    assert d["passed"] is False
