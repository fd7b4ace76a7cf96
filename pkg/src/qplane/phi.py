"""The odd log-integral populating every off-diagonal imaginary matrix entry.

Four independent evaluations of the same function of an integer argument:

  phi_naive   three-term closed form (l+1)Log(l+1) - 2l Log l + (l-1)Log(l-1)
              over 2*pi; cancellation-prone for large |l|, kept as the
              documented baseline of the dual-precision error protocol.
  phi_stable  rearranged log1p form, no cancellation, relative error O(eps).
  phi_series  odd-power series partial sum, valid for |l| >= 2.
  phi_quad    adaptive quadrature of the defining integral (the oracle).

plus double-double twins of the first two, mirroring the binary64
operation order, for the dual-precision matrix comparison.
"""

from __future__ import annotations

import math

import numpy as np

from .quad import ToleranceError, adaptive_quad
from .xprec import TWO_PI as DD_TWO_PI
from .xprec import DDReal, dd_log, dd_log1p, fused_product_add

TWO_PI = 2.0 * math.pi
LOG2_OVER_PI = math.log(2.0) / math.pi


def phi_naive(l: int) -> float:
    """Closed-form value; 0 at l=0, odd in l, 0*Log 0 read as 0 at l=1.

    The three products are fused (compiler-contraction style) so the
    remaining error is the closed form's own cancellation, not avoidable
    product round-off.
    """
    if l == 0:
        return 0.0
    if l < 0:
        return -phi_naive(-l)
    s = (l + 1.0) * math.log(l + 1.0)
    s = fused_product_add(-2.0 * l, math.log(l), s)
    if l > 1:
        s = fused_product_add(l - 1.0, math.log(l - 1.0), s)
    return s / TWO_PI


def phi_stable(l: int) -> float:
    """Cancellation-free rearrangement; requires |l| >= 2."""
    if -2 < l < 2:
        raise ValueError(f"phi_stable requires |l| >= 2, got {l}")
    x = float(abs(l))
    v = (x * math.log1p(-1.0 / (x * x)) + math.log1p(2.0 / (x - 1.0))) / TWO_PI
    return v if l > 0 else -v


def phi_series(l: int, terms: int) -> float:
    """Partial sum of sum_r 1/((2r-1) r l^(2r-1)) / (2*pi); |l| >= 2."""
    if -2 < l < 2:
        raise ValueError(f"phi_series requires |l| >= 2, got {l}")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    x = float(abs(l))
    inv2 = 1.0 / (x * x)
    vals = []
    p = 1.0 / x  # x^-(2r-1) at r = 1
    for r in range(1, terms + 1):
        t = p / ((2 * r - 1) * r)
        if t == 0.0:  # remaining terms underflow
            break
        vals.append(t)
        p *= inv2
    acc = 0.0
    for t in reversed(vals):  # smallest first
        acc += t
    acc /= TWO_PI
    return acc if l > 0 else -acc


def phi(l: int) -> float:
    """Dispatch: naive for |l| <= 1 (exact branches), stable otherwise."""
    if -2 < l < 2:
        return phi_naive(l)
    return phi_stable(l)


def phi_for_mode(mode: str):
    """Scalar evaluator for a matrix-build mode, 'stable' or 'naive'."""
    if mode == "stable":
        return phi
    if mode == "naive":
        return phi_naive
    raise ValueError(f"unknown phi mode {mode!r}")


# --- quadrature oracle ------------------------------------------------------

def _log_antiderivative(t: float) -> float:
    """integral of log(s) ds from 0 to t, i.e. t*log(t) - t, with 0 at t=0."""
    return 0.0 if t == 0.0 else t * math.log(t) - t


def _exact_log_piece(s: float, lo: float, hi: float) -> float:
    """integral of log|y - s| dy over [lo, hi] via the antiderivative."""
    # both endpoints on the same side of s in all uses here
    if s <= lo:
        return _log_antiderivative(hi - s) - _log_antiderivative(lo - s)
    return _log_antiderivative(s - lo) - _log_antiderivative(s - hi)


def phi_quad(l: int, tol: float) -> float:
    """Adaptive quadrature of (1/2pi) * integral_l^{l+1} Log|y/(y-1)| dy.

    The integrable log singularities at y=0 and y=1 (cells l in {-1,0,1})
    are split off on a neighbourhood and integrated exactly.
    """
    if not (1e-14 < tol < 1e-2):
        raise ValueError("tol must lie in (1e-14, 1e-2)")
    a, b = float(l), float(l + 1)

    def integrand(y):
        return np.log(np.abs(y)) - np.log(np.abs(y - 1.0))

    total = 0.0
    err = 0.0
    budget = tol * TWO_PI  # work against the un-normalized integral

    singular = [s for s in (0.0, 1.0) if a <= s <= b]
    if not singular:
        v, e = adaptive_quad(integrand, a, b, budget)
        total, err = v, e
    else:
        h = 0.5 if len(singular) == 2 else 0.25
        # carved neighbourhoods around each singular endpoint
        regions = []  # (lo, hi, singular point or None)
        cuts = sorted({a, b, *(min(s + h, b) for s in singular if s == a),
                       *(max(s - h, a) for s in singular if s == b)})
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            owner = None
            for s in singular:
                if s == lo or s == hi:
                    owner = s
            regions.append((lo, hi, owner))
        for lo, hi, s in regions:
            if s is None:
                v, e = adaptive_quad(integrand, lo, hi, budget / len(regions))
                total += v
                err += e
                continue
            # exact part: the log term singular at s; smooth remainder by GK
            sign = 1.0 if s == 0.0 else -1.0
            total += sign * _exact_log_piece(s, lo, hi)

            def smooth(y, s=s, sign=sign):
                return integrand(y) - sign * np.log(np.abs(y - s))

            v, e = adaptive_quad(smooth, lo, hi, budget / len(regions))
            total += v
            err += e
    if err > budget:
        raise ToleranceError(tol, err / TWO_PI)
    return total / TWO_PI


# --- double-double twins ----------------------------------------------------

def phi_naive_dd(l: int) -> DDReal:
    """dd twin of phi_naive with the same term order."""
    if l == 0:
        return DDReal(0.0)
    if l < 0:
        return -phi_naive_dd(-l)
    s = DDReal.from_int(l + 1) * dd_log(DDReal.from_int(l + 1))
    s = DDReal.from_int(-2 * l) * dd_log(DDReal.from_int(l)) + s
    if l > 1:
        s = DDReal.from_int(l - 1) * dd_log(DDReal.from_int(l - 1)) + s
    return s / DD_TWO_PI


def phi_stable_dd(l: int) -> DDReal:
    """dd twin of phi_stable with the same term order."""
    if -2 < l < 2:
        raise ValueError(f"phi_stable_dd requires |l| >= 2, got {l}")
    x = DDReal.from_int(abs(l))
    t1 = x * dd_log1p(-(DDReal(1.0) / (x * x)))
    t2 = dd_log1p(DDReal(2.0) / (x - DDReal(1.0)))
    v = (t1 + t2) / DD_TWO_PI
    return v if l > 0 else -v


def phi_dd(l: int) -> DDReal:
    if -2 < l < 2:
        return phi_naive_dd(l)
    return phi_stable_dd(l)


def phi_dd_for_mode(mode: str):
    if mode == "stable":
        return phi_dd
    if mode == "naive":
        return phi_naive_dd
    raise ValueError(f"unknown phi mode {mode!r}")
