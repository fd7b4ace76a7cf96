"""Independent brute-force verifications of the matrix entries and the
rectangle Wigner integral.

Nothing here shares code with the closed-form entry formula: entries are
re-derived by quadrature of their defining double integrals (via the
truncated-frequency kernel and via the two pieces of the kernel
decomposition), and the rectangle integral of the Wigner distribution of
a step function is evaluated from the piecewise-constant overlap
structure, with the frequency direction integrated exactly in terms of
sine/cosine integrals.  Tolerances are deliberately loose: these are
independence checks, not certification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .qmatrix import IndexWindow
from .quad import ToleranceError, adaptive_quad

_EULER_GAMMA = 0.5772156649015329


# --- entries via the truncated-frequency kernel -------------------------------

def entry_via_lambda(j: int, k: int, lam: float, tol: float) -> complex:
    """Quadrature of the kernel H(x+y) e^{i pi (x-y) lam} sinc-type factor
    over the (j, k) cell pair; converges to the matrix entry as lam grows.

    Rotated to difference/sum coordinates u = x - y, v = x + y the cell is
    a diamond and the v-direction integrates to a piecewise-linear weight,
    leaving one oscillatory u-integral.  The removable singularity at
    u = 0 takes the sinc limit lam.
    """
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    if j + k <= -2:
        return 0.0 + 0.0j
    uc = float(k - j)       # diamond center in u
    vc = float(j + k + 1)   # diamond center in v

    def weight(u):
        half = 1.0 - np.abs(u - uc)
        v_lo = np.maximum(vc - half, 0.0)   # kernel support v > 0
        v_hi = vc + half
        return 0.5 * np.maximum(v_hi - v_lo, 0.0)

    def g(u):
        small = u == 0.0
        us = np.where(small, 1.0, u)
        out = np.exp(1j * math.pi * us * lam) * np.sin(math.pi * us * lam) / (math.pi * us)
        out[small] = lam
        return out

    def f(u):
        return g(u) * weight(u)

    # resolve the lam-frequency oscillation: >= 8 nodes per period 1/lam
    panels = max(4, int(math.ceil(2.0 * lam * 8.0 / 15.0)))
    val, _ = adaptive_quad(f, uc - 1.0, uc + 1.0, tol, initial=panels)
    return complex(val)


# --- entries via the kernel decomposition --------------------------------------

def _outer_quad_with_corner(F, a: float, b: float, tol: float,
                            corner: float | None, log_coeff: float,
                            log_center: float):
    """Integrate F over [a, b]; if `corner` is an endpoint where F carries
    log_coeff * log|x - log_center| growth, split that part off exactly."""
    if corner is None:
        v, _ = adaptive_quad(F, a, b, tol)
        return v
    h = min(0.25, (b - a) / 2.0)
    if corner == a:
        lo, hi = a, a + h
    else:
        lo, hi = b - h, b
    # exact: integral of log|x - c| over [lo, hi] with c at the boundary
    t1, t0 = (abs(hi - log_center), abs(lo - log_center))
    width = max(t1, t0)
    exact = width * math.log(width) - width if width > 0.0 else 0.0
    total = log_coeff * exact

    def smooth(x):
        return F(x) - log_coeff * np.log(np.abs(x - log_center))

    v, _ = adaptive_quad(smooth, lo, hi, tol / 2.0)
    total += v
    rest = (a, lo) if corner == b else (hi, b)
    if rest[1] > rest[0]:
        v, _ = adaptive_quad(F, rest[0], rest[1], tol / 2.0)
        total += v
    return total


def b_integral(j: int, k: int, tol: float) -> complex:
    """Defining double integral of the negative-side coupling piece over
    the (j, k) cells; the inner y-integral is exact, the outer adaptive.

    Nonzero only for j >= 0, k <= -1 and j + k >= -1.
    """
    if not (j >= 0 and k <= -1):
        return 0.0 + 0.0j
    if j + k <= -2:
        return 0.0 + 0.0j
    a, b = float(k), float(k + 1)
    if j + k >= 0:
        def F(x):
            return np.log((j + 1.0 - x) / (j - x))
        val = _outer_quad_with_corner(F, a, b, tol, None, 0.0, 0.0)
    else:
        # j + k = -1: inner lower limit is -x; log singularity at x=0 for j=0
        def F(x):
            return np.log((j + 1.0 - x) / (-2.0 * x))
        corner = b if j == 0 else None
        val = _outer_quad_with_corner(F, a, b, tol, corner, -1.0, 0.0)
    return complex(val / (2j * math.pi))


def c_integral(j: int, k: int, tol: float) -> complex:
    """Positive-quadrant piece: 1/2 on the diagonal, else the principal
    double integral of 1/(y - x); adjacent cells carry an integrable log
    at the shared corner, handled by the exact antiderivative."""
    if j < 0 or k < 0:
        return 0.0 + 0.0j
    if j == k:
        return 0.5 + 0.0j

    def F(x):
        return np.log(np.abs((j + 1.0 - x) / (j - x)))

    a, b = float(k), float(k + 1)
    corner = None
    coeff = 0.0
    center = 0.0
    if j == k + 1:   # log|j - x| blows up at x = b = j
        corner, coeff, center = b, -1.0, float(j)
    elif k == j + 1:  # log|j + 1 - x| blows up at x = a = j + 1
        corner, coeff, center = a, 1.0, float(j + 1)
    val = _outer_quad_with_corner(F, a, b, tol, corner, coeff, center)
    return complex(val / (2j * math.pi))


# --- Wigner distribution of step functions -------------------------------------

@dataclass
class StepFunction:
    """u = sum_j coeffs[j+k] * 1_{[j, j+1)} on the window's unit cells."""

    window: IndexWindow
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.window.n,):
            raise ValueError("coefficient count must equal window size")

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def support_hull(self) -> tuple[float, float]:
        nz = np.nonzero(self.coeffs)[0]
        if len(nz) == 0:
            return 0.0, 0.0
        kk = self.window.k
        return float(nz[0] - kk), float(nz[-1] - kk + 1)


def quadratic_form(entries: np.ndarray, z: np.ndarray) -> float:
    """sum_{j,k} z_j conj(z_k) a[j,k]: the window pairing that the
    rectangle Wigner integral converges to.

    With z the conjugate of a unit eigenvector this equals the eigenvalue.
    """
    z = np.asarray(z)
    return float(np.real(np.dot(z, entries @ np.conj(z))))


def _overlap_pieces(u: StepFunction, x: float):
    """Constant pieces of z -> u(x + z/2) * conj(u)(x - z/2).

    Yields (alpha, beta, c_j * conj(c_k)) with the product constant on
    [alpha, beta).
    """
    kwin = u.window.k
    c = u.coeffs
    two_x = 2.0 * x
    for j in u.window.indices():
        cj = c[j + kwin]
        if cj == 0.0:
            continue
        # k ranges over the <= 2 diagonals with j + k in (2x - 2, 2x]
        kmin = int(math.floor(two_x)) - j - 1
        for kk in (kmin, kmin + 1, kmin + 2):
            if kk < -kwin or kk > kwin:
                continue
            ck = c[kk + kwin]
            if ck == 0.0:
                continue
            alpha = max(2.0 * (j - x), 2.0 * (x - kk) - 2.0)
            beta = min(2.0 * (j + 1 - x), 2.0 * (x - kk))
            if beta <= alpha:
                continue
            yield alpha, beta, cj * ck.conjugate()


@dataclass(frozen=True)
class WignerPoint:
    """One sample of the (real-valued) Wigner distribution."""

    x: float
    xi: float
    value: float


def wigner_point(u: StepFunction, x: float, xi: float) -> WignerPoint:
    return WignerPoint(x, xi, wigner_step_eval(u, x, xi))


def wigner_step_eval(u: StepFunction, x: float, xi: float) -> float:
    """Exact closed-form Wigner value of a step function at one point."""
    total = 0.0 + 0.0j
    scale = 0.0
    for alpha, beta, w in _overlap_pieces(u, x):
        scale += abs(w) * (beta - alpha)
        if xi == 0.0:
            total += w * (beta - alpha)
        else:
            ea = np.exp(-2j * math.pi * alpha * xi)
            eb = np.exp(-2j * math.pi * beta * xi)
            total += w * (ea - eb) / (2j * math.pi * xi)
    if abs(total.imag) > 1e-13 * max(1.0, scale):
        raise ArithmeticError(
            f"Wigner value failed the realness check: imag={total.imag!r}")
    return float(total.real)


def _cin(z: np.ndarray) -> np.ndarray:
    """Cin(z) = gamma + log z - Ci(z), entire; z >= 0 elementwise."""
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    pos = z > 0.0
    if np.any(pos):
        _, ci = sici(z[pos])
        out[pos] = _EULER_GAMMA + np.log(z[pos]) - ci
    return out


def _freq_integral(t: np.ndarray, a: float) -> np.ndarray:
    """E(t) = integral_0^a (e^{-2 i pi t xi} - 1)/xi dxi = -Cin(2 pi |t| a)
    - i sign(t) Si(2 pi |t| a)."""
    t = np.asarray(t, dtype=float)
    z = 2.0 * math.pi * np.abs(t) * a
    si, _ = sici(z)
    return -_cin(z) - 1j * np.sign(t) * si


def wigner_rect_integral(u: StepFunction, a: float, grid: int = 64) -> float:
    """Integral of the Wigner distribution of u over the square [0, a]^2.

    The frequency direction is integrated exactly per overlap piece
    (sine/cosine integrals); the position direction is integrated by
    adaptive panels between the half-integer breakpoints, seeded finely
    enough to resolve the position-side oscillation of frequency ~2a.
    """
    if a <= 0.0:
        raise ValueError("a must be positive")
    if grid < 64:
        raise ValueError("resolution guard: grid must be >= 64")
    lo_supp, hi_supp = u.support_hull()
    x_hi = min(a, hi_supp)
    if x_hi <= 0.0:
        return 0.0

    def F(xs):
        out = np.empty(len(xs))
        for i, x in enumerate(xs):
            pieces = list(_overlap_pieces(u, float(x)))
            if not pieces:
                out[i] = 0.0
                continue
            alphas = np.array([p[0] for p in pieces])
            betas = np.array([p[1] for p in pieces])
            ws = np.array([p[2] for p in pieces])
            g = (_freq_integral(alphas, a) - _freq_integral(betas, a)) / (2j * math.pi)
            out[i] = float(np.real(np.sum(ws * g)))
        return out

    # breakpoints of the overlap structure sit on the half-integer lattice
    edges = [0.0]
    t = 0.5
    while t < x_hi:
        edges.append(t)
        t += 0.5
    edges.append(x_hi)
    piece_tol = min(1e-4, 0.01 / len(edges))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        # >= 8 nodes per position-space oscillation period 1/(2a)
        panels = max(1, int(math.ceil((grid / 64.0) * (hi - lo) * 2.0 * a * 8.0 / 15.0)))
        v, _ = adaptive_quad(F, lo, hi, piece_tol, initial=panels,
                             max_panels=max(4 * panels, 2000))
        total += v
    return total


def wigner_marginal(u: StepFunction, x: float, xi_max: float) -> float:
    """integral_{-L}^{L} W(u,u)(x, .) dxi; approaches |u(x)|^2 as L grows."""
    total = 0.0
    for alpha, beta, w in _overlap_pieces(u, x):
        sa, _ = sici(2.0 * math.pi * alpha * xi_max)
        sb, _ = sici(2.0 * math.pi * beta * xi_max)
        total += float(np.real(w)) * (sb - sa) / math.pi
    return total


def make_report(check: str, params: dict, value, reference, tol: float) -> dict:
    """One oracle verdict in the standard report schema."""
    gap = abs(value - reference)
    return {
        "check": check,
        "params": params,
        "value": value if not isinstance(value, complex) else [value.real, value.imag],
        "reference": (reference if not isinstance(reference, complex)
                      else [reference.real, reference.imag]),
        "gap": gap,
        "tol": tol,
        "pass": bool(gap <= tol),
    }
