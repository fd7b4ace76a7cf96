"""Runtime re-derivation of the floating-point error bounds.

The certified path recomputes the Rayleigh quotient in a fixed operation
order (entrywise products, row sums left-to-right, outer sum
left-to-right, modulus last), re-derives the bound functions alpha and
beta from the machine constants, and subtracts the total bound
E = 14*delta*n + 5*delta*|R| from the computed quotient.  Every bound
evaluated in floating point is inflated by (1 + 2^-30) so rounding inside
the bound computation can only over-report.

delta, the uniform entrywise error of the stored matrix, defaults to
1e-13 and can be re-derived per window by the dual-precision protocol
(estimate_delta).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import qmatrix, spectrum
from .qmatrix import IndexWindow, QMatrix

_INFLATE = 1.0 + 2.0 ** -30        # final-bound inflation
_INFLATE_STEP = 1.0 + 2.0 ** -51   # per-multiply upward nudge (2 ulp)


@dataclass(frozen=True)
class MachineConstants:
    eps_r: float = 2.0 ** -52
    eps: float = math.sqrt(2.0) * (2.0 + 2.0 ** -52) * 2.0 ** -52

    def __post_init__(self):
        assert self.eps <= 6.5e-16


MACHINE = MachineConstants()


class AssumptionError(ArithmeticError):
    """A certification assumption failed; names the violated flag."""

    def __init__(self, flag: str, detail: str, ledger: "ErrorLedger | None" = None):
        super().__init__(f"assumption {flag!r} violated: {detail}")
        self.flag = flag
        self.ledger = ledger


@dataclass
class ErrorLedger:
    n: int
    delta: float
    eps: float
    eps_r: float
    alpha: float
    beta: float
    rayleigh_num: float
    error_bound: float
    assumptions: dict[str, bool]

    @property
    def assumptions_ok(self) -> bool:
        return all(self.assumptions.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "delta": self.delta,
            "eps": self.eps,
            "eps_r": self.eps_r,
            "alpha": self.alpha,
            "beta": self.beta,
            "rayleigh_num": self.rayleigh_num,
            "error_bound": self.error_bound,
            "assumptions": dict(self.assumptions),
            "assumptions_ok": self.assumptions_ok,
        }


@dataclass
class Verdict:
    certified_lower_bound: float
    exceeded_one: bool
    ledger: ErrorLedger

    def to_json(self) -> dict:
        return {
            "certified_lower_bound": self.certified_lower_bound,
            "exceeded_one": self.exceeded_one,
            "ledger": self.ledger.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


# --- round-off lemmas as bound functions -------------------------------------

def sum2_bound(a: float, b: float, eta_a: float, eta_b: float,
               eps: float = MACHINE.eps) -> float:
    """Error bound for one numerical sum of approximations of a and b."""
    if min(a, b, eta_a, eta_b) < 0.0:
        raise ValueError("magnitudes and etas must be nonnegative")
    return eps * (a + b) + eta_a * (1.0 + eps) + eta_b * (1.0 + eps)


def _pow1p_minus1_up(eps: float, m: int) -> float:
    """(1+eps)^m - 1 by squaring on the small part, nudged upward.

    Working on q with (1+q1)(1+q2) = 1 + (q1 + q2 + q1*q2) keeps the
    round-off relative to q itself; the per-step nudge dominates the three
    roundings of each combine, so the result is an upper bound.
    """
    q = 0.0
    b = eps
    while m > 0:
        if m & 1:
            q = (q + b + q * b) * _INFLATE_STEP
        m >>= 1
        if m:
            b = (b + b + b * b) * _INFLATE_STEP
    return q


def sumn_bound(magnitudes, etas, eps: float = MACHINE.eps) -> float:
    """Error bound for a left-to-right sum of m approximated terms.

    ((1+eps)^(m-1) - 1) * sum|a_k| + (1+eps)^(m-1) * sum eta_q, the closed
    form of the binomial expression.
    """
    if len(magnitudes) != len(etas):
        raise ValueError("magnitudes and etas must have equal length")
    m = len(magnitudes)
    if m < 2:
        raise ValueError("m must be >= 2")
    q = _pow1p_minus1_up(eps, m - 1)
    return (q * math.fsum(magnitudes) + (1.0 + q) * math.fsum(etas)) * _INFLATE


def prod_bound(a: float, b: float, eta_b: float,
               eps: float = MACHINE.eps) -> float:
    """Error bound for one numerical product of a with an approximation of b."""
    if min(a, b, eta_b) < 0.0:
        raise ValueError("magnitudes and eta must be nonnegative")
    return eps * a * b + eta_b * a * (1.0 + eps)


def alpha_fn(n: int, delta: float, eps: float = MACHINE.eps) -> float:
    if n < 2 or delta <= 0.0 or eps <= 0.0:
        raise ValueError("alpha_fn requires n >= 2 and positive delta, eps")
    q = _pow1p_minus1_up(eps, n - 1)
    return (q + (1.0 + q) * (delta * (1.0 + eps) + eps)) * _INFLATE


def beta_fn(n: int, delta: float, eps: float = MACHINE.eps) -> float:
    if n < 2 or delta <= 0.0 or eps <= 0.0:
        raise ValueError("beta_fn requires n >= 2 and positive delta, eps")
    q = _pow1p_minus1_up(eps, n - 1)
    a = alpha_fn(n, delta, eps)
    return (q + (1.0 + q) * (eps + a * (1.0 + eps))) * _INFLATE


# --- the certified Rayleigh quotient ------------------------------------------

def norm2_numeric(x: np.ndarray) -> float:
    """(||x||^2)^N in the exact certification order: products, then
    left-to-right sum."""
    acc = complex(0.0)
    for xi in x:
        xi = complex(xi)
        acc = acc + xi * xi.conjugate()
    return acc.real


def rayleigh_numeric(Q: QMatrix, x: np.ndarray) -> float:
    """R^N: fixed operation order, modulus last; bit-reproducible."""
    A = Q.entries
    n = Q.n
    total = complex(0.0)
    for i in range(n):
        row = A[i]
        rowsum = complex(0.0)
        for j in range(n):
            rowsum = rowsum + complex(row[j]) * complex(x[j])
        total = total + rowsum * complex(x[i]).conjugate()
    return abs(total)


def check_assumptions(Q: QMatrix, x: np.ndarray, delta: float,
                      eps: float = MACHINE.eps) -> dict[str, bool]:
    n = Q.n
    return {
        "delta_le_0.1": delta <= 0.1,
        "eps_le_delta": eps <= delta,
        "n_eps_le_delta": n * eps <= delta,
        "norm_within_eps": abs(norm2_numeric(x) - 1.0) <= eps,
        "entries_below_one": Q.max_abs_entry() < 1.0,
    }


def rayleigh_certified(Q: QMatrix, x: np.ndarray,
                       delta: float = 1e-13) -> tuple[float, ErrorLedger]:
    """R^N plus the populated error ledger; raises on any failed flag."""
    x = np.asarray(x)
    if x.shape != (Q.n,):
        raise ValueError(f"vector length {x.shape} does not match n={Q.n}")
    n = Q.n
    eps = MACHINE.eps
    flags = check_assumptions(Q, x, delta, eps)
    r_num = rayleigh_numeric(Q, x)
    e_num = (14.0 * delta * n + 5.0 * delta * r_num) * _INFLATE
    ledger = ErrorLedger(
        n=n, delta=delta, eps=eps, eps_r=MACHINE.eps_r,
        alpha=alpha_fn(n, delta, eps) if n >= 2 else 0.0,
        beta=beta_fn(n, delta, eps) if n >= 2 else 0.0,
        rayleigh_num=r_num, error_bound=e_num, assumptions=flags,
    )
    for flag, ok in flags.items():
        if not ok:
            raise AssumptionError(flag, f"n={n}, delta={delta!r}", ledger)
    return r_num, ledger


def normalize_for_certification(x: np.ndarray, max_tries: int = 100) -> np.ndarray:
    """Rescale (and if needed nudge one component) until the numerically
    computed squared norm sits within eps of 1."""
    eps = MACHINE.eps
    x = np.asarray(x, dtype=complex).copy()
    s = norm2_numeric(x)
    if s <= 0.0:
        raise ValueError("cannot normalize the zero vector")
    for _ in range(2):
        if abs(s - 1.0) <= eps:
            return x
        x = x / math.sqrt(s)
        s = norm2_numeric(x)
    i0 = int(np.argmax(np.abs(x)))
    for _ in range(max_tries):
        if abs(s - 1.0) <= eps:
            return x
        d = s - 1.0
        # shrink the largest term |x_i0|^2 by d (first order)
        x[i0] = x[i0] * math.sqrt(max(0.5, 1.0 - d / abs(x[i0]) ** 2))
        s = norm2_numeric(x)
    raise AssumptionError("norm_within_eps",
                          f"could not reach |(norm^2)^N - 1| <= eps, last {s!r}")


def estimate_delta(k: int, phi_mode: str = "stable") -> float:
    """Dual-precision protocol: max entrywise modulus difference between
    the binary64 and double-double builds."""
    window = IndexWindow(k)
    q64 = qmatrix.build(window, "binary64", phi_mode)
    qdd = qmatrix.build(window, "dd", phi_mode)
    # difference against hi first (exact for nearby values), then lo
    dre = (q64.entries.real - qdd.entries.real) - qdd.entries_lo.real
    dim = (q64.entries.imag - qdd.entries.imag) - qdd.entries_lo.imag
    return float(np.max(np.hypot(dre, dim)))


def certify_counterexample(k: int, delta: float = 1e-13,
                           phi_mode: str = "stable",
                           tol: float = 1e-14) -> Verdict:
    """Full pipeline: build, top eigenvector, normalize, certify."""
    Q = qmatrix.build(IndexWindow(k), "binary64", phi_mode)
    res = spectrum.top_eigs(Q, 1, tol=tol)
    x = normalize_for_certification(res.eigenvectors[:, 0])
    r_num, ledger = rayleigh_certified(Q, x, delta)
    bound = r_num - ledger.error_bound
    return Verdict(certified_lower_bound=bound,
                   exceeded_one=bound > 1.0, ledger=ledger)
