"""Analytic spectral constants and kernel functions as executable checks.

The enclosure constants bound every eigenvalue of the windowed matrix:
the operator itself satisfies -1/sqrt(pi) <= A <= 1/2 + sqrt(pi+1)/(2 sqrt(pi)).
The tighter Wood-Bracken interval, from the numerical literature on the
same quarter-plane operator, is carried verbatim as a secondary
containment check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

LOWER = -1.0 / math.sqrt(math.pi)
UPPER = 0.5 + math.sqrt(math.pi + 1.0) / (2.0 * math.sqrt(math.pi))
WB_LOWER = -0.155939843
WB_UPPER = 1.007679970


@dataclass(frozen=True)
class SpectralEnclosure:
    lower: float = LOWER
    upper: float = UPPER
    wb_lower: float = WB_LOWER
    wb_upper: float = WB_UPPER

    def __post_init__(self):
        assert self.lower < self.wb_lower < 0.0 < 1.0 < self.wb_upper < self.upper


def psi(t: float) -> float:
    """Log(1+t)/t, decreasing on (-1, inf), psi(0) = 1.

    A short series takes over below |t| = 1e-4 where the quotient would
    cancel.
    """
    if t <= -1.0:
        raise ValueError("psi requires t > -1")
    if abs(t) < 1e-4:
        return 1.0 - t / 2.0 + t * t / 3.0 - t * t * t / 4.0
    return math.log1p(t) / t


def kernel_k(x: float, y: float) -> float:
    """Kernel of the squared off-corner part; 0 off the positive quadrant."""
    if x <= 0.0 or y <= 0.0:
        return 0.0
    s = x + y
    return psi(abs(y - x) / s) / (4.0 * math.pi ** 2 * s)


@dataclass
class EnclosureReport:
    passed: bool
    violations: list[str] = field(default_factory=list)
    margin_lower: float = math.inf
    margin_upper: float = math.inf
    margin_wb_lower: float = math.inf
    margin_wb_upper: float = math.inf

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "violations": self.violations,
            "margins": {
                "lower": self.margin_lower,
                "upper": self.margin_upper,
                "wb_lower": self.margin_wb_lower,
                "wb_upper": self.margin_wb_upper,
            },
        }


def enclosure_check(eigenvalues) -> EnclosureReport:
    """Containment of every eigenvalue in both intervals, with margins."""
    enc = SpectralEnclosure()
    rep = EnclosureReport(passed=True)
    for lam in eigenvalues:
        rep.margin_lower = min(rep.margin_lower, lam - enc.lower)
        rep.margin_upper = min(rep.margin_upper, enc.upper - lam)
        rep.margin_wb_lower = min(rep.margin_wb_lower, lam - enc.wb_lower)
        rep.margin_wb_upper = min(rep.margin_wb_upper, enc.wb_upper - lam)
        for name, ok in (
            ("lower", lam > enc.lower),
            ("upper", lam < enc.upper),
            ("wb_lower", lam > enc.wb_lower),
            ("wb_upper", lam < enc.wb_upper),
        ):
            if not ok:
                rep.passed = False
                rep.violations.append(f"{name} violated by eigenvalue {lam!r}")
    return rep
