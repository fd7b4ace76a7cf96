"""The finite Hermitian matrix over the symmetric index window.

Entries follow the closed form

    a[j,k] = 1_N(j) 1_N(k) delta_{jk}/2
             + i * Phi(k-j) * (1_N(j+k) + delta_{j+k+1,0}/2)

with 1_N(m) = 1 iff m >= 0.  All public APIs speak window indices
j in [-k, k]; the array offset j+k stays private.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import phi as phimod
from .xprec import DDComplex, DDReal

K_CAPACITY = 20000


class CapacityError(ValueError):
    """Window size beyond the dense-storage guard."""


@dataclass(frozen=True)
class IndexWindow:
    """Symmetric window {-k, ..., k}, n = 2k+1, array index = j + k."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be nonnegative")

    @property
    def n(self) -> int:
        return 2 * self.k + 1

    def indices(self) -> range:
        return range(-self.k, self.k + 1)

    def to_array(self, j: int) -> int:
        if not -self.k <= j <= self.k:
            raise IndexError(f"window index {j} outside [-{self.k}, {self.k}]")
        return j + self.k

    def to_window(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"array index {i} outside [0, {self.n})")
        return i - self.k


def entry(j: int, k: int, phi_mode: str = "stable") -> complex:
    """One matrix entry; total on all integer pairs."""
    pf = phimod.phi_for_mode(phi_mode)
    re = 0.5 if (j == k and j >= 0) else 0.0
    w = (1.0 if j + k >= 0 else 0.0) + (0.5 if j + k + 1 == 0 else 0.0)
    im = pf(k - j) * w if w != 0.0 else 0.0
    return complex(re, im)


def entry_dd(j: int, k: int, phi_mode: str = "stable") -> DDComplex:
    """dd twin of entry(); identical branch structure."""
    pf = phimod.phi_dd_for_mode(phi_mode)
    re = DDReal(0.5) if (j == k and j >= 0) else DDReal(0.0)
    if j + k >= 0:
        im = pf(k - j)
    elif j + k + 1 == 0:
        im = pf(k - j) * DDReal(0.5)
    else:
        im = DDReal(0.0)
    return DDComplex(re, im)


def scale_entry(value: complex, eps: float) -> complex:
    """Entry of the eps-scaled discretization: a[j,k,eps] = eps * a[j,k]."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    return eps * value


@dataclass
class QMatrix:
    window: IndexWindow
    precision: str  # "binary64" | "dd"
    phi_mode: str
    entries: np.ndarray               # complex128, n x n; dd: hi parts
    entries_lo: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.window.n

    def at(self, j: int, k: int) -> complex:
        return complex(self.entries[self.window.to_array(j), self.window.to_array(k)])

    def at_dd(self, j: int, k: int) -> DDComplex:
        if self.entries_lo is None:
            raise ValueError("not a dd-precision matrix")
        hi = self.entries[self.window.to_array(j), self.window.to_array(k)]
        lo = self.entries_lo[self.window.to_array(j), self.window.to_array(k)]
        return DDComplex(DDReal(hi.real, lo.real), DDReal(hi.imag, lo.imag))

    def max_abs_entry(self) -> float:
        return float(np.max(np.abs(self.entries)))

    def header(self) -> dict:
        return {
            "k": self.window.k,
            "n": self.n,
            "precision": self.precision,
            "max_abs_entry": self.max_abs_entry(),
        }


def build(window: IndexWindow, precision: str = "binary64",
          phi_mode: str = "stable") -> QMatrix:
    """Construct the matrix: upper triangle filled, lower mirrored."""
    if window.k > K_CAPACITY:
        raise CapacityError(f"k={window.k} beyond the k<={K_CAPACITY} guard")
    if precision == "binary64":
        return _build_b64(window, phi_mode)
    if precision == "dd":
        return _build_dd(window, phi_mode)
    raise ValueError(f"unknown precision {precision!r}")


def _phi_row(window: IndexWindow, pf) -> np.ndarray:
    """Phi(l) for l in [-2k, 2k], indexed by l + 2k."""
    k = window.k
    vals = np.empty(4 * k + 1)
    for l in range(-2 * k, 2 * k + 1):
        vals[l + 2 * k] = pf(l)
    return vals


def _build_b64(window: IndexWindow, phi_mode: str) -> QMatrix:
    k, n = window.k, window.n
    pf = phimod.phi_for_mode(phi_mode)
    phis = _phi_row(window, pf)
    idx = np.arange(-k, k + 1)
    J, K = np.meshgrid(idx, idx, indexing="ij")
    weight = (J + K >= 0).astype(float) + 0.5 * (J + K + 1 == 0)
    im = phis[K - J + 2 * k] * weight
    re = np.where((J == K) & (J >= 0), 0.5, 0.0)
    upper = np.triu(re + 1j * im)
    entries = upper + np.conj(np.triu(upper, 1)).T
    return QMatrix(window, "binary64", phi_mode, entries)


def _build_dd(window: IndexWindow, phi_mode: str) -> QMatrix:
    k, n = window.k, window.n
    pf = phimod.phi_dd_for_mode(phi_mode)
    phis = [pf(l) for l in range(-2 * k, 2 * k + 1)]
    hi = np.zeros((n, n), dtype=complex)
    lo = np.zeros((n, n), dtype=complex)
    half = DDReal(0.5)
    for j in range(-k, k + 1):
        for kk in range(j, k + 1):  # upper triangle in window order
            s = j + kk
            if s >= 0:
                p = phis[kk - j + 2 * k]
            elif s + 1 == 0:
                p = phis[kk - j + 2 * k] * half
            else:
                p = DDReal(0.0)
            r, c = j + k, kk + k
            re = 0.5 if (j == kk and j >= 0) else 0.0
            hi[r, c] = complex(re, p.hi)
            lo[r, c] = complex(0.0, p.lo)
            if r != c:
                hi[c, r] = hi[r, c].conjugate()
                lo[c, r] = lo[r, c].conjugate()
    return QMatrix(window, "dd", phi_mode, hi, lo)


def matvec(Q: QMatrix, z: np.ndarray, certified_order: bool = False) -> np.ndarray:
    """Dense product; certified order accumulates each row left-to-right."""
    z = np.asarray(z)
    if z.shape != (Q.n,):
        raise ValueError(f"vector length {z.shape} does not match n={Q.n}")
    if not certified_order:
        return Q.entries @ z
    out = np.empty(Q.n, dtype=complex)
    A = Q.entries
    for i in range(Q.n):
        acc = complex(0.0)
        row = A[i]
        for j in range(Q.n):
            acc = acc + row[j] * z[j]
        out[i] = acc
    return out


def matvec_dd(Q: QMatrix, z) -> list[DDComplex]:
    """dd reference product, row sums left-to-right."""
    if Q.entries_lo is None:
        raise ValueError("matvec_dd needs a dd-precision matrix")
    zdd = [w if isinstance(w, DDComplex) else DDComplex.from_complex(complex(w))
           for w in z]
    if len(zdd) != Q.n:
        raise ValueError(f"vector length {len(zdd)} does not match n={Q.n}")
    out = []
    for i in range(Q.n):
        acc = DDComplex(DDReal(0.0), DDReal(0.0))
        for j in range(Q.n):
            hi = Q.entries[i, j]
            lo = Q.entries_lo[i, j]
            a = DDComplex(DDReal(hi.real, lo.real), DDReal(hi.imag, lo.imag))
            acc = acc + a * zdd[j]
        out.append(acc)
    return out


def write_csv(Q: QMatrix, path: str) -> None:
    """Row-major 're,im' pairs, 17 significant digits."""
    with open(path, "w", newline="\n") as f:
        for i in range(Q.n):
            row = Q.entries[i]
            f.write(",".join(f"{v.real:.16e},{v.imag:.16e}" for v in row))
            f.write("\n")


def write_header_json(Q: QMatrix, path: str) -> None:
    with open(path, "w", newline="\n") as f:
        json.dump(Q.header(), f, sort_keys=True)
        f.write("\n")
