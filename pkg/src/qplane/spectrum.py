"""Extremal eigenvalues of the windowed matrix.

top_eigs runs power iteration with Hotelling deflation on the positively
shifted matrix A + I/sqrt(pi): the certified lower spectral bound makes
the shifted spectrum positive, so the dominant eigenvalue of the shifted
operator is the algebraically largest of A and modulus ties of opposite
sign cannot occur.  Tight same-sign clusters escalate to subspace
iteration with block size 2.  min_eig applies the same engine to
sigma*I - A with the certified upper bound as sigma.  full_eig is the
small-n oracle: cyclic complex Jacobi rotations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .qmatrix import QMatrix

RESID_REL = 1e-12          # reported pairs satisfy resid <= RESID_REL*(1+|lam|)
_SEED = 0x5EED


class NonConvergenceError(ArithmeticError):
    """Iteration budget exhausted; carries the best iterate found."""

    def __init__(self, message: str, best_value: float, residual: float,
                 best_vector: np.ndarray | None = None):
        super().__init__(f"{message} (best {best_value!r}, residual {residual:.3e})")
        self.best_value = best_value
        self.residual = residual
        self.best_vector = best_vector


@dataclass
class SpectrumResult:
    eigenvalues: list[float]                    # descending
    eigenvectors: np.ndarray                    # columns, unit 2-norm
    residuals: list[float]
    iterations: list[int]
    k: int | None = None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "eigenvalues": list(self.eigenvalues),
            "residuals": list(self.residuals),
            "iterations": list(self.iterations),
        }


def _start_vector(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return x / np.linalg.norm(x)


def _fix_phase(x: np.ndarray) -> np.ndarray:
    i0 = int(np.argmax(np.abs(x)))
    ph = x[i0]
    x = x * (abs(ph) / ph)
    return x / np.linalg.norm(x)


def _power_dominant(B: np.ndarray, tol: float, max_iter: int, seed: int,
                    resid_target: float) -> tuple[float, np.ndarray, int]:
    """Dominant eigenpair of the Hermitian positive-shifted matrix B."""
    n = B.shape[0]
    x = _start_vector(n, seed)
    mu_prev = math.inf
    check = 16
    it = 0
    escalate_at = min(max_iter // 4, 30000)
    while it < max_iter:
        y = B @ x
        mu = float(np.real(np.vdot(x, y)))
        if it % check == 0:
            r = float(np.linalg.norm(y - mu * x))
            if abs(mu - mu_prev) <= tol * max(1.0, abs(mu)) and r <= resid_target:
                return mu, x, it
            mu_prev = mu
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0, x, it
        x = y / nrm
        it += 1
        if it == escalate_at:
            mu, x, used = _block2_dominant(
                B, x, tol, max_iter - it, seed, resid_target)
            return mu, x, it + used
    r = float(np.linalg.norm(B @ x - mu * x))
    raise NonConvergenceError("power iteration did not converge", mu, r, x)


def _block2_dominant(B: np.ndarray, x0: np.ndarray, tol: float, max_iter: int,
                     seed: int, resid_target: float) -> tuple[float, np.ndarray, int]:
    """Subspace iteration of block size 2; returns the leading Ritz pair."""
    n = B.shape[0]
    V = np.column_stack([x0, _start_vector(n, seed + 0x9E37)])
    V, _ = np.linalg.qr(V)
    mu_prev = math.inf
    it = 0
    while it < max_iter:
        Z = B @ V
        if it % 8 == 0:
            H = V.conj().T @ Z
            H = 0.5 * (H + H.conj().T)
            theta, S = np.linalg.eigh(H)
            mu = float(theta[-1])
            x = V @ S[:, -1]
            r = float(np.linalg.norm(B @ x - mu * x))
            if abs(mu - mu_prev) <= tol * max(1.0, abs(mu)) and r <= resid_target:
                return mu, x / np.linalg.norm(x), it
            mu_prev = mu
        V, _ = np.linalg.qr(Z)
        it += 1
    H = V.conj().T @ (B @ V)
    theta, S = np.linalg.eigh(0.5 * (H + H.conj().T))
    mu = float(theta[-1])
    x = V @ S[:, -1]
    r = float(np.linalg.norm(B @ x - mu * x))
    raise NonConvergenceError(
        "block-2 subspace iteration did not converge", mu, r, x)


def _orthogonalize(x: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    for _ in range(2):  # two MGS passes
        for v in basis:
            x = x - v * np.vdot(v, x)
    return x / np.linalg.norm(x)


def top_eigs(Q: QMatrix, m: int, tol: float = 1e-14,
             max_iter: int = 400000, seed: int = _SEED) -> SpectrumResult:
    """The m algebraically largest eigenpairs, descending."""
    n = Q.n
    if not 1 <= m <= n:
        raise ValueError(f"m={m} outside [1, {n}]")
    if tol < 1e-15:
        raise ValueError("tol must be >= 1e-15")
    A = Q.entries
    shift = -bounds.LOWER  # 1/sqrt(pi) > -lambda_min, certified
    B = A + shift * np.eye(n)
    vals: list[float] = []
    vecs: list[np.ndarray] = []
    resids: list[float] = []
    iters: list[int] = []
    for i in range(m):
        resid_target = 0.25 * RESID_REL
        mu, x, it = _power_dominant(B, tol, max_iter, seed + i, resid_target)
        if vecs:
            x = _orthogonalize(x, vecs)
        lam = float(np.real(np.vdot(x, A @ x)))
        r = float(np.linalg.norm(A @ x - lam * x))
        polish = 0
        while r > RESID_REL * (1.0 + abs(lam)) and polish < 200:
            x = B @ x
            if vecs:
                x = _orthogonalize(x, vecs)
            else:
                x = x / np.linalg.norm(x)
            lam = float(np.real(np.vdot(x, A @ x)))
            r = float(np.linalg.norm(A @ x - lam * x))
            polish += 1
        if r > RESID_REL * (1.0 + abs(lam)):
            raise NonConvergenceError(f"pair {i} residual above target", lam, r, x)
        x = _fix_phase(x)
        vals.append(lam)
        vecs.append(x)
        resids.append(r)
        iters.append(it + polish)
        B = B - (lam + shift) * np.outer(x, x.conj())
    order = np.argsort(vals)[::-1]
    return SpectrumResult(
        eigenvalues=[vals[i] for i in order],
        eigenvectors=np.column_stack([vecs[i] for i in order]),
        residuals=[resids[i] for i in order],
        iterations=[iters[i] for i in order],
        k=Q.window.k,
    )


def min_eig_pair(Q: QMatrix, tol: float = 1e-14,
                 max_iter: int = 400000, seed: int = _SEED + 97):
    """Smallest eigenpair via power iteration on sigma*I - A."""
    n = Q.n
    A = Q.entries
    sigma = bounds.UPPER
    C = sigma * np.eye(n) - A
    mu, x, it = _power_dominant(C, tol, max_iter, seed, 0.25 * RESID_REL)
    lam = float(np.real(np.vdot(x, A @ x)))
    r = float(np.linalg.norm(A @ x - lam * x))
    polish = 0
    while r > RESID_REL * (1.0 + abs(lam)) and polish < 200:
        x = C @ x
        x = x / np.linalg.norm(x)
        lam = float(np.real(np.vdot(x, A @ x)))
        r = float(np.linalg.norm(A @ x - lam * x))
        polish += 1
    if r > RESID_REL * (1.0 + abs(lam)):
        raise NonConvergenceError("min_eig residual above target", lam, r, x)
    return lam, _fix_phase(x), r, it + polish


def min_eig(Q: QMatrix, tol: float = 1e-14) -> float:
    return min_eig_pair(Q, tol)[0]


FULL_EIG_MAX_N = 600


def full_eig(Q: QMatrix) -> SpectrumResult:
    """Complete eigendecomposition by cyclic complex Jacobi rotations."""
    n = Q.n
    if n > FULL_EIG_MAX_N:
        raise ValueError(f"full_eig guard: n={n} > {FULL_EIG_MAX_N}")
    A = np.array(Q.entries, dtype=complex)
    V = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(A))))
    skip = 1e-16 * scale
    sweeps = 0
    for sweep in range(80):
        sweeps = sweep + 1
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                off = max(off, r)
                if r <= skip:
                    continue
                ph = apq / r  # e^{i phi}: diag(1, conj(ph)) makes the block real
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # U columns: U[:,p] = (c, -s*conj(ph)), U[:,q] = (s, c*conj(ph))
                up_q = s * ph.conjugate()
                uq_q = c * ph.conjugate()
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - up_q * cq
                A[:, q] = s * cp + uq_q * cq
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - (s * ph) * rq
                A[q, :] = s * rp + (c * ph) * rq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - up_q * vq
                V[:, q] = s * vp + uq_q * vq
        if off <= 1e-14 * scale:
            break
    lam = np.real(np.diag(A))
    order = np.argsort(lam)[::-1]
    lam = lam[order]
    V = V[:, order]
    Araw = Q.entries
    resids = []
    for i in range(n):
        x = V[:, i] / np.linalg.norm(V[:, i])
        V[:, i] = _fix_phase(x)
        resids.append(float(np.linalg.norm(Araw @ V[:, i] - lam[i] * V[:, i])))
    return SpectrumResult(
        eigenvalues=[float(v) for v in lam],
        eigenvectors=V,
        residuals=resids,
        iterations=[sweeps] * n,
        k=Q.window.k,
    )
