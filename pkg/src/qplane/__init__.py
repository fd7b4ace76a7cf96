"""Certified spectral verifier for the quarter-plane Wigner matrix."""

from .bounds import SpectralEnclosure, enclosure_check
from .certify import (
    AssumptionError,
    ErrorLedger,
    MachineConstants,
    Verdict,
    certify_counterexample,
    estimate_delta,
    rayleigh_certified,
)
from .qmatrix import IndexWindow, QMatrix, build, entry, matvec
from .spectrum import SpectrumResult, full_eig, min_eig, top_eigs

__all__ = [
    "AssumptionError",
    "ErrorLedger",
    "IndexWindow",
    "MachineConstants",
    "QMatrix",
    "SpectralEnclosure",
    "SpectrumResult",
    "Verdict",
    "build",
    "certify_counterexample",
    "enclosure_check",
    "entry",
    "estimate_delta",
    "full_eig",
    "matvec",
    "min_eig",
    "rayleigh_certified",
    "top_eigs",
]
