"""Small dense Hermitian linear algebra.

All functions take and return plain ``numpy`` arrays.  Matrices are
validated and symmetrized on entry by :func:`as_hermitian`, so downstream
formulas can rely on exact Hermiticity.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvalidInput, NotPositiveSemidefinite, SupportViolation

HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-10
KERNEL_TOL = 1e-10
SUPPORT_TOL = 1e-8


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    """Real eigenvalues in ascending order."""
    eigenvectors: np.ndarray
    """Orthonormal eigenvectors stored as columns."""


def as_hermitian(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return ``a`` as a symmetrized complex Hermitian matrix.

    Raises :class:`InvalidInput` for non-square, empty or non-finite input,
    or when ``max|a - a^H|`` exceeds ``tol``.
    """
    h = np.array(a, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise InvalidInput(f"expected a non-empty square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise InvalidInput("matrix has non-finite entries")
    drift = np.max(np.abs(h - h.conj().T))
    if drift > tol:
        raise InvalidInput(f"matrix is not Hermitian (max |H - H^dag| = {drift:.3g})")
    return (h + h.conj().T) / 2


def eig_hermitian(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Degenerate eigenspaces come back with an arbitrary orthonormal basis;
    LAPACK is deterministic for bit-identical input.
    """
    h = as_hermitian(h)
    w, v = np.linalg.eigh(h)
    return EigenDecomposition(w, v)


def trace_norm(h) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w = eig_hermitian(h).eigenvalues
    return float(np.sum(np.abs(w)))


def psd_sqrt(p, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Positive square root of a PSD matrix.

    Eigenvalues in ``[-psd_tol, 0)`` are clamped to zero; anything more
    negative raises :class:`NotPositiveSemidefinite`.
    """
    w, v = eig_hermitian(p)
    if w[0] < -psd_tol:
        raise NotPositiveSemidefinite(f"minimum eigenvalue {w[0]:.3g} < -{psd_tol:g}")
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return (s + s.conj().T) / 2


def _check_state_pair(rho, drho):
    rho = as_hermitian(rho)
    drho = as_hermitian(drho)
    if rho.shape != drho.shape:
        raise InvalidInput(f"rho {rho.shape} and drho {drho.shape} differ in shape")
    if abs(np.trace(rho).real - 1.0) > 1e-9:
        raise InvalidInput(f"Tr rho = {np.trace(rho).real!r}, expected 1")
    if abs(np.trace(drho).real) > 1e-9:
        raise InvalidInput(f"Tr drho = {np.trace(drho).real!r}, expected 0")
    return rho, drho


def sld(rho, drho, kernel_tol: float = KERNEL_TOL) -> np.ndarray:
    """Symmetric logarithmic derivative of ``rho`` along ``drho``.

    Solves ``drho = (rho L + L rho) / 2`` in the eigenbasis of ``rho``:
    ``L_jk = 2 drho_jk / (p_j + p_k)`` wherever ``p_j + p_k > kernel_tol``,
    and ``L_jk = 0`` on the kernel-kernel block.

    Raises
    ------
    SupportViolation
        If ``drho`` has entries above ``1e-8`` on the kernel-kernel block,
        i.e. the family leaves the support of ``rho`` at first order.
    """
    rho, drho = _check_state_pair(rho, drho)
    p, v = eig_hermitian(rho)
    d = v.conj().T @ drho @ v
    denom = p[:, None] + p[None, :]
    coupled = denom > kernel_tol * max(1.0, float(np.sum(np.abs(p))))
    if np.any(~coupled):
        leak = np.max(np.abs(d[~coupled]))
        if leak > SUPPORT_TOL:
            raise SupportViolation(f"drho has weight {leak:.3g} on the kernel of rho")
    lam = np.zeros_like(d)
    lam[coupled] = 2 * d[coupled] / denom[coupled]
    lam = v @ lam @ v.conj().T
    return (lam + lam.conj().T) / 2


def qfi(rho, drho, kernel_tol: float = KERNEL_TOL) -> float:
    """Quantum Fisher information ``Tr(rho L^2)`` with ``L = sld(rho, drho)``."""
    lam = sld(rho, drho, kernel_tol)
    rho = as_hermitian(rho)
    return float(max(np.trace(rho @ lam @ lam).real, 0.0))
