"""The two worked examples as per-point functions, shared by the CLI and demos."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UndefinedSusceptibility
from .fisher import DP_TOL, P_TOL, chi_menos, outcome_stats, stats_from_analytic
from .models import hg_mode_stats, interferometer_cfi, interferometer_model, interferometer_povm, superres_model


@dataclass(frozen=True)
class InterferometerPoint:
    phi: float
    cfi_v1: float
    cfi_v: float
    chi: float


def interferometer_point(phi: float, visibility: float, theta: float = 0.0,
                         p_tol: float = P_TOL, dp_tol: float = DP_TOL) -> InterferometerPoint:
    """CFI at unit and at ``visibility``, and the susceptibility of the ideal detectors.

    The CFI columns use the closed form of :func:`interferometer_cfi`.
    ``chi`` is ``inf`` on the dark fringes ``theta + phi in {0, pi}``.
    """
    cfi_v1 = interferometer_cfi(theta, phi, 1.0)
    cfi_v = interferometer_cfi(theta, phi, visibility)
    model = interferometer_model(theta, phi)
    stats = outcome_stats(model, interferometer_povm(theta, phi), p_tol, dp_tol)
    try:
        chi = chi_menos(model, stats).chi
    except UndefinedSusceptibility:
        chi = math.inf
    return InterferometerPoint(phi, cfi_v1, cfi_v, chi)


@dataclass(frozen=True)
class HgPoint:
    theta: float
    cfi: float
    chi: float
    qfi: float


def superres_hg_point(theta: float, sigma: float, n_outcomes: int,
                      p_tol: float = P_TOL, dp_tol: float = DP_TOL) -> HgPoint:
    """Hermite-Gaussian mode sorting with ``n_outcomes - 1`` resolved modes.

    The susceptibility combines the analytic mode statistics with the 4x4
    state: ``rho`` and ``drho`` live in that subspace, so ``A_1 - A_K`` and
    its trace norm are exact there.
    """
    stats = stats_from_analytic(hg_mode_stats(theta, sigma, n_outcomes), p_tol, dp_tol)
    model = superres_model(theta, sigma)
    try:
        chi = chi_menos(model, stats).chi
    except UndefinedSusceptibility:
        chi = math.inf
    return HgPoint(theta, stats.cfi, chi, model.qfi_known)
