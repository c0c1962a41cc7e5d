"""Classical Fisher information and measurement-noise susceptibility.

The susceptibility of a measurement ``M`` to a noise POVM ``N`` is the
first-order relative loss of classical Fisher information (CFI) when ``M``
is replaced by ``(1 - eps) M + eps N``.  It equals ``1 + G[N] / F_C[M]``
with ``G[N] = sum_i Tr(A_i N_i)`` and ``A_i = l_i^2 rho - 2 l_i drho``.
The worst case over all ``N`` has the closed form implemented in
:func:`chi_menos`; :func:`chi_bruteforce` is an independent search used to
check it.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, InvalidArgument, UndefinedSusceptibility
from .models import AnalyticOutcomeModel, ModelAtPoint
from .povm import Povm, random_povm

P_TOL = 1e-12
DP_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OutcomeStats:
    """Per-outcome probability ``p``, derivative ``dp`` and log-derivative ``l``.

    Outcomes with ``p <= p_tol`` and ``|dp| <= dp_tol`` are flagged
    non-informative and carry ``l = 0``.  An outcome with vanishing
    probability but non-vanishing derivative makes ``cfi`` infinite.  When
    every ``|dp_i| <= dp_tol`` the measurement is blind: ``l = 0`` and
    ``cfi = 0``.
    """

    p: np.ndarray
    dp: np.ndarray
    l: np.ndarray
    informative: np.ndarray
    cfi: float

    @property
    def n_outcomes(self) -> int:
        return len(self.p)

    @property
    def divergent(self) -> bool:
        return math.isinf(self.cfi)


def _stats(p, dp, p_tol, dp_tol) -> OutcomeStats:
    p = np.array(p, dtype=float)
    dp = np.array(dp, dtype=float)
    small = p <= p_tol
    informative = ~(small & (np.abs(dp) <= dp_tol))
    l = np.zeros_like(p)
    if np.all(np.abs(dp) <= dp_tol):
        # blind measurement: any |dp_i| > dp_tol would force cfi > dp_tol**2
        cfi = 0.0
    else:
        regular = informative & ~small
        l[regular] = dp[regular] / p[regular]
        singular = informative & small
        if np.any(singular):
            with np.errstate(divide="ignore"):
                l[singular] = np.where(p[singular] > 0, dp[singular] / p[singular], np.copysign(np.inf, dp[singular]))
            cfi = math.inf
        else:
            cfi = float(np.sum(dp[regular] * l[regular]))
    for a in (p, dp, l, informative):
        a.flags.writeable = False
    return OutcomeStats(p, dp, l, informative, cfi)


def outcome_stats(model: ModelAtPoint, povm: Povm, p_tol: float = P_TOL, dp_tol: float = DP_TOL) -> OutcomeStats:
    """Outcome statistics of measuring ``povm`` on ``model``."""
    if povm.dim != model.dim:
        raise DimensionMismatch(f"POVM dim {povm.dim} != model dim {model.dim}")
    # Tr(A M_i) = sum_ab A_ab (M_i)_ba
    p = np.einsum("ab,kba->k", model.rho, povm.elements).real
    dp = np.einsum("ab,kba->k", model.drho, povm.elements).real
    return _stats(p, dp, p_tol, dp_tol)


def stats_from_analytic(a: AnalyticOutcomeModel, p_tol: float = P_TOL, dp_tol: float = DP_TOL) -> OutcomeStats:
    return _stats(a.p, a.dp, p_tol, dp_tol)


def cfi(model: ModelAtPoint, povm: Povm) -> float:
    return outcome_stats(model, povm).cfi


def crb(cfi: float, n: int = 1) -> float:
    """Cramer-Rao bound ``1 / (n cfi)`` on the variance of unbiased estimators."""
    if n < 1:
        raise InvalidArgument(f"number of repetitions must be positive, got {n!r}")
    if cfi < 0 or math.isnan(cfi):
        raise InvalidArgument(f"Fisher information must be non-negative, got {cfi!r}")
    if cfi == 0:
        return math.inf
    return 1.0 / (n * cfi)


def a_operator(model: ModelAtPoint, l: float) -> np.ndarray:
    """``A = l^2 rho - 2 l drho``."""
    return l * l * model.rho - 2 * l * model.drho


def _require_finite(stats: OutcomeStats):
    if stats.divergent:
        raise UndefinedSusceptibility("CFI diverges (zero-probability outcome with non-zero derivative)")


def g_functional(model: ModelAtPoint, stats: OutcomeStats, noise: Povm) -> float:
    """``G[N] = sum_i Tr(A_i N_i)``, the first-order CFI change per unit noise."""
    _require_finite(stats)
    if noise.n_outcomes != stats.n_outcomes or noise.dim != model.dim:
        raise DimensionMismatch(
            f"noise POVM has shape {noise.n_outcomes}x{noise.dim}, expected {stats.n_outcomes}x{model.dim}"
        )
    l = stats.l
    tr_rho = np.einsum("ab,kba->k", model.rho, noise.elements).real
    tr_drho = np.einsum("ab,kba->k", model.drho, noise.elements).real
    return float(np.sum(l * l * tr_rho - 2 * l * tr_drho))


def chi_pair(model: ModelAtPoint, stats_m: OutcomeStats, m: Povm, noise: Povm) -> float:
    """Susceptibility of ``m`` to the specific noise POVM ``noise``."""
    if m.n_outcomes != noise.n_outcomes:
        raise DimensionMismatch(f"M has {m.n_outcomes} outcomes, N has {noise.n_outcomes}")
    _require_finite(stats_m)
    if stats_m.cfi <= 0:
        raise UndefinedSusceptibility("CFI is zero")
    return 1.0 + g_functional(model, stats_m, noise) / stats_m.cfi


@dataclass(frozen=True, eq=False)
class MenosReport:
    """Worst-case susceptibility of a measurement and the noise attaining it."""

    chi: float
    cfi: float
    l_min: float
    l_max: float
    g_max: float
    i_min: Optional[int] = None
    i_max: Optional[int] = None
    a_min: Optional[np.ndarray] = None
    a_max: Optional[np.ndarray] = None
    worst_noise: Optional[Povm] = None


def chi_menos(model: ModelAtPoint, stats: OutcomeStats) -> MenosReport:
    """Closed-form worst-case susceptibility.

    Only the outcomes with extreme logarithmic derivative matter::

        chi = 1 + (l_min^2 + l_max^2 + ||A_min - A_max||_1) / (2 F_C)

    The maximizing noise puts the projector onto the non-negative
    eigenspace of ``A_min - A_max`` on the ``l_min`` label and its
    complement on the ``l_max`` label.  Ties between labels resolve to the
    smallest index.  A divergent CFI gives ``chi = inf``.
    """
    if stats.n_outcomes < 2:
        raise UndefinedSusceptibility("a single-outcome measurement carries no information")
    if stats.divergent:
        finite = stats.l[np.isfinite(stats.l)]
        lo = float(min(stats.l.min(), finite.min(initial=0.0)))
        hi = float(max(stats.l.max(), finite.max(initial=0.0)))
        return MenosReport(chi=math.inf, cfi=math.inf, l_min=lo, l_max=hi, g_max=math.inf)
    if stats.cfi <= 0:
        raise UndefinedSusceptibility("CFI is zero")
    idx = np.flatnonzero(stats.informative)
    i_min = int(idx[np.argmin(stats.l[idx])])
    i_max = int(idx[np.argmax(stats.l[idx])])
    l_min, l_max = float(stats.l[i_min]), float(stats.l[i_max])
    a_min, a_max = a_operator(model, l_min), a_operator(model, l_max)
    w, v = np.linalg.eigh(a_min - a_max)
    pos = v[:, w >= 0]
    n1 = pos @ pos.conj().T
    g_max = 0.5 * (l_min**2 + l_max**2 + float(np.sum(np.abs(w))))
    noise = np.zeros((stats.n_outcomes, model.dim, model.dim), dtype=complex)
    noise[i_min] = n1
    noise[i_max] = np.eye(model.dim) - n1
    return MenosReport(
        chi=1.0 + g_max / stats.cfi,
        cfi=stats.cfi,
        l_min=l_min,
        l_max=l_max,
        g_max=g_max,
        i_min=i_min,
        i_max=i_max,
        a_min=a_min,
        a_max=a_max,
        worst_noise=Povm(noise),
    )


def _spectral_subsets(d: np.ndarray, max_full: int = 10):
    w, v = np.linalg.eigh(d)
    n = len(w)
    if n <= max_full:
        masks = itertools.product((False, True), repeat=n)
    else:
        masks = [w >= 0, w > 0, w < 0, w <= 0]
    for mask in masks:
        cols = v[:, np.array(mask, dtype=bool)]
        yield cols @ cols.conj().T


def chi_bruteforce(model: ModelAtPoint, stats: OutcomeStats, m: Povm, trials: int = 200, seed=0) -> float:
    """Direct search for the worst-case susceptibility.

    Evaluates ``1 + G[N] / F_C`` by plain trace sums over (a) ``trials``
    random full POVMs and (b) every two-outcome noise ``(P, 1 - P)`` placed
    on any ordered pair of labels, with ``P`` ranging over all sums of
    eigenprojectors of ``A_i - A_j``.  Returns the largest value seen.
    """
    if stats.n_outcomes < 2:
        raise UndefinedSusceptibility("a single-outcome measurement carries no information")
    _require_finite(stats)
    if stats.cfi <= 0:
        raise UndefinedSusceptibility("CFI is zero")
    k, dim = stats.n_outcomes, model.dim
    best = -math.inf
    for t in range(trials):
        noise = random_povm(dim, k, seed=(seed, t))
        best = max(best, chi_pair(model, stats, m, noise))
    eye = np.eye(dim)
    for i, j in itertools.permutations(range(k), 2):
        d = a_operator(model, stats.l[i]) - a_operator(model, stats.l[j])
        for proj in _spectral_subsets(d):
            noise = np.zeros((k, dim, dim), dtype=complex)
            noise[i] = proj
            noise[j] = eye - proj
            best = max(best, chi_pair(model, stats, m, Povm(noise)))
    return best
