"""QCRB-saturating measurements and their minimal susceptibility."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidArgument, NoFeasiblePoint
from .fisher import P_TOL, chi_menos, outcome_stats
from .linalg import KERNEL_TOL, psd_sqrt, qfi, sld
from .models import ModelAtPoint, superres_model
from .povm import Povm

SAT_TOL = 1e-7
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class SaturationReport:
    saturates: bool
    max_condition1_residual: float
    max_condition2_residual: float
    cfi: float
    qfi: float

    @property
    def cfi_gap(self) -> float:
        return self.qfi - self.cfi

    def to_dict(self) -> dict:
        return {
            "saturates": self.saturates,
            "max_condition1_residual": self.max_condition1_residual,
            "max_condition2_residual": self.max_condition2_residual,
            "cfi": self.cfi,
            "qfi": self.qfi,
            "cfi_gap": self.cfi_gap,
        }


def check_saturation(
    model: ModelAtPoint,
    povm: Povm,
    tol: float = SAT_TOL,
    kernel_tol: float = KERNEL_TOL,
    p_tol: float = P_TOL,
) -> SaturationReport:
    """Certify whether ``povm`` attains the QFI of ``model``.

    With ``rho = sum_j p_j |psi_j><psi_j|`` (``p_j > 0``), ``L`` the SLD and
    ``L_jk = |psi_j><psi_k| L - L |psi_j><psi_k|``, a POVM saturates iff
    ``sqrt(M_i) L_jk sqrt(M_i) = 0`` for all ``i, j, k`` and
    ``sqrt(M_i) L |psi_j> = 0`` for every outcome of zero probability.
    Residuals are compared with ``tol * max(1, max|L|)``; the CFI must also
    match the QFI to relative precision ``tol``.
    """
    if povm.dim != model.dim:
        raise DimensionMismatch(f"POVM dim {povm.dim} != model dim {model.dim}")
    p, v = np.linalg.eigh(model.rho)
    psis = v[:, p > kernel_tol]
    lam = sld(model.rho, model.drho, kernel_tol)
    roots = [psd_sqrt(m) for m in povm]

    res1 = 0.0
    for j, k in itertools.product(range(psis.shape[1]), repeat=2):
        outer = np.outer(psis[:, j], psis[:, k].conj())
        l_jk = outer @ lam - lam @ outer
        for s in roots:
            res1 = max(res1, float(np.max(np.abs(s @ l_jk @ s))))

    stats = outcome_stats(model, povm, p_tol=p_tol)
    res2 = 0.0
    lam_psi = lam @ psis
    for i in np.flatnonzero(stats.p <= p_tol):
        res2 = max(res2, float(np.max(np.abs(roots[i] @ lam_psi))))

    fq = qfi(model.rho, model.drho, kernel_tol)
    scale = max(1.0, float(np.max(np.abs(lam))))
    ok = (
        not stats.divergent
        and res1 <= tol * scale
        and res2 <= tol * scale
        and abs(fq - stats.cfi) <= tol * fq
    )
    return SaturationReport(bool(ok), res1, res2, stats.cfi, fq)


def is_equator_povm(povm: Povm, tol: float = 1e-8) -> bool:
    """True iff every non-zero element is rank one and proportional to a Bloch-equator projector."""
    if povm.dim != 2:
        raise InvalidArgument(f"equator POVMs are qubit POVMs, got dim {povm.dim}")
    for m in povm:
        w, v = np.linalg.eigh(m)
        if w[1] <= tol:
            continue
        if abs(w[0]) > tol:
            return False
        amp = np.abs(v[:, 1])
        if np.max(np.abs(amp - 1 / math.sqrt(2))) > tol:
            return False
    return True


def equator_parameters(povm: Povm) -> tuple[np.ndarray, np.ndarray]:
    """Weights ``lambda_i`` and phases ``phi_i`` of an equator POVM's elements."""
    weights = np.array([np.trace(m).real for m in povm])
    phases = np.array([np.angle(m[1, 0]) for m in povm])
    return weights, phases


def meridian_state(phi: float) -> np.ndarray:
    return np.array([math.cos(phi / 2), math.sin(phi / 2)])


def superres_family_povm(phi_s: float, phi_a: float) -> Povm:
    """Two projective pairs, one per block of the 4x4 imaging model.

    Elements are projectors onto ``cos(phi/2)|0>_x + sin(phi/2)|1>_x`` for
    ``(x, phi)`` in ``(s, phi_s), (s, phi_s + pi), (a, phi_a), (a, phi_a + pi)``.
    """
    elements = []
    for offset, phi in ((0, phi_s), (0, phi_s + math.pi), (2, phi_a), (2, phi_a + math.pi)):
        vec = np.zeros(4)
        vec[offset:offset + 2] = meridian_state(phi)
        elements.append(np.outer(vec, vec))
    return Povm(elements)


@dataclass(frozen=True)
class ChiQResult:
    theta: float
    sigma: float
    phi_s: float
    phi_a: float
    chi_q: float
    cfi_at_optimum: float
    evaluations: int

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "sigma": self.sigma,
            "phi_s": self.phi_s,
            "phi_a": self.phi_a,
            "chi_q": self.chi_q,
            "cfi": self.cfi_at_optimum,
        }


def _superres_objective(model, fq, sat_tol, p_tol):
    def evaluate(phi_s, phi_a):
        stats = outcome_stats(model, superres_family_povm(phi_s, phi_a), p_tol=p_tol)
        if stats.divergent or abs(fq - stats.cfi) > sat_tol * fq:
            return None
        return chi_menos(model, stats).chi, stats.cfi

    return evaluate


def minimize_chi_q_superres(
    theta: float,
    sigma: float,
    grid_n: int = 24,
    refine_iters: int = 6,
    sat_tol: float = SAT_TOL,
    p_tol: float = P_TOL,
) -> ChiQResult:
    """Minimal susceptibility over QCRB-saturating imaging measurements.

    Deterministic grid search over ``(phi_s, phi_a)`` in ``[0, 2 pi)^2``
    followed by ``refine_iters`` rounds on a ``grid_n x grid_n`` window
    centred on the incumbent, shrinking the window by 4 each round.
    Points that lose Fisher information (degenerate angles) are skipped.
    Ties go to the lexicographically smaller angle pair.
    """
    if grid_n < 16:
        raise InvalidArgument(f"grid_n must be at least 16, got {grid_n}")
    model = superres_model(theta, sigma)
    fq = qfi(model.rho, model.drho)
    evaluate = _superres_objective(model, fq, sat_tol, p_tol)

    best = None
    evaluations = 0

    def scan(axis_s, axis_a):
        nonlocal best, evaluations
        for ps in axis_s:
            for pa in axis_a:
                ps_w, pa_w = ps % TWO_PI, pa % TWO_PI
                evaluations += 1
                out = evaluate(ps_w, pa_w)
                if out is None:
                    continue
                key = (out[0], ps_w, pa_w)
                if best is None or key < best[0]:
                    best = (key, out[1])

    coarse = TWO_PI * np.arange(grid_n) / grid_n
    scan(coarse, coarse)
    if best is None:
        raise NoFeasiblePoint(f"no QCRB-saturating grid point at theta={theta!r}")
    offsets = np.linspace(-0.5, 0.5, grid_n)
    width = TWO_PI
    for _ in range(refine_iters):
        width /= 4
        (_, cs, ca), _ = best
        scan(cs + width * offsets, ca + width * offsets)

    (chi, ps, pa), f_c = best
    return ChiQResult(float(theta), float(sigma), float(ps), float(pa), float(chi), float(f_c), evaluations)
