"""Parametric state families frozen at a working point.

Builders return a :class:`ModelAtPoint` (state and first derivative as
matrices) or an :class:`AnalyticOutcomeModel` (outcome probabilities and
their derivatives, when the measurement statistics are known in closed
form).

The two-source imaging model lives in the 4-dimensional space spanned by
the shifted point-spread functions and their derivatives, in the basis
order ``(|0>_s, |1>_s, |0>_a, |1>_a)`` (symmetric block first).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateModel, InvalidArgument, InvalidInput, NumericalInconsistency
from .linalg import as_hermitian
from .povm import Povm

TRACE_TOL = 1e-9
PSD_TOL = 1e-10
P_CLAMP_TOL = 1e-12

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
PLUS_STATE = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ModelAtPoint:
    """State ``rho`` and derivative ``drho`` of a one-parameter family at ``theta``."""

    theta: float
    rho: np.ndarray
    drho: np.ndarray
    qfi_known: Optional[float] = None

    def __post_init__(self):
        rho = as_hermitian(self.rho)
        drho = as_hermitian(self.drho)
        if rho.shape != drho.shape:
            raise InvalidInput(f"rho {rho.shape} and drho {drho.shape} differ in shape")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidInput(f"Tr rho = {tr!r}, expected 1")
        dtr = np.trace(drho).real
        if abs(dtr) > TRACE_TOL:
            raise InvalidInput(f"Tr drho = {dtr!r}, expected 0")
        w_min = np.linalg.eigvalsh(rho)[0]
        if w_min < -PSD_TOL:
            raise InvalidInput(f"rho has negative eigenvalue {w_min:.3g}")
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "rho", _frozen(rho))
        object.__setattr__(self, "drho", _frozen(drho))
        if self.qfi_known is not None:
            object.__setattr__(self, "qfi_known", float(self.qfi_known))

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True, eq=False)
class AnalyticOutcomeModel:
    """Outcome probabilities ``p`` and derivatives ``dp`` known in closed form."""

    p: np.ndarray
    dp: np.ndarray
    description: str = ""

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        dp = np.array(self.dp, dtype=float)
        if p.shape != dp.shape or p.ndim != 1:
            raise InvalidInput("p and dp must be 1-D arrays of equal length")
        if np.any(p < 0):
            raise InvalidInput(f"negative probability {p.min():.3g}")
        if abs(p.sum() - 1.0) > TRACE_TOL:
            raise InvalidInput(f"probabilities sum to {p.sum()!r}")
        if abs(dp.sum()) > TRACE_TOL:
            raise InvalidInput(f"probability derivatives sum to {dp.sum()!r}")
        object.__setattr__(self, "p", _frozen(p))
        object.__setattr__(self, "dp", _frozen(dp))


# ---------------------------------------------------------------------------
# pure states
# ---------------------------------------------------------------------------

def canonical_frame(psi, dpsi, tol: float = 1e-12) -> tuple[np.ndarray, float]:
    """Orthonormal pair spanning ``psi`` and ``dpsi`` that makes the model canonical.

    Returns ``(basis, fq)`` where ``basis`` is ``n x 2`` with columns
    ``|0>, |1>`` such that ``rho = |+><+|`` and ``drho = sqrt(fq)/2 sigma_y``
    in that frame, and ``fq = 4(<dpsi|dpsi> - |<dpsi|psi>|^2)``.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    dpsi = np.asarray(dpsi, dtype=complex).ravel()
    if psi.shape != dpsi.shape:
        raise InvalidInput("psi and dpsi must have the same length")
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        raise InvalidInput("psi is not normalized")
    overlap = np.vdot(psi, dpsi)
    if abs(overlap.real) > 1e-9:
        raise InvalidInput("Re<psi|dpsi> must vanish for a normalized family")
    fq = 4 * (np.vdot(dpsi, dpsi).real - abs(overlap) ** 2)
    if fq <= tol * max(1.0, np.vdot(dpsi, dpsi).real):
        raise DegenerateModel("dpsi is parallel to psi; the QFI vanishes")
    w = dpsi - overlap * psi
    k = 1j * math.sqrt(2 / fq)
    basis = np.column_stack([psi / math.sqrt(2) + k * w, psi / math.sqrt(2) - k * w])
    return basis, float(fq)


def pure_canonicalize(psi, dpsi, theta: float = 0.0) -> ModelAtPoint:
    """Reduce a pure-state family to the canonical qubit model.

    Any pure family is locally a rotation in ``span{psi, dpsi}``; the result
    is the 2x2 model ``rho = |+><+|``, ``drho = sqrt(F_Q)/2 sigma_y``.
    """
    _, fq = canonical_frame(psi, dpsi)
    return ModelAtPoint(theta, PLUS_STATE.copy(), 0.5 * math.sqrt(fq) * SIGMA_Y, qfi_known=fq)


def to_canonical_frame(povm: Povm, psi, dpsi) -> Povm:
    """Compress a POVM on the ambient space into the canonical frame of ``(psi, dpsi)``."""
    basis, _ = canonical_frame(psi, dpsi)
    if povm.dim != basis.shape[0]:
        raise InvalidInput(f"POVM dim {povm.dim} does not match state dim {basis.shape[0]}")
    return Povm(basis.conj().T @ povm.elements @ basis)


# ---------------------------------------------------------------------------
# Mach-Zehnder interferometer
# ---------------------------------------------------------------------------

def _interferometer_state(theta: float, phi: float):
    ph = np.exp(1j * (theta + phi))
    psi = np.array([1.0, ph]) / math.sqrt(2)
    dpsi = np.array([0.0, 1j * ph]) / math.sqrt(2)
    return psi, dpsi


def interferometer_stats(theta: float, phi: float, v: float = 1.0) -> AnalyticOutcomeModel:
    """Detector statistics ``p_+- = (1 +- v cos(theta + phi)) / 2``."""
    if not 0.0 <= v <= 1.0:
        raise InvalidArgument(f"visibility must lie in [0, 1], got {v!r}")
    c, s = math.cos(theta + phi), math.sin(theta + phi)
    p = [0.5 * (1 + v * c), 0.5 * (1 - v * c)]
    dp = [-0.5 * v * s, 0.5 * v * s]
    return AnalyticOutcomeModel(p, dp, f"interferometer theta+phi={theta + phi:g} v={v:g}")


def interferometer_cfi(theta: float, phi: float, v: float = 1.0) -> float:
    """Closed-form CFI ``v^2 sin^2 / (1 - v^2 cos^2)`` of the two detectors.

    At ``v = 1`` this is identically 1, including the dark fringes
    ``theta + phi in {0, pi}``, where one outcome has ``p = dp = 0``.
    There the ratio ``dp^2 / p`` has limit 1 and the Hellinger form
    ``4 sum (d sqrt p)^2`` gives the same value, so the continuous
    extension is used; :func:`~menos.fisher.stats_from_analytic` instead
    reports 0 because it sees only first-order data at the point.
    """
    if not 0.0 <= v <= 1.0:
        raise InvalidArgument(f"visibility must lie in [0, 1], got {v!r}")
    if v == 1.0:
        return 1.0
    c, s = math.cos(theta + phi), math.sin(theta + phi)
    return v * v * s * s / (1 - v * v * c * c)


def interferometer_model(theta: float, phi: float) -> ModelAtPoint:
    """Single-photon interferometer state in its canonical qubit frame."""
    return pure_canonicalize(*_interferometer_state(theta, phi), theta=theta)


def interferometer_povm(theta: float, phi: float) -> Povm:
    """Beam-splitter plus two detectors, expressed in the frame of :func:`interferometer_model`.

    Element 0 is the detector clicking with probability ``(1 + cos(theta+phi))/2``.
    """
    plus = np.array([1.0, 1.0]) / math.sqrt(2)
    minus = np.array([1.0, -1.0]) / math.sqrt(2)
    detectors = Povm([np.outer(plus, plus), np.outer(minus, minus)])
    return to_canonical_frame(detectors, *_interferometer_state(theta, phi))


# ---------------------------------------------------------------------------
# two-point-source super-resolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuperresConstants:
    sigma: float
    theta: float
    delta: float
    gamma: float
    c3: float
    c4: float
    alpha: float = field(init=False)
    beta_s: float = field(init=False)
    beta_a: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", self.gamma / 2)
        object.__setattr__(self, "beta_s", -self.c4 / 4 * math.sqrt(1 + self.delta))
        object.__setattr__(self, "beta_a", -self.c3 / 4 * math.sqrt(1 - self.delta))


def _sinh_minus_id_over_expm1(x: float) -> float:
    # (sinh x - x) / (e^x - 1) without cancellation at small x or overflow at large x
    if x < 1e-2:
        num = x**3 / 6 * (1 + x**2 / 20 * (1 + x**2 / 42 * (1 + x**2 / 72)))
        return num / math.expm1(x)
    if x > 20:
        e = math.exp(-x)
        return (1 - e * e - 2 * x * e) / (2 * (1 - e))
    return (math.sinh(x) - x) / math.expm1(x)


def _sinh_plus_id_over_exp1p(x: float) -> float:
    # (sinh x + x) / (e^x + 1)
    if x > 20:
        e = math.exp(-x)
        return (1 - e * e + 2 * x * e) / (2 * (1 + e))
    return (math.sinh(x) + x) / (math.exp(x) + 1)


def superres_constants(theta: float, sigma: float) -> SuperresConstants:
    """Overlap, derivative and normalization constants of the imaging basis."""
    if not theta > 0:
        raise InvalidArgument(f"separation must be positive, got {theta!r}")
    if not sigma > 0:
        raise InvalidArgument(f"PSF width must be positive, got {sigma!r}")
    x = theta**2 / (8 * sigma**2)
    delta = math.exp(-x)
    gamma = -theta * delta / (4 * sigma**2)
    # 8 s^2 sinh(x) -+ theta^2 == 8 s^2 (sinh(x) -+ x)
    c3 = 0.25 * math.sqrt(8 * _sinh_minus_id_over_expm1(x) / sigma**2)
    c4 = 0.25 * math.sqrt(8 * _sinh_plus_id_over_exp1p(x) / sigma**2)
    return SuperresConstants(sigma=sigma, theta=theta, delta=delta, gamma=gamma, c3=c3, c4=c4)


def superres_model(theta: float, sigma: float) -> ModelAtPoint:
    """Single-photon image-plane state of two equally bright sources, 4x4 form."""
    c = superres_constants(theta, sigma)
    rho = np.diag([(1 + c.delta) / 2, 0.0, (1 - c.delta) / 2, 0.0]).astype(complex)
    drho = np.zeros((4, 4), dtype=complex)
    drho[0, 0] = c.alpha
    drho[0, 1] = drho[1, 0] = c.beta_s
    drho[2, 2] = -c.alpha
    drho[2, 3] = drho[3, 2] = c.beta_a
    return ModelAtPoint(theta, rho, drho, qfi_known=1 / (4 * sigma**2))


def _psf(x, sigma):
    return (2 * np.pi * sigma**2) ** -0.25 * np.exp(-(x**2) / (4 * sigma**2))


def _psf_prime(x, sigma):
    return -x / (2 * sigma**2) * _psf(x, sigma)


def _position_grid(theta, sigma, step=None, tails=14.0):
    step = sigma / 20 if step is None else step
    half = abs(theta) / 2 + tails * sigma
    n = int(math.ceil(half / step))
    return np.arange(-n, n + 1) * step, step


def superres_basis_vectors(theta: float, sigma: float, x: np.ndarray) -> np.ndarray:
    """Sampled wave functions of ``|0>_s, |1>_s, |0>_a, |1>_a`` on the grid ``x`` (rows)."""
    c = superres_constants(theta, sigma)
    up, um = _psf(x + theta / 2, sigma), _psf(x - theta / 2, sigma)
    dup, dum = 0.5 * _psf_prime(x + theta / 2, sigma), -0.5 * _psf_prime(x - theta / 2, sigma)
    d, g = c.delta, c.gamma
    e0s = (up + um) / math.sqrt(2 * (1 + d))
    e1s = (-math.sqrt(2) * (dup + dum) + g / math.sqrt(1 + d) * e0s) / c.c4
    e0a = (up - um) / math.sqrt(2 * (1 - d))
    e1a = (-math.sqrt(2) * (dup - dum) - g / math.sqrt(1 - d) * e0a) / c.c3
    return np.array([e0s, e1s, e0a, e1a])


def superres_frozen_family(theta0: float, sigma: float) -> Callable[[float], np.ndarray]:
    """Imaging state as a function of separation, projected on the basis frozen at ``theta0``.

    Inner products are evaluated by quadrature in the position
    representation; the projection agrees with the true state to first
    order around ``theta0``, which is what finite differences need.
    """
    x, dx = _position_grid(theta0, sigma)
    basis = superres_basis_vectors(theta0, sigma, x)

    def rho_at(theta: float) -> np.ndarray:
        ap = basis @ _psf(x + theta / 2, sigma) * dx
        am = basis @ _psf(x - theta / 2, sigma) * dx
        return (0.5 * (np.outer(ap, ap) + np.outer(am, am))).astype(complex)

    return rho_at


def hg_mode_stats(theta: float, sigma: float, n_outcomes: int) -> AnalyticOutcomeModel:
    """Statistics of Hermite-Gaussian mode sorting with ``n_outcomes - 1`` resolved modes.

    Outcomes ``i = 1..K-1`` are the modes with Poisson weights
    ``exp(-Q) Q^i / i!`` (``Q = theta^2 / 16 sigma^2``); outcome ``K``
    collects the rest of the light.
    """
    if not theta > 0 or not sigma > 0:
        raise InvalidArgument("theta and sigma must be positive")
    if n_outcomes < 2:
        raise InvalidArgument(f"need at least 2 outcomes, got {n_outcomes}")
    q = theta**2 / (16 * sigma**2)
    i = np.arange(1, n_outcomes)
    p = np.exp(-q + i * math.log(q) - np.array([math.lgamma(k + 1) for k in i]))
    l = -theta / (8 * sigma**2) + 2 * i / theta
    dp = p * l
    p_rest = 1.0 - p.sum()
    if p_rest < -P_CLAMP_TOL:
        raise NumericalInconsistency(f"residual probability {p_rest:.3g} is negative")
    p_rest = max(p_rest, 0.0)
    return AnalyticOutcomeModel(
        np.append(p, p_rest),
        np.append(dp, -dp.sum()),
        f"HG modes K={n_outcomes} theta={theta:g} sigma={sigma:g}",
    )


# ---------------------------------------------------------------------------
# generic families
# ---------------------------------------------------------------------------

def finite_diff_model(rho_at: Callable[[float], np.ndarray], theta: float, h: Optional[float] = None) -> ModelAtPoint:
    """Model from a state-valued callable using central differences.

    Default step is ``1e-5 * max(1, |theta|)``.
    """
    h = 1e-5 * max(1.0, abs(theta)) if h is None else h
    if not h > 0:
        raise InvalidArgument(f"step must be positive, got {h!r}")
    rho = as_hermitian(rho_at(theta))
    hi = as_hermitian(rho_at(theta + h))
    lo = as_hermitian(rho_at(theta - h))
    return ModelAtPoint(theta, rho, (hi - lo) / (2 * h))
