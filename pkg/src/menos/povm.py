"""POVMs: representation, validation, constructors and classical post-processing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidArgument, InvalidBasis, InvalidInput
from .linalg import HERMITICITY_TOL, psd_sqrt

PSD_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
ORTHONORMAL_TOL = 1e-10


class Povm:
    """Ordered list of ``K`` Hermitian ``dim x dim`` operators.

    Construction only checks shape and Hermiticity.  Positivity and
    completeness are reported by :func:`validate`, so that invalid
    candidate measurements can still be represented and inspected.
    Zero operators are legal elements.
    """

    __slots__ = ("_elements",)

    def __init__(self, elements):
        try:
            arr = np.array(elements, dtype=complex)
        except ValueError as exc:
            raise DimensionMismatch("POVM elements have differing shapes") from exc
        if arr.ndim != 3 or arr.shape[0] < 1 or arr.shape[1] != arr.shape[2] or arr.shape[1] < 1:
            if arr.ndim == 1 and arr.dtype == object:
                raise DimensionMismatch("POVM elements have differing shapes")
            raise InvalidInput(f"expected a non-empty stack of square matrices, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("POVM element has non-finite entries")
        adj = arr.conj().transpose(0, 2, 1)
        drift = np.max(np.abs(arr - adj))
        if drift > HERMITICITY_TOL:
            raise InvalidInput(f"POVM element is not Hermitian (max |M - M^dag| = {drift:.3g})")
        arr = (arr + adj) / 2
        arr.flags.writeable = False
        self._elements = arr

    @property
    def elements(self) -> np.ndarray:
        """Read-only array of shape ``(K, dim, dim)``."""
        return self._elements

    @property
    def dim(self) -> int:
        return self._elements.shape[1]

    @property
    def n_outcomes(self) -> int:
        return self._elements.shape[0]

    def __len__(self):
        return self.n_outcomes

    def __iter__(self):
        return iter(self._elements)

    def __getitem__(self, i):
        return self._elements[i]

    def __eq__(self, other):
        if not isinstance(other, Povm):
            return NotImplemented
        return self._elements.shape == other._elements.shape and bool(
            np.array_equal(self._elements, other._elements)
        )

    def __repr__(self):
        return f"Povm(dim={self.dim}, n_outcomes={self.n_outcomes})"

    def allclose(self, other: "Povm", atol: float = 1e-12) -> bool:
        return self._elements.shape == other._elements.shape and bool(
            np.allclose(self._elements, other._elements, rtol=0, atol=atol)
        )


@dataclass(frozen=True)
class ValidationReport:
    min_eigenvalues: tuple[float, ...]
    completeness_residual: float
    psd_ok: bool
    complete_ok: bool

    @property
    def passed(self) -> bool:
        return self.psd_ok and self.complete_ok

    def __bool__(self):
        return self.passed


def validate(povm, psd_tol: float = PSD_TOL, completeness_tol: float = COMPLETENESS_TOL) -> ValidationReport:
    """Check element positivity and ``sum_i M_i = 1``; never raises on failure."""
    if not isinstance(povm, Povm):
        povm = Povm(povm)
    mins = tuple(float(np.linalg.eigvalsh(m)[0]) for m in povm)
    residual = float(np.max(np.abs(povm.elements.sum(axis=0) - np.eye(povm.dim))))
    return ValidationReport(
        min_eigenvalues=mins,
        completeness_residual=residual,
        psd_ok=min(mins) >= -psd_tol,
        complete_ok=residual <= completeness_tol,
    )


def projective_from_states(states) -> Povm:
    """Rank-one projectors onto an orthonormal basis, in the given order."""
    vecs = np.array(states, dtype=complex)
    if vecs.ndim != 2:
        raise InvalidBasis("states must be a list of equal-length vectors")
    n, dim = vecs.shape
    if n != dim:
        raise InvalidBasis(f"{n} states cannot span a {dim}-dimensional space")
    gram = vecs.conj() @ vecs.T
    err = np.max(np.abs(gram - np.eye(n)))
    if err > ORTHONORMAL_TOL:
        raise InvalidBasis(f"states are not orthonormal (max Gram error {err:.3g})")
    return Povm([np.outer(v, v.conj()) for v in vecs])


def pad_with_zero_elements(povm: Povm, n_outcomes: int) -> Povm:
    """Append zero operators so that ``povm`` has ``n_outcomes`` elements."""
    extra = n_outcomes - povm.n_outcomes
    if extra < 0:
        raise InvalidArgument(f"cannot pad {povm.n_outcomes} outcomes down to {n_outcomes}")
    zeros = np.zeros((extra, povm.dim, povm.dim), dtype=complex)
    return Povm(np.concatenate([povm.elements, zeros]))


def mix(m: Povm, n: Povm, eps: float) -> Povm:
    """Element-wise convex combination ``(1 - eps) M + eps N``.

    Both POVMs must share dimension and outcome count; outcome labels are
    never aligned implicitly (use :func:`pad_with_zero_elements`).
    """
    if not 0.0 <= eps <= 1.0:
        raise InvalidArgument(f"eps must lie in [0, 1], got {eps!r}")
    if m.dim != n.dim:
        raise DimensionMismatch(f"POVM dimensions differ: {m.dim} vs {n.dim}")
    if m.n_outcomes != n.n_outcomes:
        raise DimensionMismatch(
            f"outcome counts differ: {m.n_outcomes} vs {n.n_outcomes}; pad explicitly"
        )
    if eps == 0.0:
        return m
    if eps == 1.0:
        return n
    return Povm((1 - eps) * m.elements + eps * n.elements)


def check_stochastic_map(t, tol: float = 1e-12) -> np.ndarray:
    """Validate an ``L x K`` column-stochastic matrix ``t[j, i] = t(j|i)``."""
    t = np.array(t, dtype=float)
    if t.ndim != 2:
        raise InvalidArgument("stochastic map must be a 2-D array")
    if np.any(t < 0):
        raise InvalidArgument("stochastic map has negative entries")
    if np.max(np.abs(t.sum(axis=0) - 1.0)) > tol:
        raise InvalidArgument("stochastic map columns must sum to 1")
    return t


def coarse_grain(m: Povm, t) -> Povm:
    """Classical post-processing ``M'_j = sum_i t(j|i) M_i``."""
    t = check_stochastic_map(t)
    if t.shape[1] != m.n_outcomes:
        raise DimensionMismatch(f"map has {t.shape[1]} columns, POVM has {m.n_outcomes} outcomes")
    return Povm(np.einsum("ji,iab->jab", t, m.elements))


def random_stochastic_map(n_out: int, n_in: int, seed) -> np.ndarray:
    rng = np.random.default_rng(seed)
    t = rng.exponential(size=(n_out, n_in))
    return t / t.sum(axis=0)


def random_povm(dim: int, n_outcomes: int, seed) -> Povm:
    """Random full-rank POVM, deterministic in ``seed``.

    Draws ``G_i = X_i X_i^H`` with complex Gaussian ``X_i`` and normalizes
    with ``S^{-1/2} G_i S^{-1/2}`` where ``S = sum_i G_i``.
    """
    if n_outcomes < 2:
        raise InvalidArgument("random_povm needs at least 2 outcomes")
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n_outcomes, dim, dim)) + 1j * rng.normal(size=(n_outcomes, dim, dim))
    g = x @ x.conj().transpose(0, 2, 1)
    s_inv_half = np.linalg.inv(psd_sqrt(g.sum(axis=0)))
    return Povm(s_inv_half @ g @ s_inv_half)


def equator_state(phi: float) -> np.ndarray:
    """Qubit state ``(|0> + e^{i phi}|1>) / sqrt(2)``."""
    return np.array([1.0, np.exp(1j * phi)]) / np.sqrt(2)


def equator_povm(weights, phases) -> Povm:
    """POVM with elements ``weights[i] |phi_i><phi_i|`` on the Bloch equator.

    Completeness requires ``sum(weights) = 2`` and
    ``sum(weights * exp(1j * phases)) = 0``; that is left to :func:`validate`.
    """
    return Povm([w * np.outer(v, v.conj()) for w, v in zip(weights, map(equator_state, phases))])


def random_equator_povm(n_outcomes: int, seed) -> Povm:
    """Random equator POVM as a convex mixture of ``n_outcomes/2`` antipodal pairs."""
    if n_outcomes < 2 or n_outcomes % 2:
        raise InvalidArgument(f"need an even number of outcomes >= 2, got {n_outcomes}")
    rng = np.random.default_rng(seed)
    pairs = n_outcomes // 2
    w = rng.dirichlet(np.ones(pairs)) if pairs > 1 else np.ones(1)
    phi = rng.uniform(0.0, 2 * np.pi, size=pairs)
    weights = np.repeat(w, 2)
    phases = np.column_stack([phi, phi + np.pi]).ravel()
    return equator_povm(weights, phases)
