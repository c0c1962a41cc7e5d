import math

import numpy as np
import pytest

from menos import ModelAtPoint, Povm, projective_from_states, pure_canonicalize

SQ2 = math.sqrt(2)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
PLUS = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)


def random_hermitian(rng, n, scale=1.0):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (x + x.conj().T) / 2


def random_unitary(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state_pair(rng, n, rank=None):
    """(rho, drho) with drho traceless and supported on rho (no kernel-kernel block)."""
    rank = n if rank is None else rank
    p = np.zeros(n)
    p[:rank] = rng.dirichlet(np.ones(rank))
    v = random_unitary(rng, n)
    d = random_hermitian(rng, n)
    d[rank:, rank:] = 0
    d[0, 0] -= np.trace(d).real
    return v @ np.diag(p) @ v.conj().T, v @ d @ v.conj().T, p, d


def random_model(rng, n):
    """Full-rank model whose p_i stay away from zero for random POVMs."""
    p = rng.dirichlet(2 * np.ones(n)) * 0.8 + 0.2 / n
    v = random_unitary(rng, n)
    d = random_hermitian(rng, n, 0.3)
    d -= np.trace(d).real / n * np.eye(n)
    return ModelAtPoint(0.0, v @ np.diag(p) @ v.conj().T, v @ d @ v.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def canonical():
    """|+><+| with drho = sigma_y / 2 (F_Q = 1)."""
    return pure_canonicalize(np.array([1, 1]) / SQ2, np.array([0, 1j]) / SQ2)


@pytest.fixture
def sigma_y_povm():
    return projective_from_states([np.array([1, 1j]) / SQ2, np.array([1, -1j]) / SQ2])


@pytest.fixture
def computational_povm():
    return Povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[n])
