import math

import numpy as np
import pytest

from menos import (
    InvalidArgument,
    NoFeasiblePoint,
    Povm,
    check_saturation,
    chi_menos,
    coarse_grain,
    equator_povm,
    is_equator_povm,
    minimize_chi_q_superres,
    outcome_stats,
    qfi,
    random_equator_povm,
    random_povm,
    superres_family_povm,
    superres_model,
    validate,
)
from menos.saturation import SAT_TOL, _superres_objective, equator_parameters

P_S = np.diag([1.0, 1.0, 0.0, 0.0])
P_A = np.diag([0.0, 0.0, 1.0, 1.0])


def spectral_split(povm, tol=1e-12):
    pieces = []
    for m in povm:
        w, v = np.linalg.eigh(m)
        pieces += [w[k] * np.outer(v[:, k], v[:, k].conj()) for k in range(len(w)) if w[k] > tol]
    return Povm(pieces)


class TestCheckSaturation:
    def test_sigma_y(self, canonical, sigma_y_povm):
        r = check_saturation(canonical, sigma_y_povm)
        assert r.saturates and r.cfi_gap == pytest.approx(0, abs=1e-12)

    def test_computational(self, canonical, computational_povm):
        r = check_saturation(canonical, computational_povm)
        assert not r.saturates
        assert r.cfi == 0 and r.max_condition1_residual > 0.1

    def test_superres_family(self):
        model = superres_model(2.0, 1.0)
        r = check_saturation(model, superres_family_povm(math.pi / 2, math.pi / 2))
        assert r.saturates
        assert r.cfi == pytest.approx(0.25, rel=1e-10)

    def test_report_dict(self, canonical, sigma_y_povm):
        d = check_saturation(canonical, sigma_y_povm).to_dict()
        assert set(d) == {"saturates", "max_condition1_residual", "max_condition2_residual", "cfi", "qfi", "cfi_gap"}

    def test_dim_mismatch(self, canonical):
        from menos import DimensionMismatch

        with pytest.raises(DimensionMismatch):
            check_saturation(canonical, random_povm(3, 2, 0))

    def test_pure_state_completeness(self, canonical):
        for t in range(1000):
            m = random_equator_povm(2 * (1 + t % 3), (1, t))
            r = check_saturation(canonical, m)
            assert r.saturates
            assert abs(r.cfi - r.qfi) <= SAT_TOL * r.qfi

    def test_non_equator_loses_information(self, canonical):
        for t in range(1000):
            m = random_povm(2, 2 + t % 3, (2, t))
            assert not is_equator_povm(m, tol=10 * SAT_TOL)
            r = check_saturation(canonical, m)
            assert not r.saturates and r.cfi < r.qfi

    def test_soundness(self, rng):
        model = superres_model(1.5, 1.0)
        for t in range(200):
            a, b = rng.uniform(0, 2 * math.pi, size=2)
            m = superres_family_povm(a, b) if t % 2 else random_povm(4, 4, (3, t))
            r = check_saturation(model, m)
            if r.saturates:
                assert abs(r.cfi - r.qfi) <= SAT_TOL * r.qfi

    def test_zero_probability_outcome_condition(self, canonical, sigma_y_povm):
        # |-><-| never fires on |+>; sqrt(M) L |+> must vanish for that outcome
        minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
        m = Povm([0.5 * sigma_y_povm[0], 0.5 * sigma_y_povm[1], 0.5 * (np.eye(2) - minus), 0.5 * minus])
        assert validate(m).passed
        r = check_saturation(canonical, m)
        assert r.max_condition2_residual > 0.1 and not r.saturates


class TestRankOneSplitting:
    def test_merged_equator_elements(self, canonical):
        for t in range(200):
            rng = np.random.default_rng(t)
            w = rng.dirichlet(np.ones(2))
            phi = rng.uniform(0, 2 * math.pi)
            phases = [phi, phi + math.pi, phi, phi + math.pi]
            fine = equator_povm(np.repeat(w, 2), phases)
            merged = coarse_grain(fine, [[1, 0, 1, 0], [0, 1, 0, 1]])
            assert is_equator_povm(merged) and is_equator_povm(fine)
            assert check_saturation(canonical, merged).saturates
            assert check_saturation(canonical, fine).saturates
            chis = [chi_menos(canonical, outcome_stats(canonical, m)).chi for m in (merged, spectral_split(merged), fine)]
            np.testing.assert_allclose(chis, chis[0], rtol=1e-8)

    def test_superres_rank_two_merge(self):
        model = superres_model(2.0, 1.0)
        m = superres_family_povm(1.0, 2.0)
        # merge nothing informative: split each rank-one element in halves, then spectral split
        doubled = Povm(np.concatenate([m.elements / 2, m.elements / 2]))
        split = spectral_split(doubled)
        f = [outcome_stats(model, x).cfi for x in (m, doubled, split)]
        np.testing.assert_allclose(f, 0.25, rtol=1e-10)
        c = [chi_menos(model, outcome_stats(model, x)).chi for x in (m, doubled, split)]
        np.testing.assert_allclose(c, c[0], rtol=1e-8)


class TestBlockProjection:
    def test_cross_block_garbage_is_invisible(self, rng):
        for theta in (0.3, 1.0, 2.0, 5.0):
            model = superres_model(theta, 1.0)
            for _ in range(25):
                m = superres_family_povm(*rng.uniform(0, 2 * math.pi, size=2))
                junk = []
                for _ in range(4):
                    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
                    g = P_S @ x @ P_A
                    junk.append(g + g.conj().T)
                perturbed = Povm(m.elements + 0.05 * np.array(junk))
                projected = Povm([P_S @ e @ P_S + P_A @ e @ P_A for e in perturbed])
                np.testing.assert_allclose(projected.elements, m.elements, atol=1e-15)
                s1, s2 = outcome_stats(model, perturbed), outcome_stats(model, projected)
                np.testing.assert_allclose(s1.p, s2.p, atol=1e-12, rtol=0)
                np.testing.assert_allclose(s1.dp, s2.dp, atol=1e-12, rtol=0)


class TestEquatorChecker:
    def test_examples(self, sigma_y_povm, computational_povm):
        assert is_equator_povm(sigma_y_povm)
        assert not is_equator_povm(computational_povm)
        assert is_equator_povm(random_equator_povm(4, 17))

    def test_zero_elements_ignored(self, sigma_y_povm):
        assert is_equator_povm(Povm([*sigma_y_povm.elements, np.zeros((2, 2))]))

    def test_mixed_element_rejected(self):
        assert not is_equator_povm(Povm([np.eye(2) / 2, np.eye(2) / 2]))

    def test_dim(self):
        with pytest.raises(InvalidArgument):
            is_equator_povm(random_povm(3, 2, 0))


class TestSuperresFamily:
    def test_zero_angles(self):
        m = superres_family_povm(0.0, 0.0)
        expected = [np.diag(np.eye(4)[k]) for k in (0, 1, 2, 3)]
        np.testing.assert_allclose(m.elements, expected, atol=1e-15)

    def test_valid_and_blockwise(self, rng):
        for a, b in rng.uniform(-10, 10, size=(100, 2)):
            m = superres_family_povm(a, b)
            assert validate(m).passed
            np.testing.assert_allclose(m[0] + m[1], P_S, atol=1e-15)
            np.testing.assert_allclose(m[2] + m[3], P_A, atol=1e-15)

    def test_periodic(self):
        a = superres_family_povm(0.4, 1.9)
        b = superres_family_povm(0.4 + 2 * math.pi, 1.9 + 2 * math.pi)
        assert a.allclose(b, atol=1e-14)


@pytest.fixture(scope="module")
def curve():
    return {t: minimize_chi_q_superres(t, 1.0) for t in (0.1, 1.0, 2 * math.sqrt(2), 8.0)}


class TestChiQ:
    def test_minimum_at_two_root_two(self, curve):
        assert curve[2 * math.sqrt(2)].chi_q == pytest.approx(4, abs=1e-2)

    def test_large_separation(self, curve):
        assert 4 - 1e-6 <= curve[8.0].chi_q <= 4 * 1.05

    def test_divergence_trend(self, curve):
        assert curve[0.1].chi_q > curve[1.0].chi_q > curve[2 * math.sqrt(2)].chi_q

    def test_result_invariants(self, curve):
        for r in curve.values():
            assert r.cfi_at_optimum == pytest.approx(0.25, rel=SAT_TOL)
            assert r.chi_q >= 4 - 1e-6
            assert 0 <= r.phi_s < 2 * math.pi and 0 <= r.phi_a < 2 * math.pi
            assert r.evaluations == 24 * 24 * 7
            assert set(r.to_dict()) == {"theta", "sigma", "phi_s", "phi_a", "chi_q", "cfi"}

    def test_optimum_reproduces(self, curve):
        r = curve[1.0]
        model = superres_model(1.0, 1.0)
        m = superres_family_povm(r.phi_s, r.phi_a)
        assert chi_menos(model, outcome_stats(model, m)).chi == r.chi_q

    def test_sigma_scaling(self):
        a = minimize_chi_q_superres(2.0, 1.0, refine_iters=3)
        b = minimize_chi_q_superres(4.0, 2.0, refine_iters=3)
        assert a.chi_q == pytest.approx(b.chi_q, rel=1e-9)

    def test_deterministic(self):
        a = minimize_chi_q_superres(1.3, 1.0, grid_n=16, refine_iters=2)
        b = minimize_chi_q_superres(1.3, 1.0, grid_n=16, refine_iters=2)
        assert a == b

    def test_every_feasible_evaluation_above_four(self):
        for theta in (0.5, 2.0, 2 * math.sqrt(2), 6.0):
            model = superres_model(theta, 1.0)
            evaluate = _superres_objective(model, qfi(model.rho, model.drho), SAT_TOL, 1e-12)
            grid = np.linspace(0, 2 * math.pi, 41)
            for a in grid:
                for b in grid:
                    out = evaluate(a, b)
                    if out is not None:
                        assert out[0] >= 4 - 1e-6

    def test_degenerate_angles_skipped(self):
        model = superres_model(2.0, 1.0)
        evaluate = _superres_objective(model, 0.25, SAT_TOL, 1e-12)
        assert evaluate(0.0, 1.0) is None and evaluate(1.0, math.pi) is None

    def test_grid_too_small(self):
        with pytest.raises(InvalidArgument):
            minimize_chi_q_superres(1.0, 1.0, grid_n=8)

    def test_no_feasible_point(self):
        with pytest.raises(NoFeasiblePoint):
            minimize_chi_q_superres(1.0, 1.0, grid_n=16, sat_tol=-1.0)

    def test_rejects_bad_theta(self):
        with pytest.raises(InvalidArgument):
            minimize_chi_q_superres(0.0, 1.0)
