import itertools

import numpy as np
import pytest

from masckit.errors import InputError, SolverError
from masckit.graphs import incidence_matrix
from masckit.recovery import (
    RecoveryProblem,
    TrialConfig,
    basis_pursuit,
    mrsl_naive,
    random_sparse_signal,
    realify,
    recovery_rate,
    recovery_trial,
)

TRIANGLE = np.array([[-1.0, 0.0, 1.0], [1.0, -1.0, 0.0], [0.0, 1.0, -1.0]])


class TestBasisPursuit:
    def test_zero_observation(self):
        x, status = basis_pursuit(RecoveryProblem(TRIANGLE, np.zeros(3)))
        assert np.allclose(x, 0)
        assert status.startswith("optimal")

    def test_identity(self):
        y = np.array([0.3, -1.2, 0.0, 2.0])
        x, _ = basis_pursuit(RecoveryProblem(np.eye(4), y))
        assert np.allclose(x, y, atol=1e-9)

    def test_triangle_one_sparse(self):
        x_true = np.array([0.8, 0.0, 0.0])
        x, _ = basis_pursuit(RecoveryProblem(TRIANGLE, TRIANGLE @ x_true))
        assert np.linalg.norm(x - x_true) <= 1e-6

    def test_infeasible_raises(self):
        a = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(SolverError):
            basis_pursuit(RecoveryProblem(a, np.array([1.0, 2.0])))

    def test_optimality_certificate(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = rng.standard_normal((3, 6))
            x_true = np.zeros(6)
            x_true[rng.choice(6, 2, replace=False)] = rng.standard_normal(2)
            y = a @ x_true
            x, _ = basis_pursuit(RecoveryProblem(a, y))
            assert np.linalg.norm(a @ x - y) <= 1e-8 * max(np.linalg.norm(y), 1.0)
            assert np.abs(x).sum() <= np.abs(x_true).sum() + 1e-8


class TestRecoveryTrial:
    def test_zero_signal(self):
        assert recovery_trial(TRIANGLE, np.zeros(3))

    def test_triangle_all_one_sparse(self):
        for i in range(3):
            for sign in (1.0, -1.0):
                x = np.zeros(3)
                x[i] = sign * 0.7
                assert recovery_trial(TRIANGLE, x)

    def test_failure_exists_for_bad_matrix(self):
        # [1 -1 1] accepts no nonempty support; some sign pattern must fail
        phi = np.array([[1.0, -1.0, 1.0]])
        failed = False
        for i, sign in itertools.product(range(3), (1.0, -1.0)):
            x = np.zeros(3)
            x[i] = sign
            failed = failed or not recovery_trial(phi, x)
        assert failed


class TestRandomSparseSignal:
    def test_shape_and_norm(self):
        x = random_sparse_signal(10, 3, (1, 2))
        assert np.count_nonzero(x) == 3
        assert np.linalg.norm(x) == pytest.approx(1.0)

    def test_deterministic(self):
        a = random_sparse_signal(8, 2, (7, 0))
        b = random_sparse_signal(8, 2, (7, 0))
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        assert not np.array_equal(
            random_sparse_signal(8, 2, (7, 0)), random_sparse_signal(8, 2, (7, 1))
        )


class TestRecoveryRate:
    def test_triangle_s1(self):
        cfg = TrialConfig(sparsity=1, trials=100, seed=0)
        assert recovery_rate(TRIANGLE, cfg) == 1.0

    def test_reproducible(self):
        a = np.vstack([TRIANGLE, [1.0, 1.0, 1.0]])
        cfg = TrialConfig(sparsity=2, trials=50, seed=3)
        assert recovery_rate(a, cfg) == recovery_rate(a, cfg)

    def test_sparsity_validation(self):
        with pytest.raises(InputError):
            recovery_rate(TRIANGLE, TrialConfig(sparsity=4, trials=5, seed=0))

    def test_realify_preserves_feasibility(self):
        rng = np.random.default_rng(2)
        c = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
        a = realify(c)
        assert a.shape == (6, 5)
        x = rng.standard_normal(5)
        y = c @ x
        assert np.allclose(a @ x, np.concatenate([y.real, y.imag]))


class TestMrslNaive:
    def test_identity_returns_n(self):
        assert mrsl_naive(np.eye(4), k=5) == 4

    def test_triangle_upper_bound(self, triangle):
        a = incidence_matrix(triangle).to_float_array()
        est = mrsl_naive(a, k=50, seed=1)
        assert est >= 1  # upper bound on the true value 1

    def test_deterministic(self):
        a = np.array([[1.0, -1.0, 1.0, 0.5]])
        assert mrsl_naive(a, k=10, seed=4) == mrsl_naive(a, k=10, seed=4)
