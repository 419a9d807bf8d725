import numpy as np
import pytest

from gqc.errors import DimensionMismatchError, ValidationError
from gqc.geometry import (
    GeodesicPath,
    HamiltonianPath,
    PenaltyMetric,
    euler_arnold_geodesic,
    hs_complexity_static,
    locality_penalty_metric,
    omega_norm,
    path_length,
    traceless_norm,
    uniform_penalty_metric,
)
from gqc.operators import PAULI_X, PAULI_Z, hs_norm, su_basis, unitary_evolve
from gqc.sampling import random_hermitian, random_traceless_hermitian, random_unitary


class TestOmegaNorm:
    def test_uniform_weights_reduce_to_scaled_hs_norm(self):
        # ||sigma_z||_hs = sqrt(2); uniform weights on N=2 give sqrt(2)/sqrt(3)
        metric = uniform_penalty_metric(2)
        assert omega_norm(metric, PAULI_Z) == pytest.approx(np.sqrt(2) / np.sqrt(3))

    def test_zero_vector(self):
        metric = uniform_penalty_metric(2)
        assert omega_norm(metric, np.zeros((2, 2))) == 0.0

    def test_single_weight_scaling(self):
        # doubling the weight of the direction h is parallel to scales the
        # norm by sqrt(2)
        basis = su_basis(2)
        h = 0.7 * basis[2]  # sigma_z / sqrt(2) direction
        base = omega_norm(PenaltyMetric(2, basis, np.ones(3)), h)
        doubled = omega_norm(PenaltyMetric(2, basis, np.array([1.0, 1.0, 2.0])), h)
        assert doubled == pytest.approx(np.sqrt(2) * base)

    def test_uniform_equals_hs_norm_normalized(self, rng):
        metric = uniform_penalty_metric(3)
        h = random_traceless_hermitian(rng, 3)
        assert omega_norm(metric, h) == pytest.approx(hs_norm(h) / np.sqrt(8))

    def test_rejects_non_traceless(self):
        metric = uniform_penalty_metric(2)
        with pytest.raises(ValidationError, match="trace"):
            omega_norm(metric, np.eye(2))

    def test_rejects_dimension_mismatch(self, rng):
        metric = uniform_penalty_metric(2)
        with pytest.raises(DimensionMismatchError):
            omega_norm(metric, random_traceless_hermitian(rng, 3))


class TestPenaltyMetricValidation:
    def test_rejects_nonpositive_weights(self):
        basis = su_basis(2)
        with pytest.raises(ValidationError, match="positive"):
            PenaltyMetric(2, basis, np.array([1.0, 0.0, 1.0]))

    def test_rejects_non_orthonormal_basis(self):
        basis = su_basis(2).copy()
        basis[0] = basis[0] * 1.5
        with pytest.raises(ValidationError, match="orthonormality"):
            PenaltyMetric(2, basis, np.ones(3))

    def test_rejects_traceful_basis(self):
        basis = su_basis(2).copy()
        basis[0] = np.eye(2) / np.sqrt(2)
        with pytest.raises(ValidationError, match="trace"):
            PenaltyMetric(2, basis, np.ones(3))


class TestStaticComplexity:
    def test_benchmark_anchor(self):
        # h_S = (omega/2) sigma_z at omega = 1, t = 1
        value = hs_complexity_static(0.5 * PAULI_Z, 1.0, 2)
        assert value == pytest.approx((1 / np.sqrt(3)) * (np.sqrt(2) / 2), abs=1e-12)

    def test_zero_generator(self):
        assert hs_complexity_static(np.zeros((2, 2)), 1.0, 2) == 0.0

    def test_linear_in_time(self, rng):
        h = random_hermitian(rng, 3)
        assert hs_complexity_static(h, 2.4, 3) == pytest.approx(
            2.0 * hs_complexity_static(h, 1.2, 3), rel=1e-14)

    def test_conjugation_invariance(self, rng):
        h = random_hermitian(rng, 4)
        w = random_unitary(rng, 4)
        assert hs_complexity_static(w @ h @ w.conj().T, 1.0, 4) == pytest.approx(
            hs_complexity_static(h, 1.0, 4), abs=1e-10)

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValidationError):
            hs_complexity_static(np.zeros((1, 1)), 1.0, 1)

    def test_rejects_negative_time(self):
        with pytest.raises(ValidationError):
            hs_complexity_static(PAULI_Z, -0.1, 2)

    def test_traceless_norm_diagnostic(self):
        h = PAULI_Z + 3.0 * np.eye(2)
        assert traceless_norm(h) == pytest.approx(hs_norm(PAULI_Z))


class TestPathLength:
    def test_constant_path_matches_static(self, rng):
        metric = uniform_penalty_metric(2)
        h = random_traceless_hermitian(rng, 2)
        path = HamiltonianPath.constant(h, 1.7, samples=5)
        assert path_length(metric, path) == pytest.approx(
            hs_complexity_static(h, 1.7, 2), rel=1e-12)

    def test_zero_path(self):
        metric = uniform_penalty_metric(2)
        path = HamiltonianPath.constant(np.zeros((2, 2)), 1.0)
        assert path_length(metric, path) == 0.0

    def test_sinusoidal_against_dense_quadrature(self, rng):
        metric = uniform_penalty_metric(2)
        h = random_traceless_hermitian(rng, 2)

        def make(n):
            times = np.linspace(0.0, 2.0, n)
            gens = np.array([np.sin(0.5 + 1.5 * s) * h for s in times])
            return HamiltonianPath(times, gens)

        dense = path_length(metric, make(8193))
        assert path_length(metric, make(257)) == pytest.approx(dense, abs=1e-6)

    def test_refinement_is_second_order(self, rng):
        metric = uniform_penalty_metric(2)
        h = random_traceless_hermitian(rng, 2)

        def make(n):
            times = np.linspace(0.0, 1.0, n)
            gens = np.array([np.sin(1.0 + 2.0 * s) * h for s in times])
            return HamiltonianPath(times, gens)

        dense = path_length(metric, make(4097))
        err_coarse = abs(path_length(metric, make(33)) - dense)
        err_fine = abs(path_length(metric, make(65)) - dense)
        assert err_fine <= err_coarse / 3.0

    def test_grid_validation(self):
        with pytest.raises(ValidationError):
            HamiltonianPath(np.array([0.0, 0.0]), np.zeros((2, 2, 2)))
        with pytest.raises(ValidationError):
            HamiltonianPath(np.array([0.0]), np.zeros((1, 2, 2)))


class TestLocalityMetric:
    def test_two_qubits_all_weight_one(self):
        metric = locality_penalty_metric(2, 3.0)
        assert np.all(metric.weights == 1.0)
        assert len(metric.labels) == 15

    def test_three_qubit_assignment(self):
        metric = locality_penalty_metric(3, 4.0)
        assert metric.weights[metric.labels.index("XXX")] == 4.0
        assert metric.weights[metric.labels.index("XXI")] == 1.0
        assert len(metric.labels) == 63

    def test_rejects_small_register_and_penalty(self):
        with pytest.raises(ValidationError):
            locality_penalty_metric(1, 2.0)
        with pytest.raises(ValidationError):
            locality_penalty_metric(2, 1.0)


class TestEulerArnold:
    def test_uniform_metric_is_one_parameter_subgroup(self):
        metric = uniform_penalty_metric(2)
        path = euler_arnold_geodesic(metric, PAULI_Z, 1.0, 128)
        worst = max(hs_norm(u - unitary_evolve(PAULI_Z, t))
                    for t, u in zip(path.times, path.unitaries))
        assert worst <= 1e-8

    def test_zero_velocity_is_identity_path(self):
        metric = uniform_penalty_metric(2)
        path = euler_arnold_geodesic(metric, np.zeros((2, 2)), 1.0, 16)
        assert all(hs_norm(u - np.eye(2)) <= 1e-12 for u in path.unitaries)

    def test_anisotropic_su2_conserves_speed(self):
        metric = PenaltyMetric(2, su_basis(2), np.array([1.0, 2.0, 4.0]))
        a0 = (PAULI_Z + PAULI_X) / np.sqrt(2.0)
        path = euler_arnold_geodesic(metric, a0, 1.0, 256)
        speeds = [omega_norm(metric, v) for v in path.body_velocities]
        assert max(speeds) - min(speeds) <= 1e-7

    def test_anisotropic_flow_is_nontrivial(self):
        metric = PenaltyMetric(2, su_basis(2), np.array([1.0, 2.0, 4.0]))
        a0 = (PAULI_Z + PAULI_X) / np.sqrt(2.0)
        path = euler_arnold_geodesic(metric, a0, 1.0, 64)
        assert hs_norm(path.body_velocities[-1] - path.body_velocities[0]) > 1e-3

    def test_unitarity_defect_within_tolerance(self, rng):
        metric = PenaltyMetric(2, su_basis(2), np.array([1.0, 2.0, 4.0]))
        path = euler_arnold_geodesic(metric, random_traceless_hermitian(rng, 2),
                                     2.0, 64)
        eye = np.eye(2)
        worst = max(hs_norm(u.conj().T @ u - eye) for u in path.unitaries)
        assert worst <= path.integration_tol

    def test_rejects_too_few_steps(self):
        with pytest.raises(ValidationError, match="step count"):
            euler_arnold_geodesic(uniform_penalty_metric(2), PAULI_Z, 1.0, 8)

    def test_rejects_traceful_velocity(self):
        with pytest.raises(ValidationError):
            euler_arnold_geodesic(uniform_penalty_metric(2), np.eye(2), 1.0, 32)


class TestRightInvariance:
    def test_synthesized_distance_matches(self, rng):
        # distance from W to U W equals distance from identity to U for the
        # time-independent generator recovered from U W W^{-1}
        h = random_hermitian(rng, 3)
        t = 0.8
        w = random_unitary(rng, 3)
        u = unitary_evolve(h, t)
        product = u @ w @ w.conj().T
        eigvals, vecs = np.linalg.eig(product)
        h_rec = vecs @ np.diag(1j * np.log(eigvals) / t) @ np.linalg.inv(vecs)
        h_rec = 0.5 * (h_rec + h_rec.conj().T)
        assert hs_complexity_static(h_rec, t, 3) == pytest.approx(
            hs_complexity_static(h, t, 3), abs=1e-8)


class TestGeodesicPathValidation:
    def test_rejects_non_identity_start(self):
        times = np.array([0.0, 1.0])
        vels = np.zeros((2, 2, 2), dtype=complex)
        unis = np.array([1.1 * np.eye(2), np.eye(2)], dtype=complex)
        with pytest.raises(ValidationError, match="identity"):
            GeodesicPath(times, vels, unis)
