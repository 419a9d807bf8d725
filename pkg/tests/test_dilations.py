import numpy as np
import pytest

from gqc.dilations import (
    ChoiMatrix,
    Dilation,
    KrausSet,
    channel_apply,
    channel_apply_matrix,
    channel_distance,
    choi_matrix,
    gauge_transform,
    kraus_from_dilation,
    trivial_dilation,
)
from gqc.errors import DimensionMismatchError, ValidationError
from gqc.operators import (
    PAULI_X,
    PAULI_Z,
    hermitian_basis,
    hs_norm,
    tensor,
    unitary_evolve,
    validate_density,
)
from gqc.sampling import random_density, random_hermitian, random_unitary


GROUND = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)


def dephasing_dilation(g: float) -> Dilation:
    """sigma_z (x) sigma_x coupling against a ground-state qubit environment."""
    return Dilation(2, 2, GROUND, g * tensor(PAULI_Z, PAULI_X))


def random_dilation(rng, d_S, d_E) -> Dilation:
    return Dilation(d_S, d_E, random_density(rng, d_E),
                    random_hermitian(rng, d_S * d_E))


class TestDilationValidation:
    def test_dimension_consistency(self, rng):
        with pytest.raises(DimensionMismatchError, match="h_tot"):
            Dilation(2, 2, random_density(rng, 2), random_hermitian(rng, 3))

    def test_rho_requirements(self, rng):
        with pytest.raises(ValidationError, match="rho_E"):
            Dilation(2, 2, 0.5 * np.eye(2) + 0.2, random_hermitian(rng, 4))


class TestChannelApply:
    def test_decoupled_environment_is_unitary_conjugation(self, rng):
        h_S = random_hermitian(rng, 2)
        d = Dilation(2, 2, random_density(rng, 2), tensor(h_S, np.eye(2)))
        rho = random_density(rng, 2)
        u = unitary_evolve(h_S, 1.3)
        assert hs_norm(channel_apply(d, 1.3, rho) - u @ rho @ u.conj().T) <= 1e-12

    def test_dephasing_closed_form(self, rng):
        # direct 4x4 exponential + partial trace against the
        # cos^2/sin^2 mixture formula
        g, t = 0.7, 0.9
        d = dephasing_dilation(g)
        rho = random_density(rng, 2)
        expected = (np.cos(g * t) ** 2 * rho
                    + np.sin(g * t) ** 2 * (PAULI_Z @ rho @ PAULI_Z))
        assert hs_norm(channel_apply(d, t, rho) - expected) <= 1e-12

    def test_time_zero_is_identity(self, rng):
        d = random_dilation(rng, 2, 3)
        rho = random_density(rng, 2)
        assert hs_norm(channel_apply(d, 0.0, rho) - rho) <= 1e-12

    def test_outputs_are_states(self, rng):
        for _ in range(10):
            d = random_dilation(rng, 2, 3)
            out = channel_apply(d, 0.8, random_density(rng, 2))
            validate_density(out)

    def test_rejects_wrong_input_dimension(self, rng):
        d = random_dilation(rng, 2, 2)
        with pytest.raises(DimensionMismatchError):
            channel_apply(d, 1.0, random_density(rng, 3))


class TestKraus:
    def test_pure_environment_gives_two_operators(self):
        d = dephasing_dilation(0.5)
        kraus = kraus_from_dilation(d, 1.0)
        assert len(kraus.operators) == 2

    def test_completeness_random(self, rng):
        d = random_dilation(rng, 2, 3)
        kraus = kraus_from_dilation(d, 0.7)
        total = sum(k.conj().T @ k for k in kraus.operators)
        assert hs_norm(total - np.eye(2)) <= 1e-9

    def test_dephasing_kraus_matches_mixture_on_basis(self):
        g, t = 0.7, 0.9
        d = dephasing_dilation(g)
        kraus = kraus_from_dilation(d, t)
        for b in hermitian_basis(2):
            expected = (np.cos(g * t) ** 2 * b
                        + np.sin(g * t) ** 2 * (PAULI_Z @ b @ PAULI_Z))
            assert hs_norm(kraus.apply(b) - expected) <= 1e-12

    def test_two_path_consistency_small_dims(self, rng):
        for d_S, d_E in ((2, 2), (2, 3), (3, 2), (3, 3)):
            d = random_dilation(rng, d_S, d_E)
            kraus = kraus_from_dilation(d, 0.6)
            for b in hermitian_basis(d_S):
                direct = channel_apply_matrix(d, 0.6, b)
                assert hs_norm(kraus.apply(b) - direct) <= 1e-9

    def test_kraus_set_rejects_incomplete(self):
        with pytest.raises(ValidationError, match="completeness"):
            KrausSet(2, (0.5 * np.eye(2),))


class TestChoi:
    def test_identity_channel_choi(self, rng):
        d = random_dilation(rng, 2, 2)
        c = choi_matrix(d, 0.0)
        expected = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                unit = np.zeros((2, 2), dtype=complex)
                unit[i, j] = 1.0
                expected += np.kron(unit, unit)
        assert hs_norm(c.matrix - expected) <= 1e-12
        assert np.trace(c.matrix) == pytest.approx(2.0)
        eigs = np.linalg.eigvalsh(c.matrix)
        assert (eigs > 1e-9).sum() == 1  # rank one

    def test_complete_dephasing_choi_is_diagonal_block(self):
        # gt = pi/4 sends the coupling to the complete dephasing point
        g = 0.7
        d = dephasing_dilation(g)
        kraus = kraus_from_dilation(d, (np.pi / 4) / g)
        expected = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                unit = np.zeros((2, 2), dtype=complex)
                unit[i, j] = 1.0
                expected += np.kron(unit, kraus.apply(unit))
        c = choi_matrix(d, (np.pi / 4) / g)
        assert hs_norm(c.matrix - expected) <= 1e-9
        offblock = c.matrix.reshape(2, 2, 2, 2)[0, :, 1, :]
        assert hs_norm(offblock) <= 1e-9  # off-diagonal blocks vanish

    def test_choi_consistent_with_kraus(self, rng):
        d = random_dilation(rng, 2, 3)
        kraus = kraus_from_dilation(d, 0.8)
        rebuilt = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                unit = np.zeros((2, 2), dtype=complex)
                unit[i, j] = 1.0
                rebuilt += np.kron(unit, kraus.apply(unit))
        assert hs_norm(choi_matrix(d, 0.8).matrix - rebuilt) <= 1e-9

    def test_choi_validation_rejects_non_tp(self):
        bad = np.eye(4, dtype=complex)  # trace_out = 2 I, not I
        with pytest.raises(ValidationError, match="trace-preservation"):
            ChoiMatrix(2, 0.5 * bad + 0.5 * np.diag([2.0, 0, 0, 0]))


class TestChannelDistance:
    def test_identical_dilations(self, rng):
        d = random_dilation(rng, 2, 2)
        assert channel_distance(choi_matrix(d, 1.0), choi_matrix(d, 1.0)) == 0.0

    def test_gauge_transformed_within_threshold(self, rng):
        d = random_dilation(rng, 2, 3)
        g = gauge_transform(d, random_unitary(rng, 3))
        assert channel_distance(choi_matrix(d, 1.1), choi_matrix(g, 1.1)) <= 1e-9

    def test_identity_vs_complete_dephasing(self):
        # oracle: || sum_{i != j} |i><j| (x) |i><j| ||_hs = sqrt(2) on a qubit
        oracle = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                if i != j:
                    unit = np.zeros((2, 2), dtype=complex)
                    unit[i, j] = 1.0
                    oracle += np.kron(unit, unit)
        g = 0.7
        d = dephasing_dilation(g)
        dist = channel_distance(choi_matrix(d, 0.0), choi_matrix(d, (np.pi / 4) / g))
        assert dist == pytest.approx(hs_norm(oracle), abs=1e-9)
        assert dist == pytest.approx(np.sqrt(2.0), abs=1e-9)

    def test_dimension_mismatch(self, rng):
        a = choi_matrix(random_dilation(rng, 2, 2), 0.5)
        b = choi_matrix(random_dilation(rng, 3, 2), 0.5)
        with pytest.raises(DimensionMismatchError):
            channel_distance(a, b)


class TestGaugeTransform:
    def test_identity_gauge_is_noop(self, rng):
        d = random_dilation(rng, 2, 2)
        g = gauge_transform(d, np.eye(2))
        assert hs_norm(g.h_tot - d.h_tot) == 0.0
        assert hs_norm(g.rho_E - d.rho_E) == 0.0

    def test_channel_and_norm_invariant(self, rng):
        d = dephasing_dilation(0.6)
        for _ in range(5):
            v = random_unitary(rng, 2)
            g = gauge_transform(d, v)
            assert channel_distance(choi_matrix(d, 0.9), choi_matrix(g, 0.9)) <= 1e-9
            assert hs_norm(g.h_tot) == pytest.approx(hs_norm(d.h_tot), abs=1e-12)

    def test_rejects_wrong_dimension(self, rng):
        d = random_dilation(rng, 2, 2)
        with pytest.raises(DimensionMismatchError):
            gauge_transform(d, random_unitary(rng, 3))

    def test_rejects_non_unitary(self, rng):
        d = random_dilation(rng, 2, 2)
        with pytest.raises(ValidationError):
            gauge_transform(d, 1.2 * np.eye(2))


class TestTrivialDilation:
    def test_matches_system_evolution(self, rng):
        h = random_hermitian(rng, 3)
        d = trivial_dilation(h)
        assert d.d_E == 1 and d.d_tot == 3
        rho = random_density(rng, 3)
        u = unitary_evolve(h, 0.7)
        assert hs_norm(channel_apply(d, 0.7, rho) - u @ rho @ u.conj().T) <= 1e-12
