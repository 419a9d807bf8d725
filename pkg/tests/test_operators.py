import numpy as np
import pytest

from gqc.config import DEFAULT_TOLERANCES
from gqc.errors import DimensionMismatchError, ValidationError
from gqc.operators import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    eig_hermitian,
    embed_system,
    hermitian_basis,
    hermitian_op_norm,
    hs_inner,
    hs_norm,
    matrix_abs,
    matrix_fn,
    matrix_sqrt,
    op_norm,
    partial_trace_env,
    partial_trace_sys,
    pauli_string_basis,
    pauli_string_labels,
    su_basis,
    tensor,
    traceless_part,
    unitary_evolve,
    validate_density,
    validate_hermitian,
    validate_unitary,
)
from gqc.sampling import random_density, random_hermitian, random_psd, random_unitary


class TestHsInner:
    def test_identity_pair(self):
        assert hs_inner(np.eye(2), np.eye(2)) == pytest.approx(2.0)

    def test_pauli_orthogonality(self):
        assert abs(hs_inner(PAULI_Z, PAULI_X)) == 0.0

    def test_matches_elementwise_sum_oracle(self, rng):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        oracle = sum(np.conj(a[i, j]) * b[i, j] for i in range(4) for j in range(4))
        assert hs_inner(a, b) == pytest.approx(oracle, abs=1e-12)

    def test_conjugate_symmetry_and_positivity(self, rng):
        for _ in range(20):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            assert hs_inner(a, b) == pytest.approx(np.conj(hs_inner(b, a)), abs=1e-12)
            assert hs_inner(a, a).real > 0.0
        assert hs_norm(a) == pytest.approx(np.sqrt(hs_inner(a, a).real))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            hs_inner(np.eye(2), np.eye(3))


class TestEigHermitian:
    def test_diagonal_sorted_ascending(self):
        w, _ = eig_hermitian(np.diag([3.0, 1.0, 2.0]).astype(complex))
        assert np.allclose(w, [1.0, 2.0, 3.0])

    def test_pauli_x_spectrum(self):
        w, _ = eig_hermitian(PAULI_X)
        assert np.allclose(w, [-1.0, 1.0])

    def test_random_reconstruction(self, rng):
        h = random_hermitian(rng, 6)
        w, v = eig_hermitian(h)
        assert hs_norm((v * w) @ v.conj().T - h) <= 1e-10 * max(1.0, hs_norm(h))
        assert hs_norm(v.conj().T @ v - np.eye(6)) <= 1e-10 * np.sqrt(6)

    def test_deterministic(self, rng):
        h = random_hermitian(rng, 5)
        w1, v1 = eig_hermitian(h)
        w2, v2 = eig_hermitian(h.copy())
        assert np.array_equal(w1, w2) and np.array_equal(v1, v2)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestMatrixFunctions:
    def test_sqrt_diagonal(self):
        out = matrix_sqrt(np.diag([4.0, 1.0, 0.0]).astype(complex))
        assert np.allclose(out, np.diag([2.0, 1.0, 0.0]))

    def test_abs_diagonal(self):
        out = matrix_abs(np.diag([-2.0, 3.0]).astype(complex))
        assert np.allclose(out, np.diag([2.0, 3.0]))

    def test_sqrt_conjugation_covariance(self, rng):
        # sqrt(W X W^dag) = W sqrt(X) W^dag: functional calculus commutes
        # with unitary conjugation
        x = random_psd(rng, 4)
        w = random_unitary(rng, 4)
        lhs = matrix_sqrt(w @ x @ w.conj().T)
        rhs = w @ matrix_sqrt(x) @ w.conj().T
        assert hs_norm(lhs - rhs) <= 1e-10 * max(1.0, hs_norm(rhs))

    def test_sqrt_squares_back(self, rng):
        x = random_psd(rng, 5)
        root = matrix_sqrt(x)
        assert hs_norm(root @ root - x) <= 1e-9 * max(1.0, hs_norm(x))

    def test_sqrt_clamps_small_negatives(self):
        out = matrix_sqrt(np.diag([1.0, -1e-12]).astype(complex))
        assert np.allclose(out, np.diag([1.0, 0.0]))

    def test_sqrt_rejects_genuine_negatives(self):
        with pytest.raises(ValidationError):
            matrix_sqrt(np.diag([1.0, -1e-3]).astype(complex))

    def test_generic_function(self):
        h = np.diag([0.0, np.log(2.0)]).astype(complex)
        out = matrix_fn(h, np.exp)
        assert np.allclose(out, np.diag([1.0, 2.0]))

    def test_undefined_function_raises(self):
        with pytest.raises(ValidationError):
            matrix_fn(np.diag([-1.0, 1.0]).astype(complex), np.sqrt)


class TestTensorAndTraces:
    def test_identity_tensor(self):
        assert np.array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_sigma_z_tensor_identity(self):
        assert np.allclose(tensor(PAULI_Z, np.eye(2)), np.diag([1, 1, -1, -1]))

    def test_norm_multiplicativity(self, rng):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assert hs_norm(tensor(a, b)) == pytest.approx(hs_norm(a) * hs_norm(b))

    def test_product_state_reduction(self, rng):
        rho_s = random_density(rng, 2)
        rho_e = random_density(rng, 3)
        assert hs_norm(partial_trace_env(tensor(rho_s, rho_e), 2, 3) - rho_s) <= 1e-12

    def test_identity_reduction(self):
        assert np.allclose(partial_trace_env(np.eye(4), 2, 2), 2.0 * np.eye(2))

    def test_matches_index_summation_oracle(self, rng):
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        oracle = np.zeros((2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    oracle[i, j] += m[i * 2 + k, j * 2 + k]
        assert hs_norm(partial_trace_env(m, 2, 2) - oracle) <= 1e-12
        assert np.trace(partial_trace_env(m, 2, 2)) == pytest.approx(np.trace(m))

    def test_partial_trace_sys(self, rng):
        rho_s = random_density(rng, 2)
        rho_e = random_density(rng, 3)
        assert hs_norm(partial_trace_sys(tensor(rho_s, rho_e), 2, 3) - rho_e) <= 1e-12

    def test_factorization_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            partial_trace_env(np.eye(6), 2, 2)

    def test_embed_system(self):
        emb = embed_system(PAULI_Z, 3)
        assert emb.shape == (6, 6)
        assert hs_norm(emb) == pytest.approx(hs_norm(PAULI_Z) * np.sqrt(3))


class TestUnitaryEvolve:
    def test_zero_generator(self):
        assert np.allclose(unitary_evolve(np.zeros((3, 3)), 2.7), np.eye(3))

    def test_pauli_x_closed_form(self):
        # exp(-i theta sigma_x) = cos(theta) I - i sin(theta) sigma_x
        theta = np.pi / 2
        expected = np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * PAULI_X
        u = unitary_evolve((np.pi / 2) * PAULI_X, 1.0)
        assert hs_norm(u - expected) <= 1e-10
        assert hs_norm(u - (-1j) * PAULI_X) <= 1e-10

    def test_one_parameter_group_law(self, rng):
        h = random_hermitian(rng, 4)
        lhs = unitary_evolve(h, 0.6) @ unitary_evolve(h, 0.9)
        assert hs_norm(lhs - unitary_evolve(h, 1.5)) <= 1e-12

    def test_output_unitary(self, rng):
        u = unitary_evolve(random_hermitian(rng, 5), 1.3)
        validate_unitary(u)

    def test_conjugation_preserves_norm(self, rng):
        h = random_hermitian(rng, 4)
        u = unitary_evolve(random_hermitian(rng, 4), 0.8)
        assert abs(hs_norm(u @ h @ u.conj().T) - hs_norm(h)) <= 1e-10


class TestValidators:
    def test_density_accepts_valid(self, rng):
        validate_density(random_density(rng, 3))

    def test_density_rejects_bad_trace(self):
        with pytest.raises(ValidationError, match="trace"):
            validate_density(0.9 * np.eye(2) / 2)

    def test_density_rejects_negative(self):
        with pytest.raises(ValidationError, match="eigenvalue"):
            validate_density(np.diag([1.5, -0.5]).astype(complex))

    def test_hermitian_relative_defect(self):
        m = np.array([[1.0, 1e-3], [0.0, 1.0]])
        with pytest.raises(ValidationError, match="hermiticity"):
            validate_hermitian(m)

    def test_nan_entry_named(self):
        m = np.eye(2)
        m[1, 1] = np.nan
        with pytest.raises(ValidationError, match=r"\[1\]\[1\]"):
            validate_hermitian(m)

    def test_op_norms_agree_for_hermitian(self, rng):
        h = random_hermitian(rng, 4)
        assert hermitian_op_norm(h) == pytest.approx(op_norm(h), abs=1e-12)


class TestBases:
    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_su_basis_orthonormal_traceless(self, dim):
        basis = su_basis(dim)
        assert basis.shape == (dim * dim - 1, dim, dim)
        flat = basis.reshape(len(basis), -1)
        gram = flat.conj() @ flat.T
        assert np.abs(gram - np.eye(len(basis))).max() <= 1e-12
        assert max(abs(np.trace(b)) for b in basis) <= 1e-12
        assert max(hs_norm(b - b.conj().T) for b in basis) == 0.0

    def test_su2_is_scaled_paulis(self):
        basis = su_basis(2)
        for b, p in zip(basis, (PAULI_X, PAULI_Y, PAULI_Z)):
            assert hs_norm(b - p / np.sqrt(2)) <= 1e-15

    def test_hermitian_basis_complete(self, rng):
        basis = hermitian_basis(3)
        h = random_hermitian(rng, 3)
        coeffs = np.real([hs_inner(b, h) for b in basis])
        recon = np.tensordot(coeffs, basis, axes=1)
        assert hs_norm(recon - h) <= 1e-12

    def test_pauli_labels(self):
        labels = pauli_string_labels(2)
        assert len(labels) == 15
        assert labels[0] == "IX" and "II" not in labels

    def test_pauli_basis_normalized(self):
        _, mats = pauli_string_basis(2)
        flat = mats.reshape(len(mats), -1)
        gram = flat.conj() @ flat.T
        assert np.abs(gram - np.eye(15)).max() <= 1e-12

    def test_traceless_part(self, rng):
        h = random_hermitian(rng, 3)
        assert abs(np.trace(traceless_part(h))) <= 1e-13
