"""Dense complex-matrix foundation.

Hilbert-Schmidt geometry, Hermitian spectral calculus, tensor-product
embeddings, and partial traces.  Everything here is a pure function over
plain complex ``numpy`` arrays; composite domain objects (dilations,
metrics, generators) live in the higher-level modules.

Conventions fixed once for the whole package:

* the system factor is always the left (slow) Kronecker factor, so a
  joint operator on system x environment has entries
  ``M[(i*d_E + k), (j*d_E + l)]``;
* eigenvalues are reported in ascending order and the eigenvector
  ordering is the deterministic LAPACK one, so repeated runs on one
  platform reproduce results bit for bit.
"""
from __future__ import annotations

import itertools
from typing import Callable, NamedTuple

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import DimensionMismatchError, ValidationError

__all__ = [
    "PAULI_I",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "SIGMA_MINUS",
    "SIGMA_PLUS",
    "SpectralDecomposition",
    "as_matrix",
    "as_square",
    "validate_hermitian",
    "validate_density",
    "validate_unitary",
    "validate_traceless",
    "hs_inner",
    "hs_norm",
    "op_norm",
    "hermitian_op_norm",
    "eig_hermitian",
    "matrix_fn",
    "matrix_sqrt",
    "matrix_abs",
    "tensor",
    "partial_trace_env",
    "partial_trace_sys",
    "embed_system",
    "embed_env",
    "unitary_evolve",
    "traceless_part",
    "su_basis",
    "hermitian_basis",
    "pauli_string_labels",
    "pauli_string_matrix",
    "pauli_string_basis",
]

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
# lowering operator |0><1| (ground state is the first basis vector)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T

_PAULI_BY_LETTER = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


# ---------------------------------------------------------------------------
# Coercion and validators
# ---------------------------------------------------------------------------

def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d complex array, naming the offending entry on failure."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValidationError(f"{name}: expected a 2-d array, got shape {arr.shape}")
    finite = np.isfinite(arr.real) & np.isfinite(arr.imag)
    if not finite.all():
        i, j = np.argwhere(~finite)[0]
        raise ValidationError(f"{name}: entry [{i}][{j}] is not finite")
    return arr


def as_square(m, name: str = "matrix") -> np.ndarray:
    arr = as_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"{name}: expected a square matrix, got shape {arr.shape}")
    return arr


def validate_hermitian(m, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                       name: str = "operator") -> np.ndarray:
    """Check the relative hermiticity defect ||M - M^dag|| <= tol * ||M||."""
    arr = as_square(m, name)
    scale = np.linalg.norm(arr)
    defect = np.linalg.norm(arr - arr.conj().T)
    if defect > tol.hermiticity_tol * scale:
        raise ValidationError(
            f"{name}: hermiticity defect {defect:.3e} exceeds "
            f"{tol.hermiticity_tol:.1e} * norm {scale:.3e}")
    return arr


def validate_density(m, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                     name: str = "state") -> np.ndarray:
    """Check hermiticity, positivity up to psd_tol, and unit trace."""
    arr = validate_hermitian(m, tol, name)
    tr = np.trace(arr)
    if abs(tr - 1.0) > tol.trace_tol:
        raise ValidationError(f"{name}: trace deviates from 1 by {abs(tr - 1.0):.3e} "
                              f"(tolerance {tol.trace_tol:.1e})")
    eigs = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))
    if eigs.min() < -tol.psd_tol:
        raise ValidationError(f"{name}: negative eigenvalue {eigs.min():.3e} "
                              f"below -psd_tol {-tol.psd_tol:.1e}")
    return arr


def validate_unitary(m, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                     name: str = "unitary") -> np.ndarray:
    arr = as_square(m, name)
    dim = arr.shape[0]
    defect = np.linalg.norm(arr.conj().T @ arr - np.eye(dim))
    if defect > tol.unitarity_tol * np.sqrt(dim):
        raise ValidationError(f"{name}: unitarity defect {defect:.3e} exceeds "
                              f"{tol.unitarity_tol:.1e} * sqrt(dim)")
    return arr


def validate_traceless(m, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                       name: str = "operator") -> np.ndarray:
    arr = as_square(m, name)
    tr = abs(np.trace(arr))
    if tr > tol.traceless_tol * max(1.0, np.linalg.norm(arr)):
        raise ValidationError(f"{name}: trace magnitude {tr:.3e} exceeds traceless "
                              f"tolerance {tol.traceless_tol:.1e}")
    return arr


# ---------------------------------------------------------------------------
# Hilbert-Schmidt geometry
# ---------------------------------------------------------------------------

def hs_inner(a, b, name: str = "operands") -> complex:
    """Hilbert-Schmidt inner product Tr(a^dag b)."""
    a = as_matrix(a, name)
    b = as_matrix(b, name)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"{name}: shapes {a.shape} and {b.shape} differ")
    return complex(np.trace(a.conj().T @ b))


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm, sqrt(Re Tr(a^dag a))."""
    return float(np.linalg.norm(as_matrix(a)))


def op_norm(m) -> float:
    """Operator (spectral) norm, the largest singular value."""
    return float(np.linalg.norm(as_matrix(m), 2))


def hermitian_op_norm(h, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Operator norm of a Hermitian matrix via its extreme eigenvalues (exact)."""
    arr = validate_hermitian(h, tol)
    eigs = np.linalg.eigvalsh(arr)
    return float(max(abs(eigs[0]), abs(eigs[-1])))


# ---------------------------------------------------------------------------
# Hermitian spectral calculus
# ---------------------------------------------------------------------------

class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray   # real, ascending
    eigenvectors: np.ndarray  # columns orthonormal


def eig_hermitian(h, tol: ToleranceConfig = DEFAULT_TOLERANCES,
                  name: str = "operator") -> SpectralDecomposition:
    """Deterministic Hermitian eigendecomposition with a reconstruction check.

    Eigenvalues come back sorted ascending.  A failed reconstruction
    (``||V diag(w) V^dag - H||`` above the spectral tolerance) signals a
    numerical defect and raises instead of returning silently wrong data.
    """
    arr = validate_hermitian(h, tol, name)
    w, v = np.linalg.eigh(arr)
    recon = (v * w) @ v.conj().T
    err = np.linalg.norm(recon - arr)
    if err > tol.spectral_tol * max(1.0, np.linalg.norm(arr)):
        raise ValidationError(f"{name}: eigendecomposition reconstruction error {err:.3e}")
    return SpectralDecomposition(w, v)


def matrix_fn(h, f: Callable[[np.ndarray], np.ndarray],
              tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix through its spectrum.

    Returns ``V diag(f(w)) V^dag``, symmetrized to kill rounding skew.  The
    function must be defined (finite) on the spectrum.
    """
    w, v = eig_hermitian(h, tol)
    fw = np.asarray(f(w), dtype=float)
    if fw.shape != w.shape or not np.all(np.isfinite(fw)):
        raise ValidationError("matrix_fn: scalar function undefined on part of the spectrum")
    out = (v * fw) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def matrix_sqrt(h, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """PSD square root with clamping of small negative eigenvalues.

    Eigenvalues in ``[-psd_tol * scale, 0)`` are clamped to zero; anything
    below that window is a genuine negativity and raises.
    """
    w, v = eig_hermitian(h, tol)
    scale = max(1.0, float(abs(w).max(initial=0.0)))
    if w.min(initial=0.0) < -tol.psd_tol * scale:
        raise ValidationError(f"matrix_sqrt: eigenvalue {w.min():.3e} below the "
                              f"clamp window -{tol.psd_tol:.1e} * {scale:.3e}")
    fw = np.sqrt(np.clip(w, 0.0, None))
    out = (v * fw) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def matrix_abs(h, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Operator absolute value |H| = sqrt(H^2) through the spectrum."""
    return matrix_fn(h, np.abs, tol)


def unitary_evolve(h, t: float, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """exp(-i t H) for Hermitian H via spectral decomposition."""
    w, v = eig_hermitian(h, tol)
    phases = np.exp(-1j * float(t) * w)
    return (v * phases) @ v.conj().T


# ---------------------------------------------------------------------------
# Tensor embeddings and partial traces
# ---------------------------------------------------------------------------

def tensor(a, b) -> np.ndarray:
    """Kronecker product with the row-major block convention (left factor slow)."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace_env(m, d_S: int, d_E: int) -> np.ndarray:
    """Trace out the right (environment) tensor factor of a (d_S*d_E)-dim operator."""
    arr = as_square(m)
    if arr.shape[0] != d_S * d_E:
        raise DimensionMismatchError(
            f"partial_trace_env: dimension {arr.shape[0]} does not factor as "
            f"{d_S} x {d_E}")
    return np.einsum("ikjk->ij", arr.reshape(d_S, d_E, d_S, d_E))


def partial_trace_sys(m, d_S: int, d_E: int) -> np.ndarray:
    """Trace out the left (system) tensor factor."""
    arr = as_square(m)
    if arr.shape[0] != d_S * d_E:
        raise DimensionMismatchError(
            f"partial_trace_sys: dimension {arr.shape[0]} does not factor as "
            f"{d_S} x {d_E}")
    return np.einsum("ikil->kl", arr.reshape(d_S, d_E, d_S, d_E))


def embed_system(h_S, d_E: int) -> np.ndarray:
    """Embed a system operator on the joint space as H_S (x) 1_E."""
    return tensor(as_square(h_S), np.eye(d_E, dtype=complex))


def embed_env(h_E, d_S: int) -> np.ndarray:
    """Embed an environment operator on the joint space as 1_S (x) H_E."""
    return tensor(np.eye(d_S, dtype=complex), as_square(h_E))


def traceless_part(h) -> np.ndarray:
    """Remove the trace component: H - (Tr H / d) 1."""
    arr = as_square(h)
    d = arr.shape[0]
    return arr - (np.trace(arr) / d) * np.eye(d, dtype=complex)


# ---------------------------------------------------------------------------
# Operator bases
# ---------------------------------------------------------------------------

def su_basis(dim: int) -> np.ndarray:
    """Orthonormal traceless Hermitian basis of su(dim), shape (dim^2-1, dim, dim).

    Generalized Gell-Mann ordering: symmetric and antisymmetric pair
    elements row-major over i < j, then the diagonal ladder.  For dim = 2
    this is (sigma_x, sigma_y, sigma_z) / sqrt(2).
    """
    if dim < 2:
        raise ValidationError(f"su_basis: dimension must be >= 2, got {dim}")
    mats = []
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for i in range(dim):
        for j in range(i + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = m[j, i] = inv_sqrt2
            mats.append(m)
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = -1j * inv_sqrt2
            m[j, i] = 1j * inv_sqrt2
            mats.append(m)
    for k in range(1, dim):
        d = np.zeros(dim)
        d[:k] = 1.0
        d[k] = -float(k)
        mats.append(np.diag(d / np.sqrt(k * (k + 1))).astype(complex))
    return np.array(mats)


def hermitian_basis(dim: int) -> np.ndarray:
    """Orthonormal Hermitian basis of the full operator space (dim^2 elements)."""
    ident = np.eye(dim, dtype=complex) / np.sqrt(dim)
    return np.concatenate([ident[None, :, :], su_basis(dim)], axis=0)


def pauli_string_labels(n_qubits: int) -> tuple[str, ...]:
    """All non-identity Pauli strings on n qubits, lexicographic in (I, X, Y, Z)."""
    labels = ["".join(p) for p in itertools.product("IXYZ", repeat=n_qubits)]
    return tuple(labels[1:])


def pauli_string_matrix(label: str) -> np.ndarray:
    """Unnormalized Pauli string operator for a label like 'XIZ'."""
    out = np.array([[1.0 + 0.0j]])
    for letter in label:
        try:
            out = np.kron(out, _PAULI_BY_LETTER[letter])
        except KeyError:
            raise ValidationError(f"pauli string: unknown letter {letter!r} in {label!r}")
    return out


def pauli_string_basis(n_qubits: int) -> tuple[tuple[str, ...], np.ndarray]:
    """Normalized non-identity Pauli strings: labels and a (4^n-1, 2^n, 2^n) array."""
    labels = pauli_string_labels(n_qubits)
    norm = 2.0 ** (-n_qubits / 2.0)
    mats = np.array([pauli_string_matrix(lbl) * norm for lbl in labels])
    return labels, mats
