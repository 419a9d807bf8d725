"""Right-invariant unitary complexity geometry.

Weighted quadratic norms over a traceless Hermitian control basis, the
closed-form Hilbert-Schmidt complexity for time-independent generators,
trapezoidal path-length functionals, locality penalty metrics over Pauli
strings, and a fixed-step integrator for the reduced geodesic flow of the
body velocity.

The weighted inner product of two traceless Hermitian generators A, B is

    <A, B> = (1/(N^2-1)) * sum_i  l_i * a_i * b_i,

with a_i, b_i the coefficients over the orthonormal basis and l_i > 0 the
penalty weights.  With all weights equal to one this reduces to
||A||_hs / sqrt(N^2-1), which is exactly the normalization that makes the
closed-form complexity of exp(-itH) equal to t ||H||_hs / sqrt(N^2-1).
"""
from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import DimensionMismatchError, ValidationError
from .operators import (
    as_square,
    eig_hermitian,
    hs_norm,
    pauli_string_basis,
    su_basis,
    traceless_part,
    unitary_evolve,
    validate_hermitian,
    validate_traceless,
)

__all__ = [
    "PenaltyMetric",
    "HamiltonianPath",
    "GeodesicPath",
    "uniform_penalty_metric",
    "locality_penalty_metric",
    "omega_norm",
    "hs_complexity_static",
    "traceless_norm",
    "path_length",
    "euler_arnold_geodesic",
]


@dataclass(frozen=True, eq=False)
class PenaltyMetric:
    """Positive weights over an orthonormal traceless Hermitian basis.

    ``basis`` has shape (N^2-1, N, N); every element must be traceless
    Hermitian and the family pairwise orthonormal under the plain
    Hilbert-Schmidt pairing.  ``labels`` optionally names the basis
    directions (Pauli strings for the locality metric).
    """

    dim: int
    basis: np.ndarray
    weights: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=complex)
        weights = np.asarray(self.weights, dtype=float)
        n_gen = self.dim * self.dim - 1
        if basis.shape != (n_gen, self.dim, self.dim):
            raise DimensionMismatchError(
                f"penalty metric: basis shape {basis.shape} does not match "
                f"({n_gen}, {self.dim}, {self.dim})")
        if weights.shape != (n_gen,):
            raise DimensionMismatchError(
                f"penalty metric: {weights.shape[0]} weights for {n_gen} basis elements")
        if not np.all(weights > 0.0):
            raise ValidationError("penalty metric: weights must be strictly positive")
        traces = np.abs(np.einsum("kii->k", basis))
        if traces.max() > 1e-12:
            raise ValidationError(f"penalty metric: basis trace defect {traces.max():.3e}")
        herm = np.abs(basis - basis.conj().transpose(0, 2, 1)).max()
        if herm > 1e-12:
            raise ValidationError(f"penalty metric: basis hermiticity defect {herm:.3e}")
        flat = basis.reshape(n_gen, -1)
        gram = flat.conj() @ flat.T
        defect = np.abs(gram - np.eye(n_gen)).max()
        if defect > 1e-10:
            raise ValidationError(f"penalty metric: basis orthonormality defect {defect:.3e}")
        if self.labels is not None and len(self.labels) != n_gen:
            raise DimensionMismatchError("penalty metric: label count does not match basis")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "weights", weights)

    @property
    def n_generators(self) -> int:
        return self.dim * self.dim - 1

    def coefficients(self, h) -> np.ndarray:
        """Real expansion coefficients of a Hermitian matrix over the basis."""
        arr = as_square(h)
        if arr.shape[0] != self.dim:
            raise DimensionMismatchError(
                f"penalty metric: operator dimension {arr.shape[0]} != {self.dim}")
        return np.real(np.einsum("kab,ab->k", self.basis.conj(), arr))

    def from_coefficients(self, coeffs) -> np.ndarray:
        return np.tensordot(np.asarray(coeffs, dtype=float), self.basis, axes=1)

    def is_uniform(self) -> bool:
        return bool(np.all(self.weights == self.weights[0]))


def uniform_penalty_metric(dim: int) -> PenaltyMetric:
    """Unit-weight metric over the generalized Gell-Mann basis (bi-invariant case)."""
    basis = su_basis(dim)
    return PenaltyMetric(dim, basis, np.ones(basis.shape[0]))


def locality_penalty_metric(n_qubits: int, q: float,
                            tol: ToleranceConfig = DEFAULT_TOLERANCES) -> PenaltyMetric:
    """Penalty metric over normalized Pauli strings of an n-qubit register.

    Strings acting on at most two qubits get weight one; every higher-body
    string is stretched by the factor q > 1.
    """
    if n_qubits < 2:
        raise ValidationError(f"locality metric: need at least 2 qubits, got {n_qubits}")
    if q <= 1.0:
        raise ValidationError(f"locality metric: penalty factor must exceed 1, got {q}")
    dim = 2 ** n_qubits
    if dim > tol.dim_cap:
        raise ValidationError(
            f"locality metric: dimension {dim} exceeds configured cap {tol.dim_cap}")
    labels, mats = pauli_string_basis(n_qubits)
    body = np.array([n_qubits - lbl.count("I") for lbl in labels])
    weights = np.where(body <= 2, 1.0, float(q))
    return PenaltyMetric(dim, mats, weights, labels)


def omega_norm(metric: PenaltyMetric, h,
               tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Weighted norm sqrt((1/(N^2-1)) sum_i l_i c_i^2) of a traceless Hermitian h."""
    arr = validate_hermitian(h, tol, "generator")
    validate_traceless(arr, tol, "generator")
    c = metric.coefficients(arr)
    return float(np.sqrt(np.dot(metric.weights, c * c) / metric.n_generators))


def hs_complexity_static(h, t: float, d: int,
                         tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Closed-form complexity t ||H||_hs / sqrt(d^2 - 1) of exp(-itH).

    The full Hilbert-Schmidt norm of the generator is used, trace
    component included; see :func:`traceless_norm` for the traceless-part
    diagnostic.
    """
    if d < 2:
        raise ValidationError(f"complexity normalization needs d >= 2, got {d}")
    if t < 0:
        raise ValidationError(f"time must be nonnegative, got {t}")
    arr = validate_hermitian(h, tol, "generator")
    return float(t) * hs_norm(arr) / np.sqrt(d * d - 1.0)


def traceless_norm(h) -> float:
    """Diagnostic: Hilbert-Schmidt norm of the traceless part of h."""
    return hs_norm(traceless_part(h))


@dataclass(frozen=True, eq=False)
class HamiltonianPath:
    """Sampled generator path H(s) on a strictly increasing time grid.

    Samples must be Hermitian; tracelessness is a requirement of the
    weighted-norm operations (checked there), not of the container, since
    total-space generator paths legitimately carry a trace component.
    """

    times: np.ndarray
    generators: np.ndarray
    tol: InitVar[ToleranceConfig | None] = None

    def __post_init__(self, tol):
        cfg = tol or DEFAULT_TOLERANCES
        times = np.asarray(self.times, dtype=float)
        gens = np.asarray(self.generators, dtype=complex)
        if times.ndim != 1 or times.size < 2:
            raise ValidationError("path: need at least 2 grid points")
        if not np.all(np.diff(times) > 0.0):
            raise ValidationError("path: time grid must be strictly increasing")
        if gens.ndim != 3 or gens.shape[0] != times.size or gens.shape[1] != gens.shape[2]:
            raise DimensionMismatchError(
                f"path: generator stack shape {gens.shape} does not match "
                f"{times.size} grid points")
        for k in range(gens.shape[0]):
            validate_hermitian(gens[k], cfg, f"path generator [{k}]")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    @classmethod
    def constant(cls, h, t_final: float, samples: int = 2) -> "HamiltonianPath":
        arr = as_square(h)
        times = np.linspace(0.0, float(t_final), samples)
        gens = np.broadcast_to(arr, (samples,) + arr.shape).copy()
        return cls(times, gens)


def path_length(metric: PenaltyMetric, path: HamiltonianPath,
                tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Trapezoidal quadrature of the weighted generator norm along the path."""
    if path.dim != metric.dim:
        raise DimensionMismatchError(
            f"path length: path dimension {path.dim} != metric dimension {metric.dim}")
    speeds = np.array([omega_norm(metric, g, tol) for g in path.generators])
    return float(np.trapezoid(speeds, path.times))


@dataclass(frozen=True, eq=False)
class GeodesicPath:
    """Integrated geodesic: grid, Hermitian body velocities, and unitaries.

    ``body_velocities[k]`` is the Hermitian form A_h(s_k) of the
    right-trivialized velocity A(s) = -i A_h(s); ``unitaries[k]`` is the
    reconstructed gamma(s_k) with gamma(0) the identity.
    """

    times: np.ndarray
    body_velocities: np.ndarray
    unitaries: np.ndarray
    integration_tol: float = 1e-10

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        vels = np.asarray(self.body_velocities, dtype=complex)
        unis = np.asarray(self.unitaries, dtype=complex)
        n = times.size
        if vels.shape[0] != n or unis.shape[0] != n:
            raise DimensionMismatchError("geodesic: sample counts do not match the grid")
        dim = unis.shape[1]
        if np.linalg.norm(unis[0] - np.eye(dim)) > 1e-10:
            raise ValidationError("geodesic: gamma(0) is not the identity")
        eye = np.eye(dim)
        for k in range(n):
            defect = np.linalg.norm(unis[k].conj().T @ unis[k] - eye)
            if defect > self.integration_tol:
                raise ValidationError(
                    f"geodesic: unitarity defect {defect:.3e} at sample {k} exceeds "
                    f"integration tolerance {self.integration_tol:.1e}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "body_velocities", vels)
        object.__setattr__(self, "unitaries", unis)


def euler_arnold_geodesic(metric: PenaltyMetric, a0, t_final: float, steps: int,
                          tol: ToleranceConfig = DEFAULT_TOLERANCES) -> GeodesicPath:
    """Integrate the reduced geodesic flow of a right-invariant metric.

    The body velocity (Hermitian form H) evolves through its inertia image
    M, with coefficients m_i = l_i h_i, according to dM/ds = -i [M, H];
    with uniform weights M is proportional to H, the bracket vanishes and
    the flow is a one-parameter subgroup.  Integration is fixed-step RK4
    on the half grid; the unitary is rebuilt by midpoint exponentials
    gamma(s + ds) = exp(-i ds H(s + ds/2)) gamma(s), which keeps every
    sample exactly unitary up to eigensolver roundoff.
    """
    if steps < 16:
        raise ValidationError(f"geodesic integration: step count {steps} too small (need >= 16)")
    if not t_final > 0.0:
        raise ValidationError(f"geodesic integration: final time must be positive, got {t_final}")
    arr = validate_hermitian(a0, tol, "initial velocity")
    validate_traceless(arr, tol, "initial velocity")
    if arr.shape[0] != metric.dim:
        raise DimensionMismatchError(
            f"geodesic integration: velocity dimension {arr.shape[0]} != metric "
            f"dimension {metric.dim}")

    weights = metric.weights

    def rhs(m_coeffs: np.ndarray) -> np.ndarray:
        h_mat = metric.from_coefficients(m_coeffs / weights)
        m_mat = metric.from_coefficients(m_coeffs)
        bracket = -1j * (m_mat @ h_mat - h_mat @ m_mat)
        return metric.coefficients(bracket)

    n_sub = 2 * steps
    ds = float(t_final) / n_sub
    m = weights * metric.coefficients(arr)
    m_samples = np.empty((n_sub + 1, m.size))
    m_samples[0] = m
    for k in range(n_sub):
        k1 = rhs(m)
        k2 = rhs(m + 0.5 * ds * k1)
        k3 = rhs(m + 0.5 * ds * k2)
        k4 = rhs(m + ds * k3)
        m = m + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        m_samples[k + 1] = m

    dt = float(t_final) / steps
    times = np.linspace(0.0, float(t_final), steps + 1)
    dim = metric.dim
    velocities = np.empty((steps + 1, dim, dim), dtype=complex)
    unitaries = np.empty((steps + 1, dim, dim), dtype=complex)
    unitaries[0] = np.eye(dim, dtype=complex)
    for k in range(steps + 1):
        velocities[k] = metric.from_coefficients(m_samples[2 * k] / weights)
    for k in range(steps):
        h_mid = metric.from_coefficients(m_samples[2 * k + 1] / weights)
        unitaries[k + 1] = unitary_evolve(h_mid, dt, tol) @ unitaries[k]

    return GeodesicPath(times, velocities, unitaries, integration_tol=1e-10)
