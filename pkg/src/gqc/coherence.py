"""Basis coherence, its growth under unitary driving, and complexity lower bounds.

The reference basis is the computational basis, fixed globally.  The
dephasing map zeroes off-diagonal entries; it is an orthogonal projector
in the Hilbert-Schmidt pairing, and the linear-entropy coherence

    C(rho) = Tr(rho^2) - Tr(dephase(rho)^2)

equals the squared Hilbert-Schmidt norm of the off-diagonal part.  Along
a unitary trajectory sqrt(C) grows at most at rate 2 ||H(s)||_hs, which
integrates to the lower bound

    complexity >= ( sqrt(C(rho_t)) - sqrt(C(rho_0)) ) / (2 sqrt(d^2 - 1)).

A second, stronger-looking bound |C(rho_t) - C(rho_0)| / (sqrt(d^2-1) ||H||_hs)
rests on a sketched argument only; it runs here in verifier mode, which
records violations instead of asserting them away.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import DimensionMismatchError, IntegrationError, ValidationError
from .geometry import HamiltonianPath, hs_complexity_static
from .operators import hs_norm, unitary_evolve, validate_density, validate_hermitian

__all__ = [
    "CoherenceReport",
    "GrowthReport",
    "MainBoundRecord",
    "dephase",
    "linear_entropy",
    "coherence",
    "coherence_value",
    "coherence_growth_check",
    "lower_bound_appendix",
    "lower_bound_main",
    "main_bound_verifier",
]


def dephase(rho, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Project a state onto its diagonal in the fixed reference basis."""
    arr = validate_density(rho, tol, "rho")
    return np.diag(np.diag(arr))


def linear_entropy(rho) -> float:
    """S_L(rho) = 1 - Tr(rho^2)."""
    arr = np.asarray(rho, dtype=complex)
    return float(1.0 - np.trace(arr @ arr).real)


@dataclass(frozen=True)
class CoherenceReport:
    """Coherence value with its two defining routes for cross-checking."""

    c_value: float
    s_linear_rho: float
    s_linear_dephased: float
    offdiag_norm_sq: float


def coherence(rho, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> CoherenceReport:
    """Linear-entropy coherence with the off-diagonal-norm identity verified.

    Computes C = S_L(dephased) - S_L(rho) and checks it coincides with the
    squared Hilbert-Schmidt norm of the off-diagonal part; a disagreement
    signals a numerical defect and raises.
    """
    arr = validate_density(rho, tol, "rho")
    diag = np.diag(np.diag(arr))
    offdiag = arr - diag
    s_rho = linear_entropy(arr)
    s_deph = linear_entropy(diag)
    c = s_deph - s_rho
    tau_sq = hs_norm(offdiag) ** 2
    if abs(c - (s_deph - s_rho)) > 1e-12 or abs(c - tau_sq) > 1e-10:
        raise ValidationError(
            f"coherence: identity defect |C - ||tau||^2| = {abs(c - tau_sq):.3e}")
    return CoherenceReport(c, s_rho, s_deph, tau_sq)


def coherence_value(rho, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    return coherence(rho, tol).c_value


@dataclass(frozen=True, eq=False)
class GrowthReport:
    """Grid-wise record of the integrated coherence growth inequality.

    margins[k] = budget[k] - (sqrt(C_k) - sqrt(C_0)) with
    budget[k] = 2 * integral of ||H(s)||_hs up to t_k; passes allow the
    measured quadrature slack.  ``commutator_ratio_max`` spot-checks
    ||[H, rho]||_hs <= 2 ||H||_hs along the trajectory.
    """

    times: np.ndarray
    sqrt_coherence: np.ndarray
    budgets: np.ndarray
    margins: np.ndarray
    passes: np.ndarray
    slack: float
    substeps_per_interval: int
    commutator_ratio_max: float

    def all_passed(self) -> bool:
        return bool(np.all(self.passes))

    def rows(self) -> list[tuple]:
        return [(float(t), float(s), float(b), float(m), bool(p))
                for t, s, b, m, p in zip(self.times, self.sqrt_coherence,
                                         self.budgets, self.margins, self.passes)]


def _interp_generator(path: HamiltonianPath, s: float) -> np.ndarray:
    times = path.times
    idx = np.searchsorted(times, s, side="right") - 1
    idx = min(max(idx, 0), times.size - 2)
    t0, t1 = times[idx], times[idx + 1]
    w = (s - t0) / (t1 - t0)
    return (1.0 - w) * path.generators[idx] + w * path.generators[idx + 1]


def _propagate(path: HamiltonianPath, rho0: np.ndarray, substeps: int,
               tol: ToleranceConfig) -> tuple[np.ndarray, np.ndarray, float]:
    """Piecewise-constant exponential stepping; returns grid states, the
    running integral of ||H||_hs at grid points, and the worst commutator
    ratio encountered."""
    times = path.times
    n = times.size
    dim = path.dim
    states = np.empty((n, dim, dim), dtype=complex)
    integrals = np.zeros(n)
    states[0] = rho0
    rho = rho0
    acc = 0.0
    worst_ratio = 0.0
    for k in range(n - 1):
        sub = np.linspace(times[k], times[k + 1], substeps + 1)
        for a, b in zip(sub[:-1], sub[1:]):
            h_mid = _interp_generator(path, 0.5 * (a + b))
            h_norm = hs_norm(h_mid)
            if h_norm > 0.0:
                comm = h_mid @ rho - rho @ h_mid
                worst_ratio = max(worst_ratio, hs_norm(comm) / (2.0 * h_norm))
            u = unitary_evolve(h_mid, b - a, tol)
            rho = u @ rho @ u.conj().T
            acc += (b - a) * h_norm
        rho = 0.5 * (rho + rho.conj().T)
        states[k + 1] = rho
        integrals[k + 1] = acc
    return states, integrals, worst_ratio


def coherence_growth_check(h_path: HamiltonianPath, rho0,
                           slack_budget: float = 1e-7,
                           tol: ToleranceConfig = DEFAULT_TOLERANCES) -> GrowthReport:
    """Check sqrt(C(t)) - sqrt(C(0)) <= 2 * integral ||H(s)|| ds on the grid.

    The trajectory is integrated with piecewise-constant exponential steps,
    halving the step until the coherence profile stabilizes; the residual
    step-halving difference is the quadrature slack granted to the
    inequality.  Raises when the slack cannot be brought below the budget.
    """
    rho = validate_density(rho0, tol, "rho0")
    if rho.shape[0] != h_path.dim:
        raise DimensionMismatchError(
            f"rho0: dimension {rho.shape[0]} != path dimension {h_path.dim}")

    substeps = 4
    states, integrals, ratio = _propagate(h_path, rho, substeps, tol)
    sqrt_c = np.array([np.sqrt(max(coherence_value(s, tol), 0.0)) for s in states])
    slack = np.inf
    while slack > slack_budget:
        substeps *= 2
        if substeps > 4096:
            raise IntegrationError(
                f"coherence growth check: slack {slack:.3e} still above budget "
                f"{slack_budget:.1e} at {substeps // 2} substeps per interval")
        states, integrals, ratio = _propagate(h_path, rho, substeps, tol)
        refined = np.array([np.sqrt(max(coherence_value(s, tol), 0.0)) for s in states])
        slack = float(np.max(np.abs(refined - sqrt_c)))
        sqrt_c = refined

    budgets = 2.0 * integrals
    margins = budgets - (sqrt_c - sqrt_c[0])
    passes = margins >= -(slack + 1e-12)
    return GrowthReport(h_path.times.copy(), sqrt_c, budgets, margins, passes,
                        slack, substeps, ratio)


def lower_bound_appendix(rho0, rho_t, d: int,
                         tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Coherence-difference lower bound (sqrt C_t - sqrt C_0) / (2 sqrt(d^2-1)).

    May be negative when coherence decreases; callers maximize over states
    rather than clamping here.  For an incoherent initial state this is
    sqrt(C_t) / (2 sqrt(d^2-1)).
    """
    a = validate_density(rho0, tol, "rho0")
    b = validate_density(rho_t, tol, "rho_t")
    if a.shape[0] != d or b.shape[0] != d:
        raise DimensionMismatchError(
            f"lower bound: state dimensions {a.shape[0]}, {b.shape[0]} != d={d}")
    c0 = np.sqrt(max(coherence_value(a, tol), 0.0))
    ct = np.sqrt(max(coherence_value(b, tol), 0.0))
    return float((ct - c0) / (2.0 * np.sqrt(d * d - 1.0)))


def lower_bound_main(h, rho0, t: float, d: int,
                     tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Sketch-based bound |C(rho_t) - C(rho_0)| / (sqrt(d^2-1) ||H||_hs).

    Evolves rho0 under exp(-itH).  This functional form is not backed by a
    complete argument; see :func:`main_bound_verifier`, which compares it
    against the closed-form complexity and records violations.
    """
    arr = validate_hermitian(h, tol, "h")
    if hs_norm(arr) <= 1e-300:
        raise ValidationError("lower bound: zero generator")
    rho = validate_density(rho0, tol, "rho0")
    if arr.shape[0] != d or rho.shape[0] != d:
        raise DimensionMismatchError("lower bound: dimension mismatch")
    u = unitary_evolve(arr, t, tol)
    rho_t = u @ rho @ u.conj().T
    rho_t = 0.5 * (rho_t + rho_t.conj().T)
    delta = abs(coherence_value(rho_t, tol) - coherence_value(rho, tol))
    return float(delta / (np.sqrt(d * d - 1.0) * hs_norm(arr)))


@dataclass(frozen=True)
class MainBoundRecord:
    t: float
    bound: float
    complexity: float
    violated: bool


def main_bound_verifier(h, rho0, t_grid, d: int,
                        tol: ToleranceConfig = DEFAULT_TOLERANCES) -> list[MainBoundRecord]:
    """Run the sketch-based bound against the closed-form complexity on a grid.

    Returns one record per time; a record is marked violated when the
    bound exceeds the complexity beyond roundoff.  Violations are data,
    not errors.
    """
    records = []
    for t in np.atleast_1d(np.asarray(t_grid, dtype=float)):
        bound = lower_bound_main(h, rho0, t, d, tol)
        comp = hs_complexity_static(h, t, d, tol)
        records.append(MainBoundRecord(float(t), bound, comp,
                                       bound > comp + 1e-12))
    return records
