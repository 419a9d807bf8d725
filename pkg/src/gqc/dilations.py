"""Stinespring dilation data and reduced-channel evaluation.

A dilation is the triple (environment dimension with its state rho_E,
total Hamiltonian H_tot) attached to a system dimension; the reduced
channel at time t is Tr_E[ U_t (rho_S (x) rho_E) U_t^dag ] with
U_t = exp(-i t H_tot).  Channel equality is witnessed through Choi
matrices: two channels are considered equal when the Hilbert-Schmidt
distance of their Choi matrices is below the configured threshold.
"""
from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import DimensionMismatchError, ValidationError
from .operators import (
    as_square,
    eig_hermitian,
    embed_env,
    hs_norm,
    partial_trace_env,
    tensor,
    unitary_evolve,
    validate_density,
    validate_hermitian,
    validate_unitary,
)

__all__ = [
    "Dilation",
    "KrausSet",
    "ChoiMatrix",
    "trivial_dilation",
    "total_unitary",
    "channel_apply",
    "channel_apply_matrix",
    "kraus_from_dilation",
    "choi_matrix",
    "channel_distance",
    "gauge_transform",
]


@dataclass(frozen=True, eq=False)
class Dilation:
    """Environment dimension, environment state, and total Hamiltonian."""

    d_S: int
    d_E: int
    rho_E: np.ndarray
    h_tot: np.ndarray
    tol: InitVar[ToleranceConfig | None] = None

    def __post_init__(self, tol):
        cfg = tol or DEFAULT_TOLERANCES
        if self.d_S < 1 or self.d_E < 1:
            raise ValidationError(
                f"dilation: dimensions must be positive, got d_S={self.d_S}, d_E={self.d_E}")
        rho = validate_density(self.rho_E, cfg, "rho_E")
        if rho.shape[0] != self.d_E:
            raise DimensionMismatchError(
                f"rho_E: dimension {rho.shape[0]} does not match d_E={self.d_E}")
        h = validate_hermitian(self.h_tot, cfg, "h_tot")
        if h.shape[0] != self.d_S * self.d_E:
            raise DimensionMismatchError(
                f"h_tot: dimension {h.shape[0]} does not match d_S*d_E="
                f"{self.d_S * self.d_E}")
        object.__setattr__(self, "rho_E", rho)
        object.__setattr__(self, "h_tot", h)

    @property
    def d_tot(self) -> int:
        return self.d_S * self.d_E


def trivial_dilation(h_S, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Dilation:
    """The no-environment dilation: d_E = 1 and H_tot = H_S."""
    h = validate_hermitian(h_S, tol, "h_S")
    return Dilation(h.shape[0], 1, np.eye(1, dtype=complex), h, tol)


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Kraus operators of a channel with the completeness relation enforced."""

    d_S: int
    operators: tuple
    tol: InitVar[ToleranceConfig | None] = None

    def __post_init__(self, tol):
        cfg = tol or DEFAULT_TOLERANCES
        ops = tuple(as_square(k, "kraus operator") for k in self.operators)
        if not ops:
            raise ValidationError("kraus set: need at least one operator")
        for k in ops:
            if k.shape[0] != self.d_S:
                raise DimensionMismatchError(
                    f"kraus set: operator dimension {k.shape[0]} != d_S={self.d_S}")
        total = sum(k.conj().T @ k for k in ops)
        defect = np.linalg.norm(total - np.eye(self.d_S))
        if defect > cfg.kraus_tol:
            raise ValidationError(
                f"kraus set: completeness defect {defect:.3e} exceeds {cfg.kraus_tol:.1e}")
        object.__setattr__(self, "operators", ops)

    def apply(self, rho) -> np.ndarray:
        arr = as_square(rho)
        out = np.zeros_like(arr)
        for k in self.operators:
            out += k @ arr @ k.conj().T
        return out


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Channel fingerprint: C = sum_ij |i><j| (x) Lambda(|i><j|).

    Positive semidefinite for a completely positive map; tracing out the
    output (right) factor returns the identity when the map preserves
    trace.
    """

    d_S: int
    matrix: np.ndarray
    tol: InitVar[ToleranceConfig | None] = None

    def __post_init__(self, tol):
        cfg = tol or DEFAULT_TOLERANCES
        arr = validate_hermitian(self.matrix, cfg, "choi matrix")
        if arr.shape[0] != self.d_S * self.d_S:
            raise DimensionMismatchError(
                f"choi matrix: dimension {arr.shape[0]} != d_S^2 = {self.d_S ** 2}")
        eigs = np.linalg.eigvalsh(arr)
        scale = max(1.0, float(abs(eigs).max()))
        if eigs.min() < -cfg.psd_tol * scale:
            raise ValidationError(
                f"choi matrix: negative eigenvalue {eigs.min():.3e} breaks complete positivity")
        tp_witness = partial_trace_env(arr, self.d_S, self.d_S)
        defect = np.linalg.norm(tp_witness - np.eye(self.d_S))
        if defect > cfg.choi_tp_tol:
            raise ValidationError(
                f"choi matrix: trace-preservation defect {defect:.3e} exceeds "
                f"{cfg.choi_tp_tol:.1e}")
        object.__setattr__(self, "matrix", arr)


def total_unitary(d: Dilation, t: float,
                  tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """exp(-i t H_tot) of the dilation."""
    return unitary_evolve(d.h_tot, t, tol)


def _apply_with_unitary(d: Dilation, u: np.ndarray, m: np.ndarray) -> np.ndarray:
    joint = tensor(m, d.rho_E)
    return partial_trace_env(u @ joint @ u.conj().T, d.d_S, d.d_E)


def channel_apply_matrix(d: Dilation, t: float, m,
                         tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Linear extension of the reduced channel to arbitrary system matrices."""
    arr = as_square(m, "input")
    if arr.shape[0] != d.d_S:
        raise DimensionMismatchError(
            f"channel input: dimension {arr.shape[0]} != d_S={d.d_S}")
    return _apply_with_unitary(d, total_unitary(d, t, tol), arr)


def channel_apply(d: Dilation, t: float, rho_S,
                  tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Reduced dynamics Tr_E[U_t (rho_S (x) rho_E) U_t^dag]; output is a valid state."""
    rho = validate_density(rho_S, tol, "rho_S")
    if rho.shape[0] != d.d_S:
        raise DimensionMismatchError(
            f"rho_S: dimension {rho.shape[0]} != d_S={d.d_S}")
    out = _apply_with_unitary(d, total_unitary(d, t, tol), rho)
    out = 0.5 * (out + out.conj().T)
    return validate_density(out, tol, "channel output")


def kraus_from_dilation(d: Dilation, t: float,
                        tol: ToleranceConfig = DEFAULT_TOLERANCES) -> KrausSet:
    """Extract Kraus operators K_(a,k) = sqrt(p_a) <k|_E U_t |a>_E.

    The environment state is decomposed spectrally; eigenvalues below the
    configured cutoff are dropped, and the operator ordering (eigenvalue
    index outer, output index inner) is deterministic.
    """
    probs, vecs = eig_hermitian(d.rho_E, tol, "rho_E")
    u = total_unitary(d, t, tol)
    ur = u.reshape(d.d_S, d.d_E, d.d_S, d.d_E)
    ops = []
    for a in range(probs.size):
        p = probs[a]
        if p < tol.kraus_eigenvalue_cutoff:
            continue
        block = np.einsum("skjl,l->ksj", ur, vecs[:, a])
        root = np.sqrt(p)
        for k in range(d.d_E):
            ops.append(root * block[k])
    return KrausSet(d.d_S, tuple(ops), tol)


def choi_matrix(d: Dilation, t: float,
                tol: ToleranceConfig = DEFAULT_TOLERANCES) -> ChoiMatrix:
    """Assemble the Choi matrix by pushing matrix units through the channel."""
    u = total_unitary(d, t, tol)
    ur = u.reshape(d.d_S, d.d_E, d.d_S, d.d_E)
    blocks = np.einsum("bkil,lm,ekjm->ibje", ur, d.rho_E, ur.conj())
    c = blocks.reshape(d.d_S * d.d_S, d.d_S * d.d_S)
    c = 0.5 * (c + c.conj().T)
    return ChoiMatrix(d.d_S, c, tol)


def channel_distance(a: ChoiMatrix, b: ChoiMatrix) -> float:
    """Hilbert-Schmidt distance of two Choi matrices; zero iff the channels agree."""
    if a.d_S != b.d_S:
        raise DimensionMismatchError(
            f"channel distance: system dimensions {a.d_S} and {b.d_S} differ")
    return hs_norm(a.matrix - b.matrix)


def gauge_transform(d: Dilation, v_E,
                    tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Dilation:
    """Environment basis change: conjugate rho_E and H_tot by 1_S (x) V_E.

    The reduced channel is unchanged; so are the Hilbert-Schmidt norms of
    H_tot and of the environmental surrogate built from it.
    """
    v = validate_unitary(v_E, tol, "v_E")
    if v.shape[0] != d.d_E:
        raise DimensionMismatchError(
            f"gauge transform: v_E dimension {v.shape[0]} != d_E={d.d_E}")
    w = embed_env(v, d.d_S)
    rho = v @ d.rho_E @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    h = w @ d.h_tot @ w.conj().T
    h = 0.5 * (h + h.conj().T)
    return Dilation(d.d_S, d.d_E, rho, h, tol)
