"""Seeded random operator draws used by verifiers and tests.

Every function takes an explicit ``numpy.random.Generator`` so callers
control reproducibility; nothing here touches global RNG state.
"""
from __future__ import annotations

import numpy as np


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    a = random_complex(rng, (dim, dim))
    return scale * 0.5 * (a + a.conj().T)


def random_traceless_hermitian(rng: np.random.Generator, dim: int,
                               scale: float = 1.0) -> np.ndarray:
    h = random_hermitian(rng, dim, scale)
    return h - (np.trace(h) / dim) * np.eye(dim, dtype=complex)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary via QR with the standard phase fix."""
    q, r = np.linalg.qr(random_complex(rng, (dim, dim)))
    phases = np.diagonal(r).copy()
    phases = phases / np.abs(phases)
    return q * phases


def random_psd(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    g = random_complex(rng, (dim, dim))
    return scale * (g @ g.conj().T)


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    p = random_psd(rng, dim)
    return p / np.trace(p).real


def random_pure_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = random_complex(rng, dim)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())
