"""Single tolerance surface for the whole artifact."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances used by validators and equality witnesses.

    One frozen instance is threaded through the artifact so that every
    numerical knob lives in one place.  ``DEFAULT_TOLERANCES`` carries the
    shipped defaults; use :meth:`replace` to derive a modified copy.
    """

    hermiticity_tol: float = 1e-12
    psd_tol: float = 1e-10
    trace_tol: float = 1e-10
    unitarity_tol: float = 1e-10
    spectral_tol: float = 1e-10
    traceless_tol: float = 1e-10
    kraus_tol: float = 1e-9
    choi_tp_tol: float = 1e-9
    channel_equality_tol: float = 1e-9
    gauge_tol: float = 1e-9
    surrogate_identity_tol: float = 1e-9
    negative_value_tol: float = 1e-10
    kraus_eigenvalue_cutoff: float = 1e-12
    dim_cap: int = 64

    def replace(self, **overrides) -> "ToleranceConfig":
        return dataclasses.replace(self, **overrides)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls))


DEFAULT_TOLERANCES = ToleranceConfig()
