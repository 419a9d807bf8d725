"""Named property suites behind the ``verify`` subcommand.

Each check exercises one invariant of a subsystem on seeded random
instances and returns a pass/fail record with a one-line detail.  The
suites mirror the library layout; ``run_suites(["all"], seed)`` runs
everything in a deterministic order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import complexity as cxty
from . import dilations as dil
from . import geometry as geom
from . import gksl
from . import intrinsic as intr
from . import operators as ops
from .coherence import (
    coherence as coherence_report,
    coherence_growth_check,
    lower_bound_appendix,
    lower_bound_main,
)
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import ValidationError
from .geometry import HamiltonianPath
from .sampling import (
    random_density,
    random_hermitian,
    random_psd,
    random_traceless_hermitian,
    random_unitary,
)

__all__ = ["CheckResult", "SUITE_NAMES", "run_suites"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _result(suite, name, passed, detail) -> CheckResult:
    return CheckResult(suite, name, bool(passed), detail)


# ---------------------------------------------------------------------------
# operator-core
# ---------------------------------------------------------------------------

def _check_hs_inner_structure(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    positive = True
    for _ in range(50):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        worst = max(worst, abs(ops.hs_inner(a, b) - np.conj(ops.hs_inner(b, a))))
        positive &= ops.hs_inner(a, a).real > 0
    return _result("operator-core", "hs-inner-conjugate-symmetric-positive",
                   worst <= 1e-12 and positive, f"max conj-symmetry defect {worst:.2e}")


def _check_sqrt_squares_back(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(25):
        x = random_psd(rng, 5)
        root = ops.matrix_sqrt(x, tol)
        worst = max(worst, ops.hs_norm(root @ root - x) / max(1.0, ops.hs_norm(x)))
    return _result("operator-core", "sqrt-squares-to-clamped-input",
                   worst <= 1e-9, f"max relative defect {worst:.2e}")


def _check_trace_tensor_identity(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(25):
        m = random_hermitian(rng, 3)
        rho = random_density(rng, 4)
        back = ops.partial_trace_env(ops.tensor(m, rho), 3, 4)
        worst = max(worst, ops.hs_norm(back - m))
    return _result("operator-core", "partial-trace-tensor-identity",
                   worst <= 1e-12, f"max defect {worst:.2e}")


def _check_unitary_norm_invariance(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(25):
        h = random_hermitian(rng, 4)
        u = ops.unitary_evolve(random_hermitian(rng, 4), 0.7, tol)
        worst = max(worst, abs(ops.hs_norm(u @ h @ u.conj().T) - ops.hs_norm(h)))
    return _result("operator-core", "conjugation-preserves-hs-norm",
                   worst <= 1e-10, f"max defect {worst:.2e}")


# ---------------------------------------------------------------------------
# unitary-geometry
# ---------------------------------------------------------------------------

def _check_static_conjugation_invariance(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(25):
        h = random_hermitian(rng, 4)
        w = random_unitary(rng, 4)
        worst = max(worst, abs(geom.hs_complexity_static(w @ h @ w.conj().T, 1.3, 4, tol)
                               - geom.hs_complexity_static(h, 1.3, 4, tol)))
    return _result("unitary-geometry", "static-complexity-conjugation-invariant",
                   worst <= 1e-10, f"max defect {worst:.2e}")


def _check_path_refinement(seed, tol):
    metric = geom.uniform_penalty_metric(2)
    base = random_traceless_hermitian(np.random.default_rng(seed), 2)

    def make(n):
        times = np.linspace(0.0, 1.0, n)
        gens = np.array([np.sin(1.0 + 2.0 * s) * base for s in times])
        return HamiltonianPath(times, gens)

    dense = geom.path_length(metric, make(4097), tol)
    err_c = abs(geom.path_length(metric, make(65), tol) - dense)
    err_f = abs(geom.path_length(metric, make(129), tol) - dense)
    return _result("unitary-geometry", "path-length-quadratic-refinement",
                   err_f <= err_c / 3.0,
                   f"coarse err {err_c:.2e}, fine err {err_f:.2e}")


def _check_euler_arnold_uniform(seed, tol):
    metric = geom.uniform_penalty_metric(2)
    a0 = ops.PAULI_Z
    path = geom.euler_arnold_geodesic(metric, a0, 1.0, 128, tol)
    worst = 0.0
    norm_drift = 0.0
    base_norm = ops.hs_norm(a0)
    for t, u, v in zip(path.times, path.unitaries, path.body_velocities):
        worst = max(worst, ops.hs_norm(u - ops.unitary_evolve(a0, t, tol)))
        norm_drift = max(norm_drift, abs(ops.hs_norm(v) - base_norm))
    return _result("unitary-geometry", "euler-arnold-uniform-one-parameter",
                   worst <= 1e-8 and norm_drift <= 1e-10,
                   f"max unitary defect {worst:.2e}, speed drift {norm_drift:.2e}")


def _check_right_invariance(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        h = random_hermitian(rng, 3)
        t = 0.9
        w = random_unitary(rng, 3)
        u = ops.unitary_evolve(h, t, tol)
        # generator of (U W) W^-1 recovered through the eigenphases of U
        eigvals, vecs = np.linalg.eig(u @ w @ w.conj().T)
        h_rec = vecs @ np.diag(1j * np.log(eigvals) / t) @ np.linalg.inv(vecs)
        h_rec = 0.5 * (h_rec + h_rec.conj().T)
        worst = max(worst, abs(geom.hs_complexity_static(h_rec, t, 3, tol)
                               - geom.hs_complexity_static(h, t, 3, tol)))
    return _result("unitary-geometry", "right-invariant-synthesized-distance",
                   worst <= 1e-8, f"max distance defect {worst:.2e}")


# ---------------------------------------------------------------------------
# dilation-engine
# ---------------------------------------------------------------------------

def _random_dilation(rng, d_S, d_E, scale=1.0):
    return dil.Dilation(d_S, d_E, random_density(rng, d_E),
                        random_hermitian(rng, d_S * d_E, scale))


def _check_channel_cptp(seed, tol):
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(10):
        d = _random_dilation(rng, 2, 3)
        rho = random_density(rng, 2)
        try:
            dil.channel_apply(d, 0.8, rho, tol)
        except ValidationError:
            ok = False
    return _result("dilation-engine", "channel-output-valid-state", ok,
                   "outputs pass density validation")


def _check_kraus_consistency(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for d_S, d_E in ((2, 2), (2, 3), (3, 2)):
        d = _random_dilation(rng, d_S, d_E)
        kraus = dil.kraus_from_dilation(d, 0.6, tol)
        basis = ops.hermitian_basis(d_S)
        for b in basis:
            direct = dil.channel_apply_matrix(d, 0.6, b, tol)
            worst = max(worst, ops.hs_norm(kraus.apply(b) - direct))
    return _result("dilation-engine", "kraus-direct-two-path-consistency",
                   worst <= 1e-9, f"max two-path defect {worst:.2e}")


def _check_gauge_orbit(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        d = _random_dilation(rng, 2, 2)
        h_S = random_hermitian(rng, 2)
        v = random_unitary(rng, 2)
        g = dil.gauge_transform(d, v, tol)
        worst = max(worst, dil.channel_distance(dil.choi_matrix(d, 0.9, tol),
                                                dil.choi_matrix(g, 0.9, tol)))
        worst = max(worst, abs(ops.hs_norm(g.h_tot) - ops.hs_norm(d.h_tot)))
        worst = max(worst, abs(
            ops.hs_norm(cxty.env_surrogate(g.h_tot, h_S, 2, tol))
            - ops.hs_norm(cxty.env_surrogate(d.h_tot, h_S, 2, tol))))
    return _result("dilation-engine", "gauge-orbit-invariants",
                   worst <= 1e-9, f"max orbit defect {worst:.2e}")


# ---------------------------------------------------------------------------
# channel-complexity
# ---------------------------------------------------------------------------

def _check_value_gauge_invariance(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        d = _random_dilation(rng, 2, 2)
        h_S = random_hermitian(rng, 2)
        base = cxty.channel_complexity(d, h_S, 1.1, tol).value
        for _ in range(5):
            g = dil.gauge_transform(d, random_unitary(rng, 2), tol)
            worst = max(worst, abs(cxty.channel_complexity(g, h_S, 1.1, tol).value - base))
    return _result("channel-complexity", "value-gauge-invariant",
                   worst <= 1e-9, f"max orbit deviation {worst:.2e}")


def _check_time_homogeneity(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        d = _random_dilation(rng, 2, 2)
        h_S = random_hermitian(rng, 2)
        v1 = cxty.channel_complexity(d, h_S, 0.7, tol).value
        for c in (0.5, 2.0, 10.0):
            vc = cxty.channel_complexity(d, h_S, c * 0.7, tol).value
            worst = max(worst, abs(vc - c * v1) / max(1e-30, abs(c * v1)))
    return _result("channel-complexity", "positive-time-homogeneity",
                   worst <= 1e-12, f"max relative defect {worst:.2e}")


def _check_subtractive_identity(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        h_tot = random_hermitian(rng, 4)
        h_S = random_hermitian(rng, 2)
        if not cxty.surrogate_norm_check(h_tot, h_S, tol):
            worst = np.inf
    specs = [gksl.BenchmarkSpec("dephasing", 1.0, (0.5,)),
             gksl.BenchmarkSpec("amplitude_damping", 1.0, (0.4,)),
             gksl.BenchmarkSpec("depolarizing", 1.0, (0.3,))]
    nonneg = True
    for spec in specs:
        g = gksl.benchmark_channel(spec, tol)
        d = gksl.standard_dilation(g, gksl.default_bath_spec(g.m, tol=tol), tol)
        report = cxty.channel_complexity(d, g.h_S, 1.0, tol)
        nonneg &= report.value >= -tol.negative_value_tol and not report.flagged
    return _result("channel-complexity", "surrogate-trace-identity-and-nonnegativity",
                   worst == 0.0 and nonneg, "identity holds, benchmark values nonnegative")


def _check_surrogate_covariance(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(10):
        h_tot = random_hermitian(rng, 4)
        h_S = random_hermitian(rng, 2)
        v = random_unitary(rng, 2)
        w = ops.embed_env(v, 2)
        lhs = cxty.env_surrogate(w @ h_tot @ w.conj().T, h_S, 2, tol)
        rhs = w @ cxty.env_surrogate(h_tot, h_S, 2, tol) @ w.conj().T
        worst = max(worst, ops.hs_norm(lhs - rhs))
    return _result("channel-complexity", "surrogate-gauge-covariance",
                   worst <= 1e-10, f"max covariance defect {worst:.2e}")


def _check_postulates(seed, tol):
    rng = np.random.default_rng(seed)
    h_S = random_hermitian(rng, 2)
    grid = np.linspace(0.2, 1.4, 4)
    trivial = dil.trivial_dilation(h_S, tol)
    rep_triv = cxty.postulate_check(trivial, h_S, grid, seed=seed, tol=tol)
    h_E = random_hermitian(rng, 2)
    env_only = dil.Dilation(2, 2, random_density(rng, 2), ops.embed_env(h_E, 2))
    rep_env = cxty.postulate_check(env_only, np.zeros((2, 2)), grid, seed=seed, tol=tol)
    generic = _random_dilation(rng, 2, 2)
    rep_gen = cxty.postulate_check(generic, h_S, grid, seed=seed, tol=tol)
    ok = (rep_triv.closed_system.applicable and rep_triv.all_passed()
          and rep_env.environment_only.applicable and rep_env.all_passed()
          and rep_gen.all_passed())
    return _result("channel-complexity", "postulates-p1-p4", ok,
                   f"P1 res {rep_triv.closed_system.residual:.2e}, "
                   f"P2 res {rep_env.environment_only.residual:.2e}, "
                   f"P3 res {rep_gen.gauge_stability.residual:.2e}")


# ---------------------------------------------------------------------------
# gksl-lab
# ---------------------------------------------------------------------------

def _check_semigroup(seed, tol):
    rng = np.random.default_rng(seed)
    g = gksl.benchmark_channel(gksl.BenchmarkSpec("depolarizing", 0.8, (0.3,)), tol)
    worst = 0.0
    for _ in range(10):
        rho = random_density(rng, 2)
        comp = gksl.semigroup_evolve(g, gksl.semigroup_evolve(g, rho, 0.4, tol), 0.7, tol)
        direct = gksl.semigroup_evolve(g, rho, 1.1, tol)
        worst = max(worst, ops.hs_norm(comp - direct))
    return _result("gksl-lab", "semigroup-law-and-cptp",
                   worst <= 1e-8, f"max composition defect {worst:.2e}")


def _check_bound_domination(seed, tol):
    specs = [gksl.BenchmarkSpec("dephasing", 1.0, (0.5,)),
             gksl.BenchmarkSpec("amplitude_damping", 1.0, (0.4,)),
             gksl.BenchmarkSpec("depolarizing", 1.0, (0.3,)),
             gksl.BenchmarkSpec("pauli", 1.0, (0.2, 0.1, 0.4))]
    ok = True
    for spec in specs:
        g = gksl.benchmark_channel(spec, tol)
        bath = gksl.default_bath_spec(g.m, tol=tol)
        d = gksl.standard_dilation(g, bath, tol)
        for t in np.linspace(0.25, 2.0, 8):
            value = cxty.channel_complexity(d, g.h_S, t, tol).value
            full, reduced = gksl.growth_bound(g, bath, t, tol)
            ok &= value <= reduced + 1e-9 and reduced <= full + 1e-9
    return _result("gksl-lab", "growth-bound-domination", ok,
                   "complexity <= reduced <= full on all benchmarks")


def _check_gamma_additivity(seed, tol):
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(10):
        l1 = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
              for _ in range(2)]
        l2 = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))]
        h = np.zeros((2, 2))
        g1 = gksl.GkslGenerator(h, tuple(l1), tol)
        g2 = gksl.GkslGenerator(h, tuple(l2), tol)
        g12 = gksl.GkslGenerator(h, tuple(l1) + tuple(l2), tol)
        ok &= gksl.dissipator_scale(g12) == gksl.dissipator_scale(g1) + gksl.dissipator_scale(g2)
    return _result("gksl-lab", "dissipator-scale-additive", ok,
                   "exact additivity over disjoint unions")


def _check_depolarizing_fixed_point(seed, tol):
    rng = np.random.default_rng(seed)
    g = gksl.benchmark_channel(gksl.BenchmarkSpec("depolarizing", 1.0, (0.6,)), tol)
    ok = True
    eye_half = np.eye(2) / 2
    for _ in range(5):
        rho = random_density(rng, 2)
        dists = [ops.hs_norm(gksl.semigroup_evolve(g, rho, t, tol) - eye_half)
                 for t in np.linspace(0.0, 3.0, 7)]
        ok &= all(b <= a + 1e-12 for a, b in zip(dists, dists[1:]))
    return _result("gksl-lab", "depolarizing-contracts-to-maximally-mixed", ok,
                   "monotone approach to I/2 on the grid")


# ---------------------------------------------------------------------------
# coherence-bounds
# ---------------------------------------------------------------------------

def _check_projector_properties(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(25):
        a = random_hermitian(rng, 3)
        b = random_hermitian(rng, 3)
        da = np.diag(np.diag(a))
        worst = max(worst, ops.hs_norm(np.diag(np.diag(da)) - da))
        worst = max(worst, abs(ops.hs_inner(a, np.diag(np.diag(b)))
                               - ops.hs_inner(da, b)))
        contract = ops.hs_norm(da) <= ops.hs_norm(a) + 1e-12
        if not contract:
            worst = np.inf
    return _result("coherence-bounds", "dephasing-orthogonal-projector",
                   worst <= 1e-12, f"max projector defect {worst:.2e}")


def _check_offdiag_identity(seed, tol):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        rho = random_density(rng, 4)
        rep = coherence_report(rho, tol)
        worst = max(worst, abs(rep.c_value - rep.offdiag_norm_sq))
    return _result("coherence-bounds", "coherence-equals-offdiagonal-norm",
                   worst <= 1e-10, f"max identity defect {worst:.2e}")


def _check_growth_inequality(seed, tol):
    rng = np.random.default_rng(seed)
    ok = True
    min_margin = np.inf
    for _ in range(5):
        times = np.linspace(0.0, 1.0, 5)
        gens = np.array([random_hermitian(rng, 2) for _ in times])
        path = HamiltonianPath(times, gens)
        rho0 = random_density(rng, 2)
        report = coherence_growth_check(path, rho0, tol=tol)
        ok &= report.all_passed() and report.commutator_ratio_max <= 1.0 + 1e-12
        min_margin = min(min_margin, float(report.margins[1:].min()))
    return _result("coherence-bounds", "integrated-growth-inequality", ok,
                   f"min margin {min_margin:.3e}")


def _check_appendix_bound(seed, tol):
    rng = np.random.default_rng(seed)
    violations = 0
    main_violations = 0
    for _ in range(30):
        h = random_hermitian(rng, 2)
        rho0 = random_density(rng, 2)
        t = float(rng.uniform(0.1, 2.0))
        u = ops.unitary_evolve(h, t, tol)
        rho_t = u @ rho0 @ u.conj().T
        rho_t = 0.5 * (rho_t + rho_t.conj().T)
        bound = lower_bound_appendix(rho0, rho_t, 2, tol)
        comp = geom.hs_complexity_static(h, t, 2, tol)
        if bound > comp + 1e-12:
            violations += 1
        if lower_bound_main(h, rho0, t, 2, tol) > comp + 1e-12:
            main_violations += 1
    return _result("coherence-bounds", "appendix-bound-domination",
                   violations == 0,
                   f"appendix violations {violations}, sketch-bound violations "
                   f"{main_violations} (recorded, not asserted)")


# ---------------------------------------------------------------------------
# intrinsic-optimizer
# ---------------------------------------------------------------------------

def _check_optimizer_dominance(seed, tol):
    h_S = 0.5 * ops.PAULI_Z
    target = dil.trivial_dilation(h_S, tol)
    c = intr.AdmissibleConstraints(1, 0.5, np.linspace(0.0, 1.0, 3),
                                   channel_tol=1e-9)
    opts = intr.OptimizerOptions(starts=3, seed=seed, max_iters=40)
    res = intr.intrinsic_complexity(target, c, h_S, 1.0, opts,
                                    seed_dilations=(target,), tol=tol)
    seed_value = cxty.channel_complexity(target, h_S, 1.0, tol).value
    ideal = geom.hs_complexity_static(h_S, 1.0, 2, tol)
    ok = (res.feasible and res.best_value <= seed_value + 1e-9
          and abs(res.best_value - ideal) <= 1e-6)
    rerun = intr.intrinsic_complexity(target, c, h_S, 1.0, opts,
                                      seed_dilations=(target,), tol=tol)
    ok &= rerun.best_value == res.best_value
    return _result("intrinsic-optimizer", "seed-dominance-and-reproducibility", ok,
                   f"best {res.best_value:.9f} vs ideal {ideal:.9f}")


_SUITES = {
    "operator-core": (
        _check_hs_inner_structure,
        _check_sqrt_squares_back,
        _check_trace_tensor_identity,
        _check_unitary_norm_invariance,
    ),
    "unitary-geometry": (
        _check_static_conjugation_invariance,
        _check_path_refinement,
        _check_euler_arnold_uniform,
        _check_right_invariance,
    ),
    "dilation-engine": (
        _check_channel_cptp,
        _check_kraus_consistency,
        _check_gauge_orbit,
    ),
    "channel-complexity": (
        _check_value_gauge_invariance,
        _check_time_homogeneity,
        _check_subtractive_identity,
        _check_surrogate_covariance,
        _check_postulates,
    ),
    "gksl-lab": (
        _check_semigroup,
        _check_bound_domination,
        _check_gamma_additivity,
        _check_depolarizing_fixed_point,
    ),
    "coherence-bounds": (
        _check_projector_properties,
        _check_offdiag_identity,
        _check_growth_inequality,
        _check_appendix_bound,
    ),
    "intrinsic-optimizer": (
        _check_optimizer_dominance,
    ),
}

SUITE_NAMES = tuple(_SUITES)


def run_suites(names, seed: int = 0,
               tol: ToleranceConfig = DEFAULT_TOLERANCES) -> list[CheckResult]:
    """Run the requested suites ('all' or a list of names) deterministically."""
    if names == "all" or names == ["all"]:
        selected = list(SUITE_NAMES)
    else:
        selected = list(names)
        unknown = [n for n in selected if n not in _SUITES]
        if unknown:
            raise ValidationError(
                f"unknown suite {unknown[0]!r}; available: {', '.join(SUITE_NAMES)}")
    results = []
    for suite in selected:
        for offset, check in enumerate(_SUITES[suite]):
            results.append(check(seed + offset, tol))
    return results
