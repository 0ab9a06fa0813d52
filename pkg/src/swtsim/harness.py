"""End-to-end pipeline runner, epsilon-sweep benchmark, and slope fits.

The pipeline is sample -> transform -> smooth -> seed -> advance ->
reconstruct -> observables -> compare-vs-reference, each stage
wall-clocked separately.  The sweep repeats it over a family of epsilons,
times a Crank-Nicolson reference meshed by its accuracy budgets, and fits
log-log slopes of total time and particle count against 1/epsilon.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import gridio
from .config import RunConfig, terms_from_triples
from .dynamics import advance, default_step, reconstruct, seed_particles
from .errors import SolverError, UsageError
from .observables import (DensityProfile, ErrorReport, compare,
                          phase_space_norm_density, smoothed_wavefunction_density)
from .phasespace import SmoothingKernelSpec, smooth, wigner_transform
from .potentials import Linear, Zero
from .reference import (cn_mesh, crank_nicolson_solve,
                        exact_free_gaussian_solution, splitstep_solve,
                        transport_envelope)
from .signals import (ProblemSpec, WavefunctionGrid, builtin_ids,
                      builtin_problem, sample_problem, suggested_n_x)

__all__ = [
    "RunParams",
    "RunReport",
    "SlopeFit",
    "BenchTable",
    "pipeline_params",
    "run_pipeline",
    "bench_reference_mesh",
    "sweep",
    "fit_slope",
    "warm_up",
]

DEFAULT_ETA = 1e-3
_STAGES = ("sample", "wt", "smooth", "seed", "advance", "reconstruct", "observables")


@dataclass(frozen=True)
class RunParams:
    """Pipeline knobs; None means resolve from policy at run time."""

    n_x: int | None = None
    n_k: int | None = None
    k_max: float | None = None
    x_stride: int | None = None
    sigma_x: float = 1.0
    sigma_k: float = 1.0
    eta: float = DEFAULT_ETA
    h: float | None = None
    output_times: tuple = ()
    reference: str = "auto"  # auto | exact | splitstep | none
    reference_n_x: int | None = None
    reference_n_t: int | None = None


@dataclass
class RunReport:
    problem: str
    epsilon: float
    timings: dict = field(default_factory=dict)
    reference_timings: dict = field(default_factory=dict)
    particles: int = 0
    n_x: int = 0
    n_k: int = 0
    x_stride: int = 1
    coverage_gap: float = 0.0
    error: ErrorReport | None = None
    failed_stage: str | None = None
    snapshots: list = field(default_factory=list)

    @property
    def t_total_swt(self) -> float:
        return sum(self.timings.get(name, 0.0)
                   for name in ("sample", "wt", "smooth", "seed", "advance", "reconstruct"))

    @property
    def l1_rel(self) -> float:
        return self.error.l1_rel if self.error is not None else float("nan")

    def to_row(self) -> dict:
        t_ref = self.reference_timings.get(
            "crank_nicolson", sum(self.reference_timings.values()))
        return {
            "epsilon": self.epsilon,
            "inv_epsilon": 1.0 / self.epsilon,
            "t_sample": self.timings.get("sample", 0.0),
            "t_wt": self.timings.get("wt", 0.0),
            "t_smooth": self.timings.get("smooth", 0.0),
            "t_seed": self.timings.get("seed", 0.0),
            "t_advance": self.timings.get("advance", 0.0),
            "t_reconstruct": self.timings.get("reconstruct", 0.0),
            "t_total_swt": self.t_total_swt,
            "t_reference": t_ref,
            "particles": self.particles,
            "n_x": self.n_x,
            "n_k": self.n_k,
            "l1_rel": self.l1_rel,
            "coverage_gap": self.coverage_gap,
        }


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    ci_half_width: float


@dataclass
class BenchTable:
    rows: list
    slope_t_swt: SlopeFit
    slope_t_reference: SlopeFit
    slope_d: SlopeFit


def _pow2floor(value: float) -> int:
    if value < 2.0:
        return 1
    return 1 << int(math.floor(math.log2(value) + 1e-12))


_warmed = False


def warm_up():
    """Compile every numba kernel and exercise the verified closed form so
    later stage timings measure work, not JIT or one-time checks."""
    global _warmed
    if _warmed:
        return
    from .signals import GaussianTerm

    term = GaussianTerm(p2=-4.0)
    spec = ProblemSpec("gaussian_sum", Zero(), 0.5, 0.01, x_min=-4.0, x_max=4.0,
                       terms=(term,), name="warmup")
    grid = sample_problem(spec, 128)
    w0 = wigner_transform(grid, 64, k_max=2.0)
    s0 = smooth(w0, SmoothingKernelSpec(1.0, 1.0))
    ens = seed_particles(s0, 1e-3)
    ens = advance(ens, spec.potential, 0.01, 0.005)
    reconstruct(ens, s0)
    splitstep_solve(spec, 128, 4)
    crank_nicolson_solve(spec, 128, 4)
    exact_free_gaussian_solution(spec.terms, spec.epsilon, 0.01, 128, -4.0, 4.0)
    smoothed_wavefunction_density(grid, 1.0)
    _warmed = True


def pipeline_params(spec: ProblemSpec, params: RunParams) -> RunParams:
    """Resolve policy defaults: n_x oversamples k_resolve ten-fold, n_k is
    n_x/4 correlation lags, x_stride thins evaluation rows to about eight
    per smoothing std, and k_max is the recipe's declared window."""
    n_x = params.n_x if params.n_x is not None else suggested_n_x(spec)
    n_k = params.n_k if params.n_k is not None else max(64, n_x // 4)
    k_max = params.k_max if params.k_max is not None else spec.k_max_default
    stride = params.x_stride
    if stride is None:
        stride = 1
        if params.sigma_x > 0:
            dx = (spec.x_max - spec.x_min) / n_x
            std_x = params.sigma_x * math.sqrt(spec.epsilon / (4.0 * math.pi))
            stride = min(_pow2floor(std_x / (8.0 * dx)), max(1, n_x // 64))
    return replace(params, n_x=n_x, n_k=n_k, k_max=k_max, x_stride=stride)


def _resolve_reference(spec: ProblemSpec, params: RunParams) -> str:
    if params.reference != "auto":
        return params.reference
    if spec.ic_type == "gaussian_sum" and isinstance(spec.potential, Zero):
        return "exact"
    return "splitstep"


def _splitstep_policy(spec: ProblemSpec, n_x_pipeline: int):
    """Reference mesh and (possibly widened) domain for the spectral solver.

    The domain doubles until the initial data is dead at the seam; widening
    by half the length on each side keeps dx, so the pipeline axis stays an
    exact subset of the reference axis.
    """
    length = spec.x_max - spec.x_min
    x_lo, x_hi, k_bound, v_max = transport_envelope(spec, spec.t_max)
    for doublings in range(3):
        factor = 2 ** doublings
        pad = (factor - 1) * length / 2.0
        dom_min, dom_max = spec.x_min - pad, spec.x_max + pad
        n_x = factor * max(
            n_x_pipeline,
            1 << math.ceil(math.log2(max(
                5.0 * k_bound * length / spec.epsilon, 64.0))),
        )
        probe = spec.evaluate(np.array([dom_min, dom_max]))
        peak = float(np.max(np.abs(spec.evaluate(
            np.linspace(dom_min, dom_max, 2048)))))
        edge = float(np.max(np.abs(probe)))
        if isinstance(spec.potential, Zero) or edge <= 1e-10 * peak:
            break
    else:
        raise SolverError(
            "initial data will not decay at any affordable domain size")
    if isinstance(spec.potential, Zero):
        n_t = 16
    elif isinstance(spec.potential, Linear):
        n_t = 256
    else:
        omega = (0.5 * (2.0 * np.pi * k_bound) ** 2 + v_max) / spec.epsilon
        n_t = min(65536, max(256, math.ceil(4.0 * spec.t_max * omega)))
    return dom_min, dom_max, n_x, n_t


def _restrict(grid: WavefunctionGrid, x_min: float, x_max: float) -> WavefunctionGrid:
    """Cut a wavefunction down to a window whose endpoints sit on its axis."""
    if abs(grid.x_min - x_min) < 1e-12 and abs(grid.x_max - x_max) < 1e-12:
        return grid
    i0 = int(round((x_min - grid.x_min) / grid.dx))
    count = int(round((x_max - x_min) / grid.dx))
    if abs(grid.x_min + i0 * grid.dx - x_min) > 1e-9 * max(1.0, abs(x_min)):
        raise UsageError("reference window is not aligned with the solver grid")
    return WavefunctionGrid(x_min, x_max, grid.epsilon,
                            grid.values[i0:i0 + count], t=grid.t)


def run_pipeline(spec: ProblemSpec, params: RunParams | None = None,
                 out_dir: str | None = None) -> RunReport:
    """Full particle pipeline with per-stage wall clocks.

    On a stage failure the original exception propagates with the partial
    report attached as exc.run_report (failed_stage names the stage).
    """
    params = pipeline_params(spec, params or RunParams())
    warm_up()
    report = RunReport(problem=spec.name, epsilon=spec.epsilon,
                       n_x=params.n_x, n_k=params.n_k, x_stride=params.x_stride)
    artifacts = {}

    def stage(name, fn):
        t0 = time.perf_counter()
        try:
            result = fn()
        except Exception as exc:
            report.timings[name] = report.timings.get(name, 0.0) + time.perf_counter() - t0
            report.failed_stage = name
            exc.run_report = report
            raise
        report.timings[name] = report.timings.get(name, 0.0) + time.perf_counter() - t0
        return result

    targets = []
    for tv in params.output_times:
        tv = float(tv)
        if tv < 0.0 or tv > spec.t_max + 1e-12:
            raise UsageError(f"output time {tv} outside [0, {spec.t_max}]")
        targets.append(min(tv, spec.t_max))
    targets = sorted(set(targets))
    if not targets or abs(targets[-1] - spec.t_max) > 1e-12:
        targets.append(spec.t_max)

    u0 = stage("sample", lambda: sample_problem(spec, params.n_x))
    w0 = stage("wt", lambda: wigner_transform(
        u0, params.n_k, k_max=params.k_max, x_stride=params.x_stride))
    if params.sigma_x > 0 and params.sigma_k > 0:
        kernel = SmoothingKernelSpec(params.sigma_x, params.sigma_k)
        s0 = stage("smooth", lambda: smooth(w0, kernel))
    else:
        report.timings["smooth"] = 0.0
        s0 = w0
    ens0 = stage("seed", lambda: seed_particles(s0, params.eta))
    report.particles = ens0.size

    k_bound = max(abs(s0.k_min), abs(s0.k_max))
    h = params.h if params.h is not None else default_step(
        spec.potential, k_bound, spec.t_max, spec.x_min, spec.x_max)

    ens_t = ens0
    w_t = s0
    profile = None
    for tv in targets:
        ens_now = ens_t
        ens_t = stage("advance", lambda: advance(ens_now, spec.potential, tv, h))

        def _reconstruct():
            grid, gap = reconstruct(ens_t, s0)
            report.coverage_gap = gap
            return grid

        w_t = stage("reconstruct", _reconstruct)
        profile = stage("observables", lambda: phase_space_norm_density(w_t))
        report.snapshots.append((tv, profile))
    artifacts.update(u0=u0, w0=w0, s0=s0, ens_t=ens_t, w_t=w_t, profile=profile)

    method = _resolve_reference(spec, params)
    if method != "none":
        ref_profile = _reference_profile(spec, params, method, report)
        report.error = compare(profile, ref_profile)
        artifacts["ref_profile"] = ref_profile

    if out_dir is not None:
        _persist(out_dir, report, artifacts)
    return report


def _reference_profile(spec: ProblemSpec, params: RunParams, method: str,
                       report: RunReport) -> DensityProfile:
    """Reference density at t_max on the pipeline's (strided) x axis."""
    if method == "exact":
        if spec.ic_type != "gaussian_sum" or not isinstance(spec.potential, Zero):
            raise UsageError("exact reference needs a free gaussian_sum problem")
        n_x_ref = params.reference_n_x or params.n_x
        t0 = time.perf_counter()
        u_t = exact_free_gaussian_solution(spec.terms, spec.epsilon, spec.t_max,
                                           n_x_ref, spec.x_min, spec.x_max)
        report.reference_timings["exact_free_gaussian"] = time.perf_counter() - t0
    elif method == "splitstep":
        dom_min, dom_max, n_x_ref, n_t_ref = _splitstep_policy(spec, params.n_x)
        if params.reference_n_x is not None:
            n_x_ref = params.reference_n_x
        if params.reference_n_t is not None:
            n_t_ref = params.reference_n_t
        run = splitstep_solve(spec, n_x_ref, n_t_ref,
                              x_min=dom_min, x_max=dom_max)
        report.reference_timings["splitstep"] = run.wall_time
        u_t = _restrict(run.grid_at(spec.t_max), spec.x_min, spec.x_max)
    else:
        raise UsageError(f"unknown reference method {method!r}")

    if params.sigma_x > 0:
        dens = smoothed_wavefunction_density(u_t, params.sigma_x)
    else:
        dens = DensityProfile(u_t.x_min, u_t.x_max, u_t.density(),
                              "norm_density", u_t.epsilon, t=u_t.t)
    ratio = dens.n_x // (params.n_x // params.x_stride)
    if ratio * (params.n_x // params.x_stride) != dens.n_x:
        raise UsageError("reference grid does not contain the pipeline axis")
    if ratio > 1:
        dens = DensityProfile(dens.x_min, dens.x_max, dens.values[::ratio],
                              dens.kind, dens.epsilon, dens.sigma_x, dens.t)
    return dens


def _persist(out_dir: str, report: RunReport, artifacts: dict):
    os.makedirs(out_dir, exist_ok=True)
    gridio.write_swtc(os.path.join(out_dir, "initial.swtc"), artifacts["u0"])
    gridio.write_swtg(os.path.join(out_dir, "wt0.swtg"), artifacts["w0"])
    if artifacts["s0"] is not artifacts["w0"]:
        gridio.write_swtg(os.path.join(out_dir, "swt0.swtg"), artifacts["s0"])
    gridio.write_swtg(os.path.join(out_dir, "transported.swtg"), artifacts["w_t"])
    gridio.write_ensemble_csv(os.path.join(out_dir, "ensemble_final.csv"),
                              artifacts["ens_t"])
    gridio.write_density_csv(os.path.join(out_dir, "density_pipeline.csv"),
                             artifacts["profile"])
    if len(report.snapshots) > 1:
        for i, (_, prof) in enumerate(report.snapshots):
            gridio.write_density_csv(
                os.path.join(out_dir, f"density_pipeline_{i:02d}.csv"), prof)
    if "ref_profile" in artifacts:
        gridio.write_density_csv(os.path.join(out_dir, "density_reference.csv"),
                                 artifacts["ref_profile"])
    payload = {
        "problem": report.problem,
        "epsilon": report.epsilon,
        "timings": report.timings,
        "reference_timings": report.reference_timings,
        "particles": report.particles,
        "n_x": report.n_x,
        "n_k": report.n_k,
        "x_stride": report.x_stride,
        "coverage_gap": report.coverage_gap,
        "t_total_swt": report.t_total_swt,
        "l1_rel": report.l1_rel,
        "failed_stage": report.failed_stage,
    }
    with open(os.path.join(out_dir, "report.json"), "w") as fh:
        json.dump(payload, fh, indent=2)


def bench_reference_mesh(spec: ProblemSpec) -> tuple[int, int]:
    """Crank-Nicolson mesh for the sweep: accuracy-budget meshing at the
    energy-carrying wavenumber (k_eff plus drift), so its cost honestly
    reflects what the finite-difference route needs as epsilon shrinks."""
    t = spec.t_max
    x_lo, x_hi, _, v_max = transport_envelope(spec, t)
    force = spec.potential.max_abs_gradient(x_lo, x_hi)
    k_acc = spec.k_eff + t * force / (2.0 * np.pi)
    return cn_mesh(spec.epsilon, t, spec.x_max - spec.x_min, k_acc, v_max)


def _family_member(config: RunConfig, epsilon: float) -> ProblemSpec:
    spec = config.spec
    if spec.name in builtin_ids():
        return builtin_problem(spec.name, epsilon, t_max=spec.t_max)
    if spec.ic_type == "wkb":
        return spec.with_epsilon(epsilon)
    if config.raw_terms is not None:
        return replace(spec, epsilon=epsilon,
                       terms=terms_from_triples(config.raw_terms, epsilon))
    raise UsageError(
        "sweep needs an epsilon-parameterized family: a builtin id, a wkb "
        "recipe, or gaussian_sum terms given as alpha/beta/gamma triples")


def sweep(config: RunConfig, epsilons, out_csv: str | None = None,
          eta: float = DEFAULT_ETA) -> BenchTable:
    """One pipeline run plus one timed Crank-Nicolson run per epsilon.

    Timed stages are forced single-threaded.  A failed run aborts the
    table; rows finished so far are still flushed to out_csv.
    """
    epsilons = [float(e) for e in epsilons]
    if len(set(epsilons)) < 4:
        raise UsageError(f"sweep needs at least 4 distinct epsilons, got {epsilons}")
    if any(e <= 0 for e in epsilons):
        raise UsageError("epsilons must be positive")
    from threadpoolctl import threadpool_limits

    warm_up()
    rows = []
    try:
        with threadpool_limits(limits=1):
            for eps in epsilons:
                spec = _family_member(config, eps)
                # n_x/n_k come from the per-epsilon resolution policy; a
                # pinned grid size cannot serve a whole sweep.
                params = RunParams(k_max=config.k_max, sigma_x=config.sigma_x,
                                   sigma_k=config.sigma_k, eta=eta)
                report = run_pipeline(spec, params)
                n_x_cn, n_t_cn = bench_reference_mesh(spec)
                cn = crank_nicolson_solve(spec, n_x_cn, n_t_cn)
                report.reference_timings["crank_nicolson"] = cn.wall_time
                rows.append(report.to_row())
    except Exception:
        if out_csv is not None and rows:
            gridio.write_bench_csv(out_csv, rows)
        raise

    if out_csv is not None:
        gridio.write_bench_csv(out_csv, rows)
    pairs_t = [(r["epsilon"], r["t_total_swt"]) for r in rows]
    pairs_ref = [(r["epsilon"], r["t_reference"]) for r in rows]
    pairs_d = [(r["epsilon"], float(r["particles"])) for r in rows]
    return BenchTable(
        rows=rows,
        slope_t_swt=fit_slope(pairs_t),
        slope_t_reference=fit_slope(pairs_ref),
        slope_d=fit_slope(pairs_d),
    )


def fit_slope(pairs) -> SlopeFit:
    """OLS of log(value) against log(1/epsilon) with a 95% CI half-width."""
    pairs = list(pairs)
    if len(pairs) < 3:
        raise UsageError(f"slope fit needs at least 3 pairs, got {len(pairs)}")
    eps = np.array([p[0] for p in pairs], dtype=float)
    values = np.array([p[1] for p in pairs], dtype=float)
    if np.any(eps <= 0):
        raise UsageError("epsilons must be positive")
    if np.any(values <= 0):
        raise UsageError("slope fit needs positive values")
    x = np.log(1.0 / eps)
    y = np.log(values)
    n = x.shape[0]
    x_mean = x.mean()
    y_mean = y.mean()
    sxx = float(np.sum((x - x_mean) ** 2))
    if sxx == 0.0:
        raise UsageError("slope fit needs at least two distinct epsilons")
    slope = float(np.sum((x - x_mean) * (y - y_mean))) / sxx
    intercept = y_mean - slope * x_mean
    resid = y - (intercept + slope * x)
    dof = n - 2
    s2 = float(np.sum(resid ** 2)) / dof
    from scipy.stats import t as student_t

    ci = float(student_t.ppf(0.975, dof)) * math.sqrt(s2 / sxx)
    return SlopeFit(slope=slope, intercept=intercept, ci_half_width=ci)
