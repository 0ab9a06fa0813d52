"""Command-line front end.

Subcommands: transform, propagate, reference, compare, bench, problems.
Exit codes: 0 success, 1 usage problem, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
import time

from .config import load_config
from .errors import NumericError, UsageError
from .gridio import read_density_csv, write_density_csv, write_swtg, write_wavefunction_csv
from .harness import (DEFAULT_ETA, RunParams, _restrict, _splitstep_policy,
                      bench_reference_mesh, run_pipeline, sweep)
from .observables import compare, smoothed_wavefunction_density
from .phasespace import SmoothingKernelSpec, smooth, wigner_transform
from .reference import crank_nicolson_solve, exact_free_gaussian_solution, splitstep_solve
from .signals import builtin_ids, builtin_problem, sample_problem, suggested_n_x

__all__ = ["cli", "main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _fraction(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        num, slash, den = text.partition("/")
        if slash:
            try:
                return float(num) / float(den)
            except (ValueError, ZeroDivisionError):
                pass
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _epsilon_list(text: str) -> list[float]:
    return [_fraction(tok) for tok in text.split(",") if tok.strip()]


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="run configuration file")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory")
    common.add_argument("--seed-eta", type=_fraction, default=None, metavar="ETA",
                        help="particle seeding threshold (default 1e-3)")
    common.add_argument("--sigma-x", type=_fraction, default=None, metavar="S",
                        help="smoothing width in x (overrides config)")
    common.add_argument("--sigma-k", type=_fraction, default=None, metavar="S",
                        help="smoothing width in k (overrides config)")
    common.add_argument("--threads", type=int, default=None, metavar="N",
                        help="BLAS/FFT thread cap (rejected by bench)")

    parser = _Parser(prog="swtsim",
                     description="Phase-space wave propagation via smoothed "
                                 "Wigner transforms")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sub.add_parser("problems", parents=[common],
                   help="list built-in problems")
    sub.add_parser("transform", parents=[common],
                   help="write the (smoothed) phase-space transform of the "
                        "configured initial condition")
    sub.add_parser("propagate", parents=[common],
                   help="run the full particle pipeline and persist results")

    ref = sub.add_parser("reference", parents=[common],
                         help="run a reference solver and persist the final state")
    ref.add_argument("method", choices=("splitstep", "cn", "exact"))
    ref.add_argument("--n-x", type=int, default=None, dest="ref_n_x")
    ref.add_argument("--n-t", type=int, default=None, dest="ref_n_t")

    cmp_p = sub.add_parser("compare", parents=[common],
                           help="error report between two density files")
    cmp_p.add_argument("density_a", metavar="A.csv")
    cmp_p.add_argument("density_b", metavar="B.csv")

    bench = sub.add_parser("bench", parents=[common],
                           help="epsilon sweep with timing CSV and fitted slopes")
    bench.add_argument("--epsilons", type=_epsilon_list, required=True,
                       metavar="E1,E2,...", help="comma-separated list, fractions allowed")
    return parser


def _require_config(args):
    if args.config is None:
        raise UsageError(f"{args.command} needs --config FILE")
    return load_config(args.config)


def _sigmas(args, cfg) -> tuple[float, float]:
    sx = cfg.sigma_x if args.sigma_x is None else args.sigma_x
    sk = cfg.sigma_k if args.sigma_k is None else args.sigma_k
    if (sx > 0) != (sk > 0):
        raise UsageError(
            "smoothing needs both sigmas positive, or both zero for the raw transform")
    return sx, sk


def _problem_summary(pid: str) -> str:
    spec = builtin_problem(pid, 1.0 / 16.0)
    bits = []
    if spec.ic_type == "wkb":
        bits.append(f"A(x) = {spec.amplitude}")
        bits.append(f"S(x) = {spec.phase}")
    else:
        bits.append(f"sum of {len(spec.terms)} complex Gaussians")
    bits.append(f"V(x) = {spec.potential.describe()}")
    bits.append(f"x in [{spec.x_min:g}, {spec.x_max:g}]")
    bits.append(f"t_max = {spec.t_max:g}")
    return "; ".join(bits)


def _cmd_problems(args) -> int:
    for pid in builtin_ids():
        print(f"{pid}: {_problem_summary(pid)}")
    return 0


def _cmd_transform(args) -> int:
    cfg = _require_config(args)
    spec = cfg.spec
    sigma_x, sigma_k = _sigmas(args, cfg)
    n_x = cfg.n_x if cfg.n_x is not None else suggested_n_x(spec)
    n_k = max(64, n_x // 4)
    k_max = cfg.k_max if cfg.k_max is not None else spec.k_max_default
    u = sample_problem(spec, n_x)
    w = wigner_transform(u, n_k, k_max=k_max)
    name = "wt.swtg"
    if sigma_x > 0:
        w = smooth(w, SmoothingKernelSpec(sigma_x, sigma_k))
        name = "swt.swtg"
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, name)
    write_swtg(path, w)
    print(f"{path}: {w.n_x} x {w.n_k} nodes, "
          f"x in [{w.x_min:g}, {w.x_max:g}], k in [{w.k_min:g}, {w.k_max:g}]")
    return 0


def _cmd_propagate(args) -> int:
    cfg = _require_config(args)
    sigma_x, sigma_k = _sigmas(args, cfg)
    params = RunParams(
        n_x=cfg.n_x, k_max=cfg.k_max, sigma_x=sigma_x, sigma_k=sigma_k,
        eta=DEFAULT_ETA if args.seed_eta is None else args.seed_eta)
    report = run_pipeline(cfg.spec, params, out_dir=args.out)
    print(f"problem {report.problem}, epsilon = {report.epsilon:g}, "
          f"t = {cfg.spec.t_max:g}")
    print(f"grid {report.n_x} x {report.n_k} (x-stride {report.x_stride}), "
          f"{report.particles} particles, coverage gap {report.coverage_gap:.2%}")
    for name, seconds in report.timings.items():
        print(f"  t_{name} = {seconds:.4f} s")
    print(f"  t_total_swt = {report.t_total_swt:.4f} s")
    if report.error is not None:
        print(f"vs reference: l1_rel = {report.error.l1_rel:.3e}, "
              f"linf_rel = {report.error.linf_rel:.3e}, "
              f"mass_ratio = {report.error.mass_ratio:.6f}")
    print(f"results in {args.out}/")
    return 0


def _cmd_reference(args) -> int:
    cfg = _require_config(args)
    spec = cfg.spec
    sigma_x, _ = _sigmas(args, cfg)
    n_x_pipe = cfg.n_x if cfg.n_x is not None else suggested_n_x(spec)

    if args.method == "exact":
        n_x = args.ref_n_x or n_x_pipe
        t0 = time.perf_counter()
        u = exact_free_gaussian_solution(spec.terms, spec.epsilon, spec.t_max,
                                         n_x, spec.x_min, spec.x_max)
        wall = time.perf_counter() - t0
        n_t = 0
    elif args.method == "splitstep":
        dom_min, dom_max, n_x, n_t = _splitstep_policy(spec, n_x_pipe)
        n_x = args.ref_n_x or n_x
        n_t = args.ref_n_t or n_t
        run = splitstep_solve(spec, n_x, n_t, x_min=dom_min, x_max=dom_max)
        u = _restrict(run.grid_at(spec.t_max), spec.x_min, spec.x_max)
        wall = run.wall_time
    else:
        n_x, n_t = bench_reference_mesh(spec)
        n_x = args.ref_n_x or n_x
        n_t = args.ref_n_t or n_t
        run = crank_nicolson_solve(spec, n_x, n_t)
        u = run.grid_at(spec.t_max)
        wall = run.wall_time

    os.makedirs(args.out, exist_ok=True)
    u_path = os.path.join(args.out, f"reference_{args.method}.csv")
    write_wavefunction_csv(u_path, u)
    if sigma_x > 0:
        dens = smoothed_wavefunction_density(u, sigma_x)
    else:
        from .observables import DensityProfile

        dens = DensityProfile(u.x_min, u.x_max, u.density(), "norm_density",
                              u.epsilon, t=u.t)
    d_path = os.path.join(args.out, f"reference_{args.method}_density.csv")
    write_density_csv(d_path, dens)
    print(f"{args.method}: n_x = {u.n_x}"
          + (f", n_t = {n_t}" if n_t else "")
          + f", wall = {wall:.4f} s")
    print(f"wrote {u_path} and {d_path}")
    return 0


def _cmd_compare(args) -> int:
    rep = compare(read_density_csv(args.density_a), read_density_csv(args.density_b))
    print(f"l1_rel = {rep.l1_rel!r}")
    print(f"l2_rel = {rep.l2_rel!r}")
    print(f"linf_rel = {rep.linf_rel!r}")
    print(f"mass_ratio = {rep.mass_ratio!r}")
    return 0


def _cmd_bench(args) -> int:
    if args.threads is not None:
        raise UsageError(
            "bench timings are only comparable single-threaded; "
            "--threads is not allowed here")
    cfg = _require_config(args)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "bench.csv")
    eta = DEFAULT_ETA if args.seed_eta is None else args.seed_eta
    table = sweep(cfg, args.epsilons, out_csv=csv_path, eta=eta)
    for row in table.rows:
        print(f"epsilon = {row['epsilon']:.6g}: "
              f"t_total_swt = {row['t_total_swt']:.4f} s, "
              f"t_reference = {row['t_reference']:.4f} s, "
              f"particles = {row['particles']}")
    for label, fit in (("t_total_swt", table.slope_t_swt),
                       ("t_reference", table.slope_t_reference),
                       ("particles", table.slope_d)):
        print(f"slope {label} = {fit.slope:.3f} +/- {fit.ci_half_width:.3f}")
    print(f"wrote {csv_path}")
    return 0


_COMMANDS = {
    "problems": _cmd_problems,
    "transform": _cmd_transform,
    "propagate": _cmd_propagate,
    "reference": _cmd_reference,
    "compare": _cmd_compare,
    "bench": _cmd_bench,
}


def cli(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1 and args.command != "bench":
        print("swtsim: error: --threads must be at least 1", file=sys.stderr)
        return 1
    ctx = contextlib.nullcontext()
    if args.threads is not None and args.command != "bench":
        from threadpoolctl import threadpool_limits

        ctx = threadpool_limits(limits=args.threads)
    try:
        with ctx:
            return _COMMANDS[args.command](args)
    except NumericError as exc:
        print(f"swtsim: numeric failure: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"swtsim: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"swtsim: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(cli(sys.argv[1:]))
