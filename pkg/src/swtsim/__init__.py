"""Phase-space simulation of high-frequency waves.

The pipeline: sample a highly oscillatory wavefunction, take its (smoothed)
Wigner transform, seed particles on the significant nodes, transport them
along the classical flow, gather the density back onto the grid, and reduce
to position-space observables.  Reference Schrodinger solvers and an
epsilon-sweep benchmark quantify accuracy and cost scaling.
"""

from .config import RunConfig, load_config, parse_config
from .dynamics import (HamiltonianField, ParticleEnsemble, advance,
                       backtrace_evaluate, default_step, reconstruct,
                       seed_particles)
from .errors import (ConfigError, EvaluationError, ExpressionError,
                     NumericError, ResolutionError, SeedingError, SolverError,
                     SwtsimError, TransformError, UsageError)
from .expressions import FunctionExpr, parse_expression
from .harness import (BenchTable, RunParams, RunReport, SlopeFit, fit_slope,
                      pipeline_params, run_pipeline, sweep)
from .observables import (DensityProfile, ErrorReport, compare,
                          phase_space_energy_density, phase_space_norm_density,
                          smoothed_wavefunction_density)
from .phasespace import (PhaseSpaceGrid, SmoothingKernelSpec, kernel_taps,
                         marginal_k, marginal_x, mass, smooth, swt,
                         wigner_transform)
from .potentials import (Expr, Linear, Potential, Quadratic, Zero,
                         potential_from_text)
from .reference import (ReferenceRun, cn_mesh, crank_nicolson_solve,
                        exact_free_gaussian_solution, splitstep_solve)
from .signals import (GaussianTerm, ProblemSpec, WavefunctionGrid, builtin_ids,
                      builtin_problem, sample_problem, suggested_n_x,
                      upsample_half_grid)

__version__ = "0.1.0"

__all__ = [
    "BenchTable",
    "ConfigError",
    "DensityProfile",
    "ErrorReport",
    "EvaluationError",
    "Expr",
    "ExpressionError",
    "FunctionExpr",
    "GaussianTerm",
    "HamiltonianField",
    "Linear",
    "NumericError",
    "ParticleEnsemble",
    "PhaseSpaceGrid",
    "Potential",
    "ProblemSpec",
    "Quadratic",
    "ReferenceRun",
    "ResolutionError",
    "RunConfig",
    "RunParams",
    "RunReport",
    "SeedingError",
    "SlopeFit",
    "SmoothingKernelSpec",
    "SolverError",
    "SwtsimError",
    "TransformError",
    "UsageError",
    "WavefunctionGrid",
    "Zero",
    "advance",
    "backtrace_evaluate",
    "builtin_ids",
    "builtin_problem",
    "cn_mesh",
    "compare",
    "crank_nicolson_solve",
    "default_step",
    "exact_free_gaussian_solution",
    "fit_slope",
    "kernel_taps",
    "load_config",
    "marginal_k",
    "marginal_x",
    "mass",
    "parse_config",
    "parse_expression",
    "phase_space_energy_density",
    "phase_space_norm_density",
    "pipeline_params",
    "potential_from_text",
    "reconstruct",
    "run_pipeline",
    "sample_problem",
    "seed_particles",
    "smooth",
    "smoothed_wavefunction_density",
    "splitstep_solve",
    "suggested_n_x",
    "swt",
    "sweep",
    "upsample_half_grid",
    "wigner_transform",
    "__version__",
]
