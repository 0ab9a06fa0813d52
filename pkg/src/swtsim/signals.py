"""Highly oscillatory wavefunctions on periodic grids.

Two initial-condition recipes are supported:

* WKB form       u(x) = A(x) * exp(2*pi*i * S(x) / epsilon)
* Gaussian sums  u(x) = sum_j exp(p_j(x) + i*r_j(x) + (2*pi*i/epsilon) * q_j(x))
                 with real quadratics p_j, q_j, r_j

Keeping the 1/epsilon part of the phase symbolic (the q polynomial) means a
single recipe describes a whole epsilon-family of signals, which is what the
scaling harness sweeps over.  Every recipe declares an effective wavenumber
k_eff used for resolution checks: the largest envelope-weighted local
wavenumber, so a fast but exponentially suppressed tail does not force an
absurd grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import ResolutionError, UsageError
from .expressions import FunctionExpr, parse_expression
from .potentials import Linear, Potential, Zero

__all__ = [
    "WavefunctionGrid",
    "GaussianTerm",
    "ProblemSpec",
    "sample_problem",
    "builtin_problem",
    "builtin_ids",
    "upsample_half_grid",
]

_SCAN_SAMPLES = 10_000
# Envelope cutoff (relative to peak) below which oscillations are ignored
# when declaring the k-axis extent.
_SUPPORT_FLOOR = 1e-6


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass
class WavefunctionGrid:
    """Complex samples u(x_j) on a uniform periodic grid.

    x_j = x_min + j*dx with dx = (x_max - x_min)/n_x; x_max is identified
    with x_min and carries no sample.  n_x must be a power of two so the
    spectral paths (upsampling, splitstep) apply without padding.
    """

    x_min: float
    x_max: float
    epsilon: float
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise UsageError(f"domain requires x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if not self.epsilon > 0:
            raise UsageError(f"epsilon must be positive, got {self.epsilon}")
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.complex128))
        if values.ndim != 1:
            raise UsageError("values must be a one-dimensional array")
        if not _is_power_of_two(values.shape[0]):
            raise UsageError(f"n_x must be a power of two, got {values.shape[0]}")
        if not np.all(np.isfinite(values.view(np.float64))):
            raise UsageError("values contain non-finite entries")
        self.values = values

    @property
    def n_x(self) -> int:
        return self.values.shape[0]

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_x) * self.dx

    def density(self) -> np.ndarray:
        """|u|^2 on the grid."""
        return (self.values.real**2 + self.values.imag**2)

    def norm_squared(self) -> float:
        """Riemann integral of |u|^2 over the periodic domain."""
        return float(np.sum(self.density()) * self.dx)


@dataclass(frozen=True)
class GaussianTerm:
    """One summand exp(p(x) + i*r(x) + (2*pi*i/epsilon)*q(x)).

    p, q, r are real quadratics stored by coefficient (c2*x^2 + c1*x + c0).
    p is the log-envelope and needs p2 < 0 for decay; q carries the
    semiclassical phase and r any epsilon-independent remainder.
    """

    p2: float
    p1: float = 0.0
    p0: float = 0.0
    q2: float = 0.0
    q1: float = 0.0
    q0: float = 0.0
    r2: float = 0.0
    r1: float = 0.0
    r0: float = 0.0

    def __post_init__(self):
        if not self.p2 < 0:
            raise UsageError(f"Gaussian term needs a decaying envelope (p2 < 0), got p2={self.p2}")

    def log_envelope(self, x):
        x = np.asarray(x, dtype=float)
        return (self.p2 * x + self.p1) * x + self.p0

    def local_wavenumber(self, x, epsilon: float):
        """d/dx of the phase, in the units where k = epsilon * frequency."""
        x = np.asarray(x, dtype=float)
        return (2.0 * self.q2 * x + self.q1) + epsilon * (2.0 * self.r2 * x + self.r1) / (2.0 * np.pi)

    def evaluate(self, x, epsilon: float):
        x = np.asarray(x, dtype=float)
        p = (self.p2 * x + self.p1) * x + self.p0
        q = (self.q2 * x + self.q1) * x + self.q0
        r = (self.r2 * x + self.r1) * x + self.r0
        return np.exp(p + 1j * (r + (2.0 * np.pi / epsilon) * q))

    @classmethod
    def from_alpha_beta_gamma(cls, alpha: complex, beta: complex, gamma: complex,
                              epsilon: float) -> "GaussianTerm":
        """Convert exp(-(alpha/epsilon)*x^2 + beta*x + gamma) at a given epsilon."""
        if not epsilon > 0:
            raise UsageError(f"epsilon must be positive, got {epsilon}")
        alpha = complex(alpha)
        if not alpha.real > 0:
            raise UsageError(f"alpha must have positive real part, got {alpha}")
        beta = complex(beta)
        gamma = complex(gamma)
        return cls(
            p2=-alpha.real / epsilon,
            p1=beta.real,
            p0=gamma.real,
            q2=-alpha.imag / (2.0 * np.pi),
            r1=beta.imag,
            r0=gamma.imag,
        )


@dataclass(frozen=True)
class ProblemSpec:
    """A complete scenario: initial condition, potential, epsilon, horizon.

    ic_type is "wkb" (amplitude/phase expressions) or "gaussian_sum"
    (tuple of GaussianTerm).  k_eff and k_max_default are derived from the
    recipe by a dense scan and cached; they drive the resolution guard in
    sample_problem and the default k window of the transform.
    """

    ic_type: str
    potential: Potential
    epsilon: float
    t_max: float
    x_min: float = -6.0
    x_max: float = 6.0
    amplitude: FunctionExpr | None = None
    phase: FunctionExpr | None = None
    terms: tuple[GaussianTerm, ...] = ()
    name: str = "custom"

    def __post_init__(self):
        if self.ic_type not in ("wkb", "gaussian_sum"):
            raise UsageError(f"unknown ic_type {self.ic_type!r}")
        if not self.epsilon > 0:
            raise UsageError(f"epsilon must be positive, got {self.epsilon}")
        if self.t_max < 0:
            raise UsageError(f"t_max must be non-negative, got {self.t_max}")
        if not self.x_max > self.x_min:
            raise UsageError(f"domain requires x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if self.ic_type == "wkb":
            if self.amplitude is None or self.phase is None:
                raise UsageError("wkb problems need amplitude and phase expressions")
        else:
            if not self.terms:
                raise UsageError("gaussian_sum problems need at least one term")
        if not isinstance(self.potential, Potential):
            raise UsageError("potential must be a Potential instance")

    def evaluate(self, x) -> np.ndarray:
        """The recipe itself, evaluated pointwise (exact, no interpolation)."""
        x = np.asarray(x, dtype=float)
        if self.ic_type == "wkb":
            amp = np.asarray(self.amplitude(x), dtype=float)
            ph = np.asarray(self.phase(x), dtype=float)
            return amp * np.exp((2j * np.pi / self.epsilon) * ph)
        total = np.zeros(x.shape, dtype=np.complex128)
        for term in self.terms:
            total += term.evaluate(x, self.epsilon)
        return total

    def envelope(self, x) -> np.ndarray:
        """Upper bound on |u| built from the recipe parts (not |sum| itself)."""
        x = np.asarray(x, dtype=float)
        if self.ic_type == "wkb":
            return np.abs(np.asarray(self.amplitude(x), dtype=float))
        total = np.zeros(x.shape, dtype=float)
        for term in self.terms:
            total += np.exp(term.log_envelope(x))
        return total

    @cached_property
    def _scan(self) -> tuple[np.ndarray, list[tuple[np.ndarray, np.ndarray]]]:
        xs = np.linspace(self.x_min, self.x_max, _SCAN_SAMPLES)
        parts: list[tuple[np.ndarray, np.ndarray]] = []
        if self.ic_type == "wkb":
            env = np.abs(np.asarray(self.amplitude(xs), dtype=float))
            slope = np.abs(np.asarray(self.phase.derivative()(xs), dtype=float))
            parts.append((env, slope))
        else:
            for term in self.terms:
                env = np.exp(term.log_envelope(xs))
                slope = np.abs(term.local_wavenumber(xs, self.epsilon))
                parts.append((env, slope))
        return xs, parts

    @cached_property
    def k_eff(self) -> float:
        """max over x of (envelope/peak envelope) * |phase slope|."""
        _, parts = self._scan
        peak = max((float(np.max(env)) for env, _ in parts), default=0.0)
        if peak == 0.0:
            return 0.0
        best = 0.0
        for env, slope in parts:
            best = max(best, float(np.max((env / peak) * slope)))
        return best

    @cached_property
    def k_resolve(self) -> float:
        """Largest phase slope where any single part still carries weight.

        Unlike k_eff this does not discount a weak part against the global
        peak, so it is the honest grid-resolution target for sampling.
        """
        _, parts = self._scan
        best = 0.0
        for env, slope in parts:
            top = float(np.max(env))
            if top == 0.0:
                continue
            mask = env >= 1e-3 * top
            best = max(best, float(np.max(slope[mask])))
        return best

    @cached_property
    def k_max_default(self) -> float:
        """1.2x the largest phase slope on the part of the domain that matters."""
        _, parts = self._scan
        peak = max((float(np.max(env)) for env, _ in parts), default=0.0)
        if peak == 0.0:
            return 1.0
        best = 0.0
        for env, slope in parts:
            mask = env >= _SUPPORT_FLOOR * peak
            if np.any(mask):
                best = max(best, float(np.max(slope[mask])))
        return 1.2 * best if best > 0.0 else 1.0

    @cached_property
    def support_interval(self) -> tuple[float, float]:
        """Smallest x interval outside which the total envelope is below
        1e-6 of its peak."""
        xs, parts = self._scan
        total = np.zeros_like(xs)
        for env, _ in parts:
            total += env
        peak = float(np.max(total))
        if peak == 0.0:
            return self.x_min, self.x_max
        idx = np.nonzero(total >= _SUPPORT_FLOOR * peak)[0]
        return float(xs[idx[0]]), float(xs[idx[-1]])

    def with_epsilon(self, epsilon: float) -> "ProblemSpec":
        """Same recipe at a different epsilon (Gaussian sums rescale alpha terms).

        For gaussian_sum recipes the p2/q2-style coefficients already encode
        the 1/epsilon factors, so terms built via from_alpha_beta_gamma must
        be rebuilt by the caller; builtin_problem does exactly that.  This
        helper only swaps the field, which is correct for WKB recipes.
        """
        if self.ic_type != "wkb":
            raise UsageError("with_epsilon only applies to wkb recipes; rebuild gaussian sums")
        return replace(self, epsilon=epsilon)


def sample_problem(spec: ProblemSpec, n_x: int) -> WavefunctionGrid:
    """Evaluate the recipe on a periodic grid of n_x points.

    Refuses grids that under-resolve the declared oscillation: at least
    eight samples per effective wavelength (dx <= epsilon / (8 * k_eff)).
    """
    if not _is_power_of_two(n_x):
        raise UsageError(f"n_x must be a power of two, got {n_x}")
    dx = (spec.x_max - spec.x_min) / n_x
    k_eff = spec.k_eff
    if k_eff > 0.0:
        dx_needed = spec.epsilon / (8.0 * k_eff)
        if dx > dx_needed * (1.0 + 1e-12):
            n_needed = 1 << int(np.ceil(np.log2((spec.x_max - spec.x_min) / dx_needed)))
            raise ResolutionError(
                f"n_x={n_x} under-resolves the signal: dx={dx:.3e} exceeds "
                f"epsilon/(8*k_eff)={dx_needed:.3e}; need n_x >= {n_needed}"
            )
    x = spec.x_min + np.arange(n_x) * dx
    return WavefunctionGrid(spec.x_min, spec.x_max, spec.epsilon, spec.evaluate(x))


def suggested_n_x(spec: ProblemSpec, samples_per_wavelength: float = 10.0) -> int:
    """Power-of-two grid size giving the requested oversampling of k_resolve."""
    k_res = max(spec.k_resolve, 1e-12)
    raw = samples_per_wavelength * k_res * (spec.x_max - spec.x_min) / spec.epsilon
    return max(64, 1 << int(np.ceil(np.log2(max(raw, 1.0)))))


_PLATEAU_A = "(tanh(6.87*(x+2.42))+1)*(tanh(6.87*(2.42-x))+1)/4"


def _gaussian_sum_over_ten_eps(coeffs: list[complex], epsilon: float) -> tuple[GaussianTerm, ...]:
    # exp(-c * x^2 / (10*epsilon)) for each complex c
    return tuple(
        GaussianTerm(p2=-c.real / (10.0 * epsilon), q2=-c.imag / (20.0 * np.pi))
        for c in coeffs
    )


def builtin_ids() -> tuple[str, ...]:
    return ("problem1", "problem2", "problem3", "problem4", "tanh_chirp")


def builtin_problem(problem_id: str, epsilon: float, t_max: float | None = None) -> ProblemSpec:
    """Construct one of the bundled scenarios at the requested epsilon.

    problem1  WKB plateau amplitude, quartic phase, free motion
    problem2  same amplitude, cubic-free phase, linear potential
    problem3  three concentric Gaussians with mixed chirps, linear potential
    problem4  three displaced chirped Gaussians, free motion
    tanh_chirp  narrow packet whose local wavenumber sweeps through a tanh
    """
    if not epsilon > 0:
        raise UsageError(f"epsilon must be positive, got {epsilon}")
    pid = problem_id.strip().lower()
    if pid == "problem1":
        return ProblemSpec(
            ic_type="wkb",
            amplitude=parse_expression(_PLATEAU_A),
            phase=parse_expression("-x^4/4 - x^2 + 2*x"),
            potential=Zero(),
            epsilon=epsilon,
            t_max=0.005 if t_max is None else t_max,
            name="problem1",
        )
    if pid == "problem2":
        return ProblemSpec(
            ic_type="wkb",
            amplitude=parse_expression(_PLATEAU_A),
            phase=parse_expression("-x^4/4 + 2*x"),
            potential=Linear(1.0),
            epsilon=epsilon,
            t_max=0.005 if t_max is None else t_max,
            name="problem2",
        )
    if pid == "problem3":
        terms = _gaussian_sum_over_ten_eps(
            [complex(1.0, 7.0), complex(0.2, 3.0), complex(0.9, -8.0)], epsilon
        )
        return ProblemSpec(
            ic_type="gaussian_sum",
            terms=terms,
            potential=Linear(1.0),
            epsilon=epsilon,
            t_max=0.5 if t_max is None else t_max,
            name="problem3",
        )
    if pid == "problem4":
        two_pi = 2.0 * np.pi
        terms = (
            GaussianTerm(p2=-1.0, p1=-2.0, p0=-4.0, q2=-3.0 / two_pi),
            GaussianTerm(p2=-1.0, p1=-1.0, p0=-1.0, q2=-2.0 / two_pi),
            GaussianTerm(p2=-1.0, p1=-2.0 / 3.0, p0=-4.0 / 9.0, q2=-1.0 / two_pi),
        )
        return ProblemSpec(
            ic_type="gaussian_sum",
            terms=terms,
            potential=Zero(),
            epsilon=epsilon,
            t_max=0.5 if t_max is None else t_max,
            name="problem4",
        )
    if pid == "tanh_chirp":
        return ProblemSpec(
            ic_type="wkb",
            amplitude=parse_expression("exp(-25*(x-0.5)^2)"),
            phase=parse_expression("-log(exp(10*(x-0.5))+exp(-10*(x-0.5)))/5"),
            potential=Zero(),
            epsilon=epsilon,
            t_max=0.01 if t_max is None else t_max,
            x_min=0.0,
            x_max=1.0,
            name="tanh_chirp",
        )
    raise UsageError(f"unknown builtin problem {problem_id!r}; known: {', '.join(builtin_ids())}")


def upsample_half_grid(values: np.ndarray) -> np.ndarray:
    """Interleave half-grid samples: out[2j] = values[j], out[2j+1] ~ u(x_j + dx/2).

    Band-limited (FFT zero-pad) for n >= 256, linear interpolation below.
    The even samples are reproduced exactly in both branches; the spectral
    branch splits the Nyquist bin symmetrically so real signals stay real.
    """
    values = np.ascontiguousarray(np.asarray(values, dtype=np.complex128))
    n = values.shape[0]
    if not _is_power_of_two(n):
        raise UsageError(f"upsampling needs a power-of-two length, got {n}")
    if n < 256:
        nxt = np.roll(values, -1)
        out = np.empty(2 * n, dtype=np.complex128)
        out[0::2] = values
        out[1::2] = 0.5 * (values + nxt)
        return out
    spec = np.fft.fft(values)
    padded = np.zeros(2 * n, dtype=np.complex128)
    half = n // 2
    padded[:half] = spec[:half]
    padded[-(half - 1):] = spec[half + 1:]
    # Nyquist bin split evenly between +n/2 and -n/2 keeps even samples exact
    # and preserves Hermitian symmetry for real inputs.
    padded[half] = 0.5 * spec[half]
    padded[2 * n - half] = 0.5 * spec[half]
    return np.fft.ifft(padded) * 2.0
