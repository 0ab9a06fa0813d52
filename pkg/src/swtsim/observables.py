"""Slow-scale observables and the comparison metrics used throughout.

A DensityProfile is a real function of x on the periodic grid convention
(x_j = x_min + j*dx, no duplicated endpoint).  Profiles come either from
phase-space marginals or directly from wavefunctions; compare() reports
relative errors treating its second argument as the reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResolutionError, UsageError
from .phasespace import PhaseSpaceGrid, _convolve_axis0, kernel_taps, marginal_x
from .potentials import Potential
from .signals import WavefunctionGrid

__all__ = [
    "DensityProfile",
    "ErrorReport",
    "phase_space_norm_density",
    "phase_space_energy_density",
    "smoothed_wavefunction_density",
    "compare",
]

_KINDS = ("norm_density", "energy_density")


@dataclass
class DensityProfile:
    """Real density on a periodic x grid; sigma_x = 0 means unsmoothed."""

    x_min: float
    x_max: float
    values: np.ndarray
    kind: str
    epsilon: float
    sigma_x: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        self.values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if self.values.ndim != 1 or self.values.shape[0] < 2:
            raise UsageError("density values must be a 1-D array with at least 2 samples")
        if not np.all(np.isfinite(self.values)):
            raise UsageError("density values must be finite")
        if not self.x_max > self.x_min:
            raise UsageError("x_max must exceed x_min")
        if self.kind not in _KINDS:
            raise UsageError(f"unknown density kind {self.kind!r}")
        if self.epsilon <= 0:
            raise UsageError("epsilon must be positive")
        if self.sigma_x < 0:
            raise UsageError("sigma_x must be non-negative")

    @property
    def n_x(self) -> int:
        return self.values.shape[0]

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_x) * self.dx


@dataclass(frozen=True)
class ErrorReport:
    l1_rel: float
    l2_rel: float
    linf_rel: float
    mass_ratio: float


def phase_space_norm_density(w: PhaseSpaceGrid) -> DensityProfile:
    """N(x) = integral of W dk."""
    return DensityProfile(w.x_min, w.x_max, marginal_x(w), "norm_density",
                          w.epsilon, sigma_x=w.sigma_x, t=w.t)


def phase_space_energy_density(w: PhaseSpaceGrid, potential: Potential) -> DensityProfile:
    """E(x) = integral of H(x,k) W(x,k) dk with H = pi k^2 + V(x)/(2 pi),
    trapezoid in k (the k axis includes both endpoints)."""
    weights = np.full(w.n_k, w.dk)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    kinetic = w.values @ (np.pi * w.k ** 2 * weights)
    vx = potential.value(w.x) / (2.0 * np.pi)
    vals = kinetic + vx * (w.values @ weights)
    return DensityProfile(w.x_min, w.x_max, vals, "energy_density",
                          w.epsilon, sigma_x=w.sigma_x, t=w.t)


def smoothed_wavefunction_density(u: WavefunctionGrid, sigma_x: float,
                                  truncation_radius: float = 4.0) -> DensityProfile:
    """|u|^2 convolved with the normalized Gaussian of std
    sigma_x*sqrt(epsilon/(4*pi)), periodically, taps truncated at
    truncation_radius standard deviations."""
    if sigma_x <= 0:
        raise UsageError(f"sigma_x must be positive, got {sigma_x}")
    std = sigma_x * float(np.sqrt(u.epsilon / (4.0 * np.pi)))
    taps = kernel_taps(std, u.dx, truncation_radius)
    half = (taps.shape[0] - 1) // 2
    if 2 * half + 1 > u.n_x:
        raise ResolutionError(
            f"smoothing kernel ({2 * half + 1} taps) is wider than the grid ({u.n_x})")
    dens = np.ascontiguousarray(u.density()[:, None])
    smoothed = _convolve_axis0(dens, taps)[:, 0]
    return DensityProfile(u.x_min, u.x_max, smoothed, "norm_density",
                          u.epsilon, sigma_x=sigma_x, t=u.t)


def compare(a: DensityProfile, b: DensityProfile) -> ErrorReport:
    """Relative error report of a against the reference b (plain vector
    norms; the shared grid measure cancels in every ratio)."""
    if a.n_x != b.n_x:
        raise UsageError(f"grid sizes differ: {a.n_x} vs {b.n_x}")
    if abs(a.x_min - b.x_min) > 1e-12 * max(1.0, abs(b.x_min)) \
            or abs(a.x_max - b.x_max) > 1e-12 * max(1.0, abs(b.x_max)):
        raise UsageError("grid extents differ")
    if a.kind != b.kind:
        raise UsageError(f"density kinds differ: {a.kind} vs {b.kind}")
    diff = a.values - b.values
    l1_den = float(np.sum(np.abs(b.values)))
    l2_den = float(np.sqrt(np.sum(b.values ** 2)))
    linf_den = float(np.max(np.abs(b.values)))
    mass_den = float(np.sum(b.values))
    if l1_den == 0.0 or mass_den == 0.0:
        raise UsageError("reference density is identically zero (or has zero mass)")
    return ErrorReport(
        l1_rel=float(np.sum(np.abs(diff))) / l1_den,
        l2_rel=float(np.sqrt(np.sum(diff ** 2))) / l2_den,
        linf_rel=float(np.max(np.abs(diff))) / linf_den,
        mass_ratio=float(np.sum(a.values)) / mass_den,
    )
