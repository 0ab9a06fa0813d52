"""Discrete Wigner transforms and Gaussian phase-space smoothing.

The transform follows the half-grid correlation scheme: the signal is
upsampled by two, the correlation g_x(tau_m) = u(x + tau_m/2) conj(u(x -
tau_m/2)) is formed on the half-step lattice, and an FFT over tau produces
one k-row per kept x column.  The k axis it produces is in the scaled units
where the classical Hamiltonian is pi*k^2 + V/(2*pi): bin spacing
epsilon/(n_k*dx), extent epsilon/(2*dx).

Smoothing is direct truncated Gaussian summation, never an FFT product,
applied as two separable periodic passes.  Periodic wrap on both axes keeps
the column sums exact, which is what makes the marginal identity survive
smoothing bit-for-bit in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .errors import ResolutionError, TransformError, UsageError
from .signals import WavefunctionGrid, upsample_half_grid

__all__ = [
    "PhaseSpaceGrid",
    "SmoothingKernelSpec",
    "kernel_taps",
    "wigner_transform",
    "smooth",
    "swt",
    "marginal_x",
    "marginal_k",
    "mass",
]

_CHUNK_BYTES = 32 << 20


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass
class PhaseSpaceGrid:
    """Real-valued W(x_i, k_j) on a rectangular grid.

    The x axis is periodic (x_max identified with x_min, no sample there);
    the k axis is a plain closed interval with k_min and k_max the actual
    first and last bin values.  values has shape (n_x, n_k) with x along
    axis 0.  sigma_x = sigma_k = 0 marks an unsmoothed transform.
    """

    x_min: float
    x_max: float
    k_min: float
    k_max: float
    epsilon: float
    sigma_x: float
    sigma_k: float
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise UsageError(f"domain requires x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if not self.k_max > self.k_min:
            raise UsageError(f"k axis requires k_max > k_min, got [{self.k_min}, {self.k_max}]")
        if not self.epsilon > 0:
            raise UsageError(f"epsilon must be positive, got {self.epsilon}")
        if self.sigma_x < 0 or self.sigma_k < 0:
            raise UsageError("sigma_x and sigma_k must be non-negative")
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if values.ndim != 2:
            raise UsageError("values must be a two-dimensional array")
        if values.shape[0] < 1 or values.shape[1] < 2:
            raise UsageError(f"grid needs at least 1 x 2 values, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise UsageError("values contain non-finite entries")
        self.values = values

    @property
    def n_x(self) -> int:
        return self.values.shape[0]

    @property
    def n_k(self) -> int:
        return self.values.shape[1]

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @property
    def dk(self) -> float:
        return (self.k_max - self.k_min) / (self.n_k - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_x) * self.dx

    @property
    def k(self) -> np.ndarray:
        return self.k_min + np.arange(self.n_k) * self.dk


@dataclass(frozen=True)
class SmoothingKernelSpec:
    """Tensor Gaussian kernel in the sqrt(epsilon) phase-space units.

    The physical standard deviations are sigma_x*sqrt(epsilon/(4*pi)) in x
    and sigma_k*sqrt(epsilon/(4*pi)) in k, so sigma_x = sigma_k = 1 is the
    coherent-state kernel and sigma_x*sigma_k >= 1 guarantees non-negative
    output.  Taps beyond truncation_radius standard deviations are dropped
    and the rest renormalized to unit sum.
    """

    sigma_x: float
    sigma_k: float
    truncation_radius: float = 4.0

    def __post_init__(self):
        if not self.sigma_x > 0:
            raise UsageError(f"sigma_x must be positive, got {self.sigma_x}")
        if not self.sigma_k > 0:
            raise UsageError(f"sigma_k must be positive, got {self.sigma_k}")
        if not self.truncation_radius > 0:
            raise UsageError(f"truncation_radius must be positive, got {self.truncation_radius}")

    def std_x(self, epsilon: float) -> float:
        return self.sigma_x * np.sqrt(epsilon / (4.0 * np.pi))

    def std_k(self, epsilon: float) -> float:
        return self.sigma_k * np.sqrt(epsilon / (4.0 * np.pi))

    def taps_x(self, epsilon: float, delta: float) -> np.ndarray:
        return kernel_taps(self.std_x(epsilon), delta, self.truncation_radius)

    def taps_k(self, epsilon: float, delta: float) -> np.ndarray:
        return kernel_taps(self.std_k(epsilon), delta, self.truncation_radius)


def kernel_taps(std: float, delta: float, truncation_radius: float) -> np.ndarray:
    """Renormalized Gaussian weights on a lattice of spacing delta.

    Odd length 2*h+1 with h = ceil(radius*std/delta); the weights sum to
    one exactly (up to rounding), so constants are preserved.
    """
    if not std > 0:
        raise UsageError(f"kernel standard deviation must be positive, got {std}")
    if not delta > 0:
        raise UsageError(f"lattice spacing must be positive, got {delta}")
    h = int(np.ceil(truncation_radius * std / delta))
    offsets = np.arange(-h, h + 1, dtype=np.float64) * delta
    w = np.exp(-0.5 * (offsets / std) ** 2)
    return w / np.sum(w)


def wigner_transform(f: WavefunctionGrid, n_k: int, k_max: float | None = None,
                     x_stride: int = 1) -> PhaseSpaceGrid:
    """Windowed discrete Wigner transform of a sampled wavefunction.

    n_k is the FFT length over the correlation lag; it must be a power of
    two.  n_k > 2*n_x only pads the lag window with zeros (legitimate for
    boundary-decayed signals wanting a finer k axis).  The k axis is cropped
    to k_min <= k < k_max symmetrically about zero; requesting k_max beyond
    the axis extent epsilon/(2*dx) is an error, not an embedding.

    x_stride keeps every stride-th column (it must divide n_x); the x axis
    of the result then has spacing stride*dx.
    """
    if not isinstance(f, WavefunctionGrid):
        raise UsageError("wigner_transform expects a WavefunctionGrid")
    if not _is_power_of_two(n_k) or n_k < 4:
        raise UsageError(f"n_k must be a power of two >= 4, got {n_k}")
    n_x = f.n_x
    if x_stride < 1 or n_x % x_stride != 0:
        raise UsageError(f"x_stride must be a positive divisor of n_x, got {x_stride}")
    dx = f.dx
    eps = f.epsilon
    extent = eps / (2.0 * dx)
    dk = eps / (n_k * dx)
    if k_max is None:
        k_max = extent
    if not k_max > 0:
        raise UsageError(f"k_max must be positive, got {k_max}")
    if k_max > extent * (1.0 + 1e-12):
        raise ResolutionError(
            f"k_max={k_max:.6g} exceeds the transform extent epsilon/(2*dx)={extent:.6g}; "
            f"increase n_x or lower k_max"
        )

    # Signed lag index per FFT column and its weight in the lag window.
    m = np.arange(n_k)
    m_signed = np.where(m < n_k // 2, m, m - n_k)
    weights = np.zeros(n_k, dtype=np.float64)
    real_cols = np.zeros(n_k, dtype=bool)
    if n_k <= 2 * n_x:
        weights[:] = 1.0
        real_cols[n_k // 2] = True  # unpaired lag -n_k/2 enters by its real part
    else:
        inside = np.abs(m_signed) < n_x
        weights[inside] = 1.0
        edge = np.abs(m_signed) == n_x
        weights[edge] = 0.5  # lag +-L/2 shared between both window ends
        real_cols[edge] = True

    f2 = upsample_half_grid(f.values)
    two_n = 2 * n_x
    cols = np.arange(0, n_x, x_stride)
    n_cols = cols.shape[0]
    out = np.empty((n_cols, n_k), dtype=np.float64)
    scale = dx / eps

    chunk = max(1, _CHUNK_BYTES // (16 * n_k))
    max_abs = 0.0
    max_imag = 0.0
    for start in range(0, n_cols, chunk):
        stop = min(start + chunk, n_cols)
        centers = (2 * cols[start:stop])[:, None]
        idx_plus = (centers + m_signed[None, :]) % two_n
        idx_minus = (centers - m_signed[None, :]) % two_n
        corr = f2[idx_plus] * np.conj(f2[idx_minus])
        corr *= weights[None, :]
        corr[:, real_cols] = corr[:, real_cols].real
        spec = np.fft.fft(corr, axis=1)
        max_abs = max(max_abs, float(np.max(np.abs(spec))) if spec.size else 0.0)
        max_imag = max(max_imag, float(np.max(np.abs(spec.imag))) if spec.size else 0.0)
        out[start:stop] = np.fft.fftshift(spec.real, axes=1) * scale

    if max_abs > 0.0 and max_imag > 1e-10 * max_abs:
        raise TransformError(
            f"imaginary residue {max_imag:.3e} exceeds 1e-10 of the peak modulus {max_abs:.3e}"
        )

    # Columns are now ordered q = -n_k/2 .. n_k/2 - 1 with k_q = q*dk.
    q = np.arange(-(n_k // 2), n_k // 2)
    tol = 1e-9 * dk
    keep = (q * dk >= -k_max - tol) & (q * dk < k_max - tol)
    if int(np.count_nonzero(keep)) < 2:
        raise ResolutionError(
            f"k window [{-k_max:.6g}, {k_max:.6g}) holds fewer than two bins of size {dk:.6g}"
        )
    q_kept = q[keep]
    return PhaseSpaceGrid(
        x_min=f.x_min,
        x_max=f.x_max,
        k_min=float(q_kept[0] * dk),
        k_max=float(q_kept[-1] * dk),
        epsilon=eps,
        sigma_x=0.0,
        sigma_k=0.0,
        values=np.ascontiguousarray(out[:, keep]),
        t=f.t,
    )


@njit(cache=True)
def _convolve_axis0(values, w):
    n, m = values.shape
    h = w.shape[0] // 2
    out = np.zeros((n, m))
    for i in range(n):
        for a in range(w.shape[0]):
            src = (i - (a - h)) % n
            wa = w[a]
            for j in range(m):
                out[i, j] += wa * values[src, j]
    return out


@njit(cache=True)
def _convolve_axis1(values, w):
    n, m = values.shape
    h = w.shape[0] // 2
    out = np.zeros((n, m))
    for i in range(n):
        for a in range(w.shape[0]):
            src_shift = a - h
            wa = w[a]
            for j in range(m):
                out[i, j] += wa * values[i, (j - src_shift) % m]
    return out


def smooth(grid: PhaseSpaceGrid, kernel: SmoothingKernelSpec) -> PhaseSpaceGrid:
    """Gaussian smoothing by direct truncated summation, separable passes.

    Both axes wrap periodically, so every output value is a convex
    combination of inputs and column/row sums are preserved exactly.  The
    input must be unsmoothed (sigma_x = sigma_k = 0).
    """
    if grid.sigma_x != 0.0 or grid.sigma_k != 0.0:
        raise UsageError("grid is already smoothed; smoothing composes in variance, not by repetition")
    w_x = kernel.taps_x(grid.epsilon, grid.dx)
    w_k = kernel.taps_k(grid.epsilon, grid.dk)
    if w_x.shape[0] > grid.n_x:
        raise ResolutionError(
            f"x kernel spans {w_x.shape[0]} taps but the grid has only {grid.n_x} columns"
        )
    if w_k.shape[0] > grid.n_k:
        raise ResolutionError(
            f"k kernel spans {w_k.shape[0]} taps but the grid has only {grid.n_k} rows"
        )
    stage = _convolve_axis0(grid.values, w_x)
    stage = _convolve_axis1(stage, w_k)
    return replace(grid, sigma_x=kernel.sigma_x, sigma_k=kernel.sigma_k, values=stage)


def swt(f: WavefunctionGrid, kernel: SmoothingKernelSpec, n_k: int,
        k_max: float | None = None, x_stride: int = 1) -> PhaseSpaceGrid:
    """Smoothed Wigner transform: exactly smooth(wigner_transform(...))."""
    return smooth(wigner_transform(f, n_k, k_max, x_stride), kernel)


def marginal_x(grid: PhaseSpaceGrid) -> np.ndarray:
    """Trapezoid integral over k, one value per x column."""
    v = grid.values
    return grid.dk * (np.sum(v, axis=1) - 0.5 * (v[:, 0] + v[:, -1]))


def marginal_k(grid: PhaseSpaceGrid) -> np.ndarray:
    """Riemann sum over the periodic x axis, one value per k row."""
    return grid.dx * np.sum(grid.values, axis=0)


def mass(grid: PhaseSpaceGrid) -> float:
    """Total integral, Riemann in x and trapezoid in k."""
    return float(grid.dx * np.sum(marginal_x(grid)))
