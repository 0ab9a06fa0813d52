"""Particle transport of phase-space densities along classical characteristics.

The density is constant along trajectories of dx/dt = 2*pi*k, dk/dt =
-V'(x)/(2*pi), so the solver seeds one weighted particle per significant
grid node, moves the particles with fixed-step RK4, and reads the density
back by compact-support inverse-distance interpolation.  A backward
characteristic tracer over the original grid serves as an independent
oracle for the same transport.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .errors import SeedingError, SolverError, UsageError
from .phasespace import PhaseSpaceGrid
from .potentials import Potential

__all__ = [
    "ParticleEnsemble",
    "HamiltonianField",
    "default_step",
    "seed_particles",
    "advance",
    "reconstruct",
    "backtrace_evaluate",
]

# Compact support of the Shepard gather, in seed-spacing units.
_SUPPORT_RADIUS = 2.0


@dataclass
class ParticleEnsemble:
    """Weighted phase-space particles; weights are frozen at seed time."""

    x: np.ndarray
    k: np.ndarray
    weights: np.ndarray
    epsilon: float
    sigma_x: float
    sigma_k: float
    seed_dx: float
    seed_dk: float
    t: float = 0.0

    def __post_init__(self):
        self.x = np.ascontiguousarray(np.asarray(self.x, dtype=np.float64))
        self.k = np.ascontiguousarray(np.asarray(self.k, dtype=np.float64))
        self.weights = np.ascontiguousarray(np.asarray(self.weights, dtype=np.float64))
        if not (self.x.shape == self.k.shape == self.weights.shape) or self.x.ndim != 1:
            raise UsageError("x, k, weights must be one-dimensional arrays of equal length")
        if self.x.shape[0] == 0:
            raise SeedingError("ensemble holds no particles")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.k))
                and np.all(np.isfinite(self.weights))):
            raise UsageError("ensemble holds non-finite entries")
        if not (self.seed_dx > 0 and self.seed_dk > 0):
            raise UsageError("seed spacings must be positive")

    @property
    def size(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True)
class HamiltonianField:
    """Characteristic field dx/dt = dH/dk, dk/dt = -dH/dx of
    H(x,k) = pi*k^2 + V(x)/(2*pi)."""

    potential: Potential

    def velocity(self, k):
        return 2.0 * np.pi * np.asarray(k, dtype=float)

    def force(self, x):
        return -self.potential.gradient(x) / (2.0 * np.pi)

    def energy(self, x, k):
        x = np.asarray(x, dtype=float)
        k = np.asarray(k, dtype=float)
        return np.pi * k * k + self.potential.value(x) / (2.0 * np.pi)


def default_step(potential: Potential, k_max: float, t_max: float,
                 x_min: float, x_max: float) -> float:
    """Fixed RK4 step targeting about 0.05 phase-space units per step."""
    rate = max(1.0, 2.0 * np.pi * abs(k_max),
               potential.max_abs_gradient(x_min, x_max) / (2.0 * np.pi))
    if t_max <= 0:
        return 0.05 / rate
    return t_max / math.ceil(t_max * rate / 0.05)


def seed_particles(w0: PhaseSpaceGrid, threshold_eta: float) -> ParticleEnsemble:
    """One particle per node with |value| >= eta * max|value|.

    Node scan order is row-major (x outer, k inner), which fixes the
    particle ordering and hence every later fixed-order reduction.
    """
    if not 0.0 < threshold_eta < 1.0:
        raise UsageError(f"threshold_eta must lie in (0, 1), got {threshold_eta}")
    peak = float(np.max(np.abs(w0.values)))
    if peak == 0.0:
        raise SeedingError("cannot seed from an identically zero grid")
    ii, jj = np.nonzero(np.abs(w0.values) >= threshold_eta * peak)
    if ii.shape[0] == 0:
        raise SeedingError("no grid node reaches the seeding threshold")
    return ParticleEnsemble(
        x=w0.x_min + ii * w0.dx,
        k=w0.k_min + jj * w0.dk,
        weights=w0.values[ii, jj],
        epsilon=w0.epsilon,
        sigma_x=w0.sigma_x,
        sigma_k=w0.sigma_k,
        seed_dx=w0.dx,
        seed_dk=w0.dk,
        t=w0.t,
    )


def _rk4_flow(x, k, potential: Potential, duration: float, h: float):
    """RK4 with fixed step h (possibly negative for reverse flow); the last
    step is shortened to land on the duration exactly."""
    two_pi = 2.0 * np.pi
    n_full = int(abs(duration) / abs(h) + 1e-12)
    steps = [h] * n_full
    rem = duration - n_full * h
    if abs(rem) > 1e-15 * max(1.0, abs(duration)):
        steps.append(rem)
    for dt in steps:
        k1x = two_pi * k
        k1k = -potential.gradient(x) / two_pi
        x2 = x + 0.5 * dt * k1x
        k2 = k + 0.5 * dt * k1k
        k2x = two_pi * k2
        k2k = -potential.gradient(x2) / two_pi
        x3 = x + 0.5 * dt * k2x
        k3 = k + 0.5 * dt * k2k
        k3x = two_pi * k3
        k3k = -potential.gradient(x3) / two_pi
        x4 = x + dt * k3x
        k4 = k + dt * k3k
        k4x = two_pi * k4
        k4k = -potential.gradient(x4) / two_pi
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        k = k + (dt / 6.0) * (k1k + 2.0 * k2k + 2.0 * k3k + k4k)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(k))):
            raise SolverError("characteristic integration produced non-finite positions")
    return x, k


def advance(ens: ParticleEnsemble, potential: Potential, t_target: float,
            h: float) -> ParticleEnsemble:
    """Move every particle to t_target with classic RK4; weights untouched."""
    if t_target < ens.t - 1e-15:
        raise UsageError(f"t_target {t_target} precedes the ensemble time {ens.t}")
    if not h > 0:
        raise UsageError(f"step h must be positive, got {h}")
    duration = t_target - ens.t
    if duration <= 0:
        return replace(ens, x=ens.x.copy(), k=ens.k.copy(), weights=ens.weights.copy())
    x, k = _rk4_flow(ens.x.copy(), ens.k.copy(), potential, duration, h)
    return replace(ens, x=x, k=k, weights=ens.weights.copy(), t=t_target)


@njit(cache=True)
def _shepard_gather(up, vp, wp, offsets, order, ncu, ncv, cmin_u, cmin_v,
                    u_nodes, v_nodes, out):
    # Support radius 2.0 in seed-spacing units; cell size equals the radius.
    gaps = 0
    n_x = u_nodes.shape[0]
    n_k = v_nodes.shape[0]
    r2 = 4.0
    for i in range(n_x):
        u = u_nodes[i]
        cu = int(np.floor(u / 2.0)) - cmin_u
        for j in range(n_k):
            v = v_nodes[j]
            cv = int(np.floor(v / 2.0)) - cmin_v
            num = 0.0
            den = 0.0
            exact = False
            value = 0.0
            covered = False
            for du in range(-1, 2):
                gu = cu + du
                if gu < 0 or gu >= ncu:
                    continue
                for dv in range(-1, 2):
                    gv = cv + dv
                    if gv < 0 or gv >= ncv:
                        continue
                    cell = gu * ncv + gv
                    for idx in range(offsets[cell], offsets[cell + 1]):
                        p = order[idx]
                        ddu = u - up[p]
                        ddv = v - vp[p]
                        d2 = ddu * ddu + ddv * ddv
                        if d2 > r2:
                            continue
                        covered = True
                        if d2 < 1e-18:
                            value = wp[p]
                            exact = True
                            break
                        num += wp[p] / d2
                        den += 1.0 / d2
                    if exact:
                        break
                if exact:
                    break
            if exact:
                out[i, j] = value
            elif covered:
                out[i, j] = num / den
            else:
                out[i, j] = 0.0
                gaps += 1
    return gaps


def reconstruct(ens: ParticleEnsemble, like: PhaseSpaceGrid):
    """Shepard inverse-distance-squared gather onto like's node lattice.

    Coordinates are normalized by the seed spacings so the support is an
    isotropic disk of radius 2 there; a particle sitting exactly on a node
    supplies that node's value alone.  Returns (grid, coverage_gap) where
    coverage_gap is the fraction of nodes with no particle in range.
    """
    up = (ens.x - like.x_min) / ens.seed_dx
    vp = (ens.k - like.k_min) / ens.seed_dk
    cu = np.floor(up / _SUPPORT_RADIUS).astype(np.int64)
    cv = np.floor(vp / _SUPPORT_RADIUS).astype(np.int64)
    cmin_u = int(cu.min())
    cmin_v = int(cv.min())
    ncu = int(cu.max()) - cmin_u + 1
    ncv = int(cv.max()) - cmin_v + 1
    cells = (cu - cmin_u) * ncv + (cv - cmin_v)
    order = np.argsort(cells, kind="stable")
    counts = np.bincount(cells, minlength=ncu * ncv)
    offsets = np.zeros(ncu * ncv + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    u_nodes = (like.x - like.x_min) / ens.seed_dx
    v_nodes = (like.k - like.k_min) / ens.seed_dk
    out = np.empty((like.n_x, like.n_k), dtype=np.float64)
    gaps = _shepard_gather(
        up, vp, ens.weights, offsets, order, ncu, ncv, cmin_u, cmin_v,
        u_nodes, v_nodes, out,
    )
    grid = replace(like, sigma_x=ens.sigma_x, sigma_k=ens.sigma_k, values=out, t=ens.t)
    return grid, gaps / (like.n_x * like.n_k)


def backtrace_evaluate(w0: PhaseSpaceGrid, potential: Potential, t: float,
                       like: PhaseSpaceGrid | None = None,
                       h: float | None = None) -> PhaseSpaceGrid:
    """Evaluate the transported density by backward characteristics.

    Each target node is traced backward for time t and w0 is bilinearly
    interpolated at the foot point: periodic in x, zero outside the k
    extent.  Mathematically identical to the particle method in the exact-
    arithmetic limit; used as an internal oracle.
    """
    if t < 0:
        raise UsageError(f"backtrace time must be non-negative, got {t}")
    if like is None:
        like = w0
    if h is None:
        k_big = max(abs(w0.k_min), abs(w0.k_max))
        h = default_step(potential, k_big, t, w0.x_min, w0.x_max)
    xg, kg = np.meshgrid(like.x, like.k, indexing="ij")
    xf = xg.ravel().copy()
    kf = kg.ravel().copy()
    if t > 0:
        xf, kf = _rk4_flow(xf, kf, potential, -t, -abs(h))

    span = w0.x_max - w0.x_min
    fi = np.mod(xf - w0.x_min, span) / w0.dx
    i0 = np.floor(fi).astype(np.int64)
    fx = fi - i0
    i0 = np.mod(i0, w0.n_x)
    i1 = np.mod(i0 + 1, w0.n_x)

    fj = (kf - w0.k_min) / w0.dk
    inside = (fj >= 0.0) & (fj <= w0.n_k - 1.0)
    fj_c = np.clip(fj, 0.0, w0.n_k - 1.0)
    j0 = np.minimum(np.floor(fj_c).astype(np.int64), w0.n_k - 2)
    fk = fj_c - j0

    v = w0.values
    interp = ((1 - fx) * (1 - fk) * v[i0, j0]
              + fx * (1 - fk) * v[i1, j0]
              + (1 - fx) * fk * v[i0, j0 + 1]
              + fx * fk * v[i1, j0 + 1])
    interp[~inside] = 0.0
    return replace(like, sigma_x=w0.sigma_x, sigma_k=w0.sigma_k,
                   values=interp.reshape(like.n_x, like.n_k), t=w0.t + t)
