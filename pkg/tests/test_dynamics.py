"""Particle transport: seeding, RK4 characteristics, Shepard gather,
backward-trace oracle."""

import numpy as np
import pytest
from conftest import make_grid

from swtsim.dynamics import (
    HamiltonianField,
    ParticleEnsemble,
    advance,
    backtrace_evaluate,
    default_step,
    reconstruct,
    seed_particles,
)
from swtsim.errors import SeedingError, UsageError
from swtsim.potentials import Linear, Quadratic, Zero


def gaussian_grid(n=64, span=3.0, sigma=1.0):
    """sigma-smoothed unit-Gaussian transform values on an aligned square
    lattice (dx == dk so shear displacements can land on nodes)."""
    x = np.linspace(-span, span, n, endpoint=False)
    k = np.linspace(-span, span, n + 1)
    values = np.exp(-np.pi * (x[:, None] ** 2 + k[None, :] ** 2))
    return make_grid(values, x_min=-span, x_max=span, k_min=-span, k_max=span,
                     epsilon=1.0, sigma_x=sigma, sigma_k=sigma)


class TestSeeding:
    def test_zero_grid_rejected(self):
        g = make_grid(np.zeros((8, 9)))
        with pytest.raises(SeedingError, match="identically zero"):
            seed_particles(g, 1e-3)

    @pytest.mark.parametrize("eta", [0.0, 1.0, -0.5, 2.0])
    def test_threshold_outside_unit_interval(self, eta):
        g = make_grid(np.ones((8, 9)))
        with pytest.raises(UsageError, match="threshold_eta"):
            seed_particles(g, eta)

    def test_single_impulse_seeds_one_particle(self):
        values = np.zeros((16, 17))
        values[5, 11] = 2.5
        g = make_grid(values, x_min=-2.0, x_max=2.0, k_min=-2.0, k_max=2.0,
                      sigma_x=1.0, sigma_k=1.0)
        ens = seed_particles(g, 0.5)
        assert ens.size == 1
        assert ens.x[0] == g.x[5]
        assert ens.k[0] == g.k[11]
        assert ens.weights[0] == 2.5
        assert ens.sigma_x == 1.0 and ens.sigma_k == 1.0
        assert ens.seed_dx == g.dx and ens.seed_dk == g.dk

    def test_count_and_order_match_threshold_mask(self):
        g = gaussian_grid(n=256)
        eta = 1e-3
        ens = seed_particles(g, eta)
        mask = np.abs(g.values) >= eta * np.max(np.abs(g.values))
        assert ens.size == int(np.count_nonzero(mask))
        # Row-major scan order fixes the weight sequence.
        assert np.array_equal(ens.weights, g.values[mask])
        ii, jj = np.nonzero(mask)
        assert np.array_equal(ens.x, g.x_min + ii * g.dx)
        assert np.array_equal(ens.k, g.k_min + jj * g.dk)

    def test_negative_weights_are_kept(self):
        values = np.zeros((8, 9))
        values[2, 3] = -1.0
        values[4, 4] = 0.5
        ens = seed_particles(make_grid(values), 0.25)
        assert set(ens.weights) == {-1.0, 0.5}


class TestEnsembleValidation:
    def test_mismatched_shapes(self):
        with pytest.raises(UsageError, match="equal length"):
            ParticleEnsemble(x=np.zeros(3), k=np.zeros(2), weights=np.zeros(3),
                             epsilon=1.0, sigma_x=0.0, sigma_k=0.0,
                             seed_dx=0.1, seed_dk=0.1)

    def test_empty(self):
        with pytest.raises(SeedingError, match="no particles"):
            ParticleEnsemble(x=np.zeros(0), k=np.zeros(0), weights=np.zeros(0),
                             epsilon=1.0, sigma_x=0.0, sigma_k=0.0,
                             seed_dx=0.1, seed_dk=0.1)

    def test_non_finite(self):
        with pytest.raises(UsageError, match="non-finite"):
            ParticleEnsemble(x=np.array([np.nan]), k=np.zeros(1), weights=np.ones(1),
                             epsilon=1.0, sigma_x=0.0, sigma_k=0.0,
                             seed_dx=0.1, seed_dk=0.1)

    def test_non_positive_spacing(self):
        with pytest.raises(UsageError, match="spacings"):
            ParticleEnsemble(x=np.zeros(1), k=np.zeros(1), weights=np.ones(1),
                             epsilon=1.0, sigma_x=0.0, sigma_k=0.0,
                             seed_dx=0.0, seed_dk=0.1)


def _one_particle(x, k, t=0.0):
    return ParticleEnsemble(x=np.array([x]), k=np.array([k]),
                            weights=np.array([1.0]), epsilon=1.0,
                            sigma_x=0.0, sigma_k=0.0,
                            seed_dx=0.1, seed_dk=0.1, t=t)


class TestAdvance:
    def test_free_streaming(self):
        ens = advance(_one_particle(0.0, 0.5), Zero(), 1.0, h=0.01)
        assert ens.x[0] == pytest.approx(np.pi, abs=1e-10)
        assert ens.k[0] == pytest.approx(0.5, abs=1e-12)
        assert ens.t == 1.0

    def test_constant_force(self):
        # V = x: k(t) = k0 - t/(2 pi), x(t) = x0 + 2 pi k0 t - t^2/2.
        t = 2.0 * np.pi
        ens = advance(_one_particle(0.0, 0.0), Linear(1.0), t, h=t / 512)
        assert ens.x[0] == pytest.approx(-2.0 * np.pi**2, abs=1e-10)
        assert ens.k[0] == pytest.approx(-1.0, abs=1e-12)
        field = HamiltonianField(Linear(1.0))
        assert abs(field.energy(ens.x, ens.k)[()] - 0.0) < 1e-10

    def test_weights_untouched(self):
        rng = np.random.default_rng(3)
        ens = ParticleEnsemble(x=rng.standard_normal(50), k=rng.standard_normal(50),
                               weights=rng.standard_normal(50), epsilon=1.0,
                               sigma_x=0.0, sigma_k=0.0, seed_dx=0.1, seed_dk=0.1)
        out = advance(ens, Quadratic(), 0.7, h=0.01)
        assert np.array_equal(out.weights, ens.weights)

    def test_zero_duration_copies(self):
        ens = _one_particle(0.3, -0.2, t=0.5)
        out = advance(ens, Zero(), 0.5, h=0.01)
        assert out.x is not ens.x
        assert np.array_equal(out.x, ens.x) and np.array_equal(out.k, ens.k)

    def test_backwards_target_rejected(self):
        with pytest.raises(UsageError, match="precedes"):
            advance(_one_particle(0.0, 0.0, t=1.0), Zero(), 0.5, h=0.01)

    def test_non_positive_step_rejected(self):
        with pytest.raises(UsageError, match="step h"):
            advance(_one_particle(0.0, 0.0), Zero(), 1.0, h=0.0)

    @pytest.mark.parametrize("potential", [Zero(), Linear(1.0), Quadratic(1.0)])
    def test_energy_conserved_at_default_step(self, potential):
        rng = np.random.default_rng(17)
        ens = ParticleEnsemble(x=rng.uniform(-1, 1, 8), k=rng.uniform(-1, 1, 8),
                               weights=np.ones(8), epsilon=1.0,
                               sigma_x=0.0, sigma_k=0.0, seed_dx=0.1, seed_dk=0.1)
        h = default_step(potential, 1.0, 1.0, -1.0, 1.0)
        field = HamiltonianField(potential)
        before = field.energy(ens.x, ens.k)
        out = advance(ens, potential, 1.0, h=h)
        after = field.energy(out.x, out.k)
        assert np.max(np.abs(after - before)) < 1e-10

    @pytest.mark.parametrize("potential", [Zero(), Linear(1.0)])
    def test_shear_flow_preserves_area(self, potential):
        # Liouville: the unit square keeps area 1 under the flow.  For
        # potentials with constant force RK4 reproduces the flow exactly,
        # so the shoelace area is exact to roundoff.
        corners = ParticleEnsemble(
            x=np.array([0.0, 1.0, 1.0, 0.0]), k=np.array([0.0, 0.0, 1.0, 1.0]),
            weights=np.ones(4), epsilon=1.0, sigma_x=0.0, sigma_k=0.0,
            seed_dx=0.1, seed_dk=0.1)
        out = advance(corners, potential, 0.7, h=0.007)
        x, k = out.x, out.k
        area = 0.5 * abs(np.dot(x, np.roll(k, -1)) - np.dot(k, np.roll(x, -1)))
        assert area == pytest.approx(1.0, abs=1e-10)


class TestReconstruct:
    def test_seeded_nodes_recover_exactly(self, warmed):
        g = gaussian_grid(n=64)
        ens = seed_particles(g, 1e-3)
        rec, gap = reconstruct(ens, g)
        mask = np.abs(g.values) >= 1e-3 * np.max(np.abs(g.values))
        # On-node particles hit the exact-match branch of the gather.
        assert np.array_equal(rec.values[mask], g.values[mask])
        assert 0.0 <= gap < 1.0
        assert rec.sigma_x == g.sigma_x and rec.t == g.t

    def test_free_streaming_shift_lands_on_nodes(self, warmed):
        # dx == dk and t = 1/(2 pi) turn the shear x -> x + k into a whole
        # number of grid cells on every row, so transported particles sit
        # on nodes again and the gather is exact there.
        g = gaussian_grid(n=64)
        t = 1.0 / (2.0 * np.pi)
        ens = advance(seed_particles(g, 1e-3), Zero(), t, h=t / 64)
        rec, _ = reconstruct(ens, g)
        xg, kg = np.meshgrid(g.x, g.k, indexing="ij")
        expected = np.exp(-np.pi * ((xg - kg) ** 2 + kg**2))
        mask = expected >= 1e-3
        assert np.max(np.abs(rec.values[mask] - expected[mask])) < 1e-9

    def test_far_particles_leave_full_gap(self, warmed):
        ens = _one_particle(50.0, 50.0)
        like = make_grid(np.ones((8, 9)))
        rec, gap = reconstruct(ens, like)
        assert gap == 1.0
        assert np.all(rec.values == 0.0)


class TestBacktrace:
    def test_zero_time_is_identity(self):
        g = gaussian_grid(n=32)
        out = backtrace_evaluate(g, Zero(), 0.0)
        assert np.allclose(out.values, g.values, atol=1e-12)
        assert out.t == g.t

    def test_negative_time_rejected(self):
        with pytest.raises(UsageError, match="non-negative"):
            backtrace_evaluate(gaussian_grid(n=32), Zero(), -0.1)

    def test_free_streaming_matches_sheared_profile(self):
        g = gaussian_grid(n=64)
        t = 1.0 / (2.0 * np.pi)
        out = backtrace_evaluate(g, Zero(), t)
        xg, kg = np.meshgrid(g.x, g.k, indexing="ij")
        expected = np.exp(-np.pi * ((xg - kg) ** 2 + kg**2))
        mask = (np.abs(xg - kg) < 2.5) & (np.abs(kg) < 2.5)
        assert np.max(np.abs(out.values - expected)[mask]) < 1e-9

    def test_constant_force_matches_closed_form(self):
        # Foot point of (x, k): (x - 2 pi k t - t^2/2, k + t/(2 pi)).
        g = gaussian_grid(n=256)
        t = 0.5
        out = backtrace_evaluate(g, Linear(1.0), t)
        xg, kg = np.meshgrid(g.x, g.k, indexing="ij")
        x0 = xg - 2.0 * np.pi * kg * t - 0.5 * t**2
        k0 = kg + t / (2.0 * np.pi)
        expected = np.exp(-np.pi * (x0**2 + k0**2))
        mask = (np.abs(x0) < 2.5) & (np.abs(k0) < 2.5)
        assert np.max(np.abs(out.values - expected)[mask]) < 1e-3

    def test_default_arguments_match_explicit(self):
        g = gaussian_grid(n=32)
        h = default_step(Zero(), 3.0, 0.25, g.x_min, g.x_max)
        a = backtrace_evaluate(g, Zero(), 0.25)
        b = backtrace_evaluate(g, Zero(), 0.25, like=g, h=h)
        assert np.array_equal(a.values, b.values)

    def test_agrees_with_particle_transport(self, warmed):
        g = gaussian_grid(n=128)
        t = 0.3
        h = default_step(Linear(1.0), 3.0, t, g.x_min, g.x_max)
        ens = advance(seed_particles(g, 1e-3), Linear(1.0), t, h=h)
        rec, _ = reconstruct(ens, g)
        back = backtrace_evaluate(g, Linear(1.0), t, h=h)
        peak = np.max(np.abs(back.values))
        assert np.max(np.abs(rec.values - back.values)) < 0.05 * peak
