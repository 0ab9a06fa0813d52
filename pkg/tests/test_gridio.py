"""Binary and CSV round-trips plus the corrupt-file diagnostics."""

import numpy as np
import pytest

from swtsim.dynamics import ParticleEnsemble
from swtsim.errors import UsageError
from swtsim.gridio import (
    BENCH_COLUMNS,
    read_bench_csv,
    read_density_csv,
    read_ensemble_csv,
    read_swtc,
    read_swtg,
    write_bench_csv,
    write_density_csv,
    write_ensemble_csv,
    write_phase_space_csv,
    write_swtc,
    write_swtg,
    write_wavefunction_csv,
)
from swtsim.observables import DensityProfile
from swtsim.signals import WavefunctionGrid


def _random_wavefunction(n_x=64):
    rng = np.random.default_rng(314159)
    values = rng.standard_normal(n_x) + 1j * rng.standard_normal(n_x)
    return WavefunctionGrid(x_min=-4.0, x_max=4.0, epsilon=0.25, values=values, t=0.5)


def _random_grid(make=None):
    rng = np.random.default_rng(20260822)
    values = rng.standard_normal((16, 9))
    from swtsim.phasespace import PhaseSpaceGrid

    return PhaseSpaceGrid(
        x_min=-2.5, x_max=3.5, k_min=-1.25, k_max=1.75,
        epsilon=0.0625, sigma_x=1.0, sigma_k=0.5,
        values=values, t=0.375,
    )


class TestSwtg:
    def test_round_trip_is_exact(self, tmp_path):
        grid = _random_grid()
        path = tmp_path / "grid.swtg"
        write_swtg(path, grid)
        back = read_swtg(path)
        assert back.n_x == grid.n_x and back.n_k == grid.n_k
        for name in ("x_min", "x_max", "k_min", "k_max",
                     "epsilon", "sigma_x", "sigma_k", "t"):
            assert getattr(back, name) == getattr(grid, name)
        assert np.array_equal(back.values, grid.values)

    def test_rejects_non_grid_payload(self, tmp_path):
        with pytest.raises(UsageError, match="expects a PhaseSpaceGrid"):
            write_swtg(tmp_path / "x.swtg", object())

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "short.swtg"
        path.write_bytes(b"SWTG\x01")
        with pytest.raises(UsageError, match="truncated SWTG header"):
            read_swtg(path)

    def test_bad_magic(self, tmp_path):
        grid = _random_grid()
        path = tmp_path / "grid.swtg"
        write_swtg(path, grid)
        raw = bytearray(path.read_bytes())
        raw[:4] = b"NOPE"
        path.write_bytes(bytes(raw))
        with pytest.raises(UsageError, match="bad magic"):
            read_swtg(path)

    def test_unsupported_version(self, tmp_path):
        grid = _random_grid()
        path = tmp_path / "grid.swtg"
        write_swtg(path, grid)
        raw = bytearray(path.read_bytes())
        raw[4] = 2
        path.write_bytes(bytes(raw))
        with pytest.raises(UsageError, match="unsupported SWTG version 2"):
            read_swtg(path)

    def test_size_mismatch(self, tmp_path):
        grid = _random_grid()
        path = tmp_path / "grid.swtg"
        write_swtg(path, grid)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(UsageError, match="does not match header"):
            read_swtg(path)


class TestSwtc:
    def test_round_trip_is_exact(self, tmp_path):
        u = _random_wavefunction(64)
        path = tmp_path / "wave.swtc"
        write_swtc(path, u)
        back = read_swtc(path)
        assert back.n_x == u.n_x
        for name in ("x_min", "x_max", "epsilon", "t"):
            assert getattr(back, name) == getattr(u, name)
        assert np.array_equal(back.values, u.values)

    def test_rejects_non_wavefunction_payload(self, tmp_path):
        with pytest.raises(UsageError, match="expects a WavefunctionGrid"):
            write_swtc(tmp_path / "x.swtc", np.zeros(4))

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "short.swtc"
        path.write_bytes(b"SWTC")
        with pytest.raises(UsageError, match="truncated SWTC header"):
            read_swtc(path)

    def test_bad_magic(self, tmp_path):
        u = _random_wavefunction(16)
        path = tmp_path / "wave.swtc"
        write_swtc(path, u)
        raw = bytearray(path.read_bytes())
        raw[:4] = b"SWTG"
        path.write_bytes(bytes(raw))
        with pytest.raises(UsageError, match="bad magic"):
            read_swtc(path)

    def test_size_mismatch(self, tmp_path):
        u = _random_wavefunction(16)
        path = tmp_path / "wave.swtc"
        write_swtc(path, u)
        path.write_bytes(path.read_bytes() + b"\x00" * 4)
        with pytest.raises(UsageError, match="does not match header"):
            read_swtc(path)


class TestDensityCsv:
    def _profile(self):
        rng = np.random.default_rng(7)
        return DensityProfile(
            x_min=-1.5, x_max=2.5, values=rng.random(24) + 0.01,
            kind="norm_density", epsilon=0.125, sigma_x=1.0, t=0.75,
        )

    def test_round_trip(self, tmp_path):
        prof = self._profile()
        path = tmp_path / "density.csv"
        write_density_csv(path, prof)
        back = read_density_csv(path)
        assert np.array_equal(back.values, prof.values)
        assert back.kind == prof.kind
        assert back.epsilon == prof.epsilon
        assert back.sigma_x == prof.sigma_x
        assert back.t == prof.t
        assert back.x_min == prof.x_min
        assert back.x_max == pytest.approx(prof.x_max, rel=1e-12)

    def test_malformed_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,value\n0.0,1.0\n0.5\n")
        with pytest.raises(UsageError, match="expected 'x,value'"):
            read_density_csv(path)

    def test_too_few_samples(self, tmp_path):
        path = tmp_path / "tiny.csv"
        path.write_text("x,value\n0.0,1.0\n")
        with pytest.raises(UsageError, match="fewer than two samples"):
            read_density_csv(path)

    def test_non_uniform_axis(self, tmp_path):
        path = tmp_path / "warped.csv"
        path.write_text("x,value\n0.0,1.0\n0.5,1.0\n1.2,1.0\n")
        with pytest.raises(UsageError, match="not uniform"):
            read_density_csv(path)

    def test_non_numeric_cell(self, tmp_path):
        path = tmp_path / "text.csv"
        path.write_text("x,value\n0.0,1.0\n0.5,abc\n")
        with pytest.raises(UsageError, match=":3:"):
            read_density_csv(path)


class TestEnsembleCsv:
    def _ensemble(self):
        rng = np.random.default_rng(11)
        return ParticleEnsemble(
            x=rng.standard_normal(40), k=rng.standard_normal(40),
            weights=rng.random(40), epsilon=0.0625,
            sigma_x=1.0, sigma_k=0.25,
            seed_dx=0.01, seed_dk=0.02, t=1.5,
        )

    def test_round_trip(self, tmp_path):
        ens = self._ensemble()
        path = tmp_path / "ensemble.csv"
        write_ensemble_csv(path, ens)
        back = read_ensemble_csv(path)
        assert np.array_equal(back.x, ens.x)
        assert np.array_equal(back.k, ens.k)
        assert np.array_equal(back.weights, ens.weights)
        for name in ("epsilon", "sigma_x", "sigma_k", "seed_dx", "seed_dk", "t"):
            assert getattr(back, name) == getattr(ens, name)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("# t=0.0 epsilon=1.0\nx,k,weight\n")
        with pytest.raises(UsageError, match="no particles"):
            read_ensemble_csv(path)

    def test_malformed_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,k,weight\n0.0,0.0\n")
        with pytest.raises(UsageError, match="expected 'x,k,weight'"):
            read_ensemble_csv(path)


class TestBenchCsv:
    def _rows(self):
        rows = []
        for i, eps in enumerate((0.125, 0.0625)):
            row = {col: float(i) + 0.25 for col in BENCH_COLUMNS}
            row["epsilon"] = eps
            row["inv_epsilon"] = 1.0 / eps
            row["particles"] = 1000 + i
            row["n_x"] = 2048
            row["n_k"] = 512
            rows.append(row)
        return rows

    def test_round_trip_preserves_types(self, tmp_path):
        rows = self._rows()
        path = tmp_path / "bench.csv"
        write_bench_csv(path, rows)
        back = read_bench_csv(path)
        assert back == rows
        assert isinstance(back[0]["particles"], int)
        assert isinstance(back[0]["l1_rel"], float)

    def test_unexpected_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("epsilon,t_total\n0.5,1.0\n")
        with pytest.raises(UsageError, match="unexpected bench CSV header"):
            read_bench_csv(path)

    def test_wrong_cell_count(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text(",".join(BENCH_COLUMNS) + "\n0.5,2.0\n")
        with pytest.raises(UsageError, match="expected 15 cells"):
            read_bench_csv(path)


class TestTextExports:
    def test_wavefunction_csv_rows_parse_back(self, tmp_path):
        u = _random_wavefunction(8)
        path = tmp_path / "wave.csv"
        write_wavefunction_csv(path, u)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# t=") and "epsilon=" in lines[0]
        assert lines[1] == "x,re,im"
        assert len(lines) == 2 + u.n_x
        cells = lines[2].split(",")
        assert float(cells[0]) == u.x[0]
        assert complex(float(cells[1]), float(cells[2])) == u.values[0]

    def test_phase_space_csv_covers_grid(self, tmp_path):
        grid = _random_grid()
        path = tmp_path / "grid.csv"
        write_phase_space_csv(path, grid)
        lines = path.read_text().splitlines()
        assert lines[0] == "x,k,value"
        assert len(lines) == 1 + grid.n_x * grid.n_k
        cells = lines[-1].split(",")
        assert float(cells[0]) == grid.x[-1]
        assert float(cells[1]) == grid.k[-1]
        assert float(cells[2]) == grid.values[-1, -1]
