"""File formats: SWTG/SWTC binaries, density/ensemble/bench CSVs.

All binary payloads are little-endian; all CSV floats are written with
repr, which round-trips float64 exactly.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import UsageError

_SWTG_HEADER = struct.Struct("<4sIII8d")
_SWTC_HEADER = struct.Struct("<4sII5d")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_swtg(path, grid) -> None:
    """Serialize a PhaseSpaceGrid: SWTG magic, version 1, counts, axis
    metadata, then row-major float64 values."""
    from .phasespace import PhaseSpaceGrid

    if not isinstance(grid, PhaseSpaceGrid):
        raise UsageError("write_swtg expects a PhaseSpaceGrid")
    header = _SWTG_HEADER.pack(
        b"SWTG", 1, grid.n_x, grid.n_k,
        grid.x_min, grid.x_max, grid.k_min, grid.k_max,
        grid.epsilon, grid.sigma_x, grid.sigma_k, grid.t,
    )
    payload = np.ascontiguousarray(grid.values, dtype="<f8").tobytes()
    Path(path).write_bytes(header + payload)


def read_swtg(path):
    from .phasespace import PhaseSpaceGrid

    raw = Path(path).read_bytes()
    if len(raw) < _SWTG_HEADER.size:
        raise UsageError(f"{path}: truncated SWTG header")
    magic, version, n_x, n_k, x_min, x_max, k_min, k_max, eps, sx, sk, t = \
        _SWTG_HEADER.unpack_from(raw)
    if magic != b"SWTG":
        raise UsageError(f"{path}: bad magic {magic!r}, expected SWTG")
    if version != 1:
        raise UsageError(f"{path}: unsupported SWTG version {version}")
    expected = _SWTG_HEADER.size + 8 * n_x * n_k
    if len(raw) != expected:
        raise UsageError(f"{path}: size {len(raw)} does not match header ({expected} expected)")
    values = np.frombuffer(raw, dtype="<f8", offset=_SWTG_HEADER.size).reshape(n_x, n_k).copy()
    return PhaseSpaceGrid(x_min, x_max, k_min, k_max, eps, sx, sk, values, t)


def write_swtc(path, grid) -> None:
    """Serialize a WavefunctionGrid: SWTC magic, version 1, n_x, axis
    metadata, then interleaved little-endian complex128 samples."""
    from .signals import WavefunctionGrid

    if not isinstance(grid, WavefunctionGrid):
        raise UsageError("write_swtc expects a WavefunctionGrid")
    header = _SWTC_HEADER.pack(
        b"SWTC", 1, grid.n_x, grid.x_min, grid.x_max, grid.epsilon, grid.t, 0.0,
    )
    payload = np.ascontiguousarray(grid.values, dtype="<c16").tobytes()
    Path(path).write_bytes(header + payload)


def read_swtc(path):
    from .signals import WavefunctionGrid

    raw = Path(path).read_bytes()
    if len(raw) < _SWTC_HEADER.size:
        raise UsageError(f"{path}: truncated SWTC header")
    magic, version, n_x, x_min, x_max, eps, t, _pad = _SWTC_HEADER.unpack_from(raw)
    if magic != b"SWTC":
        raise UsageError(f"{path}: bad magic {magic!r}, expected SWTC")
    if version != 1:
        raise UsageError(f"{path}: unsupported SWTC version {version}")
    expected = _SWTC_HEADER.size + 16 * n_x
    if len(raw) != expected:
        raise UsageError(f"{path}: size {len(raw)} does not match header ({expected} expected)")
    values = np.frombuffer(raw, dtype="<c16", offset=_SWTC_HEADER.size).copy()
    return WavefunctionGrid(x_min, x_max, eps, values, t)


def write_wavefunction_csv(path, grid) -> None:
    """Snapshot export: x,re,im rows."""
    x = grid.x
    with open(path, "w") as fh:
        fh.write(f"# t={_fmt(grid.t)} epsilon={_fmt(grid.epsilon)}\n")
        fh.write("x,re,im\n")
        for i in range(grid.n_x):
            v = grid.values[i]
            fh.write(f"{_fmt(x[i])},{_fmt(v.real)},{_fmt(v.imag)}\n")


def write_phase_space_csv(path, grid) -> None:
    """Full-grid CSV export: x,k,value rows (large; prefer SWTG for size)."""
    x = grid.x
    k = grid.k
    with open(path, "w") as fh:
        fh.write("x,k,value\n")
        for i in range(grid.n_x):
            xi = _fmt(x[i])
            row = grid.values[i]
            for j in range(grid.n_k):
                fh.write(f"{xi},{_fmt(k[j])},{_fmt(row[j])}\n")


def write_density_csv(path, profile) -> None:
    with open(path, "w") as fh:
        fh.write(
            f"# kind={profile.kind} t={_fmt(profile.t)} epsilon={_fmt(profile.epsilon)} "
            f"sigma_x={_fmt(profile.sigma_x)}\n"
        )
        fh.write("x,value\n")
        x = profile.x
        for i in range(x.shape[0]):
            fh.write(f"{_fmt(x[i])},{_fmt(profile.values[i])}\n")


def read_density_csv(path):
    from .observables import DensityProfile

    meta = {"kind": "norm_density", "t": 0.0, "epsilon": 1.0, "sigma_x": 0.0}
    xs: list[float] = []
    vals: list[float] = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if "=" in tok:
                        key, _, val = tok.partition("=")
                        if key == "kind":
                            meta["kind"] = val
                        elif key in ("t", "epsilon", "sigma_x"):
                            meta[key] = float(val)
                continue
            if line == "x,value":
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise UsageError(f"{path}:{line_no}: expected 'x,value', got {line!r}")
            try:
                xs.append(float(parts[0]))
                vals.append(float(parts[1]))
            except ValueError as exc:
                raise UsageError(f"{path}:{line_no}: {exc}") from None
    if len(xs) < 2:
        raise UsageError(f"{path}: density file holds fewer than two samples")
    x = np.asarray(xs)
    dx = np.diff(x)
    if not np.allclose(dx, dx[0], rtol=1e-9, atol=0.0):
        raise UsageError(f"{path}: x axis is not uniform")
    return DensityProfile(
        x_min=float(x[0]),
        x_max=float(x[0] + dx[0] * x.shape[0]),
        values=np.asarray(vals),
        kind=meta["kind"],
        epsilon=meta["epsilon"],
        sigma_x=meta["sigma_x"],
        t=meta["t"],
    )


def write_ensemble_csv(path, ens) -> None:
    with open(path, "w") as fh:
        fh.write(
            f"# t={_fmt(ens.t)} epsilon={_fmt(ens.epsilon)} sigma_x={_fmt(ens.sigma_x)} "
            f"sigma_k={_fmt(ens.sigma_k)} seed_dx={_fmt(ens.seed_dx)} seed_dk={_fmt(ens.seed_dk)}\n"
        )
        fh.write("x,k,weight\n")
        for i in range(ens.size):
            fh.write(f"{_fmt(ens.x[i])},{_fmt(ens.k[i])},{_fmt(ens.weights[i])}\n")


def read_ensemble_csv(path):
    from .dynamics import ParticleEnsemble

    meta: dict[str, float] = {}
    rows: list[tuple[float, float, float]] = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if "=" in tok:
                        key, _, val = tok.partition("=")
                        meta[key] = float(val)
                continue
            if line == "x,k,weight":
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise UsageError(f"{path}:{line_no}: expected 'x,k,weight', got {line!r}")
            try:
                rows.append((float(parts[0]), float(parts[1]), float(parts[2])))
            except ValueError as exc:
                raise UsageError(f"{path}:{line_no}: {exc}") from None
    if not rows:
        raise UsageError(f"{path}: ensemble file holds no particles")
    arr = np.asarray(rows)
    return ParticleEnsemble(
        x=arr[:, 0],
        k=arr[:, 1],
        weights=arr[:, 2],
        epsilon=meta.get("epsilon", 1.0),
        sigma_x=meta.get("sigma_x", 0.0),
        sigma_k=meta.get("sigma_k", 0.0),
        seed_dx=meta.get("seed_dx", 1.0),
        seed_dk=meta.get("seed_dk", 1.0),
        t=meta.get("t", 0.0),
    )


BENCH_COLUMNS = (
    "epsilon", "inv_epsilon", "t_sample", "t_wt", "t_smooth", "t_seed",
    "t_advance", "t_reconstruct", "t_total_swt", "t_reference",
    "particles", "n_x", "n_k", "l1_rel", "coverage_gap",
)


def write_bench_csv(path, rows: list[dict]) -> None:
    """rows hold the BENCH_COLUMNS keys; integers stay integers in the file."""
    with open(path, "w") as fh:
        fh.write(",".join(BENCH_COLUMNS) + "\n")
        for row in rows:
            cells = []
            for col in BENCH_COLUMNS:
                val = row[col]
                cells.append(str(val) if isinstance(val, int) else _fmt(val))
            fh.write(",".join(cells) + "\n")


def read_bench_csv(path) -> list[dict]:
    rows: list[dict] = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header.split(",") != list(BENCH_COLUMNS):
            raise UsageError(f"{path}: unexpected bench CSV header {header!r}")
        for line_no, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(BENCH_COLUMNS):
                raise UsageError(f"{path}:{line_no}: expected {len(BENCH_COLUMNS)} cells")
            row: dict = {}
            for col, cell in zip(BENCH_COLUMNS, parts):
                if col in ("particles", "n_x", "n_k"):
                    row[col] = int(cell)
                else:
                    row[col] = float(cell)
            rows.append(row)
    return rows
