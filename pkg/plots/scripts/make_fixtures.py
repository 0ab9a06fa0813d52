"""Regenerate the binary fixtures under plots/test/fixtures.

Needs the sibling solver package installed (pip install -e ..).  Produces a
raw/smoothed transform pair for the chirped packet plus the expected ridge
locations.  The smoothing runs on the full wavenumber lattice so the kernel
is well sampled, and both grids are then restricted to the band that carries
the ridge, which keeps the fixtures small.

Run from the plots directory: python3 scripts/make_fixtures.py
"""

import dataclasses
import json
import pathlib
import shutil
import sys

import numpy as np

from swtsim.gridio import write_swtg
from swtsim.phasespace import SmoothingKernelSpec, smooth, wigner_transform
from swtsim.signals import builtin_problem, sample_problem

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "test" / "fixtures"
EPSILON = 0.04
N_X = 512
N_K = 1024
K_BAND = 3.0
BENCH_SOURCE = "/tmp/bench_acceptance.csv"


def restrict_band(grid, band):
    mask = np.abs(grid.k) <= band
    kept = grid.k[mask]
    return dataclasses.replace(
        grid,
        values=grid.values[:, mask],
        k_min=float(kept[0]),
        k_max=float(kept[-1]),
    )


def main() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    spec = builtin_problem("tanh_chirp", EPSILON)
    u = sample_problem(spec, N_X)

    w_full = wigner_transform(u, N_K)
    s_full = smooth(w_full, SmoothingKernelSpec(1.0, 1.0, truncation_radius=8.0))
    w = restrict_band(w_full, K_BAND)
    s = restrict_band(s_full, K_BAND)

    w_min, w_max = float(np.min(w.values)), float(np.max(w.values))
    s_min, s_max = float(np.min(s.values)), float(np.max(s.values))
    print(f"epsilon={EPSILON}  grids {w.values.shape} over k=[{w.k_min:.3f},{w.k_max:.3f}]")
    print(f"raw:      min/max = {w_min / w_max:.4f}")
    print(f"smoothed: floor/max = {s_min / s_max:.3e}")
    if not w_min < -0.1 * w_max:
        raise SystemExit("raw transform is not oscillatory enough for the contrast checks")
    if not s_min >= -1e-10 * s_max:
        raise SystemExit("smoothed transform floor is above the nonnegativity tolerance")

    write_swtg(FIXTURES / "chirp_wt.swtg", w)
    write_swtg(FIXTURES / "chirp_swt.swtg", s)

    # expected ridge: local wavenumber of the phase, sampled where the
    # envelope is strong
    slope = spec.phase.derivative()
    amp = spec.amplitude(w.x)
    core = np.where(amp > 0.5 * float(np.max(amp)))[0]
    picks = core[:: max(1, core.shape[0] // 9)]
    ridge = {
        "x": [float(w.x[i]) for i in picks],
        "k": [float(slope(w.x[i])) for i in picks],
        "dk": float(s.dk),
    }
    (FIXTURES / "ridge.json").write_text(json.dumps(ridge, indent=1) + "\n")

    bench = pathlib.Path(BENCH_SOURCE)
    if bench.exists():
        shutil.copy(bench, FIXTURES / "bench.csv")
        print(f"copied {bench}")
    else:
        print(f"note: {bench} missing, bench.csv fixture left as is")

    print(f"fixtures written to {FIXTURES}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
