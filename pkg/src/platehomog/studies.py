"""Parameter studies: mesh convergence, thickness size effect, plate vs volume comparison."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from platehomog.material import MaterialField, isotropic_elasticity
from platehomog.plate import PlateGeometry, homogenize_plate
from platehomog.volume import analytic_abd, homogenize_volume, static_condensation
from platehomog.voxelgen import LatticeSpec, VoxelGrid, generate

log = logging.getLogger(__name__)

CONVERGENCE_HEADER = ["N", "A00", "D00", "wall_time_s", "error"]
SIZE_EFFECT_HEADER = ["Nz", "A00", "A11", "A22", "D00", "D11", "D22", "error"]
DIAG = [0, 1, 2]


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-6
    maxiter: int = 5000
    threads: int | None = None


def convergence_sweep(family: str, density: float, sheet: bool, resolutions, E: float, nu: float,
                      thickness: float, cells=(1, 1, 1), opts: SolverOptions = SolverOptions()) -> list[list]:
    """One row (N, A00, D00, wall time, error) per resolution; failures do not stop the sweep."""
    field = MaterialField.homogeneous(isotropic_elasticity(E, nu))
    rows = []
    for n in resolutions:
        t0 = time.perf_counter()
        try:
            grid = generate(LatticeSpec(family, tuple(cells), int(n), density, sheet))
            res = homogenize_plate(grid, field, PlateGeometry.for_grid(grid, thickness, cells),
                                   opts.tol, opts.maxiter, opts.threads)
            rows.append([int(n), float(res.abd.m[0, 0]), float(res.abd.m[3, 3]),
                         time.perf_counter() - t0, ""])
        except Exception as exc:  # recorded per row, sweep continues
            log.warning("N=%s failed: %s", n, exc)
            rows.append([int(n), float("nan"), float("nan"), time.perf_counter() - t0,
                         f"ERROR:{type(exc).__name__}"])
        log.info("N=%s done: %s", n, rows[-1])
    return rows


def volume_abd(grid: VoxelGrid, field: MaterialField, lengths, thickness: float,
               opts: SolverOptions = SolverOptions()):
    vol = homogenize_volume(grid, field, lengths, opts.tol, opts.maxiter, opts.threads)
    q = static_condensation(vol.c_h)
    return vol, q, analytic_abd(q, thickness)


def size_effect_sweep(family: str, density: float, sheet: bool, res: int, nz_values, E: float,
                      nu: float, thickness: float, opts: SolverOptions = SolverOptions()) -> list[list]:
    """Plate stiffness of Nz-cell-thick plates normalized by the volume-baseline ABD."""
    field = MaterialField.homogeneous(isotropic_elasticity(E, nu))
    cell = generate(LatticeSpec(family, (1, 1, 1), res, density, sheet))
    # Q^H does not depend on the cell's physical size, so one unit-cell baseline serves every Nz
    _, _, lvs = volume_abd(cell, field, (1.0, 1.0, 1.0), thickness, opts)
    rows = []
    for nz in nz_values:
        try:
            grid = VoxelGrid(np.tile(cell.data, (1, 1, int(nz))))
            geom = PlateGeometry.for_grid(grid, thickness, (1, 1, int(nz)))
            lps = homogenize_plate(grid, field, geom, opts.tol, opts.maxiter, opts.threads).abd
            ratios = [lps.A[i, i] / lvs.A[i, i] for i in DIAG] + [lps.D[i, i] / lvs.D[i, i] for i in DIAG]
            rows.append([int(nz), *map(float, ratios), ""])
        except Exception as exc:
            log.warning("Nz=%s failed: %s", nz, exc)
            rows.append([int(nz), *[float("nan")] * 6, f"ERROR:{type(exc).__name__}"])
        log.info("Nz=%s done: %s", nz, rows[-1])
    return rows


def relative_error(lvs: np.ndarray, lps: np.ndarray, floor_factor: float = 1e-6) -> np.ndarray:
    """(LVS - LPS) / LPS entrywise, NaN where |LPS| is below floor_factor * max|LPS|."""
    floor = floor_factor * np.abs(lps).max()
    out = np.full(lps.shape, np.nan)
    ok = np.abs(lps) > floor
    out[ok] = (lvs[ok] - lps[ok]) / lps[ok]
    return out


def compare(grid: VoxelGrid, field: MaterialField, geom: PlateGeometry,
            opts: SolverOptions = SolverOptions()) -> dict:
    lps = homogenize_plate(grid, field, geom, opts.tol, opts.maxiter, opts.threads)
    vol, q, lvs = volume_abd(grid, field, geom.lengths, geom.thickness, opts)
    return {
        "lps_abd": lps.abd.m.tolist(),
        "lvs_abd": lvs.m.tolist(),
        "C_H": vol.c_h.tolist(),
        "Q_H": q.tolist(),
        "relative_error": [[None if np.isnan(v) else float(v) for v in row]
                           for row in relative_error(lvs.m, lps.abd.m)],
        "meta": {"lps_residuals": lps.residuals.tolist(), "lvs_residuals": vol.residuals.tolist(),
                 "wall_time_s": lps.wall_time_s + vol.wall_time_s},
    }
