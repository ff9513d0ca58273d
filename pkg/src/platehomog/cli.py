"""Command-line front end.

Exit codes: 2 invalid arguments, 3 generation failure, 4 solver
non-convergence, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from platehomog import report
from platehomog.material import MaterialField, isotropic_elasticity, load_material_table, multi_material_field
from platehomog.plate import PlateGeometry, homogenize_plate
from platehomog.solver import ConvergenceError
from platehomog.studies import (CONVERGENCE_HEADER, SIZE_EFFECT_HEADER, SolverOptions, compare,
                                convergence_sweep, size_effect_sweep, volume_abd)
from platehomog.thermal import homogenize_thermal
from platehomog.voxelgen import (DensityUnattainableError, LatticeSpec, VoxelGrid, add_skins,
                                 generate_bcc, generate_tpms)

log = logging.getLogger("platehomog")

EXIT_ARGS, EXIT_GENERATION, EXIT_CONVERGENCE, EXIT_IO = 2, 3, 4, 5


class UsageError(Exception):
    pass


def _solver_opts(args) -> SolverOptions:
    threads = args.threads
    if threads is None and os.environ.get("HOMOG_THREADS"):
        threads = int(os.environ["HOMOG_THREADS"])
    if args.cg_tol <= 0 or args.cg_maxiter < 1:
        raise UsageError("--cg-tol must be positive and --cg-maxiter at least 1")
    return SolverOptions(args.cg_tol, args.cg_maxiter, threads)


def _load_grid(args) -> VoxelGrid:
    try:
        grid = VoxelGrid.load(args.input)
    except (OSError, ValueError) as exc:
        raise OSError(f"cannot read voxel file {args.input}: {exc}") from exc
    if getattr(args, "skin", None):
        bottom, top = args.skin
        grid = add_skins(grid, bottom, top, args.skin_id)
    return grid


def _geometry(args, grid: VoxelGrid) -> PlateGeometry:
    if args.thickness <= 0:
        raise UsageError("--thickness must be positive")
    return PlateGeometry.for_grid(grid, args.thickness, args.cells)


def _material(args, grid: VoxelGrid, geom: PlateGeometry) -> MaterialField:
    ids = grid.data[grid.data > 0]
    if args.materials:
        return multi_material_field(ids, load_material_table(args.materials))
    if args.E is None:
        raise UsageError("give --E/--nu or --materials")
    if args.upper_E is None:
        return MaterialField.homogeneous(isotropic_elasticity(args.E, args.nu))
    # two phases split at the mid-surface: upper_E above, E on and below
    nz = grid.nz
    dz = geom.thickness / nz
    z = (np.arange(nz) + 0.5) * dz - geom.thickness / 2
    upper = np.broadcast_to(z > 0, grid.shape)[grid.data > 0]
    return multi_material_field(np.where(upper, 2, 1), {1: (args.E, args.nu), 2: (args.upper_E, args.nu)})


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "wall_time_s"}
    return obj


def _emit(args, payload: dict, table: str, csv_text: str | None = None) -> None:
    if args.no_timing:
        payload = _strip_timing(payload)
    text = report.canonical_json(payload)
    if args.json:
        Path(args.json).write_text(text)
        print(table)
    else:
        sys.stdout.write(text)
        print(table, file=sys.stderr)
    if csv_text is not None and args.csv:
        Path(args.csv).write_text(csv_text)


def cmd_generate(args) -> int:
    if args.kind == "bcc":
        spec = LatticeSpec("bcc", tuple(args.cells), args.res, args.density, True)
        grid = generate_bcc(spec)
    else:
        spec = LatticeSpec(args.family, tuple(args.cells), args.res, args.density, args.sheet)
        grid = generate_tpms(spec)
    grid.save(args.output)
    print(f"wrote {args.output}: shape {grid.shape}, solid fraction {grid.solid_fraction():.6f}")
    return 0


def cmd_plate(args) -> int:
    grid = _load_grid(args)
    geom = _geometry(args, grid)
    field = _material(args, grid, geom)
    opts = _solver_opts(args)
    res = homogenize_plate(grid, field, geom, opts.tol, opts.maxiter, opts.threads)
    _emit(args, res.to_dict(), report.format_matrix(res.abd.m, split=3), report.matrix_csv(res.abd.m))
    return 0


def cmd_volume(args) -> int:
    grid = _load_grid(args)
    geom = _geometry(args, grid)
    field = _material(args, grid, geom)
    vol, q, abd = volume_abd(grid, field, geom.lengths, geom.thickness, _solver_opts(args))
    payload = {"C_H": vol.c_h.tolist(), "Q_H": q.tolist(), "ABD_analytic": abd.m.tolist(),
               "meta": {"solver_residuals": vol.residuals.tolist(), "wall_time_s": vol.wall_time_s}}
    _emit(args, payload, report.format_matrix(vol.c_h), report.matrix_csv(abd.m))
    return 0


def cmd_thermal(args) -> int:
    grid = _load_grid(args)
    geom = _geometry(args, grid)
    if args.k <= 0:
        raise UsageError("--k must be positive")
    opts = _solver_opts(args)
    res = homogenize_thermal(grid, args.k, geom, opts.tol, opts.maxiter, opts.threads)
    _emit(args, res.to_dict(), report.format_matrix(res.k_hom), report.matrix_csv(res.k_hom))
    return 0


def cmd_compare(args) -> int:
    grid = _load_grid(args)
    geom = _geometry(args, grid)
    field = _material(args, grid, geom)
    out = compare(grid, field, geom, _solver_opts(args))
    table = ("LPS-H\n" + report.format_matrix(np.array(out["lps_abd"]), split=3)
             + "\nLVS-H\n" + report.format_matrix(np.array(out["lvs_abd"]), split=3))
    _emit(args, out, table)
    return 0


def _write_rows(args, header, rows) -> None:
    text = report.rows_csv(header, rows)
    if args.output:
        Path(args.output).write_text(text)
    sys.stdout.write(text)


def cmd_sweep_convergence(args) -> int:
    if args.max < args.min or args.step < 1:
        raise UsageError("sweep range must satisfy min <= max and step >= 1")
    rows = convergence_sweep(args.family, args.density, args.sheet, range(args.min, args.max + 1, args.step),
                             args.E, args.nu, args.thickness, tuple(args.cells), _solver_opts(args))
    _write_rows(args, CONVERGENCE_HEADER, rows)
    return 0


def cmd_sweep_size_effect(args) -> int:
    if args.nz_max < args.nz_min or args.nz_min < 1:
        raise UsageError("Nz range must satisfy 1 <= nz-min <= nz-max")
    rows = size_effect_sweep(args.family, args.density, args.sheet, args.res,
                             range(args.nz_min, args.nz_max + 1), args.E, args.nu, args.thickness,
                             _solver_opts(args))
    _write_rows(args, SIZE_EFFECT_HEADER, rows)
    return 0


def _add_solver_flags(p) -> None:
    p.add_argument("--cg-tol", type=float, default=1e-6, help="relative residual tolerance")
    p.add_argument("--cg-maxiter", type=int, default=5000)
    p.add_argument("--threads", type=int, default=None, help="worker cap (default: $HOMOG_THREADS or 1)")


def _add_analysis_flags(p, material=True) -> None:
    p.add_argument("-i", "--input", required=True, help="VXL1 voxel file")
    p.add_argument("--thickness", type=float, required=True, help="plate thickness h (mm)")
    p.add_argument("--cells", type=int, nargs=3, default=[1, 1, 1], metavar=("NX", "NY", "NZ"))
    p.add_argument("--skin", type=int, nargs=2, metavar=("BOTTOM", "TOP"), help="add solid skin layers")
    p.add_argument("--skin-id", type=int, default=1)
    if material:
        p.add_argument("--E", type=float, help="Young's modulus (MPa)")
        p.add_argument("--nu", type=float, default=0.3)
        p.add_argument("--materials", help='material table JSON {"1": {"E": .., "nu": ..}}')
        p.add_argument("--upper-E", type=float, help="modulus of elements above the mid-surface")
    p.add_argument("--json", help="write result JSON here instead of stdout")
    p.add_argument("--csv", help="also write the matrix as CSV")
    p.add_argument("--no-timing", action="store_true", help="omit wall_time_s so repeated runs are byte-identical")
    _add_solver_flags(p)


def _add_lattice_flags(p, res=True) -> None:
    p.add_argument("--family", default="primitive", choices=["primitive", "gyroid", "diamond", "iwp"])
    p.add_argument("--density", type=float, default=0.15)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--sheet", dest="sheet", action="store_true", default=True)
    mode.add_argument("--network", dest="sheet", action="store_false")
    if res:
        p.add_argument("--res", type=int, default=32, help="voxels per cell edge")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="platehomog", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a VXL1 lattice voxel file")
    gsub = gen.add_subparsers(dest="kind", required=True)
    tp = gsub.add_parser("tpms")
    _add_lattice_flags(tp)
    bcc = gsub.add_parser("bcc")
    bcc.add_argument("--density", type=float, default=0.15)
    bcc.add_argument("--res", type=int, default=32)
    for p in (tp, bcc):
        p.add_argument("--cells", type=int, nargs=3, default=[1, 1, 1], metavar=("NX", "NY", "NZ"))
        p.add_argument("-o", "--output", required=True)
        p.set_defaults(func=cmd_generate)

    p = sub.add_parser("plate", help="plate ABD (in-plane periodic, free surfaces)")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_plate)

    p = sub.add_parser("volume", help="3D-periodic baseline: C_H, Q_H and analytic ABD")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("thermal", help="in-plane effective conductance")
    _add_analysis_flags(p, material=False)
    p.add_argument("--k", type=float, required=True, help="base conductivity")
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("compare", help="plate vs volume-baseline ABD with relative errors")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep-convergence", help="A00/D00 versus cell resolution")
    _add_lattice_flags(p, res=False)
    p.add_argument("--min", type=int, default=20)
    p.add_argument("--max", type=int, default=125)
    p.add_argument("--step", type=int, default=5)
    p.add_argument("--cells", type=int, nargs=3, default=[1, 1, 1], metavar=("NX", "NY", "NZ"))
    p.add_argument("--E", type=float, default=1215.0)
    p.add_argument("--nu", type=float, default=0.35)
    p.add_argument("--thickness", type=float, default=10.0)
    p.add_argument("-o", "--output")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_sweep_convergence)

    p = sub.add_parser("sweep-size-effect", help="normalized stiffness versus cells through thickness")
    _add_lattice_flags(p)
    p.add_argument("--nz-min", type=int, default=1)
    p.add_argument("--nz-max", type=int, default=8)
    p.add_argument("--E", type=float, default=1215.0)
    p.add_argument("--nu", type=float, default=0.35)
    p.add_argument("--thickness", type=float, default=10.0)
    p.add_argument("-o", "--output")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_sweep_size_effect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except DensityUnattainableError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except ConvergenceError as exc:
        print(f"solver did not converge: {exc}\nresiduals: {exc.residuals.tolist()}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
