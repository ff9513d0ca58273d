"""Bi-material Primitive plate (1215 MPa below / 500 MPa above mid-surface) and in-plane conduction.

    python scripts/extensions.py [--res 96]
"""

import argparse
import logging

import numpy as np

from platehomog import (LatticeSpec, PlateGeometry, VoxelGrid, generate_tpms, homogenize_plate,
                        homogenize_thermal, multi_material_field)
from platehomog.dofmap import build_dof_map
from platehomog.report import format_matrix


def bimaterial_field(grid, geom, e_lower=1215.0, e_upper=500.0, nu=0.35):
    dm = build_dof_map(grid.data, *geom.spacing, geom.thickness)
    return multi_material_field(np.where(dm.z_active > 0, 2, 1), {1: (e_lower, nu), 2: (e_upper, nu)})


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--res", type=int, default=96)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO)
    grid = generate_tpms(LatticeSpec("primitive", (1, 1, 1), args.res, 0.15, True))
    geom = PlateGeometry.for_grid(grid, 10.0)

    res = homogenize_plate(grid, bimaterial_field(grid, geom), geom)
    print(f"\nbi-material ({res.wall_time_s:.0f}s)\n{format_matrix(res.abd.m, split=3)}")

    th = homogenize_thermal(grid, 60.5, geom)
    print(f"\nconduction ({th.wall_time_s:.0f}s)\n{format_matrix(th.k_hom)}")
    solid = VoxelGrid(np.ones((8, 8, 8), np.uint8))
    print("full solid:", homogenize_thermal(solid, 60.5, PlateGeometry.for_grid(solid, 10.0)).k_hom.tolist())
