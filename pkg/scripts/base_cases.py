"""Four base cases: Primitive and BCC sheets/struts, with and without 2+2 skin layers.

    python scripts/base_cases.py [--res 96] [--bcc-res 96]
"""

import argparse
import logging

import numpy as np

from platehomog import (LatticeSpec, MaterialField, PlateGeometry, add_skins, generate_bcc, generate_tpms,
                        homogenize_plate, isotropic_elasticity)
from platehomog.report import format_matrix

E, NU, H = 1215.0, 0.35, 10.0


def run(name, grid):
    field = MaterialField.homogeneous(isotropic_elasticity(E, NU))
    res = homogenize_plate(grid, field, PlateGeometry.for_grid(grid, H))
    print(f"\n{name}  shape={grid.shape}  density={grid.solid_fraction():.4f}  "
          f"time={res.wall_time_s:.1f}s  iters={res.iterations.tolist()}  asym={res.asymmetry():.2e}")
    print(format_matrix(res.abd.m, split=3))
    return res.abd.m


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--res", type=int, default=96)
    ap.add_argument("--bcc-res", type=int, default=96)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO)
    np.set_printoptions(precision=2, suppress=True)

    prim = generate_tpms(LatticeSpec("primitive", (1, 1, 1), args.res, 0.15, True))
    a = run("Primitive", prim)
    b = run("Primitive + skins", add_skins(prim, 2, 2))
    print(f"\nskin gain: A11 {b[0, 0] / a[0, 0] - 1:+.0%}  D11 {b[3, 3] / a[3, 3] - 1:+.0%}")

    bcc = generate_bcc(LatticeSpec("bcc", (1, 1, 1), args.bcc_res, 0.15))
    a = run("BCC", bcc)
    b = run("BCC + skins", add_skins(bcc, 2, 2))
    print(f"\nskin gain: A11 {b[0, 0] / a[0, 0] - 1:+.0%}  D11 {b[3, 3] / a[3, 3] - 1:+.0%}")
