"""Mesh convergence (Primitive sheet) and thickness size effect (Gyroid sheet) sweeps.

    python scripts/sweeps.py convergence --min 20 --max 125 --step 5
    python scripts/sweeps.py size-effect --res 32 --nz-max 12
"""

import argparse
import logging
import sys

from platehomog.report import rows_csv
from platehomog.studies import CONVERGENCE_HEADER, SIZE_EFFECT_HEADER, convergence_sweep, size_effect_sweep

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    sub = ap.add_subparsers(dest="which", required=True)
    c = sub.add_parser("convergence")
    c.add_argument("--min", type=int, default=20)
    c.add_argument("--max", type=int, default=125)
    c.add_argument("--step", type=int, default=5)
    s = sub.add_parser("size-effect")
    s.add_argument("--res", type=int, default=32)
    s.add_argument("--nz-max", type=int, default=12)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO)
    if args.which == "convergence":
        rows = convergence_sweep("primitive", 0.15, True, range(args.min, args.max + 1, args.step), 1215.0, 0.35, 10.0)
        sys.stdout.write(rows_csv(CONVERGENCE_HEADER, rows))
    else:
        rows = size_effect_sweep("gyroid", 0.15, True, args.res, range(1, args.nz_max + 1), 1215.0, 0.35, 10.0)
        sys.stdout.write(rows_csv(SIZE_EFFECT_HEADER, rows))
