"""Voxel models of TPMS sheet/network lattices and BCC strut lattices.

Level sets are sampled at voxel centres, X = 2*pi*(i + 0.5)/res inside each
cell, and the iso-threshold (or strut radius) is found by bisection so the
solid fraction hits the requested relative density.
"""

from __future__ import annotations

import itertools
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"VXL1"
FAMILIES = ("primitive", "gyroid", "diamond", "iwp", "bcc")
TPMS_FAMILIES = FAMILIES[:4]
DENSITY_TOL = 0.005
BISECT_ITERS = 60
BISECT_WIDTH = 1e-9


class DensityUnattainableError(ValueError):
    pass


@dataclass(frozen=True)
class VoxelGrid:
    """Occupancy / material-ID array, 0 = void, v >= 1 = material v.

    ``data`` has shape (nx, ny, nz) in C order, i.e. linear index
    (ix * ny + iy) * nz + iz.
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 3 or min(data.shape) < 1:
            raise ValueError(f"voxel data must be a non-empty 3D array, got shape {data.shape}")
        if data.dtype != np.uint8:
            if data.min() < 0 or data.max() > 255:
                raise ValueError("voxel values must lie in 0..255")
            data = data.astype(np.uint8)
        if not data.any():
            raise ValueError("empty structure: voxel grid has no solid voxels")
        object.__setattr__(self, "data", np.ascontiguousarray(data))

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape

    @property
    def nx(self) -> int:
        return self.data.shape[0]

    @property
    def ny(self) -> int:
        return self.data.shape[1]

    @property
    def nz(self) -> int:
        return self.data.shape[2]

    def solid_fraction(self) -> float:
        return float(np.count_nonzero(self.data)) / self.data.size

    def to_bytes(self) -> bytes:
        return MAGIC + struct.pack("<3I", *self.shape) + self.data.tobytes(order="C")

    @classmethod
    def from_bytes(cls, raw: bytes) -> "VoxelGrid":
        if raw[:4] != MAGIC:
            raise ValueError("not a VXL1 voxel file (bad magic)")
        nx, ny, nz = struct.unpack("<3I", raw[4:16])
        payload = raw[16:]
        if len(payload) != nx * ny * nz:
            raise ValueError(f"VXL1 payload has {len(payload)} bytes, expected {nx * ny * nz}")
        return cls(np.frombuffer(payload, dtype=np.uint8).reshape(nx, ny, nz).copy())

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: str | Path) -> "VoxelGrid":
        return cls.from_bytes(Path(path).read_bytes())


@dataclass(frozen=True)
class LatticeSpec:
    family: str
    cells: tuple[int, int, int] = (1, 1, 1)
    resolution: int = 32
    relative_density: float = 0.15
    sheet: bool = True

    def __post_init__(self):
        fam = str(self.family).lower().replace("-", "")
        if fam not in FAMILIES:
            raise ValueError(f"unknown lattice family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "family", fam)
        cells = tuple(int(c) for c in self.cells)
        if len(cells) != 3 or min(cells) < 1:
            raise ValueError(f"cells must be three positive integers, got {self.cells}")
        object.__setattr__(self, "cells", cells)
        if int(self.resolution) < 4:
            raise ValueError(f"resolution must be >= 4, got {self.resolution}")
        if not 0.01 < self.relative_density < 0.99:
            raise ValueError(f"relative density must lie in (0.01, 0.99), got {self.relative_density}")

    @property
    def shape(self) -> tuple[int, int, int]:
        return tuple(c * self.resolution for c in self.cells)


def _cell_coords(res: int, ncell: int) -> np.ndarray:
    return 2 * np.pi * (np.arange(res * ncell) + 0.5) / res


def tpms_field(family: str, res: int, cells=(1, 1, 1)) -> np.ndarray:
    """Sample the level-set function at voxel centres; shape (Nx*res, Ny*res, Nz*res)."""
    x, y, z = np.meshgrid(*(_cell_coords(res, n) for n in cells), indexing="ij", sparse=True)
    family = family.lower().replace("-", "")
    if family == "primitive":
        return np.cos(x) + np.cos(y) + np.cos(z)
    if family == "gyroid":
        return np.sin(x) * np.cos(y) + np.sin(y) * np.cos(z) + np.sin(z) * np.cos(x)
    if family == "diamond":
        sx, sy, sz, cx, cy, cz = np.sin(x), np.sin(y), np.sin(z), np.cos(x), np.cos(y), np.cos(z)
        return sx * sy * sz + sx * cy * cz + cx * sy * cz + cx * cy * sz
    if family == "iwp":
        cx, cy, cz = np.cos(x), np.cos(y), np.cos(z)
        return 2 * (cx * cy + cy * cz + cz * cx) - (np.cos(2 * x) + np.cos(2 * y) + np.cos(2 * z))
    raise ValueError(f"unknown TPMS family {family!r}")


def threshold(phi: np.ndarray, t: float, sheet: bool) -> np.ndarray:
    return (np.abs(phi) <= t) if sheet else (phi <= t)


def bisect_fraction(fraction, lo: float, hi: float, target: float) -> float:
    """Bisect a nondecreasing ``fraction(t)`` on [lo, hi] for ``target``."""
    f_lo, f_hi = fraction(lo), fraction(hi)
    if not f_lo - DENSITY_TOL <= target <= f_hi + DENSITY_TOL:
        raise DensityUnattainableError(
            f"density unattainable: target {target} outside achievable range [{f_lo:.4f}, {f_hi:.4f}]"
        )
    best_t, best_err = (lo, abs(f_lo - target)) if abs(f_lo - target) < abs(f_hi - target) else (hi, abs(f_hi - target))
    for _ in range(BISECT_ITERS):
        if hi - lo < BISECT_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        f_mid = fraction(mid)
        if abs(f_mid - target) < best_err:
            best_t, best_err = mid, abs(f_mid - target)
        if f_mid < target:
            lo = mid
        else:
            hi = mid
    if best_err > DENSITY_TOL:
        raise DensityUnattainableError(
            f"density unattainable: best achievable fraction misses {target} by {best_err:.4f}"
        )
    return best_t


def generate_tpms(spec: LatticeSpec) -> VoxelGrid:
    if spec.family not in TPMS_FAMILIES:
        raise ValueError(f"{spec.family!r} is not a TPMS family")
    # the field is periodic per cell, so threshold one cell and tile
    phi = tpms_field(spec.family, spec.resolution)
    if spec.sheet:
        vals = np.abs(phi)
        lo, hi = 0.0, float(vals.max())
    else:
        vals = phi
        lo, hi = float(phi.min()), float(phi.max())
    flat = np.sort(vals.ravel())
    frac = lambda t: np.searchsorted(flat, t, side="right") / flat.size
    t = bisect_fraction(frac, lo, hi, spec.relative_density)
    cell = threshold(phi, t, spec.sheet).astype(np.uint8)
    return VoxelGrid(np.tile(cell, spec.cells))


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    t = np.clip(((p - a) @ ab) / (ab @ ab), 0.0, 1.0)
    return np.linalg.norm(p - a - t[:, None] * ab, axis=1)


def bcc_distance(res: int) -> np.ndarray:
    """Distance (in cell units) from each voxel centre of one cell to the nearest strut.

    Struts join the cell centre to its eight corners; struts of the 26
    neighbouring cells are included so the field is periodic.
    """
    c = (np.arange(res) + 0.5) / res
    p = np.stack(np.meshgrid(c, c, c, indexing="ij"), axis=-1).reshape(-1, 3)
    d = np.full(len(p), np.inf)
    corners = np.array(list(itertools.product((0.0, 1.0), repeat=3)))
    for off in itertools.product((-1.0, 0.0, 1.0), repeat=3):
        off = np.array(off)
        centre = off + 0.5
        for corner in corners:
            d = np.minimum(d, _segment_distance(p, centre, off + corner))
    return d.reshape(res, res, res)


def generate_bcc(spec: LatticeSpec) -> VoxelGrid:
    if spec.family != "bcc":
        raise ValueError(f"generate_bcc needs family 'bcc', got {spec.family!r}")
    d = bcc_distance(spec.resolution)
    flat = np.sort(d.ravel())
    frac = lambda r: np.searchsorted(flat, r, side="right") / flat.size
    r = bisect_fraction(frac, 0.0, float(np.sqrt(3.0)), spec.relative_density)
    cell = (d <= r).astype(np.uint8)
    return VoxelGrid(np.tile(cell, spec.cells))


def generate(spec: LatticeSpec) -> VoxelGrid:
    return generate_bcc(spec) if spec.family == "bcc" else generate_tpms(spec)


def add_skins(grid: VoxelGrid, layers_bottom: int, layers_top: int, material_id: int = 1) -> VoxelGrid:
    """Append fully solid z-layers below and above the lattice."""
    if not 1 <= material_id <= 255:
        raise ValueError(f"skin material ID must be in 1..255, got {material_id}")
    if layers_bottom < 0 or layers_top < 0:
        raise ValueError("skin layer counts must be non-negative")
    data = np.pad(grid.data, ((0, 0), (0, 0), (layers_bottom, layers_top)),
                  mode="constant", constant_values=material_id)
    return VoxelGrid(data)
