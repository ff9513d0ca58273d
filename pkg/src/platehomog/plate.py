"""Plate homogenization with in-plane periodic, out-of-plane free boundaries.

Six unit generalized deformations [e11, e22, g12, k11, k22, k12] are imposed
as initial strains eps(z) = e0 + z*kappa, the periodic fluctuation field is
solved, and the in-plane stresses are integrated through the thickness
(zeroth and first moments) per unit projected area to give the ABD columns.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from platehomog.assembly import build_macro_loads, build_system
from platehomog.dofmap import DofMap, build_dof_map
from platehomog.element import element_geometry, stiffness_from_b
from platehomog.material import MaterialField
from platehomog.solver import solve_multi_rhs
from platehomog.voxelgen import VoxelGrid

IN_PLANE = [0, 1, 5]  # sigma11, sigma22, sigma12 in Voigt order


@dataclass(frozen=True)
class PlateGeometry:
    thickness: float
    cells: tuple[int, int, int]
    shape: tuple[int, int, int]  # voxel counts (nx, ny, nz)

    def __post_init__(self):
        if not self.thickness > 0:
            raise ValueError("thickness must be positive")
        if len(self.cells) != 3 or min(self.cells) < 1:
            raise ValueError(f"cells must be three positive integers, got {self.cells}")
        if len(self.shape) != 3 or min(self.shape) < 1:
            raise ValueError(f"invalid voxel shape {self.shape}")

    @classmethod
    def for_grid(cls, grid: VoxelGrid, thickness: float, cells=(1, 1, 1)) -> "PlateGeometry":
        return cls(float(thickness), tuple(int(c) for c in cells), grid.shape)

    @property
    def cell_size(self) -> float:
        return self.thickness / self.cells[2]

    @property
    def lengths(self) -> tuple[float, float, float]:
        return self.cells[0] * self.cell_size, self.cells[1] * self.cell_size, self.thickness

    @property
    def spacing(self) -> tuple[float, float, float]:
        lx, ly, lz = self.lengths
        nx, ny, nz = self.shape
        return lx / nx, ly / ny, lz / nz

    @property
    def area(self) -> float:
        lx, ly, _ = self.lengths
        return lx * ly


@dataclass(frozen=True)
class AbdMatrix:
    m: np.ndarray  # (6, 6)

    @property
    def A(self) -> np.ndarray:
        return self.m[:3, :3]

    @property
    def B(self) -> np.ndarray:
        return self.m[:3, 3:]

    @property
    def D(self) -> np.ndarray:
        return self.m[3:, 3:]

    @classmethod
    def from_blocks(cls, a, b, d) -> "AbdMatrix":
        return cls(np.block([[a, b], [np.asarray(b).T, d]]))

    def to_dict(self) -> dict:
        return {
            "abd": self.m.tolist(),
            "blocks": {"A": self.A.tolist(), "B": self.B.tolist(), "D": self.D.tolist()},
        }


@dataclass(frozen=True)
class PlateResult:
    abd: AbdMatrix
    raw: np.ndarray  # before symmetrization
    residuals: np.ndarray
    iterations: np.ndarray
    wall_time_s: float
    meta: dict = field(default_factory=dict)

    def asymmetry(self) -> float:
        return pre_symmetry_check(self.raw)

    def to_dict(self) -> dict:
        out = self.abd.to_dict()
        out["meta"] = {
            **self.meta,
            "solver_residuals": self.residuals.tolist(),
            "solver_iterations": self.iterations.tolist(),
            "asymmetry": self.asymmetry(),
            "wall_time_s": self.wall_time_s,
        }
        return out


def pre_symmetry_check(raw: np.ndarray) -> float:
    """max|m - m^T| / max|m| of the unsymmetrized matrix."""
    raw = np.asarray(raw)
    scale = np.abs(raw).max()
    return float(np.abs(raw - raw.T).max() / scale) if scale > 0 else 0.0


def recover_stresses(bs: np.ndarray, field: MaterialField, e_macro: np.ndarray,
                     u_e: np.ndarray, phase: np.ndarray):
    """Yield (phase mask, Gauss index, stress (n, 6, cases)) with sigma = C (eps_macro - B u)."""
    for m, c in enumerate(field.palette):
        sel = slice(None) if field.is_homogeneous else phase == m
        em, ue = e_macro[sel], u_e[sel]
        for g, b in enumerate(bs):
            strain = em - np.einsum("ij,ejl->eil", b, ue)
            yield sel, g, np.einsum("ij,ejl->eil", c, strain)


def integrate_abd(bs, det_j, field: MaterialField, e_macro, dmap: DofMap, u: np.ndarray,
                  area: float) -> np.ndarray:
    """Raw (unsymmetrized) ABD from zeroth and first thickness moments of in-plane stress."""
    phase = field.phase_of(dmap.n_active)
    u_e = u[dmap.edof]  # (N, 24, 6)
    abd = np.zeros((6, 6))
    for sel, _, sigma in recover_stresses(bs, field, e_macro, u_e, phase):
        sp = sigma[:, IN_PLANE, :]
        z = dmap.z_active[sel]
        abd[:3] += sp.sum(axis=0) * det_j / area
        abd[3:] += np.einsum("e,eil->il", z, sp) * det_j / area
    return abd


def homogenize_plate(grid: VoxelGrid, field: MaterialField, geom: PlateGeometry,
                     tol: float = 1e-6, maxiter: int = 5000, threads: int | None = None) -> PlateResult:
    """Effective ABD of a periodic plate cell (units follow E and the lengths)."""
    t0 = time.perf_counter()
    if grid.shape != geom.shape:
        raise ValueError(f"geometry shape {geom.shape} does not match grid {grid.shape}")
    dx, dy, dz = geom.spacing
    bs, _, det_j = element_geometry(dx, dy, dz)
    dmap = build_dof_map(grid.data, dx, dy, dz, geom.thickness)
    field.check_length(dmap.n_active)
    ke = stiffness_from_b(field.palette[0], bs, det_j) if field.is_homogeneous else None
    e_macro = build_macro_loads(dmap)
    system = build_system(ke, bs, det_j, field, e_macro, dmap)
    sol = solve_multi_rhs(system, tol, maxiter, threads)
    del system
    raw = integrate_abd(bs, det_j, field, e_macro, dmap, sol.u, geom.area)
    abd = AbdMatrix((raw + raw.T) / 2.0)
    meta = {
        "shape": list(grid.shape),
        "resolution": grid.nx // geom.cells[0],
        "density_achieved": grid.solid_fraction(),
        "n_active": dmap.n_active,
        "n_dofs": int(len(np.unique(dmap.edof))),
    }
    return PlateResult(abd, raw, sol.residuals, sol.iterations, time.perf_counter() - t0, meta)
