"""In-plane steady-state conduction of a periodic plate cell.

Scalar analogue of the elastic plate path: one temperature DOF per node,
unit macroscopic gradients along x and y, periodic fluctuation temperature,
and the in-plane flux integrated over the volume per unit projected area.
The result is therefore a thickness-integrated conductance (a full solid plate
gives k_s * h); ``k_hom_per_thickness`` divides that back out.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from platehomog.assembly import GlobalSystem, assemble_matrix, scatter_loads
from platehomog.dofmap import build_scalar_dof_map
from platehomog.element import element_geometry
from platehomog.plate import PlateGeometry
from platehomog.solver import solve_multi_rhs
from platehomog.voxelgen import VoxelGrid

GRAD_MACRO = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])


@dataclass(frozen=True)
class ConductionResult:
    k_hom: np.ndarray  # (2, 2)
    k_hom_per_thickness: np.ndarray
    residuals: np.ndarray
    wall_time_s: float

    def to_dict(self) -> dict:
        return {
            "k_hom": self.k_hom.tolist(),
            "k_hom_per_thickness": self.k_hom_per_thickness.tolist(),
            "meta": {"solver_residuals": self.residuals.tolist(), "wall_time_s": self.wall_time_s},
        }


def thermal_element(k_s: float, dx: float, dy: float, dz: float):
    """8x8 conduction matrix, Gauss-point gradients (8, 3, 8) and |J|."""
    if not k_s > 0:
        raise ValueError(f"conductivity must be positive, got {k_s}")
    _, grad_ns, det_j = element_geometry(dx, dy, dz)
    kt = np.zeros((8, 8))
    for dn in grad_ns:
        kt += dn.T @ (k_s * np.eye(3)) @ dn * det_j
    return kt, grad_ns, det_j


def homogenize_thermal(grid: VoxelGrid, k_s: float, geom: PlateGeometry, tol: float = 1e-6,
                       maxiter: int = 5000, threads: int | None = None) -> ConductionResult:
    t0 = time.perf_counter()
    if grid.shape != geom.shape:
        raise ValueError(f"geometry shape {geom.shape} does not match grid {grid.shape}")
    dx, dy, dz = geom.spacing
    kt, grad_ns, det_j = thermal_element(k_s, dx, dy, dz)
    dmap = build_scalar_dof_map(grid.data, dx, dy, dz, geom.thickness)

    k_tensor = k_s * np.eye(3)
    g_load = grad_ns.sum(axis=0).T @ k_tensor @ GRAD_MACRO * det_j  # (8, 2), same for every element
    f_ele = np.broadcast_to(g_load, (dmap.n_active, 8, 2))
    system = GlobalSystem(
        assemble_matrix(kt, dmap.edof, dmap.total_dofs),
        scatter_loads(f_ele, dmap.edof, dmap.total_dofs),
        dmap.active_dofs(1),
    )
    sol = solve_multi_rhs(system, tol, maxiter, threads)

    t_e = sol.u[dmap.edof]  # (N, 8, 2)
    k_hom = np.zeros((2, 2))
    for dn in grad_ns:
        flux = np.einsum("ij,ejl->eil", k_tensor, GRAD_MACRO - np.einsum("ij,ejl->eil", dn, t_e))
        k_hom += flux[:, :2, :].sum(axis=0) * det_j / geom.area
    k_hom = (k_hom + k_hom.T) / 2.0
    return ConductionResult(k_hom, k_hom / geom.thickness, sol.residuals, time.perf_counter() - t0)
