"""Element-to-global DOF incidence for structured voxel meshes.

Nodes are numbered row-major over (nx+1, ny+1, nz+1). Periodicity is imposed
by overwriting the numbers of the slave planes (x = nx, y = ny and, for the
volume baseline, z = nz) with those of the opposite master planes, so no
constraint equations or multipliers are needed. Slave numbers then never
appear in the incidence table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DofMap:
    edof: np.ndarray  # (N_active, 24 * dofs_per_node / 3) global DOF indices
    z_active: np.ndarray  # (N_active,) centroid offset from the mid-surface
    total_dofs: int
    active_mask: np.ndarray  # (nx, ny, nz) bool
    dofs_per_node: int = 3

    @property
    def n_active(self) -> int:
        return len(self.edof)

    def active_dofs(self, n_anchor: int) -> np.ndarray:
        """Sorted DOFs referenced by ``edof`` minus the ``n_anchor`` smallest ones."""
        used = np.unique(self.edof)
        return used[n_anchor:]


@dataclass(frozen=True)
class ScalarDofMap(DofMap):
    dofs_per_node: int = 1


def _node_tensor(shape, periodic_z: bool) -> np.ndarray:
    nx, ny, nz = shape
    nodes = np.arange((nx + 1) * (ny + 1) * (nz + 1)).reshape(nx + 1, ny + 1, nz + 1)
    nodes[nx, :, :] = nodes[0, :, :]
    nodes[:, ny, :] = nodes[:, 0, :]
    if periodic_z:
        nodes[:, :, nz] = nodes[:, :, 0]
    return nodes


def _element_nodes(nodes: np.ndarray) -> np.ndarray:
    """Corner node numbers per voxel in element node order; shape (nx, ny, nz, 8)."""
    return np.stack([
        nodes[:-1, :-1, :-1], nodes[1:, :-1, :-1], nodes[1:, 1:, :-1], nodes[:-1, 1:, :-1],
        nodes[:-1, :-1, 1:], nodes[1:, :-1, 1:], nodes[1:, 1:, 1:], nodes[:-1, 1:, 1:],
    ], axis=-1)


def _mask_and_z(voxel: np.ndarray, dz: float, thickness: float):
    voxel = np.asarray(voxel)
    if voxel.ndim != 3:
        raise ValueError(f"voxel array must be 3D, got shape {voxel.shape}")
    mask = voxel > 0
    if not mask.any():
        raise ValueError("empty structure: the voxel grid has no solid elements")
    nz = voxel.shape[2]
    if abs(nz * dz - thickness) > 1e-12 * max(thickness, 1.0):
        raise ValueError(f"thickness {thickness} inconsistent with nz*dz = {nz * dz}")
    z_cols = (np.arange(nz) + 0.5) * dz - thickness / 2.0
    z_active = np.broadcast_to(z_cols, voxel.shape)[mask]
    return mask, z_active


def build_dof_map(voxel, dx: float, dy: float, dz: float, thickness: float,
                  periodic_z: bool = False) -> DofMap:
    """Three-DOF incidence with x/y periodicity (and optionally z)."""
    mask, z_active = _mask_and_z(voxel, dz, thickness)
    nodes = _node_tensor(mask.shape, periodic_z)
    elem_nodes = _element_nodes(nodes)[mask]  # (N, 8)
    edof = (3 * elem_nodes[:, :, None] + np.arange(3)).reshape(len(elem_nodes), 24)
    return DofMap(edof, np.ascontiguousarray(z_active), 3 * nodes.size, mask, 3)


def build_scalar_dof_map(voxel, dx: float, dy: float, dz: float, thickness: float,
                         periodic_z: bool = False) -> ScalarDofMap:
    """One-DOF (temperature) incidence with the same periodic aliasing."""
    mask, z_active = _mask_and_z(voxel, dz, thickness)
    nodes = _node_tensor(mask.shape, periodic_z)
    edof = _element_nodes(nodes)[mask]
    return ScalarDofMap(np.ascontiguousarray(edof), np.ascontiguousarray(z_active), nodes.size, mask, 1)
