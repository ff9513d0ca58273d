"""Trilinear 8-node hexahedron on an axis-aligned voxel, 2x2x2 Gauss rule."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# node order shared with the DOF map: bottom face counter-clockwise, then top face
NODE_SIGNS = np.array(
    [[-1, -1, -1], [1, -1, -1], [1, 1, -1], [-1, 1, -1],
     [-1, -1, 1], [1, -1, 1], [1, 1, 1], [-1, 1, 1]],
    dtype=float,
)
GAUSS_POINTS = NODE_SIGNS / np.sqrt(3.0)


def _check_edges(dx: float, dy: float, dz: float) -> None:
    if not (dx > 0 and dy > 0 and dz > 0):
        raise ValueError(f"voxel edge lengths must be positive, got {(dx, dy, dz)}")


def shape_gradients(q, dx: float, dy: float, dz: float) -> np.ndarray:
    """Physical shape-function gradients at natural point ``q``; shape (3, 8)."""
    _check_edges(dx, dy, dz)
    q = np.asarray(q, dtype=float)
    s = NODE_SIGNS
    one = 1 + q * s  # (8, 3): 1 + q_a * sign_a per node
    return 0.125 * np.array([
        s[:, 0] * one[:, 1] * one[:, 2] * (2 / dx),
        s[:, 1] * one[:, 0] * one[:, 2] * (2 / dy),
        s[:, 2] * one[:, 0] * one[:, 1] * (2 / dz),
    ])


def strain_displacement(dn: np.ndarray) -> np.ndarray:
    """Assemble the 6x24 B matrix from a 3x8 gradient (node-major u,v,w columns)."""
    b = np.zeros((6, 24))
    b[0, 0::3], b[1, 1::3], b[2, 2::3] = dn[0], dn[1], dn[2]
    b[3, 1::3], b[3, 2::3] = dn[2], dn[1]
    b[4, 0::3], b[4, 2::3] = dn[2], dn[0]
    b[5, 0::3], b[5, 1::3] = dn[1], dn[0]
    return b


@dataclass(frozen=True)
class ElementKinematics:
    ke: np.ndarray  # (24, 24)
    bs: np.ndarray  # (8, 6, 24), one B per Gauss point
    grad_ns: np.ndarray  # (8, 3, 8)
    det_j: float


def element_geometry(dx: float, dy: float, dz: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Gauss-point gradient and B matrices plus the constant Jacobian determinant."""
    _check_edges(dx, dy, dz)
    grad_ns = np.stack([shape_gradients(q, dx, dy, dz) for q in GAUSS_POINTS])
    bs = np.stack([strain_displacement(dn) for dn in grad_ns])
    return bs, grad_ns, dx * dy * dz / 8.0


def stiffness_from_b(c: np.ndarray, bs: np.ndarray, det_j: float) -> np.ndarray:
    """Sum B^T C B |J| over Gauss points; ``c`` may be (6,6) or (M,6,6)."""
    c = np.asarray(c, dtype=float)
    if c.ndim == 2:
        ke = np.zeros((24, 24))
        for b in bs:
            ke += b.T @ c @ b * det_j
        return ke
    ke = np.zeros((len(c), 24, 24))
    for b in bs:
        ke += np.einsum("ji,ejk,kl->eil", b, c, b) * det_j
    return ke


def element_stiffness(c: np.ndarray, dx: float, dy: float, dz: float) -> ElementKinematics:
    bs, grad_ns, det_j = element_geometry(dx, dy, dz)
    return ElementKinematics(stiffness_from_b(c, bs, det_j), bs, grad_ns, det_j)
