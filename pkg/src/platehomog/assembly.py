"""Global sparse stiffness, macroscopic strain loading and load assembly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from platehomog.dofmap import DofMap
from platehomog.material import MaterialField

# elements per COO chunk; bounds peak memory of the triplet arrays
CHUNK = 16384


@dataclass(frozen=True)
class GlobalSystem:
    k: sp.csr_matrix  # (total_dofs, total_dofs)
    f: np.ndarray  # (total_dofs, n_cases)
    active_dofs: np.ndarray  # sorted, anchored DOFs removed


def assemble_matrix(ke: np.ndarray, edof: np.ndarray, size: int,
                    phase: np.ndarray | None = None, chunk: int = CHUNK) -> sp.csr_matrix:
    """Scatter-add element matrices into a CSR matrix.

    ``ke`` is either one (n, n) matrix shared by all elements or a palette
    (M, n, n) selected per element by ``phase``. Chunks are summed in a fixed
    order, so the result is bit-reproducible.
    """
    ke = np.asarray(ke, dtype=float)
    edof = np.asarray(edof)
    n = edof.shape[1]
    if ke.ndim == 2:
        ke = ke[None]
        if phase is not None:
            raise ValueError("phase given with a single element matrix")
    if ke.shape[1:] != (n, n):
        raise ValueError(f"element matrix shape {ke.shape[1:]} does not match {n} element DOFs")
    if phase is None:
        if len(ke) != 1:
            raise ValueError("a stiffness palette needs per-element phase indices")
        phase = np.zeros(len(edof), dtype=np.intp)
    elif len(phase) != len(edof):
        raise ValueError("phase length differs from the number of elements")
    assert edof.size == 0 or (edof.min() >= 0 and edof.max() < size), "DOF index out of range"

    index_type = np.int32 if size < 2**31 - 1 else np.int64
    edof = edof.astype(index_type, copy=False)
    k = sp.csr_matrix((size, size))
    for start in range(0, len(edof), chunk):
        e = edof[start:start + chunk]
        rows = np.repeat(e, n, axis=1).ravel()
        cols = np.tile(e, (1, n)).ravel()
        vals = ke[phase[start:start + chunk]].ravel()
        part = sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()
        k = part if start == 0 else k + part
    k.sum_duplicates()
    return k


def assemble_stiffness(ke: np.ndarray, dmap: DofMap, field: MaterialField | None = None,
                       bs: np.ndarray | None = None, det_j: float | None = None) -> sp.csr_matrix:
    """Global stiffness for a DOF map.

    With a heterogeneous ``field`` the per-phase element matrices are built
    from ``bs`` and ``det_j``; ``ke`` may then be None.
    """
    if field is None or field.is_homogeneous:
        return assemble_matrix(ke, dmap.edof, dmap.total_dofs)
    from platehomog.element import stiffness_from_b

    palette = stiffness_from_b(field.palette, bs, det_j)
    return assemble_matrix(palette, dmap.edof, dmap.total_dofs, field.phase_of(dmap.n_active))


def build_macro_loads(dmap: DofMap) -> np.ndarray:
    """Per-element initial strains for the six plate modes; shape (N, 6, 6).

    Columns are the generalized deformations [e11, e22, g12, k11, k22, k12];
    rows are the 3D Voigt strain components evaluated at the element centroid.
    """
    z = dmap.z_active
    e_macro = np.zeros((len(z), 6, 6))
    e_macro[:, 0, 0] = e_macro[:, 1, 1] = e_macro[:, 5, 2] = 1.0
    e_macro[:, 0, 3] = e_macro[:, 1, 4] = e_macro[:, 5, 5] = z
    return e_macro


def unit_strain_loads(n_active: int) -> np.ndarray:
    """Six unit 3D Voigt strains per element (volume homogenization); shape (N, 6, 6)."""
    return np.broadcast_to(np.eye(6), (n_active, 6, 6))


def element_loads(bs: np.ndarray, det_j: float, field: MaterialField, e_macro: np.ndarray) -> np.ndarray:
    """Sum_g B_g^T C_e eps_e |J| per element; shape (N, 24, n_cases)."""
    n_active = len(e_macro)
    phase = field.phase_of(n_active)
    # B is integrated once per phase: sum_g B_g^T C
    bsum = bs.sum(axis=0)  # (6, 24)
    g = np.einsum("ji,mjk->mik", bsum, field.palette) * det_j  # (M, 24, 6)
    if field.is_homogeneous:
        return np.einsum("ik,ekl->eil", g[0], e_macro)
    out = np.empty((n_active, 24, e_macro.shape[2]))
    for m in range(len(g)):
        sel = phase == m
        out[sel] = np.einsum("ik,ekl->eil", g[m], e_macro[sel])
    return out


def scatter_loads(f_ele: np.ndarray, edof: np.ndarray, size: int) -> np.ndarray:
    flat = edof.ravel()
    return np.column_stack([
        np.bincount(flat, weights=f_ele[:, :, c].ravel(), minlength=size)
        for c in range(f_ele.shape[2])
    ])


def assemble_loads(bs: np.ndarray, det_j: float, field: MaterialField, e_macro: np.ndarray,
                   dmap: DofMap) -> np.ndarray:
    """Global right-hand sides, one column per load case; shape (total_dofs, n_cases)."""
    field.check_length(dmap.n_active)
    return scatter_loads(element_loads(bs, det_j, field, e_macro), dmap.edof, dmap.total_dofs)


def build_system(ke: np.ndarray | None, bs: np.ndarray, det_j: float, field: MaterialField,
                 e_macro: np.ndarray, dmap: DofMap, n_anchor: int = 3) -> GlobalSystem:
    """Stiffness, loads and the anchored active-DOF set.

    Anchoring drops the three smallest referenced DOFs (the u, v, w of the
    lowest-numbered node). The loads are self-equilibrated element by element,
    so any remaining kinematic freedom leaves the system consistent.
    """
    k = assemble_stiffness(ke, dmap, field, bs, det_j)
    f = assemble_loads(bs, det_j, field, e_macro, dmap)
    return GlobalSystem(k, f, dmap.active_dofs(n_anchor))
