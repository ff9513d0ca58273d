"""Voxel finite-element homogenization of lattice-skin plates.

Extracts the 6x6 ABD plate stiffness under in-plane periodic / out-of-plane
free boundary conditions, with a 3D-periodic volume baseline, multi-material
fields and in-plane thermal conduction.
"""

from platehomog.material import MaterialField, isotropic_elasticity, multi_material_field
from platehomog.plate import AbdMatrix, PlateGeometry, PlateResult, homogenize_plate
from platehomog.solver import ConvergenceError, solve_multi_rhs
from platehomog.thermal import ConductionResult, homogenize_thermal
from platehomog.volume import analytic_abd, homogenize_volume, static_condensation
from platehomog.voxelgen import LatticeSpec, VoxelGrid, add_skins, generate_bcc, generate_tpms

__all__ = [
    "AbdMatrix",
    "ConductionResult",
    "ConvergenceError",
    "LatticeSpec",
    "MaterialField",
    "PlateGeometry",
    "PlateResult",
    "VoxelGrid",
    "add_skins",
    "analytic_abd",
    "generate_bcc",
    "generate_tpms",
    "homogenize_plate",
    "homogenize_thermal",
    "homogenize_volume",
    "isotropic_elasticity",
    "multi_material_field",
    "solve_multi_rhs",
    "static_condensation",
]
