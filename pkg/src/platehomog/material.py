"""Isotropic and per-element constitutive tensors in Voigt notation.

Voigt order is [e11, e22, e33, g23, g13, g12] with engineering shear strains,
so the shear diagonal carries mu (not 2*mu).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np


def lame_constants(E: float, nu: float) -> tuple[float, float]:
    if not E > 0:
        raise ValueError(f"Young's modulus must be positive, got {E}")
    if not -1.0 < nu < 0.5:
        raise ValueError(f"Poisson's ratio must lie in (-1, 0.5), got {nu}")
    lam = E * nu / ((1 + nu) * (1 - 2 * nu))
    mu = E / (2 * (1 + nu))
    return lam, mu


def isotropic_elasticity(E: float, nu: float) -> np.ndarray:
    """Return the 6x6 isotropic stiffness matrix (same units as ``E``)."""
    lam, mu = lame_constants(E, nu)
    c = np.zeros((6, 6))
    c[:3, :3] = lam
    c[[0, 1, 2], [0, 1, 2]] = lam + 2 * mu
    c[[3, 4, 5], [3, 4, 5]] = mu
    return c


@dataclass(frozen=True)
class MaterialField:
    """Constitutive tensors of the active elements.

    Stored as a palette of distinct tensors plus a per-element index into it,
    so single-phase runs carry one tensor and one element stiffness matrix.
    """

    palette: np.ndarray  # (M, 6, 6)
    phase: np.ndarray | None = None  # (N_active,) int index into palette; None = homogeneous

    def __post_init__(self):
        palette = np.asarray(self.palette, dtype=float)
        if palette.ndim == 2:
            palette = palette[None]
        if palette.ndim != 3 or palette.shape[1:] != (6, 6):
            raise ValueError(f"palette must have shape (M, 6, 6), got {palette.shape}")
        object.__setattr__(self, "palette", palette)
        if self.phase is None:
            if len(palette) != 1:
                raise ValueError("a homogeneous field needs exactly one tensor")
        else:
            phase = np.asarray(self.phase, dtype=np.intp)
            if phase.ndim != 1 or (phase.size and (phase.min() < 0 or phase.max() >= len(palette))):
                raise ValueError("phase indices out of palette range")
            object.__setattr__(self, "phase", phase)

    @classmethod
    def homogeneous(cls, c: np.ndarray) -> "MaterialField":
        return cls(np.asarray(c, dtype=float)[None])

    @property
    def is_homogeneous(self) -> bool:
        return self.phase is None

    def n_phases(self) -> int:
        return len(self.palette)

    def check_length(self, n_active: int) -> None:
        if self.phase is not None and len(self.phase) != n_active:
            raise ValueError(
                f"material field has {len(self.phase)} entries but the mesh has {n_active} active elements"
            )

    def phase_of(self, n_active: int) -> np.ndarray:
        """Per-element palette index (all zeros when homogeneous)."""
        self.check_length(n_active)
        if self.phase is None:
            return np.zeros(n_active, dtype=np.intp)
        return self.phase

    def per_element(self, n_active: int) -> np.ndarray:
        """Materialize the (N_active, 6, 6) tensor array."""
        return self.palette[self.phase_of(n_active)]

    def scaled(self, factor: float) -> "MaterialField":
        return MaterialField(self.palette * factor, self.phase)


def multi_material_field(
    element_ids: np.ndarray, table: Mapping[int, tuple[float, float]]
) -> MaterialField:
    """Map per-active-element material IDs to constitutive tensors.

    Every ID must appear in ``table``; there is no fallback modulus.
    """
    ids = np.asarray(element_ids).astype(np.int64).ravel()
    present = np.unique(ids)
    missing = [int(i) for i in present if int(i) not in table]
    if missing:
        raise KeyError(f"unmapped material ID(s): {missing}")
    keys = [int(i) for i in present]
    palette = np.stack([isotropic_elasticity(*table[k]) for k in keys])
    phase = np.searchsorted(present, ids)
    return MaterialField(palette, phase)


def load_material_table(path: str | Path) -> dict[int, tuple[float, float]]:
    """Read ``{"1": {"E": 1215.0, "nu": 0.35}, ...}``."""
    raw = json.loads(Path(path).read_text())
    table = {}
    for key, props in raw.items():
        mat_id = int(key)
        if not 1 <= mat_id <= 255:
            raise ValueError(f"material ID {key} outside 1..255")
        E, nu = float(props["E"]), float(props["nu"])
        lame_constants(E, nu)
        table[mat_id] = (E, nu)
    return table
