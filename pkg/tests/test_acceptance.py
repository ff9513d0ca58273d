"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The heavy cases (96^3 cells) share session fixtures; expect the whole module
to take the better part of an hour on a single core.
"""

import json
import time

import numpy as np
import pytest

from platehomog import (LatticeSpec, MaterialField, PlateGeometry, VoxelGrid, add_skins, analytic_abd,
                        generate_bcc, generate_tpms, homogenize_plate, homogenize_thermal, homogenize_volume,
                        isotropic_elasticity, multi_material_field, static_condensation)
from platehomog.assembly import assemble_stiffness
from platehomog.cli import main
from platehomog.dofmap import build_dof_map
from platehomog.element import element_stiffness
from platehomog.studies import convergence_sweep, size_effect_sweep, volume_abd

E_BASE, NU_BASE, H = 1215.0, 0.35, 10.0
pytestmark = pytest.mark.slow


def within(value, target, rel):
    return abs(value - target) <= rel * abs(target)


def pct(value, target):
    return f"{value:.2f} ({(value / target - 1) * 100:+.2f}% vs {target})"


@pytest.fixture(scope="session")
def base_field():
    return MaterialField.homogeneous(isotropic_elasticity(E_BASE, NU_BASE))


@pytest.fixture(scope="session")
def primitive96():
    return generate_tpms(LatticeSpec("primitive", (1, 1, 1), 96, 0.15, True))


@pytest.fixture(scope="session")
def ex01(primitive96, base_field):
    return homogenize_plate(primitive96, base_field, PlateGeometry.for_grid(primitive96, H))


@pytest.fixture(scope="session")
def ex01_skinned(primitive96, base_field):
    grid = add_skins(primitive96, 2, 2)
    return homogenize_plate(grid, base_field, PlateGeometry.for_grid(grid, H))


@pytest.fixture(scope="session")
def bcc96():
    return generate_bcc(LatticeSpec("bcc", (1, 1, 1), 96, 0.15))


def solid(shape):
    return VoxelGrid(np.ones(shape, np.uint8))


def test_criterion_01_full_solid_membrane(criterion):
    e, nu = 1.0, 0.3
    grid = solid((16, 16, 8))
    t0 = time.perf_counter()
    # the solve is driven well below the default tolerance: the coupling bound is 1e-8 of A
    res = homogenize_plate(grid, MaterialField.homogeneous(isotropic_elasticity(e, nu)),
                           PlateGeometry.for_grid(grid, H), tol=1e-10)
    elapsed = time.perf_counter() - t0
    q = e / (1 - nu**2) * np.array([[1, nu, 0], [nu, 1, 0], [0, 0, (1 - nu) / 2]])
    a_err = np.abs(res.abd.A - q * H).max() / np.abs(q * H).max()
    b_ratio = np.linalg.norm(res.abd.B) / np.linalg.norm(res.abd.A)
    ok = a_err <= 1e-5 and b_ratio <= 1e-8 and elapsed < 10
    criterion(1, ok, f"A rel err {a_err:.1e}, |B|/|A| {b_ratio:.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_02_full_solid_bending_convergence(criterion):
    e, nu = 1.0, 0.3
    exact = e * H**3 / (12 * (1 - nu**2))
    field = MaterialField.homogeneous(isotropic_elasticity(e, nu))
    t0 = time.perf_counter()
    errs = []
    for nz in (4, 8, 16):
        grid = solid((16, 16, nz))
        d00 = homogenize_plate(grid, field, PlateGeometry.for_grid(grid, H), tol=1e-10).abd.D[0, 0]
        errs.append(abs(d00 - exact) / exact)
    elapsed = time.perf_counter() - t0
    ok = errs[0] > errs[1] > errs[2] and errs[2] <= 0.01 and elapsed < 60
    criterion(2, ok, "D00 errors " + ", ".join(f"{x:.2%}" for x in errs) + f", {elapsed:.1f}s")
    assert ok


def test_criterion_03_primitive_base_case(criterion, ex01):
    m = ex01.abd.m
    checks = [within(m[0, 0], 356.12, 0.01), within(m[0, 1], 202.24, 0.01), within(m[3, 3], 2229.51, 0.015),
              np.abs(ex01.abd.B).max() <= 0.5]
    ok = all(checks)
    criterion(3, ok, f"A00 {pct(m[0, 0], 356.12)}, A01 {pct(m[0, 1], 202.24)}, D00 {pct(m[3, 3], 2229.51)}, "
                     f"max|B| {np.abs(ex01.abd.B).max():.2e}, {ex01.wall_time_s:.0f}s")
    assert ok


def test_criterion_04_skinned_primitive(criterion, ex01, ex01_skinned):
    m, m0 = ex01_skinned.abd.m, ex01.abd.m
    gain_a, gain_d = m[0, 0] / m0[0, 0] - 1, m[3, 3] / m0[3, 3] - 1
    # the stated gains follow from the stated values; allow the combined value tolerances
    ok = (within(m[0, 0], 973.08, 0.01) and within(m[3, 3], 16538.85, 0.015)
          and within(gain_a + 1, 973.08 / 356.12, 0.02) and within(gain_d + 1, 16538.85 / 2229.51, 0.03))
    criterion(4, ok, f"A00 {pct(m[0, 0], 973.08)}, D00 {pct(m[3, 3], 16538.85)}, "
                     f"gains {gain_a:+.0%} / {gain_d:+.0%}")
    assert ok


def test_criterion_05_bcc_cases(criterion, bcc96, base_field):
    plain = homogenize_plate(bcc96, base_field, PlateGeometry.for_grid(bcc96, H)).abd.m
    grid = add_skins(bcc96, 2, 2)
    skinned = homogenize_plate(grid, base_field, PlateGeometry.for_grid(grid, H)).abd.m
    targets = [(plain[0, 0], 68.84), (plain[2, 2], 256.47), (plain[3, 3], 625.52), (plain[5, 5], 1674.86),
               (skinned[0, 0], 667.89), (skinned[3, 3], 14513.15)]
    ok = all(within(v, t, 0.10) for v, t in targets) and plain[2, 2] > plain[0, 0]
    names = ["A00", "A22", "D00", "D22", "skin A00", "skin D00"]
    criterion(5, ok, ", ".join(f"{n} {pct(v, t)}" for n, (v, t) in zip(names, targets)))
    assert ok


def test_criterion_06_volume_baseline_closed_forms(criterion):
    c = isotropic_elasticity(1.0, 0.3)
    grid = solid((6, 6, 6))
    c_h = homogenize_volume(grid, MaterialField.homogeneous(c), (1.0, 1.0, 1.0), tol=1e-10).c_h
    c_err = np.abs(c_h - c).max()
    q00 = static_condensation(c)[0, 0]
    abd = analytic_abd(static_condensation(c), H)
    structure = np.allclose(abd.D, abd.A * H**2 / 12, rtol=1e-15, atol=0) and not abd.B.any()
    ok = c_err <= 1e-6 and abs(q00 - 1.098901) <= 1e-6 and structure
    criterion(6, ok, f"max|C_H - C| {c_err:.1e}, Q00 {q00:.7f}, D = A h^2/12: {structure}")
    assert ok


def test_criterion_07_gyroid_plate_vs_volume(criterion, base_field):
    grid = generate_tpms(LatticeSpec("gyroid", (1, 1, 1), 96, 0.15, True))
    geom = PlateGeometry.for_grid(grid, H)
    lps = homogenize_plate(grid, base_field, geom).abd.m
    _, _, lvs = volume_abd(grid, base_field, geom.lengths, H)
    lvs = lvs.m
    aniso = lps[0, 0] / lps[1, 1]
    cubic = abs(lvs[0, 0] - lvs[1, 1]) / max(lvs[0, 0], lvs[1, 1])
    factor = lvs[3, 3] / lps[3, 3]
    ok = within(aniso, 448.68 / 627.66, 0.05) and cubic <= 0.005 and 2.5 <= factor <= 4.0
    criterion(7, ok, f"LPS A00/A11 {aniso:.3f} (target 0.715), LVS A00 {lvs[0, 0]:.2f} A11 {lvs[1, 1]:.2f} "
                     f"(diff {cubic:.2%}), LVS/LPS D00 {factor:.2f}")
    assert ok


def test_criterion_08_size_effect(criterion):
    rows = size_effect_sweep("gyroid", 0.15, True, 32, range(1, 9), E_BASE, NU_BASE, H)
    table = np.array([r[1:7] for r in rows], dtype=float)
    monotone = bool(np.all(np.diff(table, axis=0) >= 0))
    a4 = table[3, :3]
    ok = monotone and bool(np.all(a4 >= 0.90 - 0.03)) and all(r[-1] == "" for r in rows)
    detail = f"monotone {monotone}, A at Nz=4 " + ", ".join(f"{v:.3f}" for v in a4)
    detail += f", Nz=1 A {table[0, 0]:.2f}/{table[0, 1]:.2f} D {table[0, 3]:.2f}/{table[0, 4]:.2f}"
    criterion(8, ok, detail)
    assert ok


def test_criterion_09_bimaterial(criterion, primitive96):
    geom = PlateGeometry.for_grid(primitive96, H)
    dmap = build_dof_map(primitive96.data, *geom.spacing, H)
    field = multi_material_field(np.where(dmap.z_active > 0, 2, 1), {1: (1215.0, 0.35), 2: (500.0, 0.35)})
    m = homogenize_plate(primitive96, field, geom).abd.m
    ok = within(m[0, 3], -229.85, 0.02) and within(m[0, 4], -176.77, 0.02) and within(m[0, 0], 245.86, 0.01)
    criterion(9, ok, f"B00 {pct(m[0, 3], -229.85)}, B01 {pct(m[0, 4], -176.77)}, A00 {pct(m[0, 0], 245.86)}")
    assert ok


def test_criterion_10_thermal(criterion, primitive96):
    full = solid((16, 16, 16))
    k_full = homogenize_thermal(full, 60.5, PlateGeometry.for_grid(full, H), tol=1e-10).k_hom
    full_err = np.abs(k_full - 605.0 * np.eye(2)).max() / 605.0
    k = homogenize_thermal(primitive96, 60.5, PlateGeometry.for_grid(primitive96, H)).k_hom
    ok = (full_err <= 1e-8 and within(k[0, 0], 60.19, 0.01) and within(k[1, 1], 60.19, 0.01)
          and abs(k[0, 1]) <= 0.05)
    criterion(10, ok, f"full-solid rel err {full_err:.1e}, k00 {pct(k[0, 0], 60.19)}, k11 {pct(k[1, 1], 60.19)}, "
                      f"k01 {k[0, 1]:.2e}")
    assert ok


def test_criterion_11_property_suite(criterion, tmp_path):
    t0 = time.perf_counter()
    grid = generate_tpms(LatticeSpec("primitive", (1, 1, 1), 16, 0.35, True))
    geom = PlateGeometry.for_grid(grid, H)
    field = MaterialField.homogeneous(isotropic_elasticity(1.0, 0.3))
    res = homogenize_plate(grid, field, geom, tol=1e-11)
    symmetric = np.array_equal(res.abd.m, res.abd.m.T)
    scale = np.abs(res.abd.m).max()
    mirror = np.abs(res.abd.B).max() <= 1e-3 * scale

    scaled = homogenize_plate(grid, field.scaled(3.0), geom, tol=1e-11).abd.m
    linear = np.abs(scaled - 3.0 * res.abd.m).max() <= 1e-9 * np.abs(scaled).max()

    el = element_stiffness(isotropic_elasticity(1.0, 0.3), 0.5, 0.5, 0.5)
    w = np.linalg.eigvalsh(el.ke)
    six_zero = bool(np.all(np.abs(w[:6]) < 1e-10 * w[-1]) and w[6] > 1e-6 * w[-1])

    dmap = build_dof_map(grid.data, *geom.spacing, H)
    k = assemble_stiffness(el.ke, dmap)
    t = np.zeros((k.shape[0], 3))
    for axis in range(3):
        t[axis::3, axis] = 1.0
    nullvector = np.abs(k @ t).max() <= 1e-10 * abs(k).max()

    path = tmp_path / "g.vxl"
    grid.save(path)
    outputs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        main(["plate", "-i", str(path), "--thickness", "10", "--E", "1", "--nu", "0.3", "--json", str(out),
              "--no-timing"])
        outputs.append(out.read_bytes())
    deterministic = outputs[0] == outputs[1] and json.loads(outputs[0])["abd"] is not None
    elapsed = time.perf_counter() - t0
    flags = dict(symmetric=symmetric, mirror=mirror, linear=linear, six_zero=six_zero,
                 nullvector=nullvector, deterministic=deterministic)
    ok = all(flags.values()) and elapsed < 30
    criterion(11, ok, ", ".join(f"{k}={v}" for k, v in flags.items()) + f", {elapsed:.1f}s")
    assert ok


def test_criterion_12_mesh_convergence(criterion):
    rows = convergence_sweep("primitive", 0.15, True, [40, 50, 60, 70, 80], E_BASE, NU_BASE, H)
    vals = np.array([[r[1], r[2]] for r in rows])
    change = np.abs(np.diff(vals, axis=0)) / vals[:-1]
    tail = change[2:]  # 60 -> 70 and 70 -> 80
    ok = all(r[-1] == "" for r in rows) and bool(np.all(tail < 0.02))
    criterion(12, ok, "A00 " + ", ".join(f"{v:.2f}" for v in vals[:, 0]) + "; D00 "
              + ", ".join(f"{v:.1f}" for v in vals[:, 1]) + f"; max change N>=60 {tail.max():.2%}")
    assert ok
