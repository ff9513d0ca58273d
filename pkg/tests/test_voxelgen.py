import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from platehomog.voxelgen import (DensityUnattainableError, LatticeSpec, VoxelGrid, add_skins, bcc_distance,
                                 generate_bcc, generate_tpms, threshold, tpms_field)


def test_full_density_limit():
    phi = tpms_field("primitive", 8)
    assert threshold(phi, np.abs(phi).max(), sheet=True).all()


def test_primitive_sheet_density_96():
    g = generate_tpms(LatticeSpec("primitive", (1, 1, 1), 96, 0.15, True))
    assert g.shape == (96, 96, 96)
    assert abs(g.solid_fraction() - 0.15) <= 0.005
    assert set(np.unique(g.data)) == {0, 1}


@pytest.mark.parametrize("family", ["primitive", "iwp"])
def test_mid_plane_mirror(family):
    g = generate_tpms(LatticeSpec(family, (1, 1, 1), 24, 0.2, True)).data
    np.testing.assert_array_equal(g, g[:, :, ::-1])


def test_primitive_fourfold_about_z():
    g = generate_tpms(LatticeSpec("primitive", (1, 1, 1), 20, 0.15, True)).data
    np.testing.assert_array_equal(g, np.rot90(g, axes=(0, 1)))


@pytest.mark.parametrize("family", ["gyroid", "diamond"])
def test_sheet_is_a_half_period_glide(family):
    # no plain mirror about mid-z; z -> -z combined with an in-plane shift (half period for
    # the gyroid, quarter period for diamond) maps the sheet onto itself
    res = 24
    g = generate_tpms(LatticeSpec(family, (1, 1, 1), res, 0.25 if family == "diamond" else 0.2, True)).data
    mirrored = g[:, :, ::-1]
    assert not np.array_equal(g, mirrored)
    images = [np.roll(mirrored, (sx, sy), axis=(0, 1)) for sx in range(0, res, res // 4) for sy in range(0, res, res // 4)]
    assert any(np.array_equal(g, im) for im in images)


def test_network_mode():
    g = generate_tpms(LatticeSpec("gyroid", (1, 1, 1), 32, 0.4, False))
    assert abs(g.solid_fraction() - 0.4) <= 0.005


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["primitive", "gyroid", "diamond", "iwp"]), st.floats(0, 3), st.floats(0, 3))
def test_fraction_monotone_in_threshold(family, t1, t2):
    phi = tpms_field(family, 12)
    lo, hi = sorted((t1, t2))
    assert threshold(phi, lo, True).mean() <= threshold(phi, hi, True).mean()


def test_deterministic():
    spec = LatticeSpec("diamond", (2, 1, 1), 32, 0.15, True)
    assert generate_tpms(spec).to_bytes() == generate_tpms(spec).to_bytes()


def test_cells_tile():
    one = generate_tpms(LatticeSpec("gyroid", (1, 1, 1), 24, 0.2, True)).data
    many = generate_tpms(LatticeSpec("gyroid", (2, 1, 3), 24, 0.2, True)).data
    np.testing.assert_array_equal(many, np.tile(one, (2, 1, 3)))


def test_bcc_upper_radius_fills_cell():
    assert bcc_distance(8).max() <= np.sqrt(3.0)


def test_bcc_density_64():
    g = generate_bcc(LatticeSpec("bcc", (1, 1, 1), 64, 0.15))
    assert abs(g.solid_fraction() - 0.15) <= 0.005


def test_bcc_tiling():
    a = generate_bcc(LatticeSpec("bcc", (2, 2, 2), 16, 0.1)).data
    b = generate_bcc(LatticeSpec("bcc", (1, 1, 1), 16, 0.1)).data
    np.testing.assert_array_equal(a, np.tile(b, (2, 2, 2)))


def test_bcc_distance_periodic_and_symmetric():
    d = bcc_distance(10)
    np.testing.assert_allclose(d, d[::-1, :, :], atol=1e-12)
    np.testing.assert_allclose(d, d.transpose(1, 2, 0), atol=1e-12)


def test_density_unattainable():
    with pytest.raises(DensityUnattainableError, match="unattainable"):
        generate_tpms(LatticeSpec("primitive", (1, 1, 1), 4, 0.06, True))


@pytest.mark.parametrize("kwargs", [dict(family="schwarz"), dict(relative_density=1.5),
                                    dict(relative_density=0.005), dict(resolution=3), dict(cells=(1, 0, 1))])
def test_invalid_spec(kwargs):
    base = dict(family="primitive", cells=(1, 1, 1), resolution=8, relative_density=0.2)
    with pytest.raises(ValueError):
        LatticeSpec(**{**base, **kwargs})


def test_family_mismatch():
    with pytest.raises(ValueError):
        generate_bcc(LatticeSpec("gyroid"))
    with pytest.raises(ValueError):
        generate_tpms(LatticeSpec("bcc"))


def test_skins():
    g = generate_tpms(LatticeSpec("primitive", (1, 1, 1), 96, 0.15, True))
    assert add_skins(g, 0, 0, 1).to_bytes() == g.to_bytes()
    s = add_skins(g, 2, 2, 1)
    assert s.shape == (96, 96, 100)
    assert np.all(s.data[:, :, [0, 1, 98, 99]] == 1)
    np.testing.assert_array_equal(s.data[:, :, 2:98], g.data)
    old = np.count_nonzero(g.data)
    assert s.solid_fraction() == (old + 4 * 96**2) / (96**2 * 100)


def test_skin_material_id():
    g = VoxelGrid(np.ones((2, 2, 2), np.uint8))
    s = add_skins(g, 1, 0, 7)
    assert np.all(s.data[:, :, 0] == 7) and s.nz == 3
    with pytest.raises(ValueError):
        add_skins(g, 1, 1, 0)


def test_vxl_round_trip(tmp_path):
    data = np.zeros((3, 4, 5), np.uint8)
    data[1, 2, 3] = 9
    data[0, 0, 4] = 1
    g = VoxelGrid(data)
    raw = g.to_bytes()
    assert raw[:4] == b"VXL1" and raw[4:16] == np.array([3, 4, 5], "<u4").tobytes()
    # x slowest, z fastest
    assert raw[16 + (1 * 4 + 2) * 5 + 3] == 9
    g.save(tmp_path / "g.vxl")
    np.testing.assert_array_equal(VoxelGrid.load(tmp_path / "g.vxl").data, data)
    with pytest.raises(ValueError):
        VoxelGrid.from_bytes(b"XXXX" + raw[4:])
    with pytest.raises(ValueError):
        VoxelGrid.from_bytes(raw[:-1])


def test_grid_invariants():
    with pytest.raises(ValueError):
        VoxelGrid(np.zeros((2, 2, 2), np.uint8))
    with pytest.raises(ValueError):
        VoxelGrid(np.full((2, 2, 2), 300))
