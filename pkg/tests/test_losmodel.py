import numpy as np
import pytest

from v2vsim import losmodel
from v2vsim.scenario import ScenarioConfig, wavelength

CFG = ScenarioConfig()
LAM60 = wavelength(60e9)
LAM59 = wavelength(5.9e9)


def test_blockage_probability_polynomial():
    poly = CFG.blockage_poly
    assert losmodel.blockage_probability(100.0, poly) == pytest.approx(0.05, rel=1e-9)
    assert losmodel.blockage_probability(0.0, poly) == 0.0


def test_blockage_probability_clips_to_unit_interval():
    assert losmodel.blockage_probability(10.0, (0.0, 0.0, 2.0)) == 0.0
    assert losmodel.blockage_probability(10.0, (0.0, 0.0, -1.0)) == 1.0
    arr = losmodel.blockage_probability(np.array([0.0, 100.0]), CFG.blockage_poly)
    assert arr.shape == (2,)
    assert np.all((arr >= 0.0) & (arr <= 1.0))


def test_fresnel_radius_oracle_and_symmetry():
    assert losmodel.fresnel_radius(100.0, 50.0, LAM60) == pytest.approx(0.35343107, abs=1e-6)
    assert losmodel.fresnel_radius(100.0, 30.0, LAM60) == pytest.approx(
        losmodel.fresnel_radius(100.0, 70.0, LAM60)
    )
    assert losmodel.fresnel_radius(100.0, 0.0, LAM60) == 0.0
    assert losmodel.fresnel_radius(100.0, 100.0, LAM60) == 0.0
    # longer wavelength opens a wider zone
    assert losmodel.fresnel_radius(100.0, 50.0, LAM59) > losmodel.fresnel_radius(
        100.0, 50.0, LAM60
    )


def test_effective_los_height_midspan():
    r_f = losmodel.fresnel_radius(100.0, 50.0, LAM60)
    h = losmodel.effective_los_height(1.42, 1.42, 100.0, 50.0, r_f, 0.10)
    assert h == pytest.approx(1.3079414, abs=1e-6)
    # unequal mount heights tilt the line
    assert losmodel.effective_los_height(2.0, 1.0, 100.0, 25.0, 0.0, 0.0) == pytest.approx(2.25)


def test_nlos_probability_oracle():
    p = losmodel.nlos_probability(100.0, 50.0, CFG, 60e9)
    assert p == pytest.approx(0.04944425, abs=1e-6)
    # carrier with the wider Fresnel zone is easier to obstruct
    assert losmodel.nlos_probability(100.0, 50.0, CFG, 5.9e9) > p


def test_sample_link_geometry_scalar_matches_batch():
    batch = losmodel.sample_link_geometry(99, 3, 250.0, CFG, 60e9, size=8)
    for k in range(8):
        one = losmodel.sample_link_geometry(99, 3, 250.0, CFG, 60e9, trial=k)
        assert one.obstacle_distance_m == batch.obstacle_distance_m[k]
        assert one.fresnel_radius_m == batch.fresnel_radius_m[k]
        assert one.effective_los_height_m == batch.effective_los_height_m[k]
        assert one.nlos_probability == batch.nlos_probability[k]
        assert one.is_nlos == batch.is_nlos[k]
        if one.is_nlos:
            assert one.obstacle_height_m == batch.obstacle_height_m[k]
        else:
            assert one.obstacle_height_m is None
            assert np.isnan(batch.obstacle_height_m[k])


def test_sample_link_geometry_bounds():
    g = losmodel.sample_link_geometry(7, 0, 300.0, CFG, 60e9, size=5000)
    assert np.all((g.obstacle_distance_m >= 0.0) & (g.obstacle_distance_m < 300.0))
    assert np.all(g.fresnel_radius_m >= 0.0)
    assert np.all((g.nlos_probability >= 0.0) & (g.nlos_probability <= 1.0))
    nlos = g.is_nlos
    # conditioned obstacle height reaches the LOS line on NLOS trials
    assert np.all(g.obstacle_height_m[nlos] >= g.effective_los_height_m[nlos])
    assert np.all(np.isnan(g.obstacle_height_m[~nlos]))


def test_sample_link_geometry_is_deterministic():
    a = losmodel.sample_link_geometry(11, 2, 120.0, CFG, 60e9, size=64)
    b = losmodel.sample_link_geometry(11, 2, 120.0, CFG, 60e9, size=64)
    assert np.array_equal(a.obstacle_distance_m, b.obstacle_distance_m)
    assert np.array_equal(a.is_nlos, b.is_nlos)


def test_geometry_is_shared_and_dsrc_blockage_contains_mmwave():
    mm = losmodel.sample_link_geometry(5, 9, 400.0, CFG, 60e9, size=20000)
    ds = losmodel.sample_link_geometry(5, 9, 400.0, CFG, 5.9e9, size=20000)
    # same obstacle positions, radio-specific Fresnel radii
    assert np.array_equal(mm.obstacle_distance_m, ds.obstacle_distance_m)
    assert np.all(ds.fresnel_radius_m >= mm.fresnel_radius_m)
    # shared LOS uniforms make dsrc blockage a superset of mmwave blockage
    assert np.all(ds.is_nlos >= mm.is_nlos)


def test_nlos_rate_matches_marginal_probability():
    g = losmodel.sample_link_geometry(13, 4, 350.0, CFG, 60e9, size=100000)
    observed = np.mean(g.is_nlos)
    expected = np.mean(g.nlos_probability)
    assert observed == pytest.approx(expected, abs=0.005)
