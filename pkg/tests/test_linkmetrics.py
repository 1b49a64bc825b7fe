import numpy as np
import pytest

from v2vsim import beam, linkmetrics, losmodel, pathloss
from v2vsim.scenario import ScenarioConfig

CFG = ScenarioConfig()


def test_noise_floor_oracles():
    assert linkmetrics.noise_power_dbm(400e6, 0.0) == pytest.approx(-87.97940, abs=1e-4)
    assert linkmetrics.noise_power_dbm(75e6, 0.0) == pytest.approx(-95.24939, abs=1e-4)
    assert linkmetrics.noise_power_dbm(75e6, 6.0) == pytest.approx(-89.24939, abs=1e-4)
    with pytest.raises(ValueError):
        linkmetrics.noise_power_dbm(0.0, 0.0)


def test_shannon_rate_oracles():
    assert linkmetrics.shannon_rate_bps(0.0, 400e6) == pytest.approx(4e8)
    assert linkmetrics.shannon_rate_bps(30.0, 75e6) == pytest.approx(747541969.4, abs=1.0)
    # 3 dB of SNR roughly doubles the rate deep in the low-SNR regime
    low = linkmetrics.shannon_rate_bps(-30.0, 1e6)
    assert linkmetrics.shannon_rate_bps(-26.9897, 1e6) == pytest.approx(2 * low, rel=1e-3)
    arr = linkmetrics.shannon_rate_bps(np.array([0.0, 30.0]), 400e6)
    assert arr.shape == (2,)
    assert np.all(np.diff(linkmetrics.shannon_rate_bps(np.linspace(-40, 40, 50), 1e6)) > 0)


def test_evaluate_link_dsrc_budget_is_consistent():
    sample = linkmetrics.evaluate_link(77, 4, 150.0, "dsrc", None, None, CFG, trial=3)
    geometry = losmodel.sample_link_geometry(77, 4, 150.0, CFG, 5.9e9, trial=3)
    breakdown = pathloss.dsrc_path_loss(77, 4, geometry, CFG, trial=3)
    assert sample.rx_power_dbm == CFG.tx_power_dbm - breakdown.total_db
    assert sample.noise_power_dbm == linkmetrics.noise_power_dbm(75e6, 0.0)
    assert sample.snr_db == sample.rx_power_dbm - sample.noise_power_dbm
    assert sample.rate_bps == linkmetrics.shannon_rate_bps(sample.snr_db, 75e6)
    assert sample.outage == (sample.snr_db < -5.0)
    assert sample.gains_db == 0.0


def test_evaluate_link_mmwave_uses_pattern_gains():
    pattern = beam.build_pattern(64, width_law=CFG.beam.width_law)
    sample = linkmetrics.evaluate_link(77, 4, 150.0, "mmwave", pattern, "aligned",
                                       CFG, trial=0)
    geometry = losmodel.sample_link_geometry(77, 4, 150.0, CFG, 60e9, trial=0)
    breakdown = pathloss.mmwave_path_loss(geometry, CFG)
    want_rx = CFG.tx_power_dbm + 2 * pattern.mainlobe_gain_db - breakdown.total_db
    assert sample.rx_power_dbm == pytest.approx(want_rx, abs=1e-12)
    assert sample.noise_power_dbm == linkmetrics.noise_power_dbm(400e6, 0.0)


def test_evaluate_link_argument_contract():
    pattern = beam.build_pattern(4)
    with pytest.raises(ValueError):
        linkmetrics.evaluate_link(1, 0, 100.0, "dsrc", pattern, None, CFG)
    with pytest.raises(ValueError):
        linkmetrics.evaluate_link(1, 0, 100.0, "dsrc", None, "aligned", CFG)
    with pytest.raises(ValueError):
        linkmetrics.evaluate_link(1, 0, 100.0, "mmwave", None, "aligned", CFG)
    with pytest.raises(ValueError):
        linkmetrics.evaluate_link(1, 0, 100.0, "mmwave", pattern, None, CFG)
    with pytest.raises(ValueError):
        linkmetrics.evaluate_link(1, 0, 100.0, "laser", None, None, CFG)


def test_evaluate_link_scalar_matches_batch():
    pattern = beam.build_pattern(64)
    batch = linkmetrics.evaluate_link(9, 2, 350.0, "mmwave", pattern, "gps_pointed",
                                      CFG, size=10)
    for k in range(10):
        one = linkmetrics.evaluate_link(9, 2, 350.0, "mmwave", pattern,
                                        "gps_pointed", CFG, trial=k)
        assert one.rx_power_dbm == batch.rx_power_dbm[k]
        assert one.snr_db == batch.snr_db[k]
        assert one.rate_bps == batch.rate_bps[k]
        assert one.outage == batch.outage[k]


def test_outage_threshold_is_strict():
    pattern = beam.build_pattern(1)
    sample = linkmetrics.evaluate_link(5, 0, 100.0, "mmwave", pattern, "aligned",
                                       CFG, size=200)
    marginal = sample.snr_db >= CFG.outage_snr_threshold_db
    assert np.array_equal(sample.outage, ~marginal)


def test_higher_noise_figure_cuts_rate():
    quiet = linkmetrics.evaluate_link(5, 1, 200.0, "dsrc", None, None, CFG, size=100)
    from dataclasses import replace
    loud_cfg = replace(CFG, noise_figure_db=10.0)
    loud = linkmetrics.evaluate_link(5, 1, 200.0, "dsrc", None, None, loud_cfg, size=100)
    assert np.allclose(loud.snr_db, quiet.snr_db - 10.0, rtol=0, atol=1e-9)
    assert np.all(loud.rate_bps < quiet.rate_bps)
