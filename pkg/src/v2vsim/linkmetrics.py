"""Link-budget arithmetic: received power, noise floor, SNR, rate, outage."""

import math
from dataclasses import dataclass

import numpy as np

from . import beam, losmodel, pathloss

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class LinkSample:
    """Per-trial link outcome (fields may be arrays in batch mode)."""

    rx_power_dbm: float
    noise_power_dbm: float
    snr_db: float
    rate_bps: float
    outage: bool
    breakdown: pathloss.PathLossBreakdown
    gains_db: float


def noise_power_dbm(bandwidth_hz, noise_figure_db):
    """Thermal noise floor: -174 dBm/Hz plus bandwidth and noise figure."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth_hz must be > 0")
    return -174.0 + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def shannon_rate_bps(snr_db, bandwidth_hz):
    """Capacity bound bandwidth * log2(1 + snr)."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth_hz must be > 0")
    snr = np.power(10.0, np.asarray(snr_db, dtype=float) / 10.0)
    out = bandwidth_hz * np.log1p(snr) / _LN2
    return float(out) if np.ndim(snr_db) == 0 else out


def evaluate_link(master_seed, distance_index, d, radio, pattern, alignment,
                  config, trial=0, size=None):
    """Sample geometry, path loss and gains, and assemble the link budget.

    `radio` is "dsrc" (omnidirectional, 0 dBi each end, pattern and alignment
    must be None) or "mmwave" (uses the given BeamPattern and alignment
    mode). With `size` set, all LinkSample fields are arrays over trials
    0..size-1; otherwise the single trial `trial` is evaluated, bit-equal to
    the corresponding batch entry.
    """
    sub = config.radio(radio)
    geometry = losmodel.sample_link_geometry(
        master_seed, distance_index, d, config, sub.carrier_hz,
        trial=trial, size=size,
    )

    if radio == "dsrc":
        if pattern is not None or alignment is not None:
            raise ValueError("dsrc links are omnidirectional; no pattern/alignment")
        breakdown = pathloss.dsrc_path_loss(
            master_seed, distance_index, geometry, config, trial=trial, size=size
        )
        gains = 0.0 if size is None else np.zeros(size)
    elif radio == "mmwave":
        if pattern is None or alignment is None:
            raise ValueError("mmwave links need a pattern and an alignment mode")
        breakdown = pathloss.mmwave_path_loss(geometry, config)
        gains = beam.end_to_end_gain_db(
            pattern, alignment, d, config,
            master_seed=master_seed, distance_index=distance_index,
            trial=trial, size=size,
        )
    else:
        raise ValueError(f"unknown radio {radio!r}")

    noise = noise_power_dbm(sub.bandwidth_hz, config.noise_figure_db)
    rx = config.tx_power_dbm + gains - breakdown.total_db
    snr = rx - noise
    rate = shannon_rate_bps(snr, sub.bandwidth_hz)
    outage = snr < config.outage_snr_threshold_db
    if size is None:
        outage = bool(outage)
    return LinkSample(
        rx_power_dbm=rx,
        noise_power_dbm=noise,
        snr_db=snr,
        rate_bps=rate,
        outage=outage,
        breakdown=breakdown,
        gains_db=gains,
    )
