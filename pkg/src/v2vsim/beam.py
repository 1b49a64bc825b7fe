"""Sectored antenna pattern and beam alignment states.

An N-element array is reduced to a flat main lobe and a flat side lobe over a
180 degree sector. The main lobe holds a fixed fraction kappa of the radiated
power, so the two gains follow from the beamwidth law alone and power is
conserved exactly for any law. Alignment is one of: perfect, geometrically
misaligned by the lane offset, or pointed using error-prone position data.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import randkit

ALIGNMENT_MODES = ("aligned", "misaligned", "gps_pointed")


@dataclass(frozen=True)
class BeamPattern:
    n_elements: int
    mainlobe_gain_db: float
    beamwidth_rad: float
    sidelobe_gain_db: float
    sector_rad: float


def _db(linear):
    # kappa = 1 puts zero power in the side lobe; report it as -inf dBi
    return 10.0 * math.log10(linear) if linear > 0.0 else float("-inf")


def build_pattern(n_elements, kappa=0.9, sector_rad=math.pi, width_law="inverse_n"):
    """Sectored pattern for an N-element array.

    The beamwidth law sets theta_b = sector/N ("inverse_n") or sector/sqrt(N)
    ("inverse_sqrt_n"); with main-lobe power fraction kappa the gains are
    G_m = kappa*sector/theta_b and G_s = (1-kappa)*sector/(sector-theta_b),
    which satisfies G_m*theta_b + G_s*(sector-theta_b) = sector exactly.
    A single element is omnidirectional over the sector (both gains 0 dB).
    """
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    if width_law == "inverse_n":
        theta_b = sector_rad / n_elements
    elif width_law == "inverse_sqrt_n":
        theta_b = sector_rad / math.sqrt(n_elements)
    else:
        raise ValueError(f"unknown width_law {width_law!r}")

    if theta_b >= sector_rad:
        return BeamPattern(n_elements, 0.0, sector_rad, 0.0, sector_rad)

    g_main = kappa * sector_rad / theta_b
    g_side = (1.0 - kappa) * sector_rad / (sector_rad - theta_b)
    return BeamPattern(n_elements, _db(g_main), theta_b, _db(g_side), sector_rad)


def gain_at(pattern, offaxis_angle_rad):
    """Pattern gain (dBi) at an off-axis angle: main lobe inside half-width."""
    angle = np.abs(np.asarray(offaxis_angle_rad, dtype=float))
    out = np.where(
        angle <= pattern.beamwidth_rad / 2.0,
        pattern.mainlobe_gain_db,
        pattern.sidelobe_gain_db,
    )
    return float(out) if np.ndim(offaxis_angle_rad) == 0 else out


def misalignment_angle(d, road_halfwidth_m):
    """Pointing offset from a full-carriageway lateral displacement."""
    if d <= 0:
        raise ValueError("d must be > 0")
    return math.atan(road_halfwidth_m / d)


def gps_pointing_error(master_seed, distance_index, d, config, end="tx",
                       trial=0, size=None):
    """Angular pointing error from a position-data error at one link end.

    The lateral position error is Gamma distributed; a direction sign is
    drawn (and consumed) even though only the error magnitude matters to a
    symmetric two-lobe pattern. Each end has its own independent streams.
    """
    err_purpose = randkit.GPS_ERROR_TX if end == "tx" else randkit.GPS_ERROR_RX
    sign_purpose = randkit.GPS_SIGN_TX if end == "tx" else randkit.GPS_SIGN_RX
    err_seed = randkit.derive_stream(master_seed, distance_index, err_purpose)
    sign_seed = randkit.derive_stream(master_seed, distance_index, sign_purpose)

    gp = config.gps_error
    epsilon = randkit.sample_gamma(
        err_seed, gp.alpha, gp.beta, trial=trial, size=size,
        beta_is_rate=gp.gamma_is_rate,
    )
    sign = np.where(randkit.uniforms(sign_seed, trial=trial, size=size) < 0.5, -1.0, 1.0)
    return np.abs(np.arctan(sign * epsilon / d))


def end_to_end_gain_db(pattern, mode, d, config, master_seed=None,
                       distance_index=None, trial=0, size=None):
    """Combined TX+RX antenna gain for one alignment mode.

    aligned: both ends on boresight. misaligned: both ends offset by the
    geometric misalignment angle. gps_pointed: each end offset by its own
    drawn pointing error (requires master_seed and distance_index).
    """
    if mode == "aligned":
        gain = 2.0 * pattern.mainlobe_gain_db
        return gain if size is None else np.full(size, gain)
    if mode == "misaligned":
        delta = misalignment_angle(d, config.road_halfwidth_m)
        gain = 2.0 * gain_at(pattern, delta)
        return gain if size is None else np.full(size, gain)
    if mode == "gps_pointed":
        if master_seed is None or distance_index is None:
            raise ValueError("gps_pointed mode needs master_seed and distance_index")
        tx_err = gps_pointing_error(master_seed, distance_index, d, config, "tx",
                                    trial=trial, size=size)
        rx_err = gps_pointing_error(master_seed, distance_index, d, config, "rx",
                                    trial=trial, size=size)
        out = gain_at(pattern, tx_err) + gain_at(pattern, rx_err)
        return float(out) if size is None else out
    raise ValueError(f"unknown alignment mode {mode!r}")
