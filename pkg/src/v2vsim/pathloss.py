"""Path loss models for both radios.

The 5.9 GHz model is dual-slope log-distance about the Fresnel breakpoint
distance with per-slope lognormal shadowing and a single knife-edge
diffraction penalty on NLOS trials. The 60 GHz model is log-distance with
LOS/NLOS parameter pairs plus 15 dB/km air absorption; its NLOS intercept
already carries the blockage penalty, so it has no shadowing or knife-edge
terms of its own.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import randkit
from .scenario import wavelength


@dataclass(frozen=True)
class PathLossBreakdown:
    """Additive dB decomposition of one path loss evaluation."""

    total_db: float
    deterministic_db: float
    shadowing_db: float
    knife_edge_db: float
    model_tag: str  # "dsrc" or "mmwave"
    nlos: bool

    @property
    def los_state(self):
        return "NLOS" if self.nlos else "LOS"


def clamp(x, a, b):
    """Clamp x into [a, b]."""
    if a > b:
        raise ValueError("clamp requires a <= b")
    out = np.minimum(np.maximum(np.asarray(x, dtype=float), a), b)
    return float(out) if np.ndim(x) == 0 else out


def fresnel_distance(h_i, h_j, lam):
    """Dual-slope breakpoint distance 4 * h_i * h_j / lambda."""
    return 4.0 * h_i * h_j / lam


def free_space_reference_db(lam, d0):
    """Free-space loss 20*log10(4*pi*d0 / lambda) at the reference distance."""
    return 20.0 * math.log10(4.0 * math.pi * d0 / lam)


def knife_edge_attenuation_db(H, r_f, cap_db=60.0):
    """Single knife-edge diffraction loss for excess height H and zone radius r_f.

    v = sqrt(2)*H/r_f; A(v) = 6.9 + 20*log10(sqrt((v-0.1)^2+1) + v - 0.1)
    for v > -0.78, zero below. Clamped to [0, cap_db]; a degenerate r_f = 0
    with the obstacle at or above the line returns the cap.
    """
    H = np.asarray(H, dtype=float)
    r_f = np.asarray(r_f, dtype=float)
    scalar = H.ndim == 0 and r_f.ndim == 0
    H, r_f = np.broadcast_arrays(H, r_f)

    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.sqrt(2.0) * H / r_f
        t = v - 0.1
        loss = 6.9 + 20.0 * np.log10(np.sqrt(t * t + 1.0) + t)
    loss = np.where(v > -0.78, loss, 0.0)
    loss = np.clip(loss, 0.0, cap_db)
    # r_f = 0: obstacle at or above the line blocks fully, below it not at all
    degenerate = r_f == 0.0
    loss = np.where(degenerate & (H >= 0.0), cap_db, loss)
    loss = np.where(degenerate & (H < 0.0), 0.0, loss)
    return float(loss) if scalar else loss


def dsrc_deterministic_db(d, config):
    """Dual-slope mean path loss at 5.9 GHz (no shadowing, no diffraction)."""
    sub = config.dsrc
    lam = wavelength(sub.carrier_hz)
    d0 = sub.reference_distance_m
    d_c = fresnel_distance(config.tx_height_m, config.rx_height_m, lam)
    d = np.asarray(d, dtype=float)
    pl0 = free_space_reference_db(lam, d0)
    near = 10.0 * sub.pl_exponent_1 * np.log10(clamp(d, d0, d_c) / d0)
    far = 10.0 * sub.pl_exponent_2 * np.log10(clamp(d, d_c, np.inf) / d_c)
    out = pl0 + near + far
    return float(out) if out.ndim == 0 else out


def dsrc_path_loss(master_seed, distance_index, geometry, config, trial=0, size=None):
    """Full 5.9 GHz path loss for sampled geometry, drawing shadowing.

    Shadowing is an independent zero-mean Gaussian per trial whose standard
    deviation switches at the breakpoint distance. NLOS trials add the
    knife-edge loss of the sampled obstacle.
    """
    sub = config.dsrc
    lam = wavelength(sub.carrier_hz)
    d = geometry.distance_m
    d_c = fresnel_distance(config.tx_height_m, config.rx_height_m, lam)
    sigma = sub.shadow_std_db_1 if d <= d_c else sub.shadow_std_db_2

    det = dsrc_deterministic_db(d, config)
    seed = randkit.derive_stream(master_seed, distance_index, randkit.DSRC_SHADOWING)
    shadow = randkit.sample_normal(seed, 0.0, sigma, trial=trial, size=size)

    # 5.9 GHz sees its own, larger Fresnel zone around the same obstacle
    r_f = fresnel_radius_for(geometry, lam)
    h = (
        (config.tx_height_m - config.rx_height_m) * geometry.obstacle_distance_m / d
        + config.tx_height_m
        - 0.6 * r_f
        + config.antenna_length_m
    )
    excess = np.asarray(geometry.obstacle_height_m, dtype=float) - h
    knife = knife_edge_attenuation_db(excess, r_f, config.knife_edge_cap_db)
    knife = np.where(geometry.is_nlos, knife, 0.0)
    if size is None:
        knife = float(knife)

    total = det + shadow + knife
    return PathLossBreakdown(
        total_db=total,
        deterministic_db=det if size is None else np.full_like(total, det),
        shadowing_db=shadow,
        knife_edge_db=knife,
        model_tag="dsrc",
        nlos=geometry.is_nlos,
    )


def fresnel_radius_for(geometry, lam):
    """Fresnel radius of this geometry under a different wavelength."""
    d = geometry.distance_m
    d_obs = np.asarray(geometry.obstacle_distance_m, dtype=float)
    out = np.sqrt(np.maximum(lam * d_obs * (d - d_obs) / d, 0.0))
    return float(out) if out.ndim == 0 else out


def mmwave_path_loss(geometry, config):
    """60 GHz path loss: slope/intercept by LOS state plus air absorption."""
    sub = config.mmwave
    d = geometry.distance_m
    nlos = geometry.is_nlos
    slope = np.where(nlos, sub.nlos_slope, sub.los_slope)
    intercept = np.where(nlos, sub.nlos_intercept_db, sub.los_intercept_db)
    total = slope * 10.0 * np.log10(d) + intercept + sub.absorption_db_per_km * d / 1000.0
    scalar = np.ndim(nlos) == 0
    if scalar:
        total = float(total)
    return PathLossBreakdown(
        total_db=total,
        deterministic_db=total,
        shadowing_db=0.0 if scalar else np.zeros_like(total),
        knife_edge_db=0.0 if scalar else np.zeros_like(total),
        model_tag="mmwave",
        nlos=nlos,
    )
