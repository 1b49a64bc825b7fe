"""Stochastic blockage model: vehicle obstruction of the first Fresnel zone.

A blocking vehicle sits at a uniform position along the link. The link is
declared NLOS when (a) some vehicle is present, with a distance-dependent
polynomial probability, and (b) the vehicle's height reaches the effective
LOS line, which droops by 60% of the first Fresnel-zone radius at the
obstacle position. All draws are per trial; averaging recovers the marginal
NLOS probability.
"""

from dataclasses import dataclass

import numpy as np

from . import randkit
from .scenario import wavelength


@dataclass(frozen=True)
class LinkGeometry:
    """One sampled link realization (fields may be arrays in batch mode)."""

    distance_m: float
    obstacle_distance_m: float
    fresnel_radius_m: float
    effective_los_height_m: float
    nlos_probability: float
    is_nlos: bool
    # Height of the obstructing vehicle; NaN (or None for scalars) when LOS.
    obstacle_height_m: float | None


def blockage_probability(d, poly):
    """Probability that a potentially obstructing vehicle is present.

    The polynomial a*d^2 + b*d + c models the chance the link is free of
    candidate blockers; it is clamped to [0, 1] and inverted.
    """
    a, b, c = poly
    d = np.asarray(d, dtype=float)
    clear = np.clip(a * d * d + b * d + c, 0.0, 1.0)
    out = 1.0 - clear
    return float(out) if np.ndim(d) == 0 else out


def fresnel_radius(d, d_obs, lam):
    """First Fresnel-zone radius at distance d_obs along a d-meter link."""
    d = np.asarray(d, dtype=float)
    d_obs = np.asarray(d_obs, dtype=float)
    out = np.sqrt(np.maximum(lam * d_obs * (d - d_obs) / d, 0.0))
    return float(out) if out.ndim == 0 else out


def effective_los_height(h_i, h_j, d, d_obs, r_f, l_a):
    """Effective height of the LOS line at the obstacle position."""
    return (h_i - h_j) * d_obs / d + h_i - 0.6 * r_f + l_a


def nlos_probability(d, d_obs, config, carrier_hz):
    """P(NLOS) for a given obstacle position: blockage gate times height tail."""
    lam = wavelength(carrier_hz)
    r_f = fresnel_radius(d, d_obs, lam)
    h = effective_los_height(
        config.tx_height_m, config.rx_height_m, d, d_obs, r_f, config.antenna_length_m
    )
    z = (h - config.obstacle_height_mean_m) / config.obstacle_height_std_m
    return blockage_probability(d, config.blockage_poly) * randkit.q_function(z)


def sample_link_geometry(master_seed, distance_index, d, config, carrier_hz,
                         trial=0, size=None):
    """Draw one LinkGeometry (or a batch with array fields when size is set).

    Streams are keyed by (master_seed, distance_index, purpose) only, so the
    same geometry realizations are shared by every antenna setting, alignment
    mode, and radio evaluated at this distance point; radios differ only
    through the wavelength entering the Fresnel-zone computation.

    The obstacle height is drawn from the vehicle-height normal conditioned
    on reaching the effective LOS line, the same event the NLOS Bernoulli
    declared, so the knife-edge excess height is nonnegative by construction.
    The height uniform is consumed on LOS trials too, keeping all three
    purpose streams aligned by trial index.
    """
    lam = wavelength(carrier_hz)
    pos_seed = randkit.derive_stream(master_seed, distance_index, randkit.OBSTACLE_POSITION)
    los_seed = randkit.derive_stream(master_seed, distance_index, randkit.LOS_TRIAL)
    hgt_seed = randkit.derive_stream(master_seed, distance_index, randkit.OBSTACLE_HEIGHT)

    d_obs = randkit.sample_uniform(pos_seed, 0.0, d, trial=trial, size=size)
    r_f = fresnel_radius(d, d_obs, lam)
    h = effective_los_height(
        config.tx_height_m, config.rx_height_m, d, d_obs, r_f, config.antenna_length_m
    )
    z = (h - config.obstacle_height_mean_m) / config.obstacle_height_std_m
    p_nlos = blockage_probability(d, config.blockage_poly) * randkit.q_function(z)
    is_nlos = randkit.sample_bernoulli(los_seed, p_nlos, trial=trial, size=size)

    height_u = randkit.uniforms(hgt_seed, trial=trial, size=size)
    height = randkit.truncated_normal_from_uniform(
        height_u, config.obstacle_height_mean_m, config.obstacle_height_std_m, h
    )

    if size is None:
        return LinkGeometry(
            distance_m=float(d),
            obstacle_distance_m=float(d_obs),
            fresnel_radius_m=float(r_f),
            effective_los_height_m=float(h),
            nlos_probability=float(p_nlos),
            is_nlos=bool(is_nlos),
            obstacle_height_m=float(height) if is_nlos else None,
        )
    return LinkGeometry(
        distance_m=float(d),
        obstacle_distance_m=d_obs,
        fresnel_radius_m=r_f,
        effective_los_height_m=h,
        nlos_probability=p_nlos,
        is_nlos=is_nlos,
        obstacle_height_m=np.where(is_nlos, height, np.nan),
    )
