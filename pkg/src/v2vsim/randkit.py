"""Deterministic seedable random variates and the Gaussian tail function.

Streams are counter-based: a (master_seed, stream_id) pair maps to a Philox
generator whose output is prefix-stable, so draw number `trial` of a stream is
a pure function of (master_seed, stream_id, trial) no matter how many draws
are made at once or on which worker. Every sampler consumes exactly one
uniform per variate through an inverse-CDF transform, which keeps trial
positions aligned across all draw purposes.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, gammaincinv, ndtri

# Draw purposes; fixed small integers folded into stream ids. Values are part
# of the reproducibility contract and must never be renumbered.
OBSTACLE_POSITION = 0
LOS_TRIAL = 1
OBSTACLE_HEIGHT = 2
DSRC_SHADOWING = 3
GPS_ERROR_TX = 4
GPS_ERROR_RX = 5
GPS_SIGN_TX = 6
GPS_SIGN_RX = 7

_PURPOSE_BITS = 4  # room for 16 purposes


@dataclass(frozen=True)
class StreamSeed:
    """Address of one variate stream."""

    master_seed: int
    stream_id: int

    def generator(self):
        seq = np.random.SeedSequence((self.master_seed, self.stream_id))
        return np.random.Generator(np.random.Philox(seed=seq))


def derive_stream(master_seed, distance_index, purpose):
    """StreamSeed for one (distance point, draw purpose) pair."""
    return StreamSeed(master_seed, (distance_index << _PURPOSE_BITS) | purpose)


def uniforms(seed, trial=0, size=None):
    """Raw U[0,1) draws from a stream.

    With `size` given, returns draws 0..size-1 as an array; otherwise returns
    the single draw at position `trial`. The two access paths agree bit for
    bit: uniforms(s, trial=k) == uniforms(s, size=n)[k] for k < n.
    """
    gen = seed.generator()
    if size is not None:
        return gen.random(size)
    return gen.random(trial + 1)[-1]


def q_function(x):
    """Gaussian tail probability Q(x) = 0.5 * erfc(x / sqrt(2))."""
    out = 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))
    return float(out) if np.ndim(x) == 0 else out


def _from_uniform_normal(u, mean, std):
    # ndtri(0) is -inf; random() can return exactly 0.0, so nudge it off zero.
    u = np.maximum(u, 2.0**-64)
    return mean + std * ndtri(u)


def sample_uniform(seed, lo, hi, trial=0, size=None):
    """Uniform draw on [lo, hi)."""
    if lo > hi:
        raise ValueError("lo must be <= hi")
    return lo + (hi - lo) * uniforms(seed, trial, size)


def sample_normal(seed, mean, std, trial=0, size=None):
    """Gaussian draw; std = 0 degenerates to the mean."""
    if std < 0:
        raise ValueError("std must be >= 0")
    u = uniforms(seed, trial, size)
    if std == 0:
        return mean + 0.0 * u
    return _from_uniform_normal(u, mean, std)


def sample_truncated_normal_above(seed, mean, std, floor, trial=0, size=None):
    """Gaussian draw conditioned on the result being >= floor.

    Uses the tail inversion z = -ndtri(Q0 * (1 - u)) with Q0 = Q((floor -
    mean) / std), which is numerically stable however far `floor` sits in the
    upper tail and costs exactly one uniform.
    """
    if std <= 0:
        raise ValueError("std must be > 0")
    u = uniforms(seed, trial, size)
    return truncated_normal_from_uniform(u, mean, std, floor)


def truncated_normal_from_uniform(u, mean, std, floor):
    """Inverse-CDF transform of U[0,1) to a normal truncated below at floor."""
    z_floor = (np.asarray(floor, dtype=float) - mean) / std
    tail = q_function(z_floor) * (1.0 - u)
    tail = np.maximum(tail, 1e-300)  # guard against underflow at extreme floors
    value = mean - std * ndtri(tail)
    return np.maximum(value, floor)


def sample_gamma(seed, alpha, beta, trial=0, size=None, beta_is_rate=False):
    """Gamma draw with shape alpha and scale beta (mean alpha*beta).

    With beta_is_rate=True the second parameter is a rate and the scale is
    1/beta. Inverted through the regularized incomplete gamma function.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be > 0")
    u = uniforms(seed, trial, size)
    u = np.minimum(u, 1.0 - 2.0**-53)
    scale = 1.0 / beta if beta_is_rate else beta
    return gammaincinv(alpha, u) * scale


def sample_bernoulli(seed, p, trial=0, size=None):
    """Boolean draw with success probability p (scalar or per-draw array)."""
    return uniforms(seed, trial, size) < p
