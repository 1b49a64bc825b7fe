"""Monte Carlo sweep executor and statistical estimator.

Each distance point evaluates its trials as one vectorized batch fed by
counter-based substreams, so results are bit-identical no matter how many
worker threads execute the points or in which order they finish.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import beam, linkmetrics, losmodel, pathloss

METRICS = ("path_loss", "los_prob", "rate", "outage", "rx_power")
RADIOS = ("dsrc", "mmwave")

_METRIC_UNITS = {
    "path_loss": "dB",
    "los_prob": "probability",
    "rate": "bps",
    "outage": "probability",
    "rx_power": "dBm",
}

# two-sided 95% normal quantile
_Z95 = 1.959963984540054


class SpecError(ValueError):
    """Raised when a sweep spec is inconsistent with itself or the config."""


@dataclass(frozen=True)
class SweepSpec:
    metric: str
    radio: str
    n_elements: int | None = None
    alignment_mode: str | None = None
    distance_grid_m: tuple = ()
    n_trials: int = 1
    master_seed: int = 0


@dataclass(frozen=True)
class SweepEstimate:
    distance_m: float
    mean: float
    std_error: float
    ci95_lo: float
    ci95_hi: float
    n_trials: int
    units: str
    # provenance for serialization
    metric: str = ""
    radio: str = ""
    n_elements: int | None = None
    alignment_mode: str | None = None
    master_seed: int = 0


@dataclass(frozen=True)
class ComparisonReport:
    distances_m: tuple
    z_scores: tuple
    passed: tuple
    tolerance_sigma: float

    @property
    def fraction_passed(self):
        return sum(self.passed) / len(self.passed)

    @property
    def all_passed(self):
        return all(self.passed)


def validate_spec(spec, config):
    """Return a list of problems with a sweep spec; empty means runnable."""
    problems = []
    if spec.metric not in METRICS:
        problems.append(f"metric: must be one of {METRICS}, got {spec.metric!r}")
    if spec.radio not in RADIOS:
        problems.append(f"radio: must be one of {RADIOS}, got {spec.radio!r}")
    if spec.n_trials < 1:
        problems.append("n_trials: must be >= 1")
    grid = spec.distance_grid_m
    if len(grid) == 0:
        problems.append("distance_grid_m: must not be empty")
    elif any(b <= a for a, b in zip(grid, grid[1:])):
        problems.append("distance_grid_m: must be strictly increasing")
    if len(grid) and min(grid) <= 0:
        problems.append("distance_grid_m: distances must be positive")

    link_level = spec.metric in ("rate", "outage", "rx_power")
    if spec.radio == "dsrc":
        if spec.alignment_mode is not None:
            problems.append("alignment_mode: not applicable to dsrc (omnidirectional)")
        if spec.n_elements is not None:
            problems.append("n_elements: not applicable to dsrc")
    elif spec.radio == "mmwave" and link_level:
        if spec.n_elements is None or spec.n_elements < 1:
            problems.append("n_elements: required (>= 1) for mmwave link metrics")
        if spec.alignment_mode not in beam.ALIGNMENT_MODES:
            problems.append(
                f"alignment_mode: must be one of {beam.ALIGNMENT_MODES} for mmwave link metrics"
            )
    else:  # mmwave geometry-only metrics
        if spec.alignment_mode is not None:
            problems.append(f"alignment_mode: not applicable to metric {spec.metric}")
        if spec.n_elements is not None:
            problems.append(f"n_elements: not applicable to metric {spec.metric}")
    return problems


def _pattern_for(spec, config):
    if spec.radio != "mmwave" or spec.metric not in ("rate", "outage", "rx_power"):
        return None
    return beam.build_pattern(
        spec.n_elements,
        kappa=config.beam.kappa,
        sector_rad=config.beam.sector_rad,
        width_law=config.beam.width_law,
    )


def _metric_samples(spec, config, pattern, distance_index, d, trial=0, size=None):
    """Raw per-trial metric values at one distance point."""
    carrier = config.radio(spec.radio).carrier_hz
    if spec.metric == "los_prob":
        geom = losmodel.sample_link_geometry(
            spec.master_seed, distance_index, d, config, carrier,
            trial=trial, size=size,
        )
        return 1.0 - np.asarray(geom.is_nlos, dtype=float)
    if spec.metric == "path_loss":
        geom = losmodel.sample_link_geometry(
            spec.master_seed, distance_index, d, config, carrier,
            trial=trial, size=size,
        )
        if spec.radio == "dsrc":
            breakdown = pathloss.dsrc_path_loss(
                spec.master_seed, distance_index, geom, config,
                trial=trial, size=size,
            )
        else:
            breakdown = pathloss.mmwave_path_loss(geom, config)
        return np.asarray(breakdown.total_db, dtype=float)

    sample = linkmetrics.evaluate_link(
        spec.master_seed, distance_index, d, spec.radio, pattern,
        spec.alignment_mode, config, trial=trial, size=size,
    )
    if spec.metric == "rate":
        return np.asarray(sample.rate_bps, dtype=float)
    if spec.metric == "outage":
        return np.asarray(sample.outage, dtype=float)
    return np.asarray(sample.rx_power_dbm, dtype=float)


def _estimate(spec, d, values):
    values = np.asarray(values, dtype=float)
    n = values.size
    mean = float(np.mean(values))
    std_error = 0.0 if n == 1 else float(np.std(values, ddof=1) / math.sqrt(n))
    return SweepEstimate(
        distance_m=float(d),
        mean=mean,
        std_error=std_error,
        ci95_lo=mean - _Z95 * std_error,
        ci95_hi=mean + _Z95 * std_error,
        n_trials=n,
        units=_METRIC_UNITS[spec.metric],
        metric=spec.metric,
        radio=spec.radio,
        n_elements=spec.n_elements,
        alignment_mode=spec.alignment_mode,
        master_seed=spec.master_seed,
    )


def worker_count():
    """Thread cap from V2VSIM_THREADS; 0 or unset means automatic."""
    raw = os.environ.get("V2VSIM_THREADS", "0")
    try:
        requested = int(raw)
    except ValueError:
        raise SpecError(f"V2VSIM_THREADS: expected an integer, got {raw!r}") from None
    if requested < 0:
        raise SpecError("V2VSIM_THREADS: must be >= 0")
    if requested == 0:
        return min(os.cpu_count() or 1, 8)
    return requested


def run_sweep(spec, config):
    """Monte Carlo estimates for one spec, ordered by distance.

    Distance points execute in a thread pool capped by V2VSIM_THREADS; the
    per-point substream keying makes the output invariant to scheduling.
    """
    problems = validate_spec(spec, config)
    if problems:
        raise SpecError("; ".join(problems))
    pattern = _pattern_for(spec, config)

    def point(index_and_d):
        index, d = index_and_d
        values = _metric_samples(spec, config, pattern, index, d, size=spec.n_trials)
        return _estimate(spec, d, values)

    items = list(enumerate(spec.distance_grid_m))
    workers = worker_count()
    if workers == 1 or len(items) == 1:
        return [point(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, items))


def run_sweep_sequential(spec, config):
    """Brute-force oracle: one scalar evaluate per trial, no batching.

    Slow by design; used to confirm the vectorized path draws the identical
    sample set for small n_trials.
    """
    problems = validate_spec(spec, config)
    if problems:
        raise SpecError("; ".join(problems))
    pattern = _pattern_for(spec, config)
    out = []
    for index, d in enumerate(spec.distance_grid_m):
        values = [
            float(_metric_samples(spec, config, pattern, index, d, trial=t))
            for t in range(spec.n_trials)
        ]
        out.append(_estimate(spec, d, values))
    return out


def compare_estimates(run_a, run_b, tolerance_sigma):
    """Per-distance z-scores between two runs and a pass verdict per point."""
    if len(run_a) != len(run_b) or any(
        a.distance_m != b.distance_m for a, b in zip(run_a, run_b)
    ):
        raise ValueError("distance grids do not match")
    distances, zs, passed = [], [], []
    for a, b in zip(run_a, run_b):
        spread = math.hypot(a.std_error, b.std_error)
        diff = a.mean - b.mean
        if spread == 0.0:
            z = 0.0 if diff == 0.0 else math.inf
        else:
            z = diff / spread
        distances.append(a.distance_m)
        zs.append(z)
        passed.append(abs(z) <= tolerance_sigma)
    return ComparisonReport(
        distances_m=tuple(distances),
        z_scores=tuple(zs),
        passed=tuple(passed),
        tolerance_sigma=tolerance_sigma,
    )
