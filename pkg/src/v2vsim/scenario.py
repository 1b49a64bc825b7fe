"""Simulation configuration: highway geometry, radio parameters, derived constants.

The configuration is an immutable dataclass tree. Values load from an INI-style
file with flat sections ([scenario], [dsrc], [mmwave], [gps], [beam]); any key
left out takes the built-in highway default, unknown keys are rejected, and
validation reports every violated constraint at once.
"""

import configparser
import io
import math
import os
from dataclasses import dataclass, field, fields, replace

SPEED_OF_LIGHT = 299792458.0  # m/s

# Default 30-point distance grid, 2 m to 500 m.
_DEFAULT_GRID = tuple(2.0 + 498.0 * k / 29 for k in range(30))

# Calibrated highway blockage preset; see README. Coefficients are
# scenario-dependent (vehicle density) and meant to be overridden.
_DEFAULT_BLOCKAGE_POLY = (-1.67e-06, -3.33e-04, 1.0)

DEFAULT_MASTER_SEED = 20080704


class ConfigError(ValueError):
    """Raised when a config document fails to parse or validate."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class DsrcConfig:
    """5.9 GHz omnidirectional radio: dual-slope path loss with shadowing."""

    carrier_hz: float = 5.9e9
    bandwidth_hz: float = 75e6
    pl_exponent_1: float = 2.1
    pl_exponent_2: float = 2.3
    shadow_std_db_1: float = 2.6
    shadow_std_db_2: float = 4.4
    reference_distance_m: float = 1.0


@dataclass(frozen=True)
class MmwaveConfig:
    """60 GHz directional radio: log-distance path loss plus air absorption."""

    carrier_hz: float = 60e9
    bandwidth_hz: float = 400e6
    los_slope: float = 1.77
    los_intercept_db: float = 70.0
    nlos_slope: float = 1.71
    nlos_intercept_db: float = 78.6
    absorption_db_per_km: float = 15.0


@dataclass(frozen=True)
class GpsErrorConfig:
    """Gamma-distributed lateral position error of the pointing target."""

    alpha: float = 3.14733
    beta: float = 0.462432
    # When true, beta is a rate and the error scale becomes 1/beta.
    gamma_is_rate: bool = False


@dataclass(frozen=True)
class BeamConfig:
    """Sectored array pattern knobs: main-lobe power fraction and width law."""

    kappa: float = 0.9
    width_law: str = "inverse_n"  # or "inverse_sqrt_n"
    sector_rad: float = math.pi


@dataclass(frozen=True)
class ScenarioConfig:
    lane_width_m: float = 3.5
    num_lanes: int = 4
    tx_power_dbm: float = 19.5
    tx_height_m: float = 1.42
    rx_height_m: float = 1.42
    obstacle_height_mean_m: float = 1.50
    obstacle_height_std_m: float = 0.084
    antenna_length_m: float = 0.10
    distance_grid_m: tuple = _DEFAULT_GRID
    blockage_poly: tuple = _DEFAULT_BLOCKAGE_POLY
    antenna_elements: tuple = (1, 4, 64)
    noise_figure_db: float = 0.0
    outage_snr_threshold_db: float = -5.0
    knife_edge_cap_db: float = 60.0
    n_trials: int = 100000
    master_seed: int = DEFAULT_MASTER_SEED
    slot_duration_s: float | None = None  # reserved; static experiments ignore it
    dsrc: DsrcConfig = field(default_factory=DsrcConfig)
    mmwave: MmwaveConfig = field(default_factory=MmwaveConfig)
    gps_error: GpsErrorConfig = field(default_factory=GpsErrorConfig)
    beam: BeamConfig = field(default_factory=BeamConfig)

    @property
    def road_halfwidth_m(self):
        """Carriageway half-width W = num_lanes * lane_width / 2 (7 m default)."""
        return self.num_lanes * self.lane_width_m / 2.0

    def radio(self, name):
        if name == "dsrc":
            return self.dsrc
        if name == "mmwave":
            return self.mmwave
        raise ValueError(f"unknown radio {name!r}")


def wavelength(carrier_hz):
    """Wavelength in meters for a carrier frequency in Hz."""
    if carrier_hz <= 0:
        raise ValueError("carrier_hz must be positive")
    return SPEED_OF_LIGHT / carrier_hz


def validate(config):
    """Return a list of human-readable problems; empty means valid."""
    problems = []

    def positive(value, name):
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            problems.append(f"{name}: must be a positive finite number, got {value!r}")

    positive(config.lane_width_m, "lane_width_m")
    positive(config.tx_height_m, "tx_height_m")
    positive(config.rx_height_m, "rx_height_m")
    positive(config.obstacle_height_mean_m, "obstacle_height_mean_m")
    positive(config.obstacle_height_std_m, "obstacle_height_std_m")
    positive(config.antenna_length_m, "antenna_length_m")
    if not (isinstance(config.num_lanes, int) and config.num_lanes >= 1):
        problems.append(f"num_lanes: must be an integer >= 1, got {config.num_lanes!r}")
    if not (isinstance(config.n_trials, int) and config.n_trials >= 1):
        problems.append(f"n_trials: must be an integer >= 1, got {config.n_trials!r}")
    if not (isinstance(config.master_seed, int) and 0 <= config.master_seed < 2**64):
        problems.append("master_seed: must be an integer in [0, 2^64)")
    if config.knife_edge_cap_db < 0:
        problems.append("knife_edge_cap_db: must be >= 0")
    if config.noise_figure_db < 0:
        problems.append("noise_figure_db: must be >= 0")
    if config.slot_duration_s is not None and config.slot_duration_s <= 0:
        problems.append("slot_duration_s: must be positive when given")

    grid = config.distance_grid_m
    if len(grid) == 0:
        problems.append("distance_grid_m: must not be empty")
    elif any(b <= a for a, b in zip(grid, grid[1:])):
        problems.append("distance_grid_m: must be strictly increasing")
    if len(grid) and min(grid) < config.dsrc.reference_distance_m:
        problems.append(
            "distance_grid_m: distances must be >= dsrc.reference_distance_m"
        )

    if len(config.blockage_poly) != 3:
        problems.append("blockage_poly: expected three coefficients (a, b, c)")

    if len(config.antenna_elements) == 0 or any(
        not (isinstance(n, int) and n >= 1) for n in config.antenna_elements
    ):
        problems.append("antenna_elements: must be integers >= 1")

    for radio in ("dsrc", "mmwave"):
        sub = getattr(config, radio)
        positive(sub.carrier_hz, f"{radio}.carrier_hz")
        positive(sub.bandwidth_hz, f"{radio}.bandwidth_hz")
    positive(config.dsrc.reference_distance_m, "dsrc.reference_distance_m")
    positive(config.dsrc.pl_exponent_1, "dsrc.pl_exponent_1")
    positive(config.dsrc.pl_exponent_2, "dsrc.pl_exponent_2")
    if config.dsrc.shadow_std_db_1 < 0:
        problems.append("dsrc.shadow_std_db_1: must be >= 0")
    if config.dsrc.shadow_std_db_2 < 0:
        problems.append("dsrc.shadow_std_db_2: must be >= 0")
    positive(config.mmwave.los_slope, "mmwave.los_slope")
    positive(config.mmwave.nlos_slope, "mmwave.nlos_slope")
    if config.mmwave.absorption_db_per_km < 0:
        problems.append("mmwave.absorption_db_per_km: must be >= 0")

    positive(config.gps_error.alpha, "gps.alpha")
    positive(config.gps_error.beta, "gps.beta")

    if not (0 < config.beam.kappa <= 1):
        problems.append("beam.kappa: must be in (0, 1]")
    if config.beam.width_law not in ("inverse_n", "inverse_sqrt_n"):
        problems.append(
            "beam.width_law: must be 'inverse_n' or 'inverse_sqrt_n', "
            f"got {config.beam.width_law!r}"
        )
    if not (0 < config.beam.sector_rad <= 2 * math.pi):
        problems.append("beam.sector_rad: must be in (0, 2*pi]")

    return problems


# INI layout: section name -> (dataclass attribute on ScenarioConfig or None
# for top level). Parsing of each key is driven by the dataclass field types.
_SECTION_ATTR = {
    "scenario": None,
    "dsrc": "dsrc",
    "mmwave": "mmwave",
    "gps": "gps_error",
    "beam": "beam",
}

_TUPLE_FLOAT_KEYS = {"distance_grid_m", "blockage_poly"}
_TUPLE_INT_KEYS = {"antenna_elements"}


def _parse_scalar(raw, default, key):
    if isinstance(default, bool):
        lowered = raw.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigError([f"{key}: expected a boolean, got {raw!r}"])
    if isinstance(default, int) and not isinstance(default, bool):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError([f"{key}: expected an integer, got {raw!r}"]) from None
    if isinstance(default, float) or default is None:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError([f"{key}: expected a number, got {raw!r}"]) from None
    return raw.strip()


def _parse_section(section_cls_default, items, prefix, problems):
    kwargs = {}
    known = {f.name: getattr(section_cls_default, f.name) for f in fields(section_cls_default)}
    for key, raw in items:
        if key not in known:
            problems.append(f"{prefix}{key}: unknown key")
            continue
        if key in _TUPLE_FLOAT_KEYS:
            try:
                kwargs[key] = tuple(float(tok) for tok in raw.split(",") if tok.strip())
            except ValueError:
                problems.append(f"{prefix}{key}: expected comma-separated numbers")
        elif key in _TUPLE_INT_KEYS:
            try:
                kwargs[key] = tuple(int(tok) for tok in raw.split(",") if tok.strip())
            except ValueError:
                problems.append(f"{prefix}{key}: expected comma-separated integers")
        else:
            try:
                kwargs[key] = _parse_scalar(raw, known[key], prefix + key)
            except ConfigError as exc:
                problems.extend(exc.problems)
    return kwargs


def load_config(source):
    """Build a validated ScenarioConfig from an INI document.

    `source` may be a filesystem path, a string of INI text, or an open file.
    An empty document yields the defaults. Raises ConfigError listing every
    parse and validation problem found.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        source = str(source)
        looks_like_text = "\n" in source or "=" in source or source.strip() == ""
        if not looks_like_text and os.path.exists(source):
            with open(source, "r", encoding="utf-8") as handle:
                text = handle.read()
        elif looks_like_text:
            text = source
        else:
            raise ConfigError([f"config file not found: {source}"])

    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"parse error: {exc}"]) from None

    problems = []
    top_kwargs = {}
    defaults = ScenarioConfig()
    for section in parser.sections():
        if section not in _SECTION_ATTR:
            problems.append(f"[{section}]: unknown section")
            continue
        attr = _SECTION_ATTR[section]
        if attr is None:
            sub_default = defaults
            prefix = ""
        else:
            sub_default = getattr(defaults, attr)
            prefix = f"{section}."
        allowed = _parse_section(sub_default, parser.items(section), prefix, problems)
        # nested config fields are not settable from the flat top section
        for key in ("dsrc", "mmwave", "gps_error", "beam"):
            if key in allowed:
                problems.append(f"{key}: unknown key")
                del allowed[key]
        if attr is None:
            top_kwargs.update(allowed)
        elif allowed:
            top_kwargs[attr] = replace(sub_default, **allowed)

    if problems:
        raise ConfigError(problems)

    config = replace(defaults, **top_kwargs)
    problems = validate(config)
    if problems:
        raise ConfigError(problems)
    return config


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(repr(v) for v in value)
    if isinstance(value, str):
        return value
    return repr(value)


def serialize_config(config):
    """Render a config back to INI text; load_config round-trips it equal."""
    out = io.StringIO()
    top_fields = [
        f for f in fields(ScenarioConfig) if f.name not in ("dsrc", "mmwave", "gps_error", "beam")
    ]
    out.write("[scenario]\n")
    for f in top_fields:
        value = getattr(config, f.name)
        if value is None:
            continue
        out.write(f"{f.name} = {_format_value(value)}\n")
    for section, attr in (("dsrc", "dsrc"), ("mmwave", "mmwave"), ("gps", "gps_error"), ("beam", "beam")):
        sub = getattr(config, attr)
        out.write(f"\n[{section}]\n")
        for f in fields(sub):
            out.write(f"{f.name} = {_format_value(getattr(sub, f.name))}\n")
    return out.getvalue()
