"""Monte Carlo link-level simulator for 5.9 GHz DSRC and 60 GHz mmWave V2V links."""

from .scenario import (
    ConfigError,
    ScenarioConfig,
    load_config,
    serialize_config,
    validate,
    wavelength,
)
from .losmodel import (
    LinkGeometry,
    blockage_probability,
    effective_los_height,
    fresnel_radius,
    nlos_probability,
    sample_link_geometry,
)
from .pathloss import (
    PathLossBreakdown,
    clamp,
    dsrc_deterministic_db,
    dsrc_path_loss,
    free_space_reference_db,
    fresnel_distance,
    knife_edge_attenuation_db,
    mmwave_path_loss,
)
from .beam import (
    ALIGNMENT_MODES,
    BeamPattern,
    build_pattern,
    end_to_end_gain_db,
    gain_at,
    gps_pointing_error,
    misalignment_angle,
)
from .linkmetrics import LinkSample, evaluate_link, noise_power_dbm, shannon_rate_bps
from .mcengine import (
    ComparisonReport,
    SpecError,
    SweepEstimate,
    SweepSpec,
    compare_estimates,
    run_sweep,
    run_sweep_sequential,
)
from .randkit import StreamSeed, q_function
from .acceptance import CheckResult, run_all

__version__ = "0.1.0"

__all__ = [
    "ALIGNMENT_MODES",
    "BeamPattern",
    "CheckResult",
    "ComparisonReport",
    "ConfigError",
    "LinkGeometry",
    "LinkSample",
    "PathLossBreakdown",
    "ScenarioConfig",
    "SpecError",
    "StreamSeed",
    "SweepEstimate",
    "SweepSpec",
    "blockage_probability",
    "build_pattern",
    "clamp",
    "compare_estimates",
    "dsrc_deterministic_db",
    "dsrc_path_loss",
    "effective_los_height",
    "end_to_end_gain_db",
    "evaluate_link",
    "free_space_reference_db",
    "fresnel_distance",
    "fresnel_radius",
    "gain_at",
    "gps_pointing_error",
    "knife_edge_attenuation_db",
    "load_config",
    "misalignment_angle",
    "mmwave_path_loss",
    "nlos_probability",
    "noise_power_dbm",
    "q_function",
    "run_all",
    "run_sweep",
    "run_sweep_sequential",
    "sample_link_geometry",
    "serialize_config",
    "shannon_rate_bps",
    "validate",
    "wavelength",
]
