"""Frequency offset modulation: design-space analytics and link simulation.

The package splits along the natural workflow:

    system     parameter records, frequency plans, validation
    analytics  closed-form efficiency ratios and design-space sweeps
    codec      bit framing, index mapping, Gray QAM constellations
    phy        baseband synthesis, channel impairments, detectors
    ofdm       the subcarrier-index OFDM equivalent of the same link
    scenario   reproducible Monte-Carlo harness and metrics CSV
    cli        `fomlink` command-line entry point
"""

from ._version import __version__
from .system import (
    SystemConfig,
    FrequencyPlan,
    ValidationReport,
    build_frequency_plan,
    validate_config,
    eta,
)
from .analytics import (
    EfficiencyPoint,
    GridSpec,
    energy_efficiency_ratio,
    symbol_spectral_efficiency,
    fom_spectral_efficiency,
    spectral_efficiency_ratio,
    min_tx_count,
    hybrid_ratios,
    grid_sweep,
    preset_grid,
    write_efficiency_csv,
)
from .codec import (
    DataBlock,
    FrameResult,
    frame_bits,
    deframe,
    map_index,
    demap_index,
    constellation,
    map_symbol,
    demap_symbol,
    export_constellation_csv,
)
from .phy import (
    BasebandSignal,
    ChannelSpec,
    DetectionResult,
    synthesize_block,
    awgn,
    apply_phase_rotation,
    apply_carrier_freq_error,
    matched_filter_bank,
    detect_joint_ml,
    detect_noncoherent,
    detect_two_stage,
    brute_force_oracle,
)
from .ofdm import (
    OfdmConfig,
    OfdmFrame,
    fom_to_ofdm_params,
    modulate_frame,
    demodulate_frame,
    frame_awgn,
)
from .scenario import (
    Scenario,
    Sweep,
    MetricsRow,
    ScenarioError,
    scenario_from_dict,
    scenario_from_json,
    run_monte_carlo,
    run_efficiency_grid,
    write_metrics_csv,
    wilson_interval,
)

__all__ = [
    "__version__",
    "SystemConfig",
    "FrequencyPlan",
    "ValidationReport",
    "build_frequency_plan",
    "validate_config",
    "eta",
    "EfficiencyPoint",
    "GridSpec",
    "energy_efficiency_ratio",
    "symbol_spectral_efficiency",
    "fom_spectral_efficiency",
    "spectral_efficiency_ratio",
    "min_tx_count",
    "hybrid_ratios",
    "grid_sweep",
    "preset_grid",
    "write_efficiency_csv",
    "DataBlock",
    "FrameResult",
    "frame_bits",
    "deframe",
    "map_index",
    "demap_index",
    "constellation",
    "map_symbol",
    "demap_symbol",
    "export_constellation_csv",
    "BasebandSignal",
    "ChannelSpec",
    "DetectionResult",
    "synthesize_block",
    "awgn",
    "apply_phase_rotation",
    "apply_carrier_freq_error",
    "matched_filter_bank",
    "detect_joint_ml",
    "detect_noncoherent",
    "detect_two_stage",
    "brute_force_oracle",
    "OfdmConfig",
    "OfdmFrame",
    "fom_to_ofdm_params",
    "modulate_frame",
    "demodulate_frame",
    "frame_awgn",
    "Scenario",
    "Sweep",
    "MetricsRow",
    "ScenarioError",
    "scenario_from_dict",
    "scenario_from_json",
    "run_monte_carlo",
    "run_efficiency_grid",
    "write_metrics_csv",
    "wilson_interval",
]
