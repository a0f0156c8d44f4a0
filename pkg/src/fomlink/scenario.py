"""Scenario-driven Monte-Carlo harness with reproducible error statistics.

A scenario bundles a system config, channel impairments, a detector choice,
and a trial budget, plus an optional one-axis sweep: a list of es_n0_db
points, or a list of df_t products (offset-step times symbol interval)
realized by scaling delta_f while holding the symbol rate fixed, which also
rescales the occupied band and eta for that point.

Reproducibility contract: trial ``t`` draws its payload bits and noise from
``default_rng(seed + t)``, so any partition of the trial range over workers
yields the same per-trial outcomes, and aggregation is plain counting in
fixed chunk order.  The same (scenario, seed) therefore always produces a
byte-identical metrics CSV.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import IO, Iterable

import numpy as np

from ._version import __version__
from .codec import DataBlock, map_index
from .ofdm import OfdmConfig, OfdmFrame, fom_to_ofdm_params, frame_awgn, modulate_frame, demodulate_frame
from .phy import (
    ChannelSpec,
    apply_carrier_freq_error,
    apply_phase_rotation,
    awgn,
    brute_force_oracle,
    detect_joint_ml,
    detect_two_stage,
    synthesize_block,
)
from .system import SystemConfig, ValidationReport, build_frequency_plan, validate_config
from .analytics import GridSpec, grid_sweep, write_efficiency_csv

__all__ = [
    "Scenario",
    "Sweep",
    "MetricsRow",
    "ScenarioError",
    "scenario_from_dict",
    "scenario_from_json",
    "validate_scenario_or_config",
    "run_monte_carlo",
    "run_efficiency_grid",
    "write_metrics_csv",
    "wilson_interval",
    "DETECTORS",
    "MODES",
    "METRICS_HEADER",
]

DETECTORS = ("joint-ml", "two-stage", "oracle")
MODES = ("fom", "ofdm")
SWEEP_AXES = ("es_n0_db", "df_t")
METRICS_HEADER = (
    "mode,detector,n,m,es_n0_db,df_t,trials,index_error_rate,symbol_error_rate,"
    "block_error_rate,bit_error_rate,mean_runner_up_margin,seed"
)

_CHUNK = 1024
_DUMP_BLOCKS = 8


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario description."""


@dataclass(frozen=True)
class Sweep:
    axis: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ScenarioError(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.values:
            raise ScenarioError("sweep values must not be empty")


@dataclass(frozen=True)
class Scenario:
    system: SystemConfig
    channel: ChannelSpec
    detector: str
    trials: int
    seed: int
    mode: str = "fom"
    ofdm: OfdmConfig | None = None
    sweep: Sweep | None = None
    zero_pad_factor: int = 16

    def to_dict(self) -> dict:
        out: dict = {
            "system": self.system.to_dict(),
            "channel": {
                "es_n0_db": None if self.channel.es_n0_db == math.inf else self.channel.es_n0_db,
                "phase_rotation": self.channel.phase_rotation,
                "carrier_freq_error": self.channel.carrier_freq_error,
            },
            "detector": self.detector,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "zero_pad_factor": self.zero_pad_factor,
        }
        if self.ofdm is not None:
            out["ofdm"] = {
                "n_subcarriers": self.ofdm.n_subcarriers,
                "spacing_hz": self.ofdm.spacing_hz,
                "cp_len": self.ofdm.cp_len,
                "index_mode": self.ofdm.index_mode,
                "m": self.ofdm.m,
            }
        if self.sweep is not None:
            out["sweep"] = {self.sweep.axis: [None if v == math.inf else v for v in self.sweep.values]}
        return out


@dataclass(frozen=True)
class MetricsRow:
    mode: str
    detector: str
    n: int
    m: int
    es_n0_db: float
    df_t: float
    trials: int
    index_error_rate: float
    symbol_error_rate: float
    block_error_rate: float
    bit_error_rate: float
    mean_runner_up_margin: float
    seed: int


def _require_keys(data: dict, allowed: Iterable[str], required: Iterable[str], what: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ScenarioError(f"unknown {what} keys: {', '.join(unknown)}")
    missing = sorted(set(required) - set(data))
    if missing:
        raise ScenarioError(f"missing {what} keys: {', '.join(missing)}")


def _parse_es_n0(value) -> float:
    if value is None:
        return math.inf
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise ScenarioError(f"es_n0_db must be a number or null (noiseless), got {value!r}")


def _parse_channel(data: dict) -> ChannelSpec:
    _require_keys(data, ("es_n0_db", "phase_rotation", "carrier_freq_error"), ("es_n0_db",), "channel")
    try:
        return ChannelSpec(
            es_n0_db=_parse_es_n0(data["es_n0_db"]),
            phase_rotation=float(data.get("phase_rotation", 0.0)),
            carrier_freq_error=float(data.get("carrier_freq_error", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"bad channel spec: {exc}") from exc


def _parse_ofdm(data: dict) -> OfdmConfig:
    _require_keys(
        data,
        ("n_subcarriers", "spacing_hz", "cp_len", "index_mode", "m"),
        ("n_subcarriers", "spacing_hz", "m"),
        "ofdm",
    )
    try:
        return OfdmConfig(
            n_subcarriers=data["n_subcarriers"],
            spacing_hz=data["spacing_hz"],
            m=data["m"],
            cp_len=data.get("cp_len", 0),
            index_mode=data.get("index_mode", "single-active"),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"bad ofdm spec: {exc}") from exc


def _parse_sweep(data: dict) -> Sweep:
    if not isinstance(data, dict) or len(data) != 1:
        raise ScenarioError('sweep must be an object with exactly one axis, e.g. {"es_n0_db": [0, 5, 10]}')
    axis, raw = next(iter(data.items()))
    if axis not in SWEEP_AXES:
        raise ScenarioError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    if not isinstance(raw, list) or not raw:
        raise ScenarioError("sweep values must be a non-empty list")
    if axis == "es_n0_db":
        values = tuple(_parse_es_n0(v) for v in raw)
    else:
        if any(not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0 for v in raw):
            raise ScenarioError("df_t sweep values must be positive numbers")
        values = tuple(float(v) for v in raw)
    return Sweep(axis=axis, values=values)


def scenario_from_dict(data: dict) -> Scenario:
    """Parse and cross-validate a scenario object.  Unknown keys are errors."""
    if not isinstance(data, dict):
        raise ScenarioError(f"scenario must be a JSON object, got {type(data).__name__}")
    _require_keys(
        data,
        ("system", "channel", "detector", "mode", "ofdm", "trials", "seed", "sweep", "zero_pad_factor"),
        ("system", "channel", "detector", "trials", "seed"),
        "scenario",
    )
    try:
        system = SystemConfig.from_dict(data["system"])
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    channel = _parse_channel(data["channel"])
    detector = data["detector"]
    if detector not in DETECTORS:
        raise ScenarioError(f"detector must be one of {DETECTORS}, got {detector!r}")
    mode = data.get("mode", "fom")
    if mode not in MODES:
        raise ScenarioError(f"mode must be one of {MODES}, got {mode!r}")
    trials = data["trials"]
    if not isinstance(trials, int) or isinstance(trials, bool) or trials < 1:
        raise ScenarioError(f"trials must be an integer >= 1, got {trials!r}")
    seed = data["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ScenarioError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    zero_pad = data.get("zero_pad_factor", 16)
    if not isinstance(zero_pad, int) or isinstance(zero_pad, bool) or zero_pad < 1:
        raise ScenarioError(f"zero_pad_factor must be an integer >= 1, got {zero_pad!r}")
    ofdm = _parse_ofdm(data["ofdm"]) if data.get("ofdm") is not None else None
    sweep = _parse_sweep(data["sweep"]) if data.get("sweep") is not None else None
    scenario = Scenario(
        system=system,
        channel=channel,
        detector=detector,
        trials=trials,
        seed=seed,
        mode=mode,
        ofdm=ofdm,
        sweep=sweep,
        zero_pad_factor=zero_pad,
    )
    _cross_validate(scenario)
    return scenario


def scenario_from_json(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed JSON: {exc}") from exc
    return scenario_from_dict(data)


def _cross_validate(scenario: Scenario) -> None:
    if scenario.mode == "ofdm":
        if scenario.detector != "joint-ml":
            raise ScenarioError(f"ofdm mode supports only the joint-ml detector, got {scenario.detector!r}")
        if scenario.sweep is not None and scenario.sweep.axis == "df_t":
            raise ScenarioError("df_t sweeps require fom mode (subcarrier spacing is fixed by the frame)")
        if scenario.ofdm is None:
            try:
                fom_to_ofdm_params(scenario.system)
            except ValueError as exc:
                raise ScenarioError(str(exc)) from exc
        return
    for config in _swept_configs(scenario):
        report = validate_config(config)
        if report.hard_errors:
            raise ScenarioError(
                f"invalid system config (delta_f_hz={config.delta_f_hz:g}): " + "; ".join(report.hard_errors)
            )


def _swept_configs(scenario: Scenario) -> list[SystemConfig]:
    if scenario.sweep is not None and scenario.sweep.axis == "df_t":
        return [
            replace(scenario.system, delta_f_hz=df_t * scenario.system.symbol_rate) for df_t in scenario.sweep.values
        ]
    return [scenario.system]


def validate_scenario_or_config(data: dict) -> ValidationReport:
    """Validation report for either a bare system config or a full scenario.

    Scenario-level problems (bad detector, bad sweep, inconsistent modes)
    are reported as hard errors alongside the system config's own report.
    """
    if isinstance(data, dict) and "system" in data:
        report = ValidationReport()
        try:
            scenario = scenario_from_dict(data)
        except ScenarioError as exc:
            report.hard_errors.append(str(exc))
            system_data = data.get("system")
            if isinstance(system_data, dict):
                try:
                    system = SystemConfig.from_dict(system_data)
                except ValueError:
                    return report
                inner = validate_config(system)
                report.hard_errors.extend(e for e in inner.hard_errors if e not in report.hard_errors)
                report.soft_warnings.extend(inner.soft_warnings)
            return report
        inner = validate_config(scenario.system)
        report.hard_errors.extend(inner.hard_errors)
        report.soft_warnings.extend(inner.soft_warnings)
        return report
    try:
        config = SystemConfig.from_dict(data)
    except ValueError as exc:
        report = ValidationReport()
        report.hard_errors.append(str(exc))
        return report
    return validate_config(config)


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% (by default) Wilson score interval for an error proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= errors <= trials:
        raise ValueError("errors must lie in [0, trials]")
    p = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    # The endpoints are exact at p == 0 and p == 1; round residue off so
    # callers see hard 0.0 / 1.0 there.
    lo = 0.0 if errors == 0 else max(0.0, center - half)
    hi = 1.0 if errors == trials else min(1.0, center + half)
    return lo, hi


def _random_block(rng: np.random.Generator, index_len: int, symbol_len: int) -> DataBlock:
    bits = rng.integers(0, 2, size=index_len + symbol_len)
    return DataBlock(index_bits=tuple(int(b) for b in bits[:index_len]), symbol_bits=tuple(int(b) for b in bits[index_len:]))


def _bit_errors(truth: tuple[int, ...], guess: tuple[int, ...]) -> int:
    return sum(a != b for a, b in zip(truth, guess))


def _fom_trial(scenario: Scenario, config, plan, es_n0_db: float, trial: int, dump=None):
    rng = np.random.default_rng(scenario.seed + trial)
    block = _random_block(rng, config.index_bit_count, config.symbol_bit_count)
    signal = synthesize_block(block, plan, config)
    if scenario.channel.phase_rotation:
        signal = apply_phase_rotation(signal, scenario.channel.phase_rotation)
    if scenario.channel.carrier_freq_error:
        signal = apply_carrier_freq_error(signal, scenario.channel.carrier_freq_error)
    signal = awgn(signal, es_n0_db, rng)
    if dump is not None:
        dump(trial, block, signal)
    if scenario.detector == "joint-ml":
        result = detect_joint_ml(signal, plan, config.m)
    elif scenario.detector == "two-stage":
        result = detect_two_stage(signal, plan, config.m, scenario.zero_pad_factor)
    else:
        result = brute_force_oracle(signal, plan, config.m)
    return block, map_index(block.index_bits), result


def _ofdm_trial(scenario: Scenario, cfg: OfdmConfig, es_n0_db: float, trial: int, dump=None):
    rng = np.random.default_rng(scenario.seed + trial)
    index_len = (cfg.n_subcarriers - 1).bit_length()
    symbol_len = (cfg.m - 1).bit_length()
    block = _random_block(rng, index_len, symbol_len)
    frame = modulate_frame(block, cfg)
    samples = frame.time_samples
    if scenario.channel.phase_rotation:
        samples = samples * np.exp(1j * scenario.channel.phase_rotation)
    if scenario.channel.carrier_freq_error:
        t = np.arange(len(samples))
        samples = samples * np.exp(2j * math.pi * scenario.channel.carrier_freq_error * t / frame.sample_rate)
    frame = OfdmFrame(time_samples=samples, sample_rate=frame.sample_rate)
    frame = frame_awgn(frame, es_n0_db, rng)
    if dump is not None:
        dump(trial, block, frame)
    result = demodulate_frame(frame, cfg)
    return block, map_index(block.index_bits), result


def _count_chunk(scenario: Scenario, point, es_n0_db: float, start: int, stop: int) -> tuple[np.ndarray, float]:
    counts = np.zeros(4, dtype=np.int64)  # index, symbol, block, bit errors
    margin_sum = 0.0
    for trial in range(start, stop):
        if scenario.mode == "fom":
            config, plan = point
            block, k_true, result = _fom_trial(scenario, config, plan, es_n0_db, trial)
        else:
            block, k_true, result = _ofdm_trial(scenario, point, es_n0_db, trial)
        idx_err = result.k_hat != k_true
        sym_err = result.symbol_bits_hat != block.symbol_bits
        counts[0] += idx_err
        counts[1] += sym_err
        counts[2] += idx_err or sym_err
        counts[3] += _bit_errors(block.index_bits, _index_bits_of(result.k_hat, len(block.index_bits)))
        counts[3] += _bit_errors(block.symbol_bits, result.symbol_bits_hat)
        margin_sum += result.runner_up_margin
    return counts, margin_sum


def _index_bits_of(k_hat: int, width: int) -> tuple[int, ...]:
    return tuple(((k_hat - 1) >> (width - 1 - i)) & 1 for i in range(width))


def run_monte_carlo(scenario: Scenario, workers: int = 1, dump_signals: IO[str] | None = None) -> list[MetricsRow]:
    """Run every sweep point and return one metrics row per point.

    ``workers`` splits each point's trial range into fixed-size chunks and
    evaluates them on a thread pool; per-trial seeding makes the result
    independent of the worker count.  ``dump_signals`` (a text file) gets
    the received samples of the first few trials of the first sweep point
    as `t,re,im` rows with `# block` separators.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers!r}")
    _cross_validate(scenario)
    rows: list[MetricsRow] = []
    sweep_values = scenario.sweep.values if scenario.sweep is not None else (None,)
    for point_idx, sweep_value in enumerate(sweep_values):
        if scenario.sweep is not None and scenario.sweep.axis == "df_t":
            config = replace(scenario.system, delta_f_hz=sweep_value * scenario.system.symbol_rate)
            es_n0_db = scenario.channel.es_n0_db
        else:
            config = scenario.system
            es_n0_db = sweep_value if sweep_value is not None else scenario.channel.es_n0_db
        if scenario.mode == "fom":
            plan = build_frequency_plan(config)
            point = (config, plan)
            n, m = config.n, config.m
            df_t = config.delta_f_hz / config.symbol_rate
        else:
            point = scenario.ofdm if scenario.ofdm is not None else fom_to_ofdm_params(scenario.system)
            n, m = point.n_subcarriers, point.m
            df_t = 1.0

        if dump_signals is not None and point_idx == 0:
            _dump_first_blocks(scenario, point, es_n0_db, dump_signals)

        spans = [(start, min(start + _CHUNK, scenario.trials)) for start in range(0, scenario.trials, _CHUNK)]
        if workers == 1 or len(spans) == 1:
            results = [_count_chunk(scenario, point, es_n0_db, a, b) for a, b in spans]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda span: _count_chunk(scenario, point, es_n0_db, *span), spans))
        counts = np.zeros(4, dtype=np.int64)
        margin_sum = 0.0
        for chunk_counts, chunk_margin in results:
            counts += chunk_counts
            margin_sum += chunk_margin
        bits_per_block = (n - 1).bit_length() + (m - 1).bit_length()
        rows.append(
            MetricsRow(
                mode=scenario.mode,
                detector=scenario.detector,
                n=n,
                m=m,
                es_n0_db=es_n0_db,
                df_t=df_t,
                trials=scenario.trials,
                index_error_rate=int(counts[0]) / scenario.trials,
                symbol_error_rate=int(counts[1]) / scenario.trials,
                block_error_rate=int(counts[2]) / scenario.trials,
                bit_error_rate=int(counts[3]) / (scenario.trials * bits_per_block),
                mean_runner_up_margin=margin_sum / scenario.trials,
                seed=scenario.seed,
            )
        )
    return rows


def _dump_first_blocks(scenario: Scenario, point, es_n0_db: float, out: IO[str]) -> None:
    out.write(f"# fomlink {__version__} signal dump (first sweep point)\n")
    out.write("t,re,im\n")

    def writer(trial: int, block: DataBlock, received) -> None:
        samples = received.samples if hasattr(received, "samples") else received.time_samples
        out.write(f"# block {trial} index_bits={''.join(map(str, block.index_bits))} " f"symbol_bits={''.join(map(str, block.symbol_bits))}\n")
        for t, value in enumerate(samples):
            out.write(f"{t},{value.real:.12g},{value.imag:.12g}\n")

    for trial in range(min(_DUMP_BLOCKS, scenario.trials)):
        if scenario.mode == "fom":
            config, plan = point
            _fom_trial(scenario, config, plan, es_n0_db, trial, dump=writer)
        else:
            _ofdm_trial(scenario, point, es_n0_db, trial, dump=writer)


def _fmt(value: float) -> str:
    return format(value, ".9g")


def write_metrics_csv(rows: Iterable[MetricsRow], scenario: Scenario, out: IO[str]) -> None:
    """CSV with a '#' provenance header naming the tool version and scenario."""
    out.write(f"# fomlink {__version__}\n")
    out.write(f"# scenario: {json.dumps(scenario.to_dict(), sort_keys=True)}\n")
    out.write(METRICS_HEADER + "\n")
    for r in rows:
        fields = (
            r.mode,
            r.detector,
            str(r.n),
            str(r.m),
            _fmt(r.es_n0_db),
            _fmt(r.df_t),
            str(r.trials),
            _fmt(r.index_error_rate),
            _fmt(r.symbol_error_rate),
            _fmt(r.block_error_rate),
            _fmt(r.bit_error_rate),
            _fmt(r.mean_runner_up_margin),
            str(r.seed),
        )
        out.write(",".join(fields) + "\n")


def run_efficiency_grid(spec: GridSpec, out: IO[str]) -> None:
    """Sweep the grid and write the efficiency CSV with a provenance comment."""
    comment = f"fomlink {__version__} efficiency grid: mode={spec.mode} m={list(spec.m_values)} n={list(spec.n_values)} eta={list(spec.eta_values)}"
    write_efficiency_csv(grid_sweep(spec), out, comment=comment)
