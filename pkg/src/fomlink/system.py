"""System description and frequency plan for a frequency-offset transmitter array.

A frequency-offset-modulation (FOM) link drives an array of ``n`` transmitters
whose center frequencies are staggered by a fixed offset ``delta_f``.  Exactly
one transmitter radiates per signaling interval, so the active index carries
``log2(n)`` bits on top of the ``log2(m)`` bits in the radiated QAM symbol.
This module owns the static link description: the parameter record, the
derived per-transmitter baseband frequency plan, and the validation rules
that decide whether a parameter set is simulatable.

Conventions: the first transmitter sits at the band origin (baseband offset
0 Hz) and offsets ascend uniformly, so offset ``k`` is ``k * delta_f`` and the
index-modulation bandwidth expansion is ``delta_b = (n - 1) * delta_f``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = [
    "SystemConfig",
    "FrequencyPlan",
    "ValidationReport",
    "build_frequency_plan",
    "validate_config",
    "eta",
]

# Ratio thresholds for the small-offset / narrow-expansion approximations.
OFFSET_TO_CARRIER_WARN = 1e-3
EXPANSION_TO_BAND_WARN = 0.5
MIN_SAMPLES_PER_SYMBOL = 8

_CONFIG_KEYS = (
    "n",
    "m",
    "bandwidth_hz",
    "delta_f_hz",
    "symbol_rate",
    "carrier_hz",
    "oversample",
)


def _is_power_of_two(value: int) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 1 and (value & (value - 1)) == 0


@dataclass(frozen=True)
class SystemConfig:
    """Static parameters of one FOM link.

    ``bandwidth_hz`` is the bandwidth of the underlying single-transmitter
    signal, ``delta_f_hz`` the uniform transmitter spacing, ``symbol_rate``
    the signaling rate R (symbol interval T = 1/R), and ``carrier_hz`` the
    nominal carrier, used only in validation ratios.  ``oversample`` sets the
    simulation rate to ``oversample * (bandwidth_hz + delta_b_hz)``.

    Construction does not validate; pass the record to `validate_config` to
    get a report, or to `build_frequency_plan` which rejects hard errors.
    """

    n: int
    m: int
    bandwidth_hz: float
    delta_f_hz: float
    symbol_rate: float
    carrier_hz: float
    oversample: float = 4

    @property
    def delta_b_hz(self) -> float:
        """Index-modulation bandwidth expansion (n - 1) * delta_f."""
        return (self.n - 1) * self.delta_f_hz

    @property
    def sample_rate(self) -> float:
        return self.oversample * (self.bandwidth_hz + self.delta_b_hz)

    @property
    def samples_per_symbol(self) -> int:
        # Via the interval length so it agrees exactly with signal checks.
        return int(round(self.sample_rate * (1.0 / self.symbol_rate)))

    @property
    def index_bit_count(self) -> int:
        return (self.n - 1).bit_length()

    @property
    def symbol_bit_count(self) -> int:
        return (self.m - 1).bit_length()

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "bandwidth_hz": self.bandwidth_hz,
            "delta_f_hz": self.delta_f_hz,
            "symbol_rate": self.symbol_rate,
            "carrier_hz": self.carrier_hz,
            "oversample": self.oversample,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        """Build a config from parsed JSON.  Unknown keys are an error."""
        if not isinstance(data, dict):
            raise ValueError(f"system config must be a JSON object, got {type(data).__name__}")
        unknown = sorted(set(data) - set(_CONFIG_KEYS))
        if unknown:
            raise ValueError(f"unknown system config keys: {', '.join(unknown)}")
        required = [k for k in _CONFIG_KEYS if k != "oversample"]
        missing = sorted(set(required) - set(data))
        if missing:
            raise ValueError(f"missing system config keys: {', '.join(missing)}")
        return cls(
            n=data["n"],
            m=data["m"],
            bandwidth_hz=data["bandwidth_hz"],
            delta_f_hz=data["delta_f_hz"],
            symbol_rate=data["symbol_rate"],
            carrier_hz=data["carrier_hz"],
            oversample=data.get("oversample", 4),
        )

    @classmethod
    def from_json(cls, text: str) -> "SystemConfig":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FrequencyPlan:
    """Baseband offsets of the n transmitters, ascending, offsets[0] == 0."""

    offsets: tuple[float, ...]
    delta_b: float

    @property
    def tx_count(self) -> int:
        return len(self.offsets)


@dataclass
class ValidationReport:
    hard_errors: list[str] = field(default_factory=list)
    soft_warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.hard_errors


def _check_counts(config: SystemConfig, report: ValidationReport) -> bool:
    """Hard checks on n and m.  Returns True when both are usable."""
    good = True
    n, m = config.n, config.m
    if not _is_power_of_two(n):
        report.hard_errors.append(f"n must be a power-of-two integer >= 1, got {n!r}")
        good = False
    if not _is_power_of_two(m) or m < 2:
        report.hard_errors.append(f"m must be a power-of-two integer >= 2, got {m!r}")
        good = False
    return good


def validate_config(config: SystemConfig) -> ValidationReport:
    """Check a config and return every violated rule.

    Hard errors make the config unusable for planning or simulation:
    non-power-of-two counts, nonpositive bandwidth / symbol rate / offset /
    carrier, oversample below 2, or fewer than MIN_SAMPLES_PER_SYMBOL
    samples per symbol interval at the derived sample rate.  Soft warnings
    flag parameter sets that are simulatable but strain the design
    approximations: offsets that are not small next to the carrier
    (delta_f / carrier > 1e-3) or a bandwidth expansion that is not small
    next to the band itself (delta_b / bandwidth > 0.5).
    """
    report = ValidationReport()
    counts_ok = _check_counts(config, report)

    scalars_ok = True
    for name, value in (
        ("bandwidth_hz", config.bandwidth_hz),
        ("symbol_rate", config.symbol_rate),
        ("carrier_hz", config.carrier_hz),
    ):
        if not isinstance(value, (int, float)) or not value > 0:
            report.hard_errors.append(f"{name} must be positive, got {value!r}")
            scalars_ok = False
    if counts_ok and config.n > 1 and not config.delta_f_hz > 0:
        report.hard_errors.append(f"delta_f_hz must be positive when n > 1, got {config.delta_f_hz!r}")
        scalars_ok = False
    if not isinstance(config.oversample, (int, float)) or not config.oversample >= 2:
        report.hard_errors.append(f"oversample must be >= 2, got {config.oversample!r}")
        scalars_ok = False

    if counts_ok and scalars_ok:
        spb = config.samples_per_symbol
        if spb < MIN_SAMPLES_PER_SYMBOL:
            report.hard_errors.append(
                f"only {spb} samples per symbol at sample rate {config.sample_rate:g} Hz; "
                f"need at least {MIN_SAMPLES_PER_SYMBOL} (raise oversample or bandwidth)"
            )
        if config.n > 1:
            offset_ratio = config.delta_f_hz / config.carrier_hz
            if offset_ratio > OFFSET_TO_CARRIER_WARN:
                report.soft_warnings.append(
                    f"delta_f/carrier = {offset_ratio:.3g} exceeds {OFFSET_TO_CARRIER_WARN:g}; "
                    "offsets are not small relative to the carrier"
                )
            expansion_ratio = config.delta_b_hz / config.bandwidth_hz
            if expansion_ratio > EXPANSION_TO_BAND_WARN:
                report.soft_warnings.append(
                    f"delta_b/bandwidth = {expansion_ratio:.3g} exceeds {EXPANSION_TO_BAND_WARN:g}; "
                    "bandwidth expansion is not small relative to the band"
                )
    return report


def build_frequency_plan(config: SystemConfig) -> FrequencyPlan:
    """Lay out the n transmitter offsets: offsets[k] = k * delta_f.

    Rejects configs with hard validation errors.
    """
    report = validate_config(config)
    if report.hard_errors:
        raise ValueError("invalid config: " + "; ".join(report.hard_errors))
    delta_f = config.delta_f_hz
    offsets = tuple(k * delta_f for k in range(config.n))
    return FrequencyPlan(offsets=offsets, delta_b=(config.n - 1) * delta_f)


def eta(config: SystemConfig) -> float:
    """Relative bandwidth expansion (n - 1) * delta_f / bandwidth."""
    if not config.bandwidth_hz > 0:
        raise ValueError(f"bandwidth_hz must be positive, got {config.bandwidth_hz!r}")
    return (config.n - 1) * config.delta_f_hz / config.bandwidth_hz
