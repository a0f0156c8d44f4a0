"""Closed-form efficiency analysis for index-modulated transmitter arrays.

Per signaling interval a FOM link radiates one QAM symbol (log2 m bits) from
one of n transmitters (log2 n bits) while expanding the occupied band from B
to B + delta_b, with eta = delta_b / B.  The figures of merit implemented
here compare that scheme against the single-transmitter baseline:

    energy ratio     gamma_ee = log2(m) / (log2(m) + log2(n)) = 1 / (1 + log_m n)
    baseline SE      e0 = R * log2(m) / B
    FOM SE           es = R * (log2(m) + log2(n)) / (B + delta_b)
    SE ratio         gamma_se = (1 + log_m n) / (1 + eta)

gamma_se >= 1 exactly when n >= m**eta, so `min_tx_count` returns the
break-even array size.  A two-dimensional index variant (two independent
index choices of size n each) doubles the index term: gamma_ee becomes
1 / (1 + 2 log_m n) and gamma_se becomes (1 + 2 log_m n) / (1 + eta).

All functions accept real-valued m and n so the design space can be swept
continuously; the link modules themselves require powers of two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

__all__ = [
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
    "PRESET_NAMES",
]

CSV_HEADER = "m,n,eta,gamma_ee,gamma_se,e0,es"


def _check_mn(m: float, n: float) -> None:
    if not m > 1:
        raise ValueError(f"m must exceed 1, got {m!r}")
    if not n >= 1:
        raise ValueError(f"n must be at least 1, got {n!r}")


def _check_eta(value: float) -> None:
    if not value >= 0:
        raise ValueError(f"eta must be nonnegative, got {value!r}")


def _index_term(m: float, n: float) -> float:
    # log_m(n), the index bits per symbol bit.
    return math.log2(n) / math.log2(m)


def energy_efficiency_ratio(m: float, n: float) -> float:
    """Transmit energy per bit, FOM relative to the one-transmitter baseline.

    Equals log2(m) / (log2(m) + log2(n)); always in (0, 1], and 1 only when
    n == 1 (no index bits, nothing gained or spent).
    """
    _check_mn(m, n)
    return 1.0 / (1.0 + _index_term(m, n))


def symbol_spectral_efficiency(symbol_rate: float, m: float, bandwidth_hz: float) -> float:
    """Baseline bits/s/Hz: R * log2(m) / B."""
    if not symbol_rate > 0 or not bandwidth_hz > 0:
        raise ValueError("symbol_rate and bandwidth_hz must be positive")
    if not m > 1:
        raise ValueError(f"m must exceed 1, got {m!r}")
    return symbol_rate * math.log2(m) / bandwidth_hz


def fom_spectral_efficiency(
    symbol_rate: float, m: float, n: float, bandwidth_hz: float, delta_b_hz: float
) -> float:
    """FOM bits/s/Hz: R * (log2(m) + log2(n)) / (B + delta_b)."""
    if not symbol_rate > 0 or not bandwidth_hz > 0:
        raise ValueError("symbol_rate and bandwidth_hz must be positive")
    if delta_b_hz < 0:
        raise ValueError(f"delta_b_hz must be nonnegative, got {delta_b_hz!r}")
    _check_mn(m, n)
    return symbol_rate * (math.log2(m) + math.log2(n)) / (bandwidth_hz + delta_b_hz)


def spectral_efficiency_ratio(m: float, n: float, eta: float) -> float:
    """Spectral efficiency gain over the baseline: (1 + log_m n) / (1 + eta)."""
    _check_mn(m, n)
    _check_eta(eta)
    return (1.0 + _index_term(m, n)) / (1.0 + eta)


def min_tx_count(m: float, eta: float) -> float:
    """Smallest array size with spectral_efficiency_ratio >= 1: m ** eta."""
    if not m > 1:
        raise ValueError(f"m must exceed 1, got {m!r}")
    _check_eta(eta)
    return m**eta


def hybrid_ratios(m: float, n: float, eta: float) -> tuple[float, float]:
    """(gamma_ee, gamma_se) when two independent size-n index choices are used.

    The second index dimension doubles the index bits per interval, so the
    index term 2 * log_m(n) replaces log_m(n) in both ratios.
    """
    _check_mn(m, n)
    _check_eta(eta)
    term = 2.0 * _index_term(m, n)
    return 1.0 / (1.0 + term), (1.0 + term) / (1.0 + eta)


@dataclass(frozen=True)
class EfficiencyPoint:
    """One design point; e0/es are filled only when R and B are known."""

    m: float
    n: float
    eta: float
    gamma_ee: float
    gamma_se: float
    e0: float | None = None
    es: float | None = None


@dataclass(frozen=True)
class GridSpec:
    """A rectangular design-space sweep.

    mode "vary-m-n" sweeps m (outer) against n (inner) at the single eta in
    eta_values; mode "vary-m-eta" sweeps m (outer) against eta (inner) at
    the single n in n_values.  symbol_rate and bandwidth_hz are optional;
    when given, absolute spectral efficiencies e0/es are emitted as well,
    with delta_b taken as eta * bandwidth_hz.
    """

    m_values: tuple[float, ...]
    n_values: tuple[float, ...]
    eta_values: tuple[float, ...]
    mode: str = "vary-m-n"
    symbol_rate: float | None = None
    bandwidth_hz: float | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("vary-m-n", "vary-m-eta"):
            raise ValueError(f"unknown grid mode {self.mode!r}")
        for name, axis in (("m_values", self.m_values), ("n_values", self.n_values), ("eta_values", self.eta_values)):
            if len(axis) == 0:
                raise ValueError(f"{name} must not be empty")
        if self.mode == "vary-m-n" and len(self.eta_values) != 1:
            raise ValueError("vary-m-n grids need exactly one eta value")
        if self.mode == "vary-m-eta" and len(self.n_values) != 1:
            raise ValueError("vary-m-eta grids need exactly one n value")
        if (self.symbol_rate is None) != (self.bandwidth_hz is None):
            raise ValueError("symbol_rate and bandwidth_hz must be supplied together")


def _point(spec: GridSpec, m: float, n: float, eta: float) -> EfficiencyPoint:
    e0 = es = None
    if spec.symbol_rate is not None and spec.bandwidth_hz is not None:
        e0 = symbol_spectral_efficiency(spec.symbol_rate, m, spec.bandwidth_hz)
        es = fom_spectral_efficiency(spec.symbol_rate, m, n, spec.bandwidth_hz, eta * spec.bandwidth_hz)
    return EfficiencyPoint(
        m=m,
        n=n,
        eta=eta,
        gamma_ee=energy_efficiency_ratio(m, n),
        gamma_se=spectral_efficiency_ratio(m, n, eta),
        e0=e0,
        es=es,
    )


def grid_sweep(spec: GridSpec) -> list[EfficiencyPoint]:
    """Evaluate the grid in deterministic order: m outer, the varied axis inner."""
    points: list[EfficiencyPoint] = []
    if spec.mode == "vary-m-n":
        eta = spec.eta_values[0]
        for m in spec.m_values:
            for n in spec.n_values:
                points.append(_point(spec, m, n, eta))
    else:
        n = spec.n_values[0]
        for m in spec.m_values:
            for eta in spec.eta_values:
                points.append(_point(spec, m, n, eta))
    return points


def _log_spaced(start: float, stop: float, count: int) -> tuple[float, ...]:
    if count == 1:
        return (start,)
    ratio = (stop / start) ** (1.0 / (count - 1))
    values = [start * ratio**i for i in range(count)]
    values[-1] = stop
    return tuple(values)


_POW2_M = tuple(float(2**k) for k in range(1, 13))  # 2 .. 4096
_POW2_N = tuple(float(2**k) for k in range(0, 8))  # 1 .. 128
_ETA_GRID = _log_spaced(1e-3, 1e-1, 25)

_PRESETS = {
    "fig4a": GridSpec(m_values=_POW2_M, n_values=_POW2_N, eta_values=(0.01,), mode="vary-m-n"),
    "fig4b": GridSpec(m_values=_POW2_M, n_values=_POW2_N, eta_values=(0.1,), mode="vary-m-n"),
    "fig5": GridSpec(m_values=_POW2_M, n_values=(128.0,), eta_values=_ETA_GRID, mode="vary-m-eta"),
}

PRESET_NAMES = tuple(_PRESETS)


def preset_grid(name: str) -> GridSpec:
    """Canonical sweep grids: power-of-two m up to 4096 and n up to 128,
    with eta fixed at 0.01 (fig4a) or 0.1 (fig4b), or 25 log-spaced eta in
    [0.001, 0.1] at n = 128 (fig5)."""
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(_PRESETS)}") from None


def _fmt(value: float | None) -> str:
    return "" if value is None else format(value, ".9g")


def write_efficiency_csv(points: Iterable[EfficiencyPoint], out: IO[str], comment: str | None = None) -> None:
    """Write points as CSV with 9-significant-digit floats.

    ``comment`` lines (provenance) are emitted first, '#'-prefixed.
    """
    if comment:
        for line in comment.splitlines():
            out.write(f"# {line}\n")
    out.write(CSV_HEADER + "\n")
    for p in points:
        row = (p.m, p.n, p.eta, p.gamma_ee, p.gamma_se, p.e0, p.es)
        out.write(",".join(_fmt(v) for v in row) + "\n")
