"""Power-sector emission estimation from daily generation series.

National daily emissions scale the 2019 baseline by the ratio of 2020 to
2019 generation on aligned calendar days. Thermal generation drives the
ratio where a per-type breakdown exists; total generation elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, timedelta
from enum import Enum

import numpy as np

from .core import ConfigError, DailyEmissionSeries, DomainError, Sector, align_comparison_date


class GenerationKind(Enum):
    THERMAL = "thermal"
    TOTAL = "total"


@dataclass
class GenerationSeries:
    country: str
    kind: GenerationKind
    start: date
    values: np.ndarray  # daily generation, feed energy convention

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.values < 0):
            raise DomainError(f"negative generation for {self.country}")

    @property
    def end(self) -> date:
        return self.start + timedelta(days=len(self.values) - 1)

    def value_on(self, day: date) -> float:
        offset = (day - self.start).days
        if not 0 <= offset < len(self.values):
            raise DomainError(f"{day} outside generation series {self.start}..{self.end}")
        return float(self.values[offset])


@dataclass(frozen=True)
class TemperatureAdjustment:
    """Multiplicative winter correction applied to the current-year series."""

    window_start: date
    window_end: date
    factor: float

    def __post_init__(self) -> None:
        if abs(self.factor) >= 0.1:
            raise DomainError(f"temperature adjustment factor out of range: {self.factor}")
        if self.window_start > self.window_end:
            raise DomainError("temperature adjustment window reversed")


def thermal_aggregate(per_type: dict[str, GenerationSeries], categories: list[str], country: str) -> GenerationSeries:
    """Sum the configured thermal production types elementwise."""
    present = [per_type[c] for c in categories if c in per_type]
    if not present:
        raise ConfigError(f"none of the thermal categories {categories} present for {country}")
    start = present[0].start
    length = len(present[0].values)
    for series in present[1:]:
        if series.start != start or len(series.values) != length:
            raise DomainError(f"thermal category series for {country} do not share dates")
    total = np.sum([s.values for s in present], axis=0)
    return GenerationSeries(country, GenerationKind.THERMAL, start, total)


@dataclass
class PowerEstimate:
    series: DailyEmissionSeries
    #: 2020 days excluded because the aligned 2019 generation was zero.
    excluded_days: list[date] = field(default_factory=list)


def power_emission_series(
    gen_2020: GenerationSeries,
    gen_2019: GenerationSeries,
    baseline_2019: DailyEmissionSeries,
) -> PowerEstimate:
    """Daily 2020 power emissions from generation ratios against the baseline.

    emission(d) = baseline(aligned d) * gen2020(d) / gen2019(aligned d).
    Days whose aligned 2019 generation is zero cannot be scaled; they carry
    zero emission in the output and are reported for exclusion from any
    comparison. Feb 29 has no aligned day: it borrows the Feb 28 baseline so
    the raw 2020 series stays complete, while year-over-year comparisons
    skip it.
    """
    if gen_2020.country != baseline_2019.country:
        raise DomainError("generation and baseline series belong to different countries")
    n_days = len(gen_2020.values)
    values = np.zeros(n_days)
    excluded: list[date] = []
    for i in range(n_days):
        day = gen_2020.start + timedelta(days=i)
        aligned = align_comparison_date(day)
        if aligned is None:
            aligned = date(2019, 2, 28)
        denom = gen_2019.value_on(aligned)
        if denom == 0.0:
            if gen_2020.values[i] > 0:
                excluded.append(day)
            continue
        values[i] = baseline_2019.value_on(aligned) * gen_2020.values[i] / denom
    series = DailyEmissionSeries(baseline_2019.country, Sector.POWER, gen_2020.start, values)
    return PowerEstimate(series=series, excluded_days=excluded)


def apply_temperature_adjustment(series: DailyEmissionSeries, adjustment: TemperatureAdjustment) -> DailyEmissionSeries:
    """Scale values inside the adjustment window by (1 + factor)."""
    if adjustment.window_start < series.start or adjustment.window_end > series.end:
        raise DomainError(
            f"adjustment window {adjustment.window_start}..{adjustment.window_end} "
            f"outside series range {series.start}..{series.end}"
        )
    values = series.values.copy()
    lo = series.index_of(adjustment.window_start)
    hi = series.index_of(adjustment.window_end)
    values[lo : hi + 1] *= 1.0 + adjustment.factor
    return DailyEmissionSeries(series.country, series.sector, series.start, values)
