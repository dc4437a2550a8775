"""Rest-of-world estimation, cross-cutting aggregation and report annotations.

Countries without direct activity feeds get a uniform daily baseline revised
by closure-group change rates: the emission-weighted mean monthly changes of
the directly estimated countries, split by whether a country adopted closure
measures. Aggregation produces window sums and year-over-year changes whose
row and column totals are always recomputed from components.
"""

from __future__ import annotations

import calendar
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .core import (
    ConfigError,
    DailyEmissionSeries,
    DomainError,
    RegionGroup,
    Sector,
    align_comparison_date,
)


@dataclass(frozen=True)
class ClosurePolicy:
    country: str
    has_closure: bool
    start: date | None = None
    end: date | None = None

    def __post_init__(self) -> None:
        if self.has_closure and self.start is None:
            raise DomainError(f"{self.country}: closure policy without a start date")
        if self.start is not None and self.end is not None and self.start > self.end:
            raise DomainError(f"{self.country}: closure window reversed")

    def active_on(self, day: date) -> bool:
        if not self.has_closure or self.start is None:
            return False
        return day >= self.start and (self.end is None or day <= self.end)


@dataclass(frozen=True)
class GroupRates:
    with_closure: float
    without_closure: float


def closure_group_rates(
    monthly_changes: dict[tuple[str, Sector, int], float],
    weights: dict[tuple[str, Sector], float],
    policies: dict[str, ClosurePolicy],
) -> dict[tuple[Sector, int], GroupRates]:
    """Emission-weighted mean monthly change per closure group and sector."""
    sector_months = sorted({(s, m) for (_, s, m) in monthly_changes}, key=lambda sm: (sm[0].value, sm[1]))
    out: dict[tuple[Sector, int], GroupRates] = {}
    for sector, month in sector_months:
        sums = {True: 0.0, False: 0.0}
        masses = {True: 0.0, False: 0.0}
        for (country, s, m), change in monthly_changes.items():
            if s is not sector or m != month:
                continue
            if country not in policies:
                raise ConfigError(f"no closure policy for estimated country {country}")
            group = policies[country].has_closure
            mass = weights.get((country, s), 0.0)
            sums[group] += mass * change
            masses[group] += mass
        for group, label in ((True, "with closures"), (False, "without closures")):
            if masses[group] == 0.0:
                raise DomainError(f"empty {label} group for {sector.value} month {month}")
        out[(sector, month)] = GroupRates(
            with_closure=sums[True] / masses[True],
            without_closure=sums[False] / masses[False],
        )
    return out


def apply_closure_rates(
    annual_t: dict[tuple[str, Sector], float],
    rates: dict[tuple[Sector, int], GroupRates],
    policies: dict[str, ClosurePolicy],
    start: date,
    end: date,
) -> list[DailyEmissionSeries]:
    """Revise uniform daily baselines by the matching closure-group rate.

    The daily baseline is annual mass / days-in-year. On each day the rate
    is the with-closure rate inside a country's closure window and the
    without-closure rate everywhere else; months without an estimated rate
    stay unrevised.
    """
    days_in_year = 366 if calendar.isleap(start.year) else 365
    n_days = (end - start).days + 1
    series: list[DailyEmissionSeries] = []
    for (country, sector) in sorted(annual_t, key=lambda cs: (cs[0], cs[1].value)):
        if country not in policies:
            raise ConfigError(f"unclassified rest-of-world country: {country}")
        policy = policies[country]
        flat = annual_t[(country, sector)] / days_in_year
        values = np.empty(n_days)
        for i in range(n_days):
            day = start + timedelta(days=i)
            group = rates.get((sector, day.month))
            if group is None:
                rate = 0.0
            elif policy.active_on(day):
                rate = group.with_closure
            else:
                rate = group.without_closure
            values[i] = flat * (1.0 + rate)
        series.append(DailyEmissionSeries(country, sector, start, values))
    return series


@dataclass
class SeriesPair:
    """A 2020 series with its 2019 counterpart for aligned comparison."""

    baseline: DailyEmissionSeries
    current: DailyEmissionSeries


@dataclass
class WindowSummary:
    key: str
    sum_2019_t: float = 0.0
    sum_2020_t: float = 0.0

    @property
    def diff_t(self) -> float:
        return self.sum_2020_t - self.sum_2019_t

    @property
    def growth(self) -> float:
        if self.sum_2019_t == 0:
            raise DomainError(f"zero baseline for {self.key}, growth undefined")
        return self.sum_2020_t / self.sum_2019_t - 1.0


def aggregate(
    pairs: list[SeriesPair],
    start: date,
    end: date,
    by: str,
    regions: dict[str, RegionGroup] | None = None,
) -> dict[str, WindowSummary]:
    """Window sums and changes grouped by country, region, sector or globally.

    The window is given in 2020 dates; 2019 masses come from the aligned
    days, so Feb 29 never enters a comparison. Group totals accumulate from
    the component series in sorted key order.
    """
    if by not in ("country", "region", "sector", "global"):
        raise ConfigError(f"unknown grouping: {by!r}")
    if by == "region" and regions is None:
        raise ConfigError("region grouping needs a country-to-region mapping")

    comparison_days = []
    day = start
    while day <= end:
        aligned = align_comparison_date(day)
        if aligned is not None:
            comparison_days.append((day, aligned))
        day += timedelta(days=1)
    if not comparison_days:
        raise DomainError("window contains no comparable days")

    def key_for(pair: SeriesPair) -> str:
        if by == "country":
            return pair.current.country
        if by == "sector":
            return pair.current.sector.value
        if by == "global":
            return "Global"
        try:
            return regions[pair.current.country].value  # type: ignore[index]
        except KeyError:
            raise ConfigError(f"no region for country {pair.current.country}") from None

    out: dict[str, WindowSummary] = {}
    for pair in sorted(pairs, key=lambda p: (p.current.country, p.current.sector.value)):
        if pair.current.start > start or pair.current.end < end:
            raise DomainError(
                f"{pair.current.country}/{pair.current.sector.value}: window "
                f"{start}..{end} exceeds available 2020 data"
            )
        key = key_for(pair)
        summary = out.setdefault(key, WindowSummary(key=key))
        for day, aligned in comparison_days:
            summary.sum_2020_t += pair.current.value_on(day)
            summary.sum_2019_t += pair.baseline.value_on(aligned)
    return out


@dataclass(frozen=True)
class HolidayRange:
    country: str
    start: date
    end: date
    label: str

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise DomainError(f"holiday range reversed for {self.label}")


class HolidayCalendar:
    """Non-overlapping labelled date ranges per country."""

    def __init__(self, ranges: list[HolidayRange]):
        self.by_country: dict[str, list[HolidayRange]] = {}
        for rng in sorted(ranges, key=lambda r: (r.country, r.start)):
            bucket = self.by_country.setdefault(rng.country, [])
            if bucket and rng.start <= bucket[-1].end:
                raise DomainError(f"overlapping holiday ranges for {rng.country}: {rng.label}")
            bucket.append(rng)

    def label_for(self, country: str, day: date) -> str | None:
        for rng in self.by_country.get(country, []):
            if rng.start <= day <= rng.end:
                return rng.label
        return None


@dataclass
class HolidayEffect:
    country: str
    sector: Sector
    label: str
    start: date
    end: date
    window_mean_t: float
    month_mean_t: float

    @property
    def relative_effect(self) -> float:
        if self.month_mean_t == 0:
            raise DomainError("zero reference month mean")
        return self.window_mean_t / self.month_mean_t - 1.0


def annotate_holidays(series: DailyEmissionSeries, cal: HolidayCalendar) -> tuple[list[str | None], list[HolidayEffect]]:
    """Tag each day with its holiday label and summarize each holiday window.

    A window's mean is compared against the mean over the calendar months it
    touches (clipped to the series range).
    """
    tags = [cal.label_for(series.country, day) for day in series.dates()]
    effects: list[HolidayEffect] = []
    for rng in cal.by_country.get(series.country, []):
        lo = max(rng.start, series.start)
        hi = min(rng.end, series.end)
        if lo > hi:
            continue
        window_days = (hi - lo).days + 1
        window_mean = series.window_sum(lo, hi) / window_days
        month_lo = date(lo.year, lo.month, 1)
        month_hi = date(hi.year, hi.month, calendar.monthrange(hi.year, hi.month)[1])
        month_lo = max(month_lo, series.start)
        month_hi = min(month_hi, series.end)
        month_days = (month_hi - month_lo).days + 1
        month_mean = series.window_sum(month_lo, month_hi) / month_days
        effects.append(
            HolidayEffect(series.country, series.sector, rng.label, lo, hi, window_mean, month_mean)
        )
    return tags, effects


def nox_crosscheck(sector_changes: dict[str, float], nox_shares: dict[str, float]) -> float:
    """Share-weighted mean change across the NOx-emitting sectors.

    Shares are fractions of total NOx emissions; they may sum to less than
    one (the remainder being sources outside the estimated sectors).
    """
    share_sum = 0.0
    weighted = 0.0
    for name in sorted(sector_changes):
        share = nox_shares.get(name, 0.0)
        if share < 0:
            raise DomainError(f"negative NOx share for {name}")
        share_sum += share
        weighted += share * sector_changes[name]
    if share_sum == 0:
        raise DomainError("NOx shares sum to zero")
    if share_sum > 1.0 + 1e-9:
        raise DomainError(f"NOx shares sum to {share_sum}, expected at most 1")
    return weighted / share_sum
