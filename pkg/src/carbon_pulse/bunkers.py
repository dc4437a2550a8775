"""Aviation emissions from flight tracks and shipping from volume changes.

Flight CO2 is kilometers flown times a fleet-constant factor; the factor is
anchored to a published 2018 commercial-aviation total, inflated for 2019
growth and divided by the 2019 kilometers seen by the tracking network,
which absorbs the network's coverage gaps. Shipping applies volume changes
to a flat daily baseline of which 87% is international.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date, timedelta

import numpy as np

from .core import DailyEmissionSeries, DomainError, Sector, align_comparison_date

EARTH_RADIUS_KM = 6371.0

KG_PER_MT = 1.0e9

#: Unattributed flights fall into this pseudo-country bucket.
UNATTRIBUTED = "GLB"


def great_circle_km(p1: tuple[float, float], p2: tuple[float, float]) -> float:
    """Haversine distance in km between two (lat, lon) points in degrees."""
    for lat, lon in (p1, p2):
        if not -90.0 <= lat <= 90.0 or not -180.0 <= lon <= 180.0:
            raise DomainError(f"invalid coordinates ({lat}, {lon})")
    lat1, lon1, lat2, lon2 = map(math.radians, (*p1, *p2))
    sin_dlat = math.sin((lat2 - lat1) / 2.0)
    sin_dlon = math.sin((lon2 - lon1) / 2.0)
    h = sin_dlat**2 + math.cos(lat1) * math.cos(lat2) * sin_dlon**2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def route_km(waypoints: list[tuple[float, float]]) -> float:
    """Great-circle length of a polyline over take-off to landing points."""
    if len(waypoints) < 2:
        raise DomainError("a route needs at least two waypoints")
    return sum(great_circle_km(waypoints[i], waypoints[i + 1]) for i in range(len(waypoints) - 1))


@dataclass(frozen=True)
class FlightRecord:
    flight_id: str
    day: date
    origin_country: str | None
    dest_country: str | None
    waypoints: tuple[tuple[float, float], ...]

    @property
    def km(self) -> float:
        return route_km(list(self.waypoints))

    @property
    def domestic(self) -> bool:
        return self.origin_country is not None and self.origin_country == self.dest_country


@dataclass(frozen=True)
class AviationScale:
    """Inputs anchoring the constant per-km emission factor."""

    reference_mt_2018: float = 918.0
    growth_2019: float = 0.03
    km_2019: float = 67.91e9

    def factor_kg_per_km(self) -> float:
        if self.km_2019 <= 0:
            raise DomainError("reference kilometers must be positive")
        return self.reference_mt_2018 * KG_PER_MT * (1.0 + self.growth_2019) / self.km_2019


def aviation_emission_factor(scale: AviationScale = AviationScale()) -> float:
    """Fleet-average kg CO2 per km flown."""
    return scale.factor_kg_per_km()


@dataclass
class AviationDaily:
    """Daily aviation emissions in tonnes, split by scope.

    `domestic` and `international` are keyed by attributing country (the
    origin for international flights); flights without a resolvable country
    land in the `UNATTRIBUTED` international bucket.
    """

    start: date
    n_days: int
    total: np.ndarray = field(init=False)
    domestic: dict[str, np.ndarray] = field(default_factory=dict)
    international: dict[str, np.ndarray] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.total = np.zeros(self.n_days)


def daily_aviation_emissions(flights: list[FlightRecord], factor_kg_per_km: float, start: date, end: date) -> AviationDaily:
    """Accumulate per-flight emissions into daily domestic/international series."""
    if factor_kg_per_km <= 0:
        raise DomainError(f"emission factor must be positive, got {factor_kg_per_km}")
    n_days = (end - start).days + 1
    if n_days <= 0:
        raise DomainError("empty aviation window")
    out = AviationDaily(start=start, n_days=n_days)
    for flight in flights:
        offset = (flight.day - start).days
        if not 0 <= offset < n_days:
            continue
        tonnes = flight.km * factor_kg_per_km / 1000.0
        out.total[offset] += tonnes
        if flight.origin_country is None or flight.dest_country is None:
            out.warnings.append(f"{flight.flight_id}: missing country, counted as unattributed international")
            bucket = out.international.setdefault(UNATTRIBUTED, np.zeros(n_days))
        elif flight.domestic:
            bucket = out.domestic.setdefault(flight.origin_country, np.zeros(n_days))
        else:
            bucket = out.international.setdefault(flight.origin_country, np.zeros(n_days))
        bucket[offset] += tonnes
    return out


@dataclass(frozen=True)
class ShippingBaseline:
    """Flat-profile global shipping mass for the baseline year."""

    annual_mt_2019: float
    international_share: float = 0.87

    def __post_init__(self) -> None:
        if self.annual_mt_2019 < 0:
            raise DomainError("negative shipping baseline")
        if not 0 < self.international_share <= 1:
            raise DomainError(f"international share must lie in (0, 1], got {self.international_share}")

    def international_daily_tonnes(self) -> float:
        return self.annual_mt_2019 * self.international_share * 1.0e6 / 365.0


def shipping_series(
    baseline: ShippingBaseline,
    volume_change: dict[date, float],
    start_2020: date,
    end_2020: date,
) -> tuple[DailyEmissionSeries, DailyEmissionSeries]:
    """(2019 flat series over aligned days, 2020 series scaled by volume change)."""
    flat = baseline.international_daily_tonnes()
    n_days = (end_2020 - start_2020).days + 1
    values_2020 = np.zeros(n_days)
    for i in range(n_days):
        day = start_2020 + timedelta(days=i)
        change = volume_change.get(day, 0.0)
        if change <= -1.0:
            raise DomainError(f"volume change must exceed -1, got {change} on {day}")
        values_2020[i] = flat * (1.0 + change)
    series_2020 = DailyEmissionSeries(UNATTRIBUTED, Sector.INTERNATIONAL_SHIPPING, start_2020, values_2020)

    aligned_start = align_comparison_date(start_2020) or date(2019, 2, 28)
    aligned_end = align_comparison_date(end_2020) or date(2019, 2, 28)
    n_base = (aligned_end - aligned_start).days + 1
    series_2019 = DailyEmissionSeries(UNATTRIBUTED, Sector.INTERNATIONAL_SHIPPING, aligned_start, np.full(n_base, flat))
    return series_2019, series_2020
