"""Residential and commercial building emissions from heating degree days.

Heating emissions scale the annual baseline by each day's share of the
reference-year population-weighted heating degree days; cooking emissions
are temperature-insensitive and spread uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from .core import ConfigError, DailyEmissionSeries, DomainError, Sector

DEFAULT_HDD_BASE_C = 18.0


@dataclass
class PopulationGrid:
    """Cell list shared by all temperature days: position, country, headcount."""

    lat: np.ndarray
    lon: np.ndarray
    country: list[str]
    population: np.ndarray

    def __post_init__(self) -> None:
        self.lat = np.asarray(self.lat, dtype=float)
        self.lon = np.asarray(self.lon, dtype=float)
        self.population = np.asarray(self.population, dtype=float)
        n = len(self.lat)
        if not (len(self.lon) == len(self.country) == len(self.population) == n):
            raise DomainError("population grid columns have mismatched lengths")
        if np.any(self.population < 0):
            raise DomainError("negative population cell")


@dataclass
class TemperatureGrid:
    """Daily 2m air temperature per cell, aligned with a PopulationGrid."""

    dates: list[date]
    t2m_c: np.ndarray  # shape (n_days, n_cells)

    def __post_init__(self) -> None:
        self.t2m_c = np.asarray(self.t2m_c, dtype=float)
        if self.t2m_c.shape[0] != len(self.dates):
            raise DomainError("temperature rows do not match the date list")


@dataclass(frozen=True)
class ResidentialSplit:
    country: str
    cooking_share: float
    heating_share: float

    def __post_init__(self) -> None:
        if self.cooking_share < 0 or self.heating_share < 0:
            raise DomainError(f"negative split share for {self.country}")
        if abs(self.cooking_share + self.heating_share - 1.0) > 1e-9:
            raise DomainError(f"split shares for {self.country} must sum to 1")


def population_weighted_hdd(
    temps: TemperatureGrid,
    grid: PopulationGrid,
    base_c: float = DEFAULT_HDD_BASE_C,
) -> dict[str, np.ndarray]:
    """Per-country daily heating degree days, weighted by cell population."""
    if temps.t2m_c.shape[1] != len(grid.population):
        raise DomainError("temperature and population grids have different cell counts")
    deficits = np.maximum(0.0, base_c - temps.t2m_c)  # (days, cells)
    out: dict[str, np.ndarray] = {}
    countries = sorted(set(grid.country))
    country_arr = np.asarray(grid.country)
    for country in countries:
        mask = country_arr == country
        pop = grid.population[mask]
        pop_total = pop.sum()
        if pop_total == 0:
            raise DomainError(f"zero total population for {country}")
        out[country] = deficits[:, mask] @ pop / pop_total
    return out


def heating_emission_series(
    country: str,
    start: date,
    annual_heating_t: float,
    hdd_daily: np.ndarray,
    hdd_year_total: float,
    annual_cooking_t: float = 0.0,
) -> DailyEmissionSeries:
    """Daily residential emissions: HDD-shaped heating plus a flat cooking floor.

    day value = heating * hdd(day) / hdd_year_total + cooking / 365.
    Countries with no annual heating demand must carry a zero heating share
    (tropical guard): scaling a positive mass by an all-zero HDD profile
    would silently erase it.
    """
    hdd_daily = np.asarray(hdd_daily, dtype=float)
    if np.any(hdd_daily < 0):
        raise DomainError("negative heating degree days")
    if hdd_year_total <= 0:
        if annual_heating_t > 0:
            raise ConfigError(
                f"{country}: positive heating mass with zero annual degree days; set the heating share to 0"
            )
        hdd_year_total = 1.0
    values = annual_heating_t * hdd_daily / hdd_year_total + annual_cooking_t / 365.0
    return DailyEmissionSeries(country, Sector.RESIDENTIAL, start, values)


def gas_consumption_comparison(
    estimated: DailyEmissionSeries,
    observed: DailyEmissionSeries,
    start: date,
    end: date,
) -> dict[str, float]:
    """Side-by-side window totals of the estimate and a gas-derived series.

    Verification output only; the observed series never feeds the estimator.
    """
    est = estimated.window_sum(start, end)
    obs = observed.window_sum(start, end)
    if obs == 0:
        raise DomainError("observed window sums to zero")
    return {
        "estimated_t": est,
        "observed_t": obs,
        "relative_gap": est / obs - 1.0,
    }
