"""Domain vocabulary, emission-factor arithmetic and baseline construction.

Internal mass unit is tonnes CO2 per day everywhere; megatonnes appear only
at the presentation layer and in the annual-inventory fixture format.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, timedelta
from enum import Enum
from pathlib import Path

import numpy as np

CO2_PER_C = 44.0 / 12.0
TONNES_PER_MT = 1.0e6

#: Relative tolerance for mass-conservation checks on temporal distribution.
MASS_TOLERANCE = 1e-9


class DomainError(ValueError):
    """Input violates a documented precondition."""


class MappingError(KeyError):
    """A category label has no configured mapping."""


class ConfigError(ValueError):
    """Configuration or registry entry is missing or inconsistent."""


class ParseError(ValueError):
    """A fixture file does not match its declared schema."""


class RegionGroup(Enum):
    CHINA = "China"
    INDIA = "India"
    US = "US"
    EU27UK = "Europe (EU27 & UK)"
    RUSSIA = "Russia"
    JAPAN = "Japan"
    BRAZIL = "Brazil"
    ROW = "ROW"


class Sector(Enum):
    POWER = "Power"
    INDUSTRY = "Industry"
    GROUND_TRANSPORT = "GroundTransport"
    RESIDENTIAL = "Residential"
    DOMESTIC_AVIATION = "DomesticAviation"
    INTERNATIONAL_AVIATION = "InternationalAviation"
    INTERNATIONAL_SHIPPING = "InternationalShipping"


#: Bunker sectors are accounted globally; only aviation is attributable
#: per country.
BUNKER_SECTORS = frozenset({Sector.INTERNATIONAL_AVIATION, Sector.INTERNATIONAL_SHIPPING})


class FuelType(Enum):
    COAL = "Coal"
    OIL = "Oil"
    NATURAL_GAS = "NaturalGas"


@dataclass(frozen=True)
class Country:
    """ISO-3166 alpha-3 code with its reporting region."""

    code: str
    region: RegionGroup

    def __post_init__(self) -> None:
        if len(self.code) != 3 or not self.code.isalpha() or not self.code.isupper():
            raise DomainError(f"country code must be 3 uppercase letters, got {self.code!r}")


@dataclass(frozen=True)
class EmissionFactor:
    """Fuel-to-carbon conversion triple (heating value, carbon content, oxidation)."""

    heating_value_tj_per_t: float
    carbon_content_t_per_tj: float
    oxidation_rate: float

    def __post_init__(self) -> None:
        if self.heating_value_tj_per_t <= 0 or self.carbon_content_t_per_tj <= 0:
            raise DomainError("heating value and carbon content must be strictly positive")
        if not 0 < self.oxidation_rate <= 1:
            raise DomainError(f"oxidation rate must lie in (0, 1], got {self.oxidation_rate}")


@dataclass(frozen=True)
class GrowthRate:
    country: str
    rate: float

    def __post_init__(self) -> None:
        if self.rate <= -1:
            raise DomainError(f"growth rate must exceed -1, got {self.rate}")


@dataclass
class AnnualInventory:
    """Country x sector annual totals in Mt CO2 per year."""

    year: int
    entries: dict[tuple[str, Sector], float]

    def __post_init__(self) -> None:
        for key, mt in self.entries.items():
            if mt < 0:
                raise DomainError(f"negative inventory mass for {key}: {mt}")

    def slice(self, sectors: set[Sector] | None = None, countries: set[str] | None = None) -> dict[tuple[str, Sector], float]:
        return {
            (c, s): v
            for (c, s), v in self.entries.items()
            if (sectors is None or s in sectors) and (countries is None or c in countries)
        }


@dataclass
class DailyEmissionSeries:
    """Contiguous daily CO2 mass series for one (country, sector).

    Values are tonnes CO2 per day.
    """

    country: str
    sector: Sector
    start: date
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or len(self.values) == 0:
            raise DomainError("series needs a one-dimensional, non-empty value vector")
        if np.any(self.values < 0):
            raise DomainError(f"negative daily emission in series {self.country}/{self.sector.value}")

    @property
    def end(self) -> date:
        return self.start + timedelta(days=len(self.values) - 1)

    def dates(self) -> list[date]:
        return [self.start + timedelta(days=i) for i in range(len(self.values))]

    def index_of(self, day: date) -> int:
        offset = (day - self.start).days
        if not 0 <= offset < len(self.values):
            raise DomainError(f"{day} outside series range {self.start}..{self.end}")
        return offset

    def value_on(self, day: date) -> float:
        return float(self.values[self.index_of(day)])

    def window_sum(self, start: date, end: date) -> float:
        """Inclusive sum in tonnes over [start, end] clipped to the series range."""
        lo = max(start, self.start)
        hi = min(end, self.end)
        if lo > hi:
            return 0.0
        return float(self.values[self.index_of(lo) : self.index_of(hi) + 1].sum())


def energy_to_co2(energy_tj: float, factor: EmissionFactor) -> float:
    """CO2 mass in tonnes released by burning `energy_tj` of fuel energy.

    The carbon-to-CO2 molar conversion (44/12) is applied here and nowhere
    else in the package.
    """
    if energy_tj < 0:
        raise DomainError(f"energy must be non-negative, got {energy_tj}")
    return energy_tj * factor.carbon_content_t_per_tj * factor.oxidation_rate * CO2_PER_C


def sum_energy_emissions(consumption_tj: dict[FuelType, float], factors: dict[FuelType, EmissionFactor]) -> float:
    """Total tonnes CO2 for a bundle of per-fuel energy consumption."""
    total = 0.0
    for fuel, energy in sorted(consumption_tj.items(), key=lambda kv: kv[0].value):
        try:
            factor = factors[fuel]
        except KeyError:
            raise ConfigError(f"no emission factor configured for fuel {fuel.value}") from None
        total += energy_to_co2(energy, factor)
    return total


def scale_inventory(inventory: AnnualInventory, rates: list[GrowthRate], default_rate: float = 0.005) -> AnnualInventory:
    """Project an annual inventory one year forward with per-country growth rates.

    Countries without a reported rate use `default_rate`.
    """
    if default_rate <= -1:
        raise DomainError(f"default growth rate must exceed -1, got {default_rate}")
    by_country = {r.country: r.rate for r in rates}
    scaled = {
        (country, sector): mt * (1.0 + by_country.get(country, default_rate))
        for (country, sector), mt in inventory.entries.items()
    }
    return AnnualInventory(year=inventory.year + 1, entries=scaled)


EDGAR_SECTOR_MAP: dict[str, Sector] = {
    "Electricity and heat production": Sector.POWER,
    "Manufacturing industries and construction": Sector.INDUSTRY,
    "Other energy industries": Sector.INDUSTRY,
    "Road transportation": Sector.GROUND_TRANSPORT,
    "Rail transportation": Sector.GROUND_TRANSPORT,
    "Inland navigation": Sector.GROUND_TRANSPORT,
    "Other transportation": Sector.GROUND_TRANSPORT,
    "Residential and other sectors": Sector.RESIDENTIAL,
}


def sector_for_edgar_category(category: str) -> Sector:
    try:
        return EDGAR_SECTOR_MAP[category]
    except KeyError:
        raise MappingError(f"unmapped EDGAR category: {category!r}") from None


def distribute_annual(total: float, weights: np.ndarray, country: str, sector: Sector, start: date) -> DailyEmissionSeries:
    """Spread an annual total (tonnes) over days proportionally to `weights`."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0):
        raise DomainError("distribution weights must be non-negative")
    wsum = weights.sum()
    if wsum <= 0:
        raise DomainError("distribution weights must not all be zero")
    series = DailyEmissionSeries(country, sector, start, total * weights / wsum)
    if abs(series.values.sum() - total) > MASS_TOLERANCE * max(abs(total), 1.0):
        raise DomainError("mass not conserved when distributing annual total")
    return series


def align_comparison_date(day_2020: date) -> date | None:
    """Same month/day in 2019; Feb 29 has no counterpart and is excluded."""
    if day_2020.year != 2020:
        raise DomainError(f"alignment is defined for 2020 dates, got {day_2020}")
    if day_2020.month == 2 and day_2020.day == 29:
        return None
    return date(2019, day_2020.month, day_2020.day)


def align_or_borrow(day_2020: date) -> date:
    """Aligned 2019 day, borrowing Feb 28 for Feb 29 so raw series stay complete."""
    return align_comparison_date(day_2020) or date(2019, 2, 28)


def window_change(current: DailyEmissionSeries, baseline: DailyEmissionSeries, start: date, end: date) -> float:
    """Year-over-year change of summed mass over an aligned comparison window.

    The window is given in current-series (2020) dates; each day is compared
    against the same month/day of the baseline year, skipping days with no
    counterpart. The result is a ratio of sums, not a mean of daily ratios.
    """
    cur_total = 0.0
    base_total = 0.0
    day = start
    while day <= end:
        aligned = align_comparison_date(day)
        if aligned is not None:
            cur_total += current.value_on(day)
            base_total += baseline.value_on(aligned)
        day += timedelta(days=1)
    if base_total == 0:
        raise DomainError("baseline window sums to zero, change undefined")
    return cur_total / base_total - 1.0


# ---------------------------------------------------------------------------
# Fixture loaders
# ---------------------------------------------------------------------------


def _read_csv(path: Path, expected_header: list[str]) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != expected_header:
            raise ParseError(f"{path.name}: expected header {','.join(expected_header)}, got {reader.fieldnames}")
        return [row for row in reader]


def load_countries(path: Path) -> dict[str, Country]:
    rows = _read_csv(path, ["country", "region_group"])
    registry: dict[str, Country] = {}
    for i, row in enumerate(rows, start=2):
        code = row["country"]
        if code in registry:
            raise ParseError(f"{path.name}:{i}: duplicate country {code}")
        try:
            region = RegionGroup(row["region_group"])
        except ValueError:
            raise ParseError(f"{path.name}:{i}: unknown region group {row['region_group']!r}") from None
        registry[code] = Country(code, region)
    return registry


def load_inventory(path: Path, countries: dict[str, Country]) -> AnnualInventory:
    """Read the annual inventory fixture; sector labels are EDGAR categories."""
    rows = _read_csv(path, ["country", "sector", "year", "mt_co2"])
    entries: dict[tuple[str, Sector], float] = {}
    year: int | None = None
    for i, row in enumerate(rows, start=2):
        if row["country"] not in countries:
            raise ParseError(f"{path.name}:{i}: unknown country {row['country']!r}")
        sector = sector_for_edgar_category(row["sector"])
        try:
            row_year = int(row["year"])
            mt = float(row["mt_co2"])
        except ValueError:
            raise ParseError(f"{path.name}:{i}: non-numeric year or mass") from None
        if year is None:
            year = row_year
        elif row_year != year:
            raise ParseError(f"{path.name}:{i}: mixed years {year} and {row_year}")
        key = (row["country"], sector)
        entries[key] = entries.get(key, 0.0) + mt
    if year is None:
        raise ParseError(f"{path.name}: no inventory rows")
    return AnnualInventory(year=year, entries=entries)


def load_growth_rates(path: Path) -> list[GrowthRate]:
    rows = _read_csv(path, ["country", "rate"])
    return [GrowthRate(row["country"], float(row["rate"])) for row in rows]


def load_emission_factors(path: Path) -> dict[FuelType, EmissionFactor]:
    rows = _read_csv(path, ["fuel", "heating_value_tj_per_t", "carbon_content_t_per_tj", "oxidation_rate", "synthetic"])
    factors: dict[FuelType, EmissionFactor] = {}
    for row in rows:
        factors[FuelType(row["fuel"])] = EmissionFactor(
            float(row["heating_value_tj_per_t"]),
            float(row["carbon_content_t_per_tj"]),
            float(row["oxidation_rate"]),
        )
    return factors


def load_energy_consumption(path: Path) -> dict[tuple[str, Sector, FuelType], float]:
    """Read per-country, per-sector, per-fuel energy use in TJ for one year."""
    rows = _read_csv(path, ["country", "sector", "fuel", "energy_tj"])
    out: dict[tuple[str, Sector, FuelType], float] = {}
    for i, row in enumerate(rows, start=2):
        key = (row["country"], Sector(row["sector"]), FuelType(row["fuel"]))
        if key in out:
            raise ParseError(f"{path.name}:{i}: duplicate energy row for {key}")
        energy = float(row["energy_tj"])
        if energy < 0:
            raise ParseError(f"{path.name}:{i}: negative energy")
        out[key] = energy
    return out
