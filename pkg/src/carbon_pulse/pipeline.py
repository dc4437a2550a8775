"""End-to-end orchestration: fixtures in, daily series and reports out.

The run is deterministic: fixture files are read in sorted order, every
reduction iterates sorted keys, all randomness flows from the single config
seed, and outputs are serialized with fixed formatting. Thread count never
changes results.
"""

from __future__ import annotations

import csv
import hashlib
import time
import warnings as _warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from . import __version__
from .assembly import (
    ClosurePolicy,
    HolidayCalendar,
    HolidayRange,
    SeriesPair,
    aggregate,
    annotate_holidays,
    apply_closure_rates,
    closure_group_rates,
    nox_crosscheck,
)
from .bunkers import (
    AviationScale,
    FlightRecord,
    ShippingBaseline,
    daily_aviation_emissions,
    shipping_series,
)
from .config import RunConfig
from .core import (
    AnnualInventory,
    ConfigError,
    DailyEmissionSeries,
    DomainError,
    ParseError,
    RegionGroup,
    Sector,
    TONNES_PER_MT,
    align_or_borrow,
    distribute_annual,
    load_countries,
    load_emission_factors,
    load_energy_consumption,
    load_growth_rates,
    load_inventory,
    scale_inventory,
    sum_energy_emissions,
)
from .ingestion import CleanReport, FeedRegistry, ingest_feed
from .industry import (
    MonthlyProduction,
    SubSector,
    china_industry_growth,
    disaggregate_month,
    forecast_missing_month,
    group_growth,
    ipi_growth,
    product_growth,
)
from .power import (
    GenerationKind,
    GenerationSeries,
    TemperatureAdjustment,
    apply_temperature_adjustment,
    power_emission_series,
    thermal_aggregate,
)
from .reporting import (
    MONTHLY_STYLES,
    build_s2_table,
    fmt,
    month_windows,
    write_daily_csv,
    write_fig1_csv,
    write_json,
    write_monthly_csv,
    write_s2_csv,
)
from .residential import (
    PopulationGrid,
    ResidentialSplit,
    TemperatureGrid,
    heating_emission_series,
    population_weighted_hdd,
)
from .transport import (
    CityWeight,
    fit_traffic_curve,
    national_change,
    peer_group_change,
    traffic_proxy,
)
from .uncertainty import GaussianInput, combine_mult, combine_sum, load_ledger, monte_carlo_ci

#: Ledger items for the estimated sectors, in report order.
LEDGER_SECTORS = ["Power", "Ground Transport", "Industry", "Residential", "Aviation", "International Shipping"]


@dataclass
class RunState:
    """Everything accumulated during a run, prior to serialization."""

    config: RunConfig
    warnings: list[str] = field(default_factory=list)
    counters: dict[str, int] = field(default_factory=dict)
    elapsed_ms: dict[str, float] = field(default_factory=dict)
    national_pairs: list[SeriesPair] = field(default_factory=list)
    aviation_pairs: list[SeriesPair] = field(default_factory=list)
    shipping_pairs: list[SeriesPair] = field(default_factory=list)
    clean_report: CleanReport = field(default_factory=CleanReport)
    generation: dict[str, dict[date, float]] = field(default_factory=dict)

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def count(self, key: str, n: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + n

    def all_pairs(self) -> list[SeriesPair]:
        return self.national_pairs + self.aviation_pairs + self.shipping_pairs


class _Timer:
    def __init__(self, state: RunState, key: str):
        self.state, self.key = state, key

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.state.elapsed_ms[self.key] = (time.perf_counter() - self.t0) * 1000.0
        return False


def _window_2019(config: RunConfig) -> tuple[date, date]:
    return align_or_borrow(config.window_start), align_or_borrow(config.window_end)


def _date_range(start: date, end: date) -> list[date]:
    return [start + timedelta(days=i) for i in range((end - start).days + 1)]


# ---------------------------------------------------------------------------
# Baseline
# ---------------------------------------------------------------------------


def build_baseline(config: RunConfig, state: RunState) -> tuple[dict[str, RegionGroup], AnnualInventory]:
    """2019 country x sector inventory in Mt, with the bottom-up China path."""
    fx = config.fixture_dir
    countries = load_countries(fx / "countries.csv")
    if config.countries != "all":
        keep = set(config.countries)
        unknown = keep - set(countries)
        if unknown:
            raise ConfigError(f"countries not in registry: {sorted(unknown)}")
        countries = {c: v for c, v in countries.items() if c in keep}
    inventory_2018 = load_inventory(fx / "inventory_2018.csv", countries)
    rates = load_growth_rates(fx / "growth_rates_2019.csv")
    baseline = scale_inventory(inventory_2018, rates)

    energy_path = fx / "china_energy_2019.csv"
    if energy_path.exists() and "CHN" in countries:
        factors = load_emission_factors(fx / "emission_factors.csv")
        consumption = load_energy_consumption(energy_path)
        by_sector: dict[Sector, dict] = {}
        for (country, sector, fuel), tj in consumption.items():
            if country != "CHN":
                raise ParseError(f"china_energy_2019.csv covers only CHN, found {country}")
            by_sector.setdefault(sector, {})[fuel] = tj
        for sector in sorted(by_sector, key=lambda s: s.value):
            tonnes = sum_energy_emissions(by_sector[sector], factors)
            baseline.entries[("CHN", sector)] = tonnes / TONNES_PER_MT
        state.count("china_bottom_up_sectors", len(by_sector))

    regions = {code: c.region for code, c in countries.items()}
    state.count("countries", len(countries))
    state.count("baseline_entries", len(baseline.entries))
    return regions, baseline


# ---------------------------------------------------------------------------
# Power
# ---------------------------------------------------------------------------


def run_power(config: RunConfig, state: RunState, baseline: AnnualInventory, regions: dict[str, RegionGroup]) -> None:
    fx = config.fixture_dir
    registry = FeedRegistry.load(fx / "feed_schemas.json")
    start19, end19 = _window_2019(config)
    days19 = _date_range(start19, end19)
    days20 = _date_range(config.window_start, config.window_end)

    feeds = sorted(
        (f for f in registry.feeds if f["country"] in regions and f["country"] not in config.excluded_power_countries),
        key=lambda f: f["country"],
    )

    def ingest(feed: dict[str, str]):
        report = CleanReport()
        daily = ingest_feed(fx / feed["file"], registry.schema(feed["schema"]), report)
        return feed["country"], daily, report

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(ingest, feeds))
    else:
        results = [ingest(feed) for feed in feeds]

    for country, daily, report in sorted(results, key=lambda r: r[0]):
        state.clean_report.entries.extend(report.entries)
        state.clean_report.omitted_columns.extend(report.omitted_columns)
        state.count("power_feed_days", len(daily))

        if country in config.use_total_generation:
            categories, kind = ["Total"], GenerationKind.TOTAL
        else:
            categories, kind = config.thermal_categories.get(country, ["Thermal"]), GenerationKind.THERMAL

        def generation_for(days: list[date]) -> GenerationSeries:
            per_type: dict[str, GenerationSeries] = {}
            for cat in categories:
                values = []
                for day in days:
                    values.append(daily.get(day, {}).get(cat, np.nan))
                arr = np.asarray(values)
                if np.isnan(arr).all():
                    continue
                if np.isnan(arr).any():
                    missing = [d.isoformat() for d, v in zip(days, arr) if np.isnan(v)]
                    raise DomainError(f"{country}: generation gaps for {cat} on {', '.join(missing[:5])}")
                per_type[cat] = GenerationSeries(country, kind, days[0], arr)
            series = thermal_aggregate(per_type, categories, country)
            return GenerationSeries(country, kind, series.start, series.values)

        gen19 = generation_for(days19)
        gen20 = generation_for(days20)
        state.generation[country] = {d: float(v) for d, v in zip(days19, gen19.values)}
        state.generation[country].update({d: float(v) for d, v in zip(days20, gen20.values)})

        annual_t = baseline.entries.get((country, Sector.POWER), 0.0) * TONNES_PER_MT
        window_mass = annual_t * len(days19) / 365.0
        baseline_series = distribute_annual(window_mass, gen19.values, country, Sector.POWER, start19)

        estimate = power_emission_series(gen20, gen19, baseline_series)
        for day in estimate.excluded_days:
            state.warn(f"power {country}: {day} excluded, zero 2019 generation on the aligned day")
        series_2020 = estimate.series
        if config.temp_adjustment is not None:
            adjustment = TemperatureAdjustment(
                config.temp_adjustment.start, config.temp_adjustment.end, config.temp_adjustment.factor
            )
            series_2020 = apply_temperature_adjustment(series_2020, adjustment)
        state.national_pairs.append(SeriesPair(baseline=baseline_series, current=series_2020))
    state.count("power_countries", len(results))


# ---------------------------------------------------------------------------
# Ground transport
# ---------------------------------------------------------------------------


def _load_congestion(path: Path) -> dict[tuple[str, str], dict[date, float]]:
    out: dict[tuple[str, str], dict[date, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["date", "city", "country", "congestion_pct"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        for row in reader:
            key = (row["city"], row["country"])
            out.setdefault(key, {})[date.fromisoformat(row["date"])] = float(row["congestion_pct"])
    return out


def _load_city_weights(path: Path) -> list[CityWeight]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["city", "country", "edgar_road_mt"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        return [CityWeight(row["city"], row["country"], float(row["edgar_road_mt"])) for row in reader]


def _load_calibration(path: Path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["congestion_pct", "car_count"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        rows = [(float(r["congestion_pct"]), float(r["car_count"])) for r in reader]
    x = np.array([r[0] for r in rows])
    q = np.array([r[1] for r in rows])
    return x, q


def run_transport(config: RunConfig, state: RunState, baseline: AnnualInventory, regions: dict[str, RegionGroup]) -> None:
    fx = config.fixture_dir
    x_cal, q_cal = _load_calibration(fx / "paris_calibration.csv")
    fit = fit_traffic_curve(x_cal, q_cal)
    state.counters["transport_fit_observations"] = fit.n_observations

    congestion = _load_congestion(fx / "congestion.csv")
    weights = _load_city_weights(fx / "city_weights.csv")
    days20 = _date_range(config.window_start, config.window_end)
    start19, end19 = _window_2019(config)

    city_changes_by_country: dict[str, dict[str, np.ndarray]] = {}
    for (city, country), values in sorted(congestion.items()):
        x20, x19 = [], []
        for day in days20:
            aligned = align_or_borrow(day)
            if day not in values or aligned not in values:
                raise DomainError(f"congestion gap for {city} on {day} or {aligned}")
            x20.append(values[day])
            x19.append(values[aligned])
        q20 = traffic_proxy(np.asarray(x20), fit.params)
        q19 = traffic_proxy(np.asarray(x19), fit.params)
        city_changes_by_country.setdefault(country, {})[city] = q20 / q19 - 1.0

    estimated: dict[str, np.ndarray] = {}
    for country in sorted(city_changes_by_country):
        estimated[country] = national_change(
            city_changes_by_country[country], [w for w in weights if w.country == country]
        )
    state.count("transport_cities", sum(len(v) for v in city_changes_by_country.values()))

    annual_weights = {
        country: baseline.entries.get((country, Sector.GROUND_TRANSPORT), 0.0) for country in estimated
    }
    eu_estimated = {c: chg for c, chg in estimated.items() if regions.get(c) is RegionGroup.EU27UK}

    for country in sorted(regions):
        annual_mt = baseline.entries.get((country, Sector.GROUND_TRANSPORT), 0.0)
        if annual_mt == 0.0:
            continue
        if country in estimated:
            change = estimated[country]
        elif regions[country] is RegionGroup.EU27UK and eu_estimated:
            change = peer_group_change(eu_estimated, annual_weights)
            state.warn(f"transport {country}: no congestion cities, following the estimated EU group")
        else:
            change = peer_group_change(estimated, annual_weights)
            state.warn(f"transport {country}: no congestion cities, following the estimated global group")

        annual_t = annual_mt * TONNES_PER_MT
        flat = np.full((end19 - start19).days + 1, annual_t / 365.0)
        baseline_series = DailyEmissionSeries(country, Sector.GROUND_TRANSPORT, start19, flat)
        values_2020 = np.array(
            [baseline_series.value_on(align_or_borrow(day)) * (1.0 + change[i]) for i, day in enumerate(days20)]
        )
        current = DailyEmissionSeries(country, Sector.GROUND_TRANSPORT, config.window_start, values_2020)
        state.national_pairs.append(SeriesPair(baseline=baseline_series, current=current))
    state.count("transport_countries", len([c for c in regions if baseline.entries.get((c, Sector.GROUND_TRANSPORT), 0.0) > 0]))


# ---------------------------------------------------------------------------
# Industry
# ---------------------------------------------------------------------------


def _load_production(path: Path) -> dict[tuple[str, SubSector, str], list[dict]]:
    groups: dict[tuple[str, SubSector, str], list[dict]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["country", "subsector", "product", "month", "quantity", "weight"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        for row in reader:
            key = (row["country"], SubSector(row["subsector"]), row["month"])
            groups.setdefault(key, []).append(
                {"product": row["product"], "quantity": float(row["quantity"]), "weight": float(row["weight"])}
            )
    return groups


def _load_subsector_shares(path: Path) -> dict[SubSector, float]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["subsector", "share"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        return {SubSector(row["subsector"]): float(row["share"]) for row in reader}


def _load_ipi(path: Path) -> dict[str, dict[str, dict[int, float]]]:
    """key -> year -> month -> cumulative index."""
    out: dict[str, dict[str, dict[int, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["country", "month", "cumulative_index"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        for row in reader:
            year, month = row["month"].split("-")
            index = float(row["cumulative_index"])
            if index <= 0:
                raise ParseError(f"{path.name}: non-positive index for {row['country']} {row['month']}")
            out.setdefault(row["country"], {}).setdefault(year, {})[int(month)] = index
    return out


def _load_process_baseline(path: Path) -> dict[str, float]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["country", "annual_mt_2019"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        return {row["country"]: float(row["annual_mt_2019"]) for row in reader}


def _subsector_growth(groups: dict, country: str, sub: SubSector, month: int) -> float:
    base = groups.get((country, sub, f"2019-{month:02d}"))
    cur = groups.get((country, sub, f"2020-{month:02d}"))
    if base is None or cur is None:
        raise DomainError(f"missing production rows for {country} {sub.value} month {month}")
    if len(base) == 1 and len(cur) == 1 and base[0]["weight"] == 1.0:
        return product_growth(cur[0]["quantity"], base[0]["quantity"])
    cur_by_product = {r["product"]: r for r in cur}
    pairs = []
    for r in sorted(base, key=lambda r: r["product"]):
        if r["product"] not in cur_by_product:
            raise DomainError(f"product {r['product']} missing from 2020 data")
        c = cur_by_product[r["product"]]
        pairs.append(
            (
                MonthlyProduction(r["product"], f"2019-{month:02d}", r["quantity"], r["weight"]),
                MonthlyProduction(c["product"], f"2020-{month:02d}", c["quantity"], c["weight"]),
            )
        )
    return group_growth(pairs)


def run_industry(config: RunConfig, state: RunState, baseline: AnnualInventory, regions: dict[str, RegionGroup]) -> None:
    fx = config.fixture_dir
    production = _load_production(fx / "production.csv")
    shares = _load_subsector_shares(fx / "subsector_shares.csv")
    ipi = _load_ipi(fx / "ipi.csv")
    process_baseline = _load_process_baseline(fx / "process_baseline.csv")

    months20 = month_windows(config.window_start, config.window_end)
    start19, end19 = _window_2019(config)
    months19 = month_windows(start19, end19)
    month_numbers = [m for m, _, _ in months20]

    # Monthly growth per estimated country.
    growth_by_country: dict[str, dict[int, float]] = {}
    cement_growth: dict[int, float] = {}
    if ("CHN", SubSector.STEEL, f"2019-{month_numbers[0]:02d}") in production and "CHN" in regions:
        chn: dict[int, float] = {}
        for m in month_numbers:
            sub_growth = {sub: _subsector_growth(production, "CHN", sub, m) for sub in SubSector}
            cement_growth[m] = sub_growth[SubSector.CEMENT]
            chn[m] = china_industry_growth(sub_growth, shares)
        growth_by_country["CHN"] = chn

    donor_april: dict[str, float] = {}
    ipi_growth_by_key: dict[str, dict[int, float]] = {}
    for key in sorted(ipi):
        series = ipi[key]
        if "2019" not in series or "2020" not in series:
            raise DomainError(f"IPI series {key} must cover 2019 and 2020")
        ipi_growth_by_key[key] = ipi_growth(series["2019"], series["2020"])

    for key, growth in ipi_growth_by_key.items():
        if key in ("JPN", "RUS", "BRA") and 4 in growth:
            donor_april[key] = growth[4]

    def ipi_key_for(country: str) -> str | None:
        if country in ipi_growth_by_key:
            return country
        region_key = regions[country].name
        if region_key in ipi_growth_by_key:
            return region_key
        return None

    for country in sorted(regions):
        if country == "CHN" or regions[country] is RegionGroup.ROW:
            continue
        if baseline.entries.get((country, Sector.INDUSTRY), 0.0) == 0.0:
            continue
        key = ipi_key_for(country)
        if key is None:
            raise ConfigError(f"no production index covers {country}")
        growth = ipi_growth_by_key[key]
        resolved: dict[int, float] = {}
        for m in month_numbers:
            if m in growth:
                resolved[m] = growth[m]
            else:
                resolved[m] = forecast_missing_month(donor_april)
                state.warn(f"industry {country}: month {m} forecast from the JPN/RUS/BRA mean")
        growth_by_country[country] = resolved

    # Monthly masses to daily series via the electricity proxy.
    for country in sorted(growth_by_country):
        annual_t = baseline.entries.get((country, Sector.INDUSTRY), 0.0) * TONNES_PER_MT
        if annual_t == 0.0 and country not in process_baseline:
            continue
        process_t = process_baseline.get(country, 0.0) * TONNES_PER_MT

        def month_masses(month: int, n_days: int) -> tuple[float, float]:
            fuel = annual_t * n_days / 365.0
            process = process_t * n_days / 365.0
            return fuel, process

        def build_series(month_list, year: int) -> DailyEmissionSeries:
            chunks = []
            fallback_used = False
            for m, lo, hi in month_list:
                n_days = (hi - lo).days + 1
                fuel, process = month_masses(m, n_days)
                if year == 2020:
                    fuel *= 1.0 + growth_by_country[country][m]
                    process *= 1.0 + cement_growth.get(m, 0.0)
                proxy = np.array([state.generation.get(country, {}).get(d, 0.0) for d in _date_range(lo, hi)])
                daily, fell_back = disaggregate_month(fuel + process, proxy)
                fallback_used = fallback_used or fell_back
                chunks.append(daily)
            if fallback_used:
                state.warn(f"industry {country} {year}: no electricity proxy, months split uniformly")
            return DailyEmissionSeries(country, Sector.INDUSTRY, month_list[0][1], np.concatenate(chunks))

        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore")  # uniform-split fallback is reported via state.warn
            baseline_series = build_series(months19, 2019)
            current = build_series(months20, 2020)
        state.national_pairs.append(SeriesPair(baseline=baseline_series, current=current))
    state.count("industry_countries", len(growth_by_country))


# ---------------------------------------------------------------------------
# Residential
# ---------------------------------------------------------------------------


def _load_population(path: Path) -> PopulationGrid:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["lat", "lon", "country_iso3", "population"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        rows = list(reader)
    return PopulationGrid(
        lat=np.array([float(r["lat"]) for r in rows]),
        lon=np.array([float(r["lon"]) for r in rows]),
        country=[r["country_iso3"] for r in rows],
        population=np.array([float(r["population"]) for r in rows]),
    )


def _load_temperature(path: Path, grid: PopulationGrid) -> TemperatureGrid:
    cell_index = {(lat, lon): i for i, (lat, lon) in enumerate(zip(grid.lat, grid.lon))}
    by_day: dict[date, np.ndarray] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["date", "lat", "lon", "t2m_c"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        for row in reader:
            day = date.fromisoformat(row["date"])
            key = (float(row["lat"]), float(row["lon"]))
            if key not in cell_index:
                raise ParseError(f"{path.name}: temperature cell {key} absent from the population grid")
            if day not in by_day:
                by_day[day] = np.full(len(grid.population), np.nan)
            by_day[day][cell_index[key]] = float(row["t2m_c"])
    dates = sorted(by_day)
    t2m = np.vstack([by_day[d] for d in dates])
    if np.isnan(t2m).any():
        raise ParseError(f"{path.name}: some cells lack temperatures on some days")
    return TemperatureGrid(dates=dates, t2m_c=t2m)


def _load_splits(path: Path) -> dict[str, ResidentialSplit]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["country", "cooking_share", "heating_share"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        return {
            r["country"]: ResidentialSplit(r["country"], float(r["cooking_share"]), float(r["heating_share"]))
            for r in reader
        }


def run_residential(config: RunConfig, state: RunState, baseline: AnnualInventory, regions: dict[str, RegionGroup]) -> None:
    fx = config.fixture_dir
    grid = _load_population(fx / "population.csv")
    temps = _load_temperature(fx / "temperature.csv", grid)
    splits = _load_splits(fx / "residential_split.csv")
    hdd = population_weighted_hdd(temps, grid, config.hdd_base_c)
    date_index = {d: i for i, d in enumerate(temps.dates)}

    start19, end19 = _window_2019(config)
    days19 = _date_range(start19, end19)
    days20 = _date_range(config.window_start, config.window_end)
    year_2019 = [d for d in temps.dates if d.year == 2019]
    if len(year_2019) < 365:
        raise DomainError("temperature fixture must cover all of 2019 for the annual HDD total")

    for country in sorted(regions):
        annual_mt = baseline.entries.get((country, Sector.RESIDENTIAL), 0.0)
        if annual_mt == 0.0:
            continue
        if country not in hdd:
            raise ConfigError(f"no temperature cells for {country}")
        if country not in splits:
            raise ConfigError(f"no cooking/heating split for {country}")
        split = splits[country]
        cooking_share, heating_share = split.cooking_share, split.heating_share
        annual_t = annual_mt * TONNES_PER_MT
        series_hdd = hdd[country]
        hdd_year_total = float(sum(series_hdd[date_index[d]] for d in year_2019))

        def series_for(days: list[date], start: date) -> DailyEmissionSeries:
            values = np.array([series_hdd[date_index[d]] for d in days])
            return heating_emission_series(
                country,
                start,
                annual_t * heating_share,
                values,
                hdd_year_total,
                annual_t * cooking_share,
            )

        state.national_pairs.append(
            SeriesPair(baseline=series_for(days19, start19), current=series_for(days20, config.window_start))
        )
    state.count("residential_countries", len([c for c in regions if baseline.entries.get((c, Sector.RESIDENTIAL), 0.0) > 0]))


# ---------------------------------------------------------------------------
# Bunkers
# ---------------------------------------------------------------------------


def _load_flights(path: Path, regions: dict[str, RegionGroup]) -> list[FlightRecord]:
    flights = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["date", "flight_id", "origin_iso3", "dest_iso3", "waypoints"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        for row in reader:
            waypoints = []
            for token in row["waypoints"].split(";"):
                lat, lon = token.split(":")
                waypoints.append((float(lat), float(lon)))
            origin = row["origin_iso3"] or None
            dest = row["dest_iso3"] or None
            if origin is not None and origin not in regions:
                origin = None
            if dest is not None and dest not in regions:
                dest = None
            flights.append(
                FlightRecord(row["flight_id"], date.fromisoformat(row["date"]), origin, dest, tuple(waypoints))
            )
    return flights


def run_aviation(config: RunConfig, state: RunState, regions: dict[str, RegionGroup]) -> None:
    flights = _load_flights(config.fixture_dir / "flights.csv", regions)
    factor = AviationScale().factor_kg_per_km()
    start19, end19 = _window_2019(config)

    agg19 = daily_aviation_emissions([f for f in flights if f.day.year == 2019], factor, start19, end19)
    agg20 = daily_aviation_emissions([f for f in flights if f.day.year == 2020], factor, config.window_start, config.window_end)
    unattributed = len(agg19.warnings) + len(agg20.warnings)
    if unattributed:
        state.warn(f"aviation: {unattributed} flights without country attribution, counted as global international")
    state.count("flights", len(flights))

    def pair_for(sector: Sector, by19: dict[str, np.ndarray], by20: dict[str, np.ndarray]) -> None:
        for country in sorted(set(by19) | set(by20)):
            base = by19.get(country)
            cur = by20.get(country)
            baseline_series = DailyEmissionSeries(
                country, sector, start19, base if base is not None else np.zeros(agg19.n_days)
            )
            current = DailyEmissionSeries(
                country, sector, config.window_start, cur if cur is not None else np.zeros(agg20.n_days)
            )
            pair = SeriesPair(baseline=baseline_series, current=current)
            if sector is Sector.DOMESTIC_AVIATION:
                state.national_pairs.append(pair)
            else:
                state.aviation_pairs.append(pair)

    pair_for(Sector.DOMESTIC_AVIATION, agg19.domestic, agg20.domestic)
    pair_for(Sector.INTERNATIONAL_AVIATION, agg19.international, agg20.international)


def run_shipping(config: RunConfig, state: RunState) -> None:
    path = config.fixture_dir / "shipping_volume.csv"
    changes: dict[date, float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["date", "volume_change_fraction"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        for row in reader:
            changes[date.fromisoformat(row["date"])] = float(row["volume_change_fraction"])
    baseline = ShippingBaseline(config.shipping_annual_mt_2019, config.shipping_international_share)
    series_2019, series_2020 = shipping_series(baseline, changes, config.window_start, config.window_end)
    state.shipping_pairs.append(SeriesPair(baseline=series_2019, current=series_2020))
    state.count("shipping_days", len(changes))


# ---------------------------------------------------------------------------
# Rest of world via closures
# ---------------------------------------------------------------------------


def _load_policies(path: Path) -> dict[str, ClosurePolicy]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["country", "has_closure", "start", "end"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        out = {}
        for row in reader:
            out[row["country"]] = ClosurePolicy(
                country=row["country"],
                has_closure=row["has_closure"].lower() == "true",
                start=date.fromisoformat(row["start"]) if row["start"] else None,
                end=date.fromisoformat(row["end"]) if row["end"] else None,
            )
    return out


def run_row_closure(config: RunConfig, state: RunState, baseline: AnnualInventory, regions: dict[str, RegionGroup]) -> None:
    policies = _load_policies(config.fixture_dir / "policies.csv")
    row_countries = sorted(c for c, r in regions.items() if r is RegionGroup.ROW)
    if not row_countries:
        return
    start19, end19 = _window_2019(config)
    closure_sectors = [Sector.POWER, Sector.INDUSTRY]

    estimated_pairs = [
        p
        for p in state.national_pairs
        if p.current.sector in closure_sectors and regions.get(p.current.country) is not RegionGroup.ROW
    ]
    monthly_changes: dict[tuple[str, Sector, int], float] = {}
    weights: dict[tuple[str, Sector], float] = {}
    for sector in closure_sectors:
        sector_pairs = [p for p in estimated_pairs if p.current.sector is sector]
        if not sector_pairs:
            raise DomainError(f"no estimated countries available for {sector.value} closure rates")
        for m, lo, hi in month_windows(config.window_start, config.window_end):
            for country, summary in aggregate(sector_pairs, lo, hi, by="country").items():
                monthly_changes[(country, sector, m)] = summary.growth
        for country, summary in aggregate(sector_pairs, config.window_start, config.window_end, by="country").items():
            weights[(country, sector)] = summary.sum_2019_t

    rates = closure_group_rates(monthly_changes, weights, policies)

    annual_t = {
        (c, s): baseline.entries.get((c, s), 0.0) * TONNES_PER_MT
        for c in row_countries
        for s in closure_sectors
        if baseline.entries.get((c, s), 0.0) > 0.0
    }
    current_series = apply_closure_rates(annual_t, rates, policies, config.window_start, config.window_end)
    n19 = (end19 - start19).days + 1
    for series in current_series:
        flat = annual_t[(series.country, series.sector)] / 365.0
        baseline_series = DailyEmissionSeries(series.country, series.sector, start19, np.full(n19, flat))
        state.national_pairs.append(SeriesPair(baseline=baseline_series, current=series))
    state.count("row_series", len(current_series))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _load_holidays(path: Path) -> HolidayCalendar:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["country", "start", "end", "label"]:
            raise ParseError(f"{path.name}: unexpected header {reader.fieldnames}")
        ranges = [
            HolidayRange(row["country"], date.fromisoformat(row["start"]), date.fromisoformat(row["end"]), row["label"])
            for row in reader
        ]
    return HolidayCalendar(ranges)


def write_holiday_report(path: Path, state: RunState, calendar: HolidayCalendar) -> None:
    rows = []
    for pair in sorted(state.national_pairs, key=lambda p: (p.current.country, p.current.sector.value)):
        if pair.current.sector is not Sector.POWER:
            continue
        for series in (pair.baseline, pair.current):
            _, effects = annotate_holidays(series, calendar)
            for effect in effects:
                rows.append(
                    [
                        effect.country,
                        effect.sector.value,
                        str(effect.start.year),
                        effect.label,
                        effect.start.isoformat(),
                        effect.end.isoformat(),
                        fmt(effect.window_mean_t / TONNES_PER_MT),
                        fmt(effect.month_mean_t / TONNES_PER_MT),
                        fmt(effect.relative_effect * 100.0),
                    ]
                )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["country", "sector", "year", "label", "start", "end", "window_mean_mt", "month_mean_mt", "effect_pct"]
        )
        writer.writerows(rows)


def write_clean_report(path: Path, state: RunState) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["date", "category", "duplicates_averaged", "anomalies_replaced", "missing_preserved", "replacement_value"]
        )
        for entry in sorted(state.clean_report.entries, key=lambda e: (e.day, e.category)):
            if entry.duplicates_averaged == 0 and entry.anomalies_replaced == 0 and entry.missing_preserved == 0:
                continue
            writer.writerow(
                [
                    entry.day.isoformat(),
                    entry.category,
                    entry.duplicates_averaged,
                    entry.anomalies_replaced,
                    entry.missing_preserved,
                    fmt(entry.replacement_value, 6) if entry.replacement_value is not None else "",
                ]
            )
        for day, category in sorted(state.clean_report.omitted_columns):
            writer.writerow([day.isoformat(), category, "", "", "omitted", ""])


def _sector_totals(state: RunState, config: RunConfig) -> dict[str, tuple[float, float]]:
    """Ledger-item keyed (2019, 2020) window sums in Mt."""
    groups: dict[str, list[SeriesPair]] = {
        "Power": [p for p in state.national_pairs if p.current.sector is Sector.POWER],
        "Ground Transport": [p for p in state.national_pairs if p.current.sector is Sector.GROUND_TRANSPORT],
        "Industry": [p for p in state.national_pairs if p.current.sector is Sector.INDUSTRY],
        "Residential": [p for p in state.national_pairs if p.current.sector is Sector.RESIDENTIAL],
        "Aviation": [p for p in state.national_pairs if p.current.sector is Sector.DOMESTIC_AVIATION]
        + state.aviation_pairs,
        "International Shipping": state.shipping_pairs,
    }
    out: dict[str, tuple[float, float]] = {}
    for item, pairs in groups.items():
        if not pairs:
            out[item] = (0.0, 0.0)
            continue
        summary = aggregate(pairs, config.window_start, config.window_end, by="global")["Global"]
        out[item] = (summary.sum_2019_t / TONNES_PER_MT, summary.sum_2020_t / TONNES_PER_MT)
    return out


def write_uncertainty_report(path: Path, state: RunState, config: RunConfig) -> None:
    ledger = load_ledger(config.fixture_dir / "uncertainty_ledger.csv")
    missing = [item for item in LEDGER_SECTORS + ["Projection 2019", "EDGAR 2018"] if item not in ledger]
    if missing:
        raise ConfigError(f"uncertainty ledger missing items: {', '.join(missing)}")

    sector_u = [ledger[item].u_percent for item in LEDGER_SECTORS]
    sector_mu = [ledger[item].mu_mt_per_day or 0.0 for item in LEDGER_SECTORS]
    combined_sectors = combine_sum(sector_u, sector_mu)
    overall = combine_mult([combined_sectors, ledger["Projection 2019"].u_percent, ledger["EDGAR 2018"].u_percent])

    totals = _sector_totals(state, config)
    base_total = sum(t[0] for t in totals.values())
    result = None
    if base_total > 0:
        inputs: dict[str, GaussianInput] = {}
        for item in LEDGER_SECTORS:
            mean_2020 = totals[item][1]
            one_sigma = ledger[item].one_sigma_percent() / 100.0
            inputs[item] = GaussianInput(mean=mean_2020, sigma=abs(mean_2020) * one_sigma, lower=0.0)
        baseline_sigma = combine_mult(
            [ledger["Projection 2019"].one_sigma_percent(), ledger["EDGAR 2018"].one_sigma_percent()]
        ) / 100.0
        inputs["baseline_scale"] = GaussianInput(mean=1.0, sigma=baseline_sigma, lower=0.5)

        def model(draw: dict[str, float]) -> float:
            total_2020 = sum(draw[item] for item in LEDGER_SECTORS)
            return total_2020 / (base_total * draw["baseline_scale"]) - 1.0

        result = monte_carlo_ci(model, inputs, n_trials=config.mc_trials, seed=config.seed, threads=config.threads)

    payload = {
        "ledger": {
            item: {"u_percent": ledger[item].u_percent, "sigma_convention": ledger[item].sigma_convention}
            for item in sorted(ledger)
        },
        "analytic": {
            "combined_sector_percent": round(combined_sectors, 6),
            "overall_percent": round(overall, 6),
        },
        "window_totals_mt": {
            item: {"sum_2019": round(v[0], 6), "sum_2020": round(v[1], 6)} for item, v in sorted(totals.items())
        },
        "monte_carlo": None
        if result is None
        else {
            "global_change": round(result.point, 8),
            "ci68_lower": round(result.lower, 8),
            "ci68_upper": round(result.upper, 8),
            "n_trials": result.n_trials,
            "n_rejected": result.n_rejected,
            "seed": result.seed,
        },
    }
    write_json(path, payload)


def write_nox_report(path: Path, state: RunState, config: RunConfig, regions: dict[str, RegionGroup]) -> None:
    if not config.nox_shares:
        write_json(path, {"note": "no NOx shares configured"})
        return
    q1_end = min(date(2020, 3, 31), config.window_end)
    sector_by_name = {
        "power": Sector.POWER,
        "transport": Sector.GROUND_TRANSPORT,
        "industry": Sector.INDUSTRY,
    }
    changes: dict[str, float] = {}
    for name, sector in sector_by_name.items():
        pairs = [p for p in state.national_pairs if p.current.country == "CHN" and p.current.sector is sector]
        if not pairs:
            continue
        summary = aggregate(pairs, config.window_start, q1_end, by="country")["CHN"]
        changes[name] = summary.growth
    if not changes:
        write_json(path, {"note": "no Chinese sector estimates available"})
        return
    weighted = nox_crosscheck(changes, config.nox_shares)
    write_json(
        path,
        {
            "country": "CHN",
            "window": [config.window_start.isoformat(), q1_end.isoformat()],
            "sector_changes": {k: round(v, 8) for k, v in sorted(changes.items())},
            "shares": {k: round(v, 8) for k, v in sorted(config.nox_shares.items())},
            "weighted_mean_change": round(weighted, 8),
        },
    )


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def fixture_checksums(fixture_dir: Path) -> dict[str, str]:
    sums = {}
    for path in sorted(fixture_dir.rglob("*")):
        if path.is_file():
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
            sums[str(path.relative_to(fixture_dir))] = digest
    return sums


def run(config: RunConfig) -> Path:
    """Execute the full pipeline; returns the output directory."""
    config.validate()
    state = RunState(config=config)
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)

    with _Timer(state, "baseline"):
        regions, baseline = build_baseline(config, state)
    if config.sectors["power"]:
        with _Timer(state, "power"):
            run_power(config, state, baseline, regions)
    if config.sectors["ground_transport"]:
        with _Timer(state, "ground_transport"):
            run_transport(config, state, baseline, regions)
    if config.sectors["industry"]:
        with _Timer(state, "industry"):
            run_industry(config, state, baseline, regions)
    if config.sectors["residential"]:
        with _Timer(state, "residential"):
            run_residential(config, state, baseline, regions)
    if config.sectors["aviation"]:
        with _Timer(state, "aviation"):
            run_aviation(config, state, regions)
    if config.sectors["shipping"]:
        with _Timer(state, "shipping"):
            run_shipping(config, state)
    if config.sectors["power"] and config.sectors["industry"]:
        with _Timer(state, "row_closure"):
            run_row_closure(config, state, baseline, regions)

    with _Timer(state, "reports"):
        start, end = config.window_start, config.window_end
        write_daily_csv(out / "daily_emissions.csv", state.all_pairs(), start, end)
        table = build_s2_table(state.national_pairs, state.aviation_pairs, state.shipping_pairs, regions, start, end)
        write_s2_csv(out / "summary_s2.csv", table)
        for style, sector in MONTHLY_STYLES.items():
            pairs = [p for p in state.national_pairs if p.current.sector is sector]
            write_monthly_csv(out / f"summary_{style}.csv", pairs, regions, start, end)
        write_fig1_csv(out / "fig1_running_mean.csv", state.all_pairs(), start, end)
        write_holiday_report(out / "holidays.csv", state, _load_holidays(config.fixture_dir / "holidays.csv"))
        write_clean_report(out / "clean_report.csv", state)
        if config.sectors["uncertainty"]:
            write_uncertainty_report(out / "uncertainty.json", state, config)
        write_nox_report(out / "nox_report.json", state, config, regions)

    manifest = {
        "version": __version__,
        "config_hash": config.config_hash(),
        "fixtures": fixture_checksums(config.fixture_dir),
        "counters": dict(sorted(state.counters.items())),
        "elapsed_ms": {k: 0.0 if config.deterministic_manifest else round(v, 3) for k, v in sorted(state.elapsed_ms.items())},
        "warnings": state.warnings,
    }
    write_json(out / "run_manifest.json", manifest)
    return out
