"""Schema and invariant checks over a fixture directory.

Every check appends a violation naming the file and row instead of raising,
so one pass reports everything wrong at once.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .core import EDGAR_SECTOR_MAP, RegionGroup, Sector
from .industry import SubSector

EXPECTED_HEADERS = {
    "countries.csv": ["country", "region_group"],
    "inventory_2018.csv": ["country", "sector", "year", "mt_co2"],
    "growth_rates_2019.csv": ["country", "rate"],
    "emission_factors.csv": ["fuel", "heating_value_tj_per_t", "carbon_content_t_per_tj", "oxidation_rate", "synthetic"],
    "china_energy_2019.csv": ["country", "sector", "fuel", "energy_tj"],
    "congestion.csv": ["date", "city", "country", "congestion_pct"],
    "paris_calibration.csv": ["congestion_pct", "car_count"],
    "city_weights.csv": ["city", "country", "edgar_road_mt"],
    "production.csv": ["country", "subsector", "product", "month", "quantity", "weight"],
    "subsector_shares.csv": ["subsector", "share"],
    "process_baseline.csv": ["country", "annual_mt_2019"],
    "ipi.csv": ["country", "month", "cumulative_index"],
    "flights.csv": ["date", "flight_id", "origin_iso3", "dest_iso3", "waypoints"],
    "shipping_volume.csv": ["date", "volume_change_fraction"],
    "temperature.csv": ["date", "lat", "lon", "t2m_c"],
    "population.csv": ["lat", "lon", "country_iso3", "population"],
    "residential_split.csv": ["country", "cooking_share", "heating_share"],
    "policies.csv": ["country", "has_closure", "start", "end"],
    "holidays.csv": ["country", "start", "end", "label"],
    "uncertainty_ledger.csv": ["item", "u_percent", "sigma_convention", "mu_mt_per_day"],
}


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    files_checked: int = 0

    def add(self, filename: str, row: int | None, message: str) -> None:
        where = f"{filename}:{row}" if row is not None else filename
        self.violations.append(f"{where}: {message}")

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        lines = list(self.violations)
        lines.append(f"{len(self.violations)} violations in {self.files_checked} files")
        return "\n".join(lines)


def _rows(path: Path, report: ValidationReport) -> list[dict[str, str]] | None:
    expected = EXPECTED_HEADERS[path.name]
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != expected:
                report.add(path.name, 1, f"expected header {','.join(expected)}, got {reader.fieldnames}")
                return None
            return list(reader)
    except FileNotFoundError:
        report.add(path.name, None, "missing fixture file")
        return None


def _float(value: str, path: str, row: int, column: str, report: ValidationReport) -> float | None:
    try:
        return float(value)
    except ValueError:
        report.add(path, row, f"non-numeric {column}: {value!r}")
        return None


def _date(value: str, path: str, row: int, column: str, report: ValidationReport) -> date | None:
    try:
        return date.fromisoformat(value)
    except ValueError:
        report.add(path, row, f"bad {column} date: {value!r}")
        return None


def validate_fixtures(fixture_dir: Path) -> ValidationReport:
    report = ValidationReport()
    if not fixture_dir.is_dir():
        report.add(str(fixture_dir), None, "fixture directory does not exist")
        return report

    countries: set[str] = set()
    rows = _rows(fixture_dir / "countries.csv", report)
    report.files_checked += 1
    if rows is not None:
        regions = {r.value for r in RegionGroup}
        for i, row in enumerate(rows, start=2):
            code = row["country"]
            if len(code) != 3 or not code.isalpha() or not code.isupper():
                report.add("countries.csv", i, f"bad country code {code!r}")
            if code in countries:
                report.add("countries.csv", i, f"duplicate country {code}")
            if row["region_group"] not in regions:
                report.add("countries.csv", i, f"unknown region group {row['region_group']!r}")
            countries.add(code)

    rows = _rows(fixture_dir / "inventory_2018.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            if row["country"] not in countries:
                report.add("inventory_2018.csv", i, f"unknown country {row['country']!r}")
            if row["sector"] not in EDGAR_SECTOR_MAP:
                report.add("inventory_2018.csv", i, f"unmapped EDGAR category {row['sector']!r}")
            mt = _float(row["mt_co2"], "inventory_2018.csv", i, "mt_co2", report)
            if mt is not None and mt < 0:
                report.add("inventory_2018.csv", i, f"negative mass {mt}")

    rows = _rows(fixture_dir / "growth_rates_2019.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            rate = _float(row["rate"], "growth_rates_2019.csv", i, "rate", report)
            if rate is not None and rate <= -1:
                report.add("growth_rates_2019.csv", i, f"growth rate {rate} not above -1")

    rows = _rows(fixture_dir / "emission_factors.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            for column in ("heating_value_tj_per_t", "carbon_content_t_per_tj"):
                v = _float(row[column], "emission_factors.csv", i, column, report)
                if v is not None and v <= 0:
                    report.add("emission_factors.csv", i, f"{column} must be positive")
            o = _float(row["oxidation_rate"], "emission_factors.csv", i, "oxidation_rate", report)
            if o is not None and not 0 < o <= 1:
                report.add("emission_factors.csv", i, f"oxidation rate {o} outside (0, 1]")

    path = fixture_dir / "china_energy_2019.csv"
    if path.exists():
        rows = _rows(path, report)
        report.files_checked += 1
        if rows is not None:
            sectors = {s.value for s in Sector}
            for i, row in enumerate(rows, start=2):
                if row["sector"] not in sectors:
                    report.add(path.name, i, f"unknown sector {row['sector']!r}")
                energy = _float(row["energy_tj"], path.name, i, "energy_tj", report)
                if energy is not None and energy < 0:
                    report.add(path.name, i, "negative energy")

    registry_path = fixture_dir / "feed_schemas.json"
    report.files_checked += 1
    if not registry_path.exists():
        report.add("feed_schemas.json", None, "missing fixture file")
    else:
        try:
            registry = json.loads(registry_path.read_text(encoding="utf-8"))
            for feed in registry.get("feeds", []):
                if feed.get("schema") not in registry.get("schemas", {}):
                    report.add("feed_schemas.json", None, f"feed {feed.get('file')} names unknown schema {feed.get('schema')!r}")
                feed_path = fixture_dir / feed.get("file", "")
                if not feed_path.exists():
                    report.add("feed_schemas.json", None, f"declared feed file missing: {feed.get('file')}")
                elif feed.get("country") not in countries:
                    report.add("feed_schemas.json", None, f"feed {feed.get('file')} names unknown country {feed.get('country')!r}")
                else:
                    _validate_feed(feed_path, registry["schemas"][feed["schema"]], report)
                    report.files_checked += 1
        except json.JSONDecodeError as exc:
            report.add("feed_schemas.json", None, f"invalid JSON: {exc}")

    rows = _rows(fixture_dir / "congestion.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            _date(row["date"], "congestion.csv", i, "date", report)
            x = _float(row["congestion_pct"], "congestion.csv", i, "congestion_pct", report)
            if x is not None and x < 0:
                report.add("congestion.csv", i, f"negative congestion {x}")
            if row["country"] not in countries:
                report.add("congestion.csv", i, f"unknown country {row['country']!r}")

    rows = _rows(fixture_dir / "paris_calibration.csv", report)
    report.files_checked += 1
    if rows is not None:
        xs = []
        for i, row in enumerate(rows, start=2):
            x = _float(row["congestion_pct"], "paris_calibration.csv", i, "congestion_pct", report)
            _float(row["car_count"], "paris_calibration.csv", i, "car_count", report)
            if x is not None:
                xs.append(x)
        positive = [x for x in xs if x > 0]
        if len(xs) < 8:
            report.add("paris_calibration.csv", None, f"need at least 8 observations, found {len(xs)}")
        elif not positive or max(positive) < 2.0 * min(positive):
            report.add("paris_calibration.csv", None, "congestion range does not span a 2x spread")

    rows = _rows(fixture_dir / "city_weights.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            w = _float(row["edgar_road_mt"], "city_weights.csv", i, "edgar_road_mt", report)
            if w is not None and w < 0:
                report.add("city_weights.csv", i, f"negative weight {w}")

    rows = _rows(fixture_dir / "production.csv", report)
    report.files_checked += 1
    if rows is not None:
        weight_sums: dict[tuple[str, str, str], float] = {}
        subsectors = {s.value for s in SubSector}
        for i, row in enumerate(rows, start=2):
            if row["subsector"] not in subsectors:
                report.add("production.csv", i, f"unknown subsector {row['subsector']!r}")
            q = _float(row["quantity"], "production.csv", i, "quantity", report)
            if q is not None and q < 0:
                report.add("production.csv", i, f"negative quantity {q}")
            w = _float(row["weight"], "production.csv", i, "weight", report)
            if w is not None:
                key = (row["country"], row["subsector"], row["month"])
                weight_sums[key] = weight_sums.get(key, 0.0) + w
        for key, total in sorted(weight_sums.items()):
            if abs(total - 1.0) > 1e-9:
                report.add("production.csv", None, f"weights for {key} sum to {total:.12f}, expected 1")

    rows = _rows(fixture_dir / "subsector_shares.csv", report)
    report.files_checked += 1
    if rows is not None:
        total = 0.0
        for i, row in enumerate(rows, start=2):
            share = _float(row["share"], "subsector_shares.csv", i, "share", report)
            if share is not None:
                total += share
        if abs(total - 1.0) > 1e-9:
            report.add("subsector_shares.csv", None, f"shares sum to {total:.12f}, expected 1")

    rows = _rows(fixture_dir / "process_baseline.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            mt = _float(row["annual_mt_2019"], "process_baseline.csv", i, "annual_mt_2019", report)
            if mt is not None and mt < 0:
                report.add("process_baseline.csv", i, f"negative process baseline {mt}")

    rows = _rows(fixture_dir / "ipi.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            index = _float(row["cumulative_index"], "ipi.csv", i, "cumulative_index", report)
            if index is not None and index <= 0:
                report.add("ipi.csv", i, f"index must be positive, got {index}")

    rows = _rows(fixture_dir / "flights.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            _date(row["date"], "flights.csv", i, "date", report)
            tokens = row["waypoints"].split(";")
            if len(tokens) < 2:
                report.add("flights.csv", i, "need at least two waypoints")
            for token in tokens:
                parts = token.split(":")
                if len(parts) != 2:
                    report.add("flights.csv", i, f"bad waypoint {token!r}")
                    continue
                lat = _float(parts[0], "flights.csv", i, "lat", report)
                lon = _float(parts[1], "flights.csv", i, "lon", report)
                if lat is not None and not -90 <= lat <= 90:
                    report.add("flights.csv", i, f"latitude {lat} out of range")
                if lon is not None and not -180 <= lon <= 180:
                    report.add("flights.csv", i, f"longitude {lon} out of range")

    rows = _rows(fixture_dir / "shipping_volume.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            change = _float(row["volume_change_fraction"], "shipping_volume.csv", i, "volume_change_fraction", report)
            if change is not None and change <= -1:
                report.add("shipping_volume.csv", i, f"volume change {change} not above -1")

    rows = _rows(fixture_dir / "temperature.csv", report)
    report.files_checked += 1
    if rows is not None:
        days_2019 = set()
        for i, row in enumerate(rows, start=2):
            d = _date(row["date"], "temperature.csv", i, "date", report)
            _float(row["t2m_c"], "temperature.csv", i, "t2m_c", report)
            if d is not None and d.year == 2019:
                days_2019.add(d)
        if days_2019 and len(days_2019) < 365:
            report.add("temperature.csv", None, f"2019 coverage incomplete: {len(days_2019)} of 365 days")

    rows = _rows(fixture_dir / "population.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            pop = _float(row["population"], "population.csv", i, "population", report)
            if pop is not None and pop < 0:
                report.add("population.csv", i, f"negative population {pop}")
            if row["country_iso3"] not in countries:
                report.add("population.csv", i, f"unknown country {row['country_iso3']!r}")

    rows = _rows(fixture_dir / "residential_split.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            cooking = _float(row["cooking_share"], "residential_split.csv", i, "cooking_share", report)
            heating = _float(row["heating_share"], "residential_split.csv", i, "heating_share", report)
            if cooking is not None and heating is not None:
                if cooking < 0 or heating < 0:
                    report.add("residential_split.csv", i, "negative share")
                elif abs(cooking + heating - 1.0) > 1e-9:
                    report.add("residential_split.csv", i, f"shares sum to {cooking + heating}, expected 1")

    rows = _rows(fixture_dir / "policies.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            has_closure = row["has_closure"].lower() == "true"
            start = _date(row["start"], "policies.csv", i, "start", report) if row["start"] else None
            end = _date(row["end"], "policies.csv", i, "end", report) if row["end"] else None
            if has_closure and start is None:
                report.add("policies.csv", i, "closure without a start date")
            if start is not None and end is not None and start > end:
                report.add("policies.csv", i, "closure window reversed")

    rows = _rows(fixture_dir / "holidays.csv", report)
    report.files_checked += 1
    if rows is not None:
        last_end: dict[str, date] = {}
        parsed = []
        for i, row in enumerate(rows, start=2):
            start = _date(row["start"], "holidays.csv", i, "start", report)
            end = _date(row["end"], "holidays.csv", i, "end", report)
            if start is not None and end is not None:
                if start > end:
                    report.add("holidays.csv", i, "holiday range reversed")
                parsed.append((row["country"], start, end, i))
        for country, start, end, i in sorted(parsed):
            if country in last_end and start <= last_end[country]:
                report.add("holidays.csv", i, f"overlapping holiday ranges for {country}")
            last_end[country] = max(end, last_end.get(country, end))

    rows = _rows(fixture_dir / "uncertainty_ledger.csv", report)
    report.files_checked += 1
    if rows is not None:
        for i, row in enumerate(rows, start=2):
            u = _float(row["u_percent"], "uncertainty_ledger.csv", i, "u_percent", report)
            if u is not None and u < 0:
                report.add("uncertainty_ledger.csv", i, f"negative uncertainty {u}")
            if row["sigma_convention"] not in ("1-sigma", "2-sigma"):
                report.add("uncertainty_ledger.csv", i, f"unknown sigma convention {row['sigma_convention']!r}")

    return report


def _validate_feed(path: Path, schema: dict, report: ValidationReport) -> None:
    columns = schema["columns"]
    expected = [columns["timestamp"], columns["interval"], columns["category"], columns["value"]]
    sentinels = set(schema["missing"]) | set(schema["not_a_number"])
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != expected:
            report.add(path.name, 1, f"expected header {','.join(expected)}")
            return
        for i, row in enumerate(reader, start=2):
            if len(row) != 4:
                report.add(path.name, i, f"expected 4 fields, got {len(row)}")
                continue
            if row[1] not in ("15", "30", "60"):
                report.add(path.name, i, f"interval {row[1]!r} not one of 15/30/60")
            if row[3] not in sentinels and row[3] != "":
                try:
                    float(row[3])
                except ValueError:
                    # Unparseable numerics degrade to NotANumber at parse
                    # time; only structural problems are violations here.
                    pass
