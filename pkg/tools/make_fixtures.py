#!/usr/bin/env python3
"""Generate the bundled synthetic fixture snapshot, calibrated end to end.

The snapshot is a self-consistent miniature world (masses scaled by 1e-3;
growth rates full size). Activity inputs are constructed so that the real
pipeline reproduces the target January-April sector changes: residential,
aviation and shipping invert exactly in closed form, while power, transport
and industry each get one scalar knob solved through two pipeline runs
(their window responses are affine in the knob).

Deterministic by construction; regenerating produces identical bytes.
Run from the repository root:  python tools/make_fixtures.py
"""

from __future__ import annotations

import csv
import json
import math
import shutil
import subprocess
import sys
from datetime import date, timedelta
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from carbon_pulse.ingestion import STANDARD_SCHEMA, ingest_feed  # noqa: E402
from carbon_pulse.transport import fit_traffic_curve, traffic_proxy  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

LAMBDA = 1e-3  # mass scale of the miniature world

WINDOW_START = date(2020, 1, 1)
WINDOW_END = date(2020, 4, 30)
DAYS_2019 = [date(2019, 1, 1) + timedelta(days=i) for i in range(365)]
WINDOW_2019 = [date(2019, 1, 1) + timedelta(days=i) for i in range(120)]
WINDOW_2020 = [WINDOW_START + timedelta(days=i) for i in range(121)]
MONTH_DAYS_2019 = {1: 31, 2: 28, 3: 31, 4: 30}

# Window targets per sector, full-scale Mt: (baseline, change). Baselines are
# back-derived from the published declines and growth rates; regional detail
# follows the published monthly tables.
POWER_MONTHLY = {
    "CHN": [-0.036, -0.144, -0.080, 0.011],
    "IND": [-0.003, 0.090, -0.128, -0.299],
    "USA": [-0.106, -0.028, -0.086, -0.084],
    "DEU": [-0.180, -0.266, -0.107, -0.366],
    "FRA": [-0.180, -0.266, -0.107, -0.366],
    "GBR": [-0.180, -0.266, -0.107, -0.366],
    "RUS": [-0.034, 0.005, -0.029, -0.039],
    "JPN": [-0.054, -0.001, -0.021, -0.038],
    "BRA": [0.987, -0.100, -0.188, -0.243],
}
POWER_BASE = {
    "CHN": 1518.3, "IND": 431.5, "USA": 568.8,
    "DEU": 182.2, "FRA": 72.9, "GBR": 109.3,
    "RUS": 291.7, "JPN": 189.7, "BRA": 17.5,
    "MEX": 330.0, "IDN": 390.0, "ZAF": 330.0, "NGA": 180.0,
}
POWER_GLOBAL_TARGET = -0.064

MOBILITY_MONTHLY = {
    "CHN": [-0.185, -0.534, -0.259, -0.163],
    "IND": [0.006, 0.019, -0.259, -0.656],
    "USA": [0.112, 0.099, -0.228, -0.500],
    "DEU": [0.060, 0.070, -0.166, -0.321],
    "FRA": [0.060, 0.070, -0.166, -0.321],
    "GBR": [0.060, 0.070, -0.166, -0.321],
    "RUS": [0.061, 0.060, -0.035, -0.261],
    "JPN": [-0.030, 0.010, -0.072, -0.175],
    "BRA": [0.030, -0.002, -0.151, -0.377],
    "MEX": [0.038, 0.005, -0.220, -0.422],
}
TRANSPORT_BASE = {
    "CHN": 300.4, "IND": 96.0, "USA": 563.3,
    "DEU": 102.0, "FRA": 72.8, "GBR": 87.4, "CYP": 29.1,
    "RUS": 76.6, "JPN": 63.2, "BRA": 64.3,
    "MEX": 183.6, "IDN": 220.3, "ZAF": 146.9, "NGA": 183.6,
}
TRANSPORT_GLOBAL_TARGET = -0.155

CITIES = {
    "Beijing": ("CHN", 14.5, 40.0), "Shanghai": ("CHN", 13.2, 38.0),
    "Delhi": ("IND", 11.8, 48.0), "Mumbai": ("IND", 9.4, 44.0),
    "New York": ("USA", 19.5, 34.0), "Los Angeles": ("USA", 17.8, 38.0),
    "Berlin": ("DEU", 6.5, 30.0), "Paris": ("FRA", 8.9, 33.0),
    "London": ("GBR", 9.8, 33.0), "Moscow": ("RUS", 12.4, 40.0),
    "Tokyo": ("JPN", 13.6, 32.0), "Sao Paulo": ("BRA", 10.1, 40.0),
    "Mexico City": ("MEX", 11.2, 42.0),
}

# China sub-sector fuel-combustion growth by month; chemicals and other are
# solved so the share-weighted total hits the published monthly aggregates.
STEEL_MONTHLY = [0.015, 0.050, -0.017, 0.0]
CEMENT_MONTHLY = [-0.295, -0.295, -0.183, 0.038]
CHINA_INDUSTRY_MONTHLY = [-0.075, -0.062, -0.050, 0.033]
SHARES = {"Steel": 0.416, "Cement": 0.222, "Chemicals": 0.258, "Other": 0.104}
CHEM_OTHER_RATIO = (-0.015, -0.048)  # published window aggregates set their mix

IPI_MONTHLY = {
    "USA": [-0.007, -0.001, -0.059, -0.188],
    "EU27UK": [-0.012, -0.013, -0.120, None],
    "IND": [0.016, 0.031, -0.206, None],
    "RUS": [0.039, 0.049, 0.026, -0.094],
    "JPN": [-0.024, -0.056, -0.053, -0.106],
    "BRA": [0.015, -0.004, -0.042, -0.160],
}
INDUSTRY_BASE = {
    "CHN": 992.0,  # fuel combustion; clinker process carried separately
    "IND": 279.7, "USA": 267.2,
    "DEU": 82.7, "FRA": 51.7, "GBR": 51.7, "CYP": 20.7,
    "RUS": 100.0, "JPN": 91.7, "BRA": 44.0,
    "MEX": 270.9, "IDN": 270.9, "ZAF": 180.6, "NGA": 180.5,
}
PROCESS_BASE_CHN = 259.0  # window Mt, back-derived from the published -37.3
INDUSTRY_GLOBAL_TARGET = -0.044

RESIDENTIAL = {
    # country: (window base Mt, window diff Mt, cooking share, hdd amplitude, southern)
    "CHN": (180.0, -7.5, 0.35, 12.0, False),
    "IND": (120.0, 7.3, 0.70, 6.0, False),
    "USA": (300.0, -14.8, 0.25, 11.0, False),
    "DEU": (110.0, -4.57, 0.30, 13.0, False),
    "FRA": (90.0, -3.74, 0.30, 11.0, False),
    "GBR": (100.0, -4.16, 0.30, 12.0, False),
    "CYP": (20.0, -0.83, 0.50, 4.0, False),
    "RUS": (180.0, -8.1, 0.20, 18.0, False),
    "JPN": (70.0, -1.9, 0.40, 9.0, False),
    "BRA": (25.0, 0.0, 0.85, 2.0, True),
    "MEX": (100.0, -1.7, 0.70, 3.0, False),
    "IDN": (112.0, 0.0, 1.00, 0.0, False),
    "ZAF": (100.0, -1.7, 0.60, 4.0, True),
    "NGA": (100.0, -1.7, 0.90, 1.5, False),
}

DOM_AVIATION = {
    # country: (window base Mt, window diff Mt, home latitude, home longitude)
    "CHN": (25.0, -7.8, 40.1, 116.6), "IND": (6.0, -0.7, 28.6, 77.1),
    "USA": (35.0, -8.3, 33.9, -118.4), "DEU": (3.0, -0.36, 50.0, 8.6),
    "FRA": (3.0, -0.36, 49.0, 2.5), "GBR": (4.0, -0.48, 51.5, -0.5),
    "RUS": (5.0, -0.3, 55.4, 37.9), "JPN": (7.0, -0.2, 35.5, 139.8),
    "BRA": (4.0, -0.5, -23.4, -46.5), "MEX": (8.0, -2.5, 19.4, -99.1),
    "IDN": (12.0, -3.8, -6.1, 106.7), "ZAF": (7.0, -2.2, -26.1, 28.2),
    "NGA": (5.8, -1.8, 6.6, 3.3),
}
INTL_AVIATION = {
    # origin: share of the international bunker; "" = unattributed record
    "CHN": 0.18, "USA": 0.20, "DEU": 0.08, "FRA": 0.07, "GBR": 0.10,
    "JPN": 0.07, "IND": 0.04, "RUS": 0.04, "BRA": 0.03,
    "MEX": 0.04, "IDN": 0.05, "ZAF": 0.04, "NGA": 0.03, "": 0.03,
}
INTL_BASE, INTL_DIFF = 196.3, -63.6
AVIATION_FACTOR = 918.0 * 1.03 * 1e9 / 67.91e9  # kg per km
KM_PER_DEG = math.pi * 6371.0 / 180.0

SHIPPING_SHARE = 0.87
SHIPPING_BASE, SHIPPING_DIFF = 217.33, -32.6  # window international Mt
SHIPPING_ANNUAL = SHIPPING_BASE * 365.0 / (120.0 * SHIPPING_SHARE)

GROWTH_2019 = {"CHN": 0.026, "IND": 0.030, "USA": -0.017, "DEU": -0.010, "FRA": -0.010, "GBR": -0.010, "CYP": -0.010}
DEFAULT_GROWTH = 0.005

EU_MEMBERS = [
    "AUT", "BEL", "BGR", "HRV", "CYP", "CZE", "DNK", "EST", "FIN", "FRA",
    "DEU", "GRC", "HUN", "IRL", "ITA", "LVA", "LTU", "LUX", "MLT", "NLD",
    "POL", "PRT", "ROU", "SVK", "SVN", "ESP", "SWE", "GBR",
]
REGIONS = {
    "CHN": "China", "IND": "India", "USA": "US", "RUS": "Russia",
    "JPN": "Japan", "BRA": "Brazil",
    "MEX": "ROW", "IDN": "ROW", "ZAF": "ROW", "NGA": "ROW",
}
REGIONS.update({code: "Europe (EU27 & UK)" for code in EU_MEMBERS})

ACTIVE = ["CHN", "IND", "USA", "DEU", "FRA", "GBR", "CYP", "RUS", "JPN", "BRA", "MEX", "IDN", "ZAF", "NGA"]

POWER_FEED_LEVELS = {
    # country: {category: mean MW}
    "CHN": {"Thermal": 500000.0},
    "IND": {"Coal": 100000.0, "Lignite": 12000.0, "Gas, Naphtha & Diesel": 8000.0},
    "USA": {"Thermal": 200000.0},
    "DEU": {"Fossil Hard coal": 10000.0, "Fossil Gas": 15000.0},
    "FRA": {"Fossil Gas": 3500.0, "Fossil Hard coal": 1500.0},
    "GBR": {"Fossil Gas": 10000.0, "Fossil Hard coal": 2000.0},
    "RUS": {"Total": 90000.0},
    "JPN": {"Total": 100000.0},
    "BRA": {"Thermal": 8000.0},
}
FEED_INTERVALS = {"GBR": 30}  # everyone else reports hourly

SF_2019 = (date(2019, 2, 4), date(2019, 2, 10))
SF_2020 = (date(2020, 1, 24), date(2020, 1, 30))
QM_2019 = (date(2019, 4, 5), date(2019, 4, 5))
QM_2020 = (date(2020, 4, 4), date(2020, 4, 6))

HOURLY_PROFILE = 1.0 + 0.12 * np.sin(np.linspace(0.0, 2.0 * np.pi, 24, endpoint=False) - 1.2)
HOURLY_PROFILE /= HOURLY_PROFILE.mean()
HALF_HOUR_PROFILE = 1.0 + 0.12 * np.sin(np.linspace(0.0, 2.0 * np.pi, 48, endpoint=False) - 1.2)
HALF_HOUR_PROFILE /= HALF_HOUR_PROFILE.mean()


def align(day: date) -> date:
    if day.month == 2 and day.day == 29:
        return date(2019, 2, 28)
    return date(2019, day.month, day.day)


def in_range(day: date, rng: tuple[date, date]) -> bool:
    return rng[0] <= day <= rng[1]


def weekly_factor(day: date) -> float:
    if day.weekday() == 5:
        return 0.93
    if day.weekday() == 6:
        return 0.88
    return 1.0


def seasonal_factor(day: date) -> float:
    return 1.0 + 0.10 * math.cos(2.0 * math.pi * day.timetuple().tm_yday / 365.0)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# Static fixtures
# ---------------------------------------------------------------------------


def write_countries() -> None:
    rows = [[code, REGIONS[code]] for code in sorted(REGIONS)]
    write_csv(FIXTURES / "countries.csv", ["country", "region_group"], rows)


def annual_from_window(window_mt: float) -> float:
    return window_mt * 365.0 / 120.0


def residential_annual(country: str) -> float:
    base, _, cooking, _, _ = RESIDENTIAL[country]
    hdd = hdd_curve(country)
    window_share = sum(hdd[d] for d in WINDOW_2019) / max(sum(hdd.values()), 1e-12)
    denom = (1.0 - cooking) * window_share + cooking * 120.0 / 365.0
    return base / denom


def write_inventory_and_growth() -> None:
    rows = []
    for country in ACTIVE:
        power = POWER_BASE.get(country, 0.0)
        if country == "CYP":
            power = 10.0  # excluded from power estimation but real mass
        transport = TRANSPORT_BASE.get(country, 0.0)
        industry = INDUSTRY_BASE.get(country, 0.0)
        residential = residential_annual(country) * 120.0 / 365.0  # back to window for symmetry
        growth = GROWTH_2019.get(country, DEFAULT_GROWTH)

        def annual_2018(window_mt: float) -> float:
            return annual_from_window(window_mt) * LAMBDA / (1.0 + growth)

        rows.append([country, "Electricity and heat production", 2018, f"{annual_2018(power):.9f}"])
        rows.append([country, "Manufacturing industries and construction", 2018, f"{annual_2018(industry) * 0.85:.9f}"])
        rows.append([country, "Other energy industries", 2018, f"{annual_2018(industry) * 0.15:.9f}"])
        rows.append([country, "Road transportation", 2018, f"{annual_2018(transport) * 0.90:.9f}"])
        rows.append([country, "Rail transportation", 2018, f"{annual_2018(transport) * 0.06:.9f}"])
        rows.append([country, "Inland navigation", 2018, f"{annual_2018(transport) * 0.025:.9f}"])
        rows.append([country, "Other transportation", 2018, f"{annual_2018(transport) * 0.015:.9f}"])
        rows.append([country, "Residential and other sectors", 2018, f"{annual_2018(residential):.9f}"])
    write_csv(FIXTURES / "inventory_2018.csv", ["country", "sector", "year", "mt_co2"], rows)

    growth_rows = [[c, f"{r:.6f}"] for c, r in sorted(GROWTH_2019.items())]
    write_csv(FIXTURES / "growth_rates_2019.csv", ["country", "rate"], growth_rows)


FACTORS = {
    # fuel: (heating value TJ/t, carbon content tC/TJ, oxidation)
    "Coal": (0.020908, 26.59, 0.92),
    "Oil": (0.041816, 20.08, 0.98),
    "NaturalGas": (0.038931, 15.32, 0.99),
}
CHINA_FUEL_SPLIT = {
    "Power": {"Coal": 0.93, "Oil": 0.01, "NaturalGas": 0.06},
    "Industry": {"Coal": 0.80, "Oil": 0.12, "NaturalGas": 0.08},
    "GroundTransport": {"Coal": 0.02, "Oil": 0.93, "NaturalGas": 0.05},
    "Residential": {"Coal": 0.45, "Oil": 0.25, "NaturalGas": 0.30},
}


def write_china_energy() -> None:
    write_csv(
        FIXTURES / "emission_factors.csv",
        ["fuel", "heating_value_tj_per_t", "carbon_content_t_per_tj", "oxidation_rate", "synthetic"],
        [[fuel, v, c, o, "true"] for fuel, (v, c, o) in sorted(FACTORS.items())],
    )
    window = {
        "Power": POWER_BASE["CHN"],
        "Industry": INDUSTRY_BASE["CHN"],
        "GroundTransport": TRANSPORT_BASE["CHN"],
        "Residential": residential_annual("CHN") * 120.0 / 365.0,
    }
    rows = []
    for sector in sorted(window):
        annual_t = annual_from_window(window[sector]) * LAMBDA * 1e6
        for fuel in sorted(CHINA_FUEL_SPLIT[sector]):
            share = CHINA_FUEL_SPLIT[sector][fuel]
            _, c, o = FACTORS[fuel]
            energy_tj = annual_t * share / (c * o * (44.0 / 12.0))
            rows.append(["CHN", sector, fuel, f"{energy_tj:.6f}"])
    write_csv(FIXTURES / "china_energy_2019.csv", ["country", "sector", "fuel", "energy_tj"], rows)


def write_policies_holidays_ledger() -> None:
    policies = [
        ["CHN", "true", "2020-01-23", "2020-04-08"],
        ["IND", "true", "2020-03-25", ""],
        ["USA", "true", "2020-03-19", ""],
        ["DEU", "true", "2020-03-22", ""],
        ["FRA", "true", "2020-03-17", ""],
        ["GBR", "true", "2020-03-23", ""],
        ["CYP", "true", "2020-03-24", ""],
        ["RUS", "true", "2020-03-30", ""],
        ["JPN", "false", "", ""],
        ["BRA", "false", "", ""],
        ["MEX", "true", "2020-03-23", ""],
        ["IDN", "true", "2020-04-10", ""],
        ["ZAF", "true", "2020-03-27", ""],
        ["NGA", "false", "", ""],
    ]
    write_csv(FIXTURES / "policies.csv", ["country", "has_closure", "start", "end"], policies)

    holidays = [
        ["CHN", "2019-02-04", "2019-02-10", "Spring Festival"],
        ["CHN", "2019-04-05", "2019-04-05", "Qingming"],
        ["CHN", "2019-05-01", "2019-05-04", "Labor Day"],
        ["CHN", "2020-01-24", "2020-01-30", "Spring Festival"],
        ["CHN", "2020-04-04", "2020-04-06", "Qingming"],
        ["CHN", "2020-05-01", "2020-05-05", "Labor Day"],
    ]
    write_csv(FIXTURES / "holidays.csv", ["country", "start", "end", "label"], holidays)

    total_base = sum(POWER_BASE.values()) + sum(TRANSPORT_BASE.values()) + sum(INDUSTRY_BASE.values())
    ledger = [
        ["Power", 1.5, "2-sigma", f"{sum(POWER_BASE.values()) * LAMBDA / 120.0:.9f}"],
        ["Ground Transport", 9.3, "2-sigma", f"{sum(TRANSPORT_BASE.values()) * LAMBDA / 120.0:.9f}"],
        ["Industry", 36.0, "2-sigma", f"{(sum(INDUSTRY_BASE.values()) + PROCESS_BASE_CHN) * LAMBDA / 120.0:.9f}"],
        ["Residential", 40.0, "2-sigma", f"{sum(v[0] for v in RESIDENTIAL.values()) * LAMBDA / 120.0:.9f}"],
        ["Aviation", 10.2, "2-sigma", f"{(sum(v[0] for v in DOM_AVIATION.values()) + INTL_BASE) * LAMBDA / 120.0:.9f}"],
        ["International Shipping", 13.0, "2-sigma", f"{SHIPPING_BASE * LAMBDA / 120.0:.9f}"],
        ["Projection 2019", 0.8, "2-sigma", ""],
        ["EDGAR 2018", 5.0, "2-sigma", ""],
    ]
    del total_base
    write_csv(FIXTURES / "uncertainty_ledger.csv", ["item", "u_percent", "sigma_convention", "mu_mt_per_day"], ledger)


# ---------------------------------------------------------------------------
# Residential: temperature and population grids
# ---------------------------------------------------------------------------

_HDD_CACHE: dict[str, dict[date, float]] = {}


def hdd_curve(country: str) -> dict[date, float]:
    """Intended 2019 population-weighted HDD per day."""
    if country in _HDD_CACHE:
        return _HDD_CACHE[country]
    _, _, _, amp, southern = RESIDENTIAL[country]
    out = {}
    for day in DAYS_2019:
        doy = day.timetuple().tm_yday
        phase = math.cos(2.0 * math.pi * (doy - 15) / 365.0)
        if southern:
            phase = -phase
        out[day] = amp * max(0.0, phase) ** 1.3
    _HDD_CACHE[country] = out
    return out


def residential_delta(country: str) -> float:
    """Uniform window HDD shift reproducing the country's target change."""
    base, diff, cooking, _, _ = RESIDENTIAL[country]
    if diff == 0.0:
        return 0.0
    hdd = hdd_curve(country)
    year_total = sum(hdd.values())
    window_sum = sum(hdd[d] for d in WINDOW_2019)
    annual = residential_annual(country)
    heating = annual * (1.0 - cooking)
    if heating == 0.0 or window_sum == 0.0:
        raise AssertionError(f"{country}: cannot move residential mass without heating")
    # diff (Mt) = heating * delta * window_sum / year_total
    return diff / (heating * window_sum / year_total)


GRID_POINTS = {
    "CHN": (35.0, 105.0), "IND": (23.0, 78.0), "USA": (39.0, -98.0),
    "DEU": (51.0, 10.0), "FRA": (47.0, 2.0), "GBR": (54.0, -2.0),
    "CYP": (35.0, 33.0), "RUS": (58.0, 60.0), "JPN": (36.0, 138.0),
    "BRA": (-10.0, -52.0), "MEX": (23.0, -102.0), "IDN": (-2.0, 118.0),
    "ZAF": (-29.0, 25.0), "NGA": (9.0, 8.0),
}
POPULATIONS = {
    "CHN": 1.40e9, "IND": 1.35e9, "USA": 3.3e8, "DEU": 8.3e7, "FRA": 6.7e7,
    "GBR": 6.7e7, "CYP": 1.2e6, "RUS": 1.45e8, "JPN": 1.26e8, "BRA": 2.1e8,
    "MEX": 1.28e8, "IDN": 2.7e8, "ZAF": 5.9e7, "NGA": 2.0e8,
}


def write_temperature_population(hdd_base_c: float = 18.0) -> None:
    pop_rows = []
    for country in ACTIVE:
        lat, lon = GRID_POINTS[country]
        pop = POPULATIONS[country]
        pop_rows.append([f"{lat:.2f}", f"{lon:.2f}", country, f"{pop * 0.8:.0f}"])
        pop_rows.append([f"{lat - 4.0:.2f}", f"{lon + 3.0:.2f}", country, f"{pop * 0.2:.0f}"])
    write_csv(FIXTURES / "population.csv", ["lat", "lon", "country_iso3", "population"], pop_rows)

    temp_rows = []
    for country in ACTIVE:
        lat, lon = GRID_POINTS[country]
        hdd = hdd_curve(country)
        delta = residential_delta(country)
        for day in DAYS_2019 + WINDOW_2020:
            if day.year == 2019:
                value = hdd[day]
            else:
                value = hdd[align(day)] * (1.0 + delta)
            # Cell 1 (80% of people) carries the whole deficit; cell 2 is warm.
            t1 = hdd_base_c - value / 0.8
            temp_rows.append([day.isoformat(), f"{lat:.2f}", f"{lon:.2f}", f"{t1:.6f}"])
            temp_rows.append([day.isoformat(), f"{lat - 4.0:.2f}", f"{lon + 3.0:.2f}", f"{hdd_base_c + 5.0:.6f}"])
    write_csv(FIXTURES / "temperature.csv", ["date", "lat", "lon", "t2m_c"], temp_rows)

    split_rows = []
    for country in ACTIVE:
        _, _, cooking, _, _ = RESIDENTIAL[country]
        split_rows.append([country, f"{cooking:.4f}", f"{1.0 - cooking:.4f}"])
    write_csv(FIXTURES / "residential_split.csv", ["country", "cooking_share", "heating_share"], split_rows)


# ---------------------------------------------------------------------------
# Aviation and shipping
# ---------------------------------------------------------------------------


def aviation_shape(country: str, day: date) -> float:
    """Relative 2020 deviation shape (scaled per country to hit the target)."""
    asian = country in ("CHN", "JPN", "IDN", "IND")
    if asian:
        ramp_start, deep = date(2020, 1, 23), date(2020, 2, 10)
    else:
        ramp_start, deep = date(2020, 3, 12), date(2020, 3, 28)
    if day < ramp_start:
        return 0.0
    if day < deep:
        return (day - ramp_start).days / max((deep - ramp_start).days, 1)
    return 1.0


def km_rows_for(day: date, km_total: float, flight_prefix: str, origin: str, dest: str, home: tuple[float, float]) -> list[list[str]]:
    """Split a daily km total into flight records of at most ~8000 km."""
    rows = []
    remaining = km_total
    i = 0
    _, lon0 = home
    while remaining > 1e-6:
        leg = min(remaining, 8000.0)
        remaining -= leg
        # Two equal legs along the home meridian, starting far enough south
        # that even the longest route stays inside valid latitudes.
        dlat = leg / 2.0 / KM_PER_DEG
        p0 = (-38.0, lon0)
        p1 = (-38.0 + dlat, lon0)
        p2 = (-38.0 + 2.0 * dlat, lon0)
        waypoints = ";".join(f"{lat:.6f}:{lon:.6f}" for lat, lon in (p0, p1, p2))
        rows.append([day.isoformat(), f"{flight_prefix}-{day.isoformat()}-{i}", origin, dest, waypoints])
        i += 1
    return rows


def write_flights() -> None:
    rows: list[list[str]] = []
    factor = AVIATION_FACTOR

    def window_km(window_mt: float) -> float:
        return window_mt * LAMBDA * 1e9 / factor

    for country in sorted(DOM_AVIATION):
        base, diff, lat, lon = DOM_AVIATION[country]
        km19 = {d: window_km(base) / 120.0 * weekly_factor(d) for d in WINDOW_2019}
        scale = sum(km19.values()) / window_km(base)
        km19 = {d: v / scale for d, v in km19.items()}
        shape_mass = sum(km19[align(d)] * aviation_shape(country, d) for d in WINDOW_2020 if d != date(2020, 2, 29))
        gamma = window_km(diff) / shape_mass
        if gamma < -1.0:
            raise AssertionError(f"{country}: domestic aviation shape too shallow")
        for d in WINDOW_2019:
            rows.extend(km_rows_for(d, km19[d], f"{country}-DOM", country, country, (lat, lon)))
        for d in WINDOW_2020:
            km = km19[align(d)] * (1.0 + gamma * aviation_shape(country, d))
            rows.extend(km_rows_for(d, km, f"{country}-DOM", country, country, (lat, lon)))

    for origin in sorted(INTL_AVIATION):
        share = INTL_AVIATION[origin]
        base = INTL_BASE * share
        diff = INTL_DIFF * share
        home = DOM_AVIATION.get(origin, (0, 0, 10.0, -30.0))[2:]
        dest = "JPN" if origin != "JPN" else "USA"
        if origin == "":
            dest = ""
        km19 = {d: window_km(base) / 120.0 * weekly_factor(d) for d in WINDOW_2019}
        scale = sum(km19.values()) / window_km(base)
        km19 = {d: v / scale for d, v in km19.items()}
        shape_country = origin or "USA"
        shape_mass = sum(km19[align(d)] * aviation_shape(shape_country, d) for d in WINDOW_2020 if d != date(2020, 2, 29))
        gamma = window_km(diff) / shape_mass
        if gamma < -1.0:
            raise AssertionError(f"{origin or 'unattributed'}: international aviation shape too shallow")
        label = origin or "XXX"
        for d in WINDOW_2019:
            rows.extend(km_rows_for(d, km19[d], f"{label}-INT", origin, dest, home))
        for d in WINDOW_2020:
            km = km19[align(d)] * (1.0 + gamma * aviation_shape(shape_country, d))
            rows.extend(km_rows_for(d, km, f"{label}-INT", origin, dest, home))

    rows.sort(key=lambda r: (r[0], r[1]))
    write_csv(FIXTURES / "flights.csv", ["date", "flight_id", "origin_iso3", "dest_iso3", "waypoints"], rows)


def write_shipping() -> None:
    # Deviation shape: flat January, deepening through April.
    shape = {}
    for d in WINDOW_2020:
        if d < date(2020, 2, 1):
            shape[d] = 0.05
        elif d < date(2020, 3, 1):
            shape[d] = 0.55
        elif d < date(2020, 4, 1):
            shape[d] = 1.2
        else:
            shape[d] = 2.2
    comparison = [d for d in WINDOW_2020 if d != date(2020, 2, 29)]
    target_mean = SHIPPING_DIFF / SHIPPING_BASE  # flat 2019 profile
    gamma = target_mean * len(comparison) / sum(shape[d] for d in comparison)
    rows = [[d.isoformat(), f"{gamma * shape[d]:.9f}"] for d in WINDOW_2020]
    write_csv(FIXTURES / "shipping_volume.csv", ["date", "volume_change_fraction"], rows)


# ---------------------------------------------------------------------------
# Transport: calibration curve, congestion, weights
# ---------------------------------------------------------------------------

TRUE_PARAMS = (50.0, 200.0, 2.0, 30.0)


def write_paris_calibration() -> None:
    rng = np.random.default_rng(20190101)
    x = np.linspace(2.0, 72.0, 48)
    a, b, c, d = TRUE_PARAMS
    q = a + b * x**c / (d**c + x**c)
    q = q * (1.0 + 0.03 * rng.standard_normal(len(x)))
    rows = [[f"{xi:.4f}", f"{qi:.4f}"] for xi, qi in zip(x, q)]
    write_csv(FIXTURES / "paris_calibration.csv", ["congestion_pct", "car_count"], rows)


def fitted_params():
    rows = list(csv.DictReader(open(FIXTURES / "paris_calibration.csv", encoding="utf-8")))
    x = np.array([float(r["congestion_pct"]) for r in rows])
    q = np.array([float(r["car_count"]) for r in rows])
    return fit_traffic_curve(x, q).params


def congestion_2019(city: str) -> dict[date, float]:
    _, _, base = CITIES[city]
    phase = sum(ord(ch) for ch in city) % 7  # stable per-city offset
    out = {}
    for i, day in enumerate(WINDOW_2019):
        weekend = day.weekday() >= 5
        wiggle = 1.0 + 0.06 * math.sin(2.0 * math.pi * i / 13.0 + phase)
        out[day] = base * (0.78 if weekend else 1.0) * wiggle
    return out


def invert_proxy(q_target: float, params) -> float:
    a, b, c, d = params.a, params.b, params.c, params.d
    if not a + 0.002 * b < q_target < a + 0.998 * b:
        raise AssertionError(f"target proxy {q_target} outside invertible range")
    ratio = (q_target - a) / (a + b - q_target)
    return d * ratio ** (1.0 / c)


def write_congestion(beta_transport: float, params) -> None:
    rows = []
    for city in sorted(CITIES):
        country, _, _ = CITIES[city]
        monthly = MOBILITY_MONTHLY[country]
        x19 = congestion_2019(city)
        for day in WINDOW_2019:
            rows.append([day.isoformat(), city, country, f"{x19[day]:.6f}"])
        for day in WINDOW_2020:
            aligned = align(day)
            q19 = traffic_proxy(x19[aligned], params)
            change = beta_transport * monthly[day.month - 1]
            x20 = invert_proxy(q19 * (1.0 + change), params)
            rows.append([day.isoformat(), city, country, f"{x20:.6f}"])
    write_csv(FIXTURES / "congestion.csv", ["date", "city", "country", "congestion_pct"], rows)

    weights = [[city, CITIES[city][0], f"{CITIES[city][1]:.4f}"] for city in sorted(CITIES)]
    write_csv(FIXTURES / "city_weights.csv", ["city", "country", "edgar_road_mt"], weights)


# ---------------------------------------------------------------------------
# Industry inputs
# ---------------------------------------------------------------------------


def china_chem_other_monthly() -> tuple[list[float], list[float]]:
    """Solve chemical/other monthly growths against the published aggregate."""
    chem, other = [], []
    mix = SHARES["Chemicals"] * CHEM_OTHER_RATIO[0] + SHARES["Other"] * CHEM_OTHER_RATIO[1]
    for m in range(4):
        residual = (
            CHINA_INDUSTRY_MONTHLY[m]
            - SHARES["Steel"] * STEEL_MONTHLY[m]
            - SHARES["Cement"] * CEMENT_MONTHLY[m]
        )
        u = residual / mix
        chem.append(CHEM_OTHER_RATIO[0] * u)
        other.append(CHEM_OTHER_RATIO[1] * u)
    return chem, other


CHEMICAL_PRODUCTS = [("sulfuric acid", 0.30, 0.010), ("caustic soda", 0.25, -0.012), ("ethylene", 0.25, 0.0), ("soda ash", 0.20, 0.0)]
OTHER_PRODUCTS = [("crude iron ore", 0.30, 0.008), ("plain glass", 0.20, -0.012), ("machine-made paper", 0.20, 0.0), ("refined copper", 0.15, 0.0), ("beer", 0.15, 0.0)]
BASE_QUANTITIES = {
    "crude steel": 83000.0, "cement": 190000.0, "sulfuric acid": 8600.0, "caustic soda": 3100.0,
    "ethylene": 1700.0, "soda ash": 2400.0, "crude iron ore": 71000.0, "plain glass": 7800.0,
    "machine-made paper": 10500.0, "refined copper": 810.0, "beer": 2900.0,
}


def write_industry_inputs(beta_industry: float) -> None:
    chem, other = china_chem_other_monthly()
    rows = []
    for m in range(1, 5):
        season = 1.0 + 0.05 * math.sin(m)

        def add(subsector: str, products: list[tuple[str, float, float]], growth: float) -> None:
            for name, weight, offset in products:
                q19 = BASE_QUANTITIES[name] * season
                q20 = q19 * (1.0 + beta_industry * (growth + offset))
                rows.append(["CHN", subsector, name, f"2019-{m:02d}", f"{q19:.4f}", f"{weight:.4f}"])
                rows.append(["CHN", subsector, name, f"2020-{m:02d}", f"{q20:.4f}", f"{weight:.4f}"])

        add("Steel", [("crude steel", 1.0, 0.0)], STEEL_MONTHLY[m - 1])
        add("Cement", [("cement", 1.0, 0.0)], CEMENT_MONTHLY[m - 1])
        add("Chemicals", CHEMICAL_PRODUCTS, chem[m - 1])
        add("Other", OTHER_PRODUCTS, other[m - 1])
    write_csv(FIXTURES / "production.csv", ["country", "subsector", "product", "month", "quantity", "weight"], rows)

    write_csv(
        FIXTURES / "subsector_shares.csv",
        ["subsector", "share"],
        [[k, f"{v:.4f}"] for k, v in sorted(SHARES.items())],
    )
    write_csv(
        FIXTURES / "process_baseline.csv",
        ["country", "annual_mt_2019"],
        [["CHN", f"{annual_from_window(PROCESS_BASE_CHN) * LAMBDA:.9f}"]],
    )

    ipi_rows = []
    for key in sorted(IPI_MONTHLY):
        monthly_2019 = {m: 100.0 for m in range(1, 5)}
        running = 0.0
        for m in range(1, 5):
            running += monthly_2019[m]
            ipi_rows.append([key, f"2019-{m:02d}", f"{running / m:.9f}"])
        running = 0.0
        for m in range(1, 5):
            growth = IPI_MONTHLY[key][m - 1]
            if growth is None:
                break
            running += monthly_2019[m] * (1.0 + beta_industry * growth)
            ipi_rows.append([key, f"2020-{m:02d}", f"{running / m:.9f}"])
    write_csv(FIXTURES / "ipi.csv", ["country", "month", "cumulative_index"], ipi_rows)


# ---------------------------------------------------------------------------
# Power feeds
# ---------------------------------------------------------------------------


def daily_level_2019(country: str, category: str, day: date) -> float:
    level = POWER_FEED_LEVELS[country][category] * weekly_factor(day) * seasonal_factor(day)
    if country == "CHN":
        if in_range(day, SF_2019):
            level *= 0.860
        if in_range(day, QM_2019):
            level *= 0.96
    return level


TEXTURE_DUPS = {date(2019, 1, 14), date(2020, 1, 14), date(2020, 3, 2)}
TEXTURE_MISSING = {date(2019, 2, 20), date(2020, 2, 20), date(2020, 4, 6)}
TEXTURE_NAN = {date(2019, 3, 5), date(2020, 3, 5)}
TEXTURE_SPIKE = {date(2019, 1, 8), date(2020, 1, 8)}


def feed_rows(country: str, daily_for_day) -> list[list[str]]:
    """Hourly (or half-hourly) rows for both years; DEU carries data blemishes."""
    interval = FEED_INTERVALS.get(country, 60)
    profile = HALF_HOUR_PROFILE if interval == 30 else HOURLY_PROFILE
    slots = len(profile)
    rows: list[list[str]] = []
    for day in list(WINDOW_2019) + list(WINDOW_2020):
        for category in sorted(POWER_FEED_LEVELS[country]):
            level = daily_for_day(country, category, day)
            for s in range(slots):
                minutes = s * interval
                ts = f"{day.isoformat()}T{minutes // 60:02d}:{minutes % 60:02d}:00"
                # slot mean * slots reproduces the daily level exactly
                value = level * profile[s] / slots
                text = f"{value:.3f}"
                if country == "DEU":
                    if day in TEXTURE_MISSING and s in (3, 4):
                        text = "n/e"
                    elif day in TEXTURE_NAN and s == 7:
                        text = "N/A" if day.year == 2019 else "void"
                    elif day in TEXTURE_SPIKE and s == 11:
                        text = f"{value * 3.0:.3f}"
                rows.append([ts, str(interval), category, text])
                if country == "DEU" and day in TEXTURE_DUPS and s == 5:
                    rows.append([ts, str(interval), category, text])
    return rows


def write_power_feed_2019_and_2020(country: str, month_ratio: dict[int, float]) -> None:
    """Write the feed with 2020 levels at `month_ratio` times the aligned 2019."""

    def daily(country_: str, category: str, day: date) -> float:
        if day.year == 2019:
            return daily_level_2019(country_, category, day)
        base = daily_level_2019(country_, category, align(day))
        if country_ == "CHN":
            # strip the inherited 2019 festival shape, apply 2020 holidays
            if in_range(align(day), SF_2019):
                base /= 0.860
            if in_range(align(day), QM_2019):
                base /= 0.96
            if in_range(day, SF_2020):
                base *= 0.860
            if in_range(day, QM_2020):
                base *= 0.96
        return base * month_ratio[day.month]

    rows = feed_rows(country, daily)
    write_csv(FIXTURES / "power" / f"{country}.csv", ["timestamp_utc", "interval_min", "category", "value"], rows)


def write_feed_registry() -> None:
    registry = {
        "schemas": {
            "standard": {
                "columns": {
                    "timestamp": "timestamp_utc",
                    "interval": "interval_min",
                    "category": "category",
                    "value": "value",
                },
                "missing": ["n/e"],
                "not_a_number": ["N/A", "void"],
            }
        },
        "feeds": [
            {"file": f"power/{c}.csv", "schema": "standard", "country": c} for c in sorted(POWER_FEED_LEVELS)
        ],
    }
    path = FIXTURES / "feed_schemas.json"
    path.write_text(json.dumps(registry, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def normalize_power_feeds(beta_power: float) -> None:
    """Write feeds so each month's cleaned generation ratio is exactly on target.

    First pass writes candidate 2020 values, a real ingestion pass measures
    the cleaned monthly sums (which include the data blemishes), and the
    final write rescales each month to the target ratio. Cleaning is
    scale-equivariant, so one correction converges.
    """
    for country in sorted(POWER_FEED_LEVELS):
        targets = {m: 1.0 + beta_power * POWER_MONTHLY[country][m - 1] for m in range(1, 5)}
        write_power_feed_2019_and_2020(country, targets)
        daily = ingest_feed(FIXTURES / "power" / f"{country}.csv", STANDARD_SCHEMA)

        def month_sum(days: list[date]) -> dict[int, float]:
            out = {m: 0.0 for m in range(1, 5)}
            for d in days:
                out[d.month] += sum(daily[d].values())
            return out

        sums_2019 = month_sum(WINDOW_2019)
        sums_2020 = month_sum([d for d in WINDOW_2020 if d != date(2020, 2, 29)])
        correction = {m: targets[m] * sums_2019[m] / sums_2020[m] for m in range(1, 5)}
        write_power_feed_2019_and_2020(country, {m: targets[m] * correction[m] for m in range(1, 5)})


# ---------------------------------------------------------------------------
# Calibration loop
# ---------------------------------------------------------------------------

CONFIG_TEMPLATE = """fixture_dir = "{fixtures}"
output_dir = "{out}"
window_start = 2020-01-01
window_end = 2020-04-30
countries = "all"
seed = 42
mc_trials = 10000
threads = 1
deterministic_manifest = true

[sectors]
power = true
industry = true
ground_transport = true
residential = true
aviation = true
shipping = true
uncertainty = true

[power]
use_total_generation = ["RUS", "JPN"]
excluded_countries = ["CYP"]

[power.thermal_categories]
CHN = ["Thermal"]
IND = ["Coal", "Lignite", "Gas, Naphtha & Diesel"]
USA = ["Thermal"]
DEU = ["Fossil Hard coal", "Fossil Gas"]
FRA = ["Fossil Gas", "Fossil Hard coal"]
GBR = ["Fossil Gas", "Fossil Hard coal"]
BRA = ["Thermal"]

[power.temp_adjustment]
start = 2020-01-01
end = 2020-03-31
factor = -0.008

[shipping]
annual_mt_2019 = {shipping_annual:.9f}
international_share = 0.87

[residential]
hdd_base_c = 18.0

[nox_shares]
power = 0.30
transport = 0.35
industry = 0.31
"""


def run_pipeline(out_dir: Path) -> dict[str, float]:
    """Run the CLI on the staged fixtures; return measured global rates."""
    config_path = out_dir / "config.toml"
    config_path.write_text(
        CONFIG_TEMPLATE.format(fixtures=FIXTURES.as_posix(), out=(out_dir / "run").as_posix(), shipping_annual=SHIPPING_ANNUAL * LAMBDA),
        encoding="utf-8",
    )
    proc = subprocess.run(
        [sys.executable, "-m", "carbon_pulse.cli", "run", "--config", str(config_path)],
        capture_output=True,
        text=True,
        cwd=ROOT,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"pipeline failed:\n{proc.stdout}\n{proc.stderr}")

    rates: dict[str, float] = {}
    with open(out_dir / "run" / "summary_s2.csv", newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if row[0] == "Growth Rates (%)":
                rates["power"] = float(row[1]) / 100.0
                rates["transport"] = float(row[2]) / 100.0
                rates["industry"] = float(row[3]) / 100.0
                rates["residential"] = float(row[4]) / 100.0
            if row[0] == "Global":
                rates["global"] = float(row[7]) / 100.0
    payload = json.loads((out_dir / "run" / "uncertainty.json").read_text(encoding="utf-8"))
    totals = payload["window_totals_mt"]["Aviation"]
    rates["aviation"] = totals["sum_2020"] / totals["sum_2019"] - 1.0
    return rates


def calibrate(tmp: Path) -> tuple[float, float, float]:
    params = fitted_params()

    def stage(beta_p: float, beta_t: float, beta_i: float) -> dict[str, float]:
        normalize_power_feeds(beta_p)
        write_congestion(beta_t, params)
        write_industry_inputs(beta_i)
        return run_pipeline(tmp)

    g1 = stage(1.0, 1.0, 1.0)
    g0 = stage(0.0, 1.0, 0.0)  # transport response is linear through zero

    beta_p = (POWER_GLOBAL_TARGET - g0["power"]) / (g1["power"] - g0["power"])
    beta_i = (INDUSTRY_GLOBAL_TARGET - g0["industry"]) / (g1["industry"] - g0["industry"])
    beta_t = TRANSPORT_GLOBAL_TARGET / g1["transport"]

    final = stage(beta_p, beta_t, beta_i)
    checks = {
        "power": (final["power"], POWER_GLOBAL_TARGET),
        "transport": (final["transport"], TRANSPORT_GLOBAL_TARGET),
        "industry": (final["industry"], INDUSTRY_GLOBAL_TARGET),
        "residential": (final["residential"], -0.027),
        "aviation": (final["aviation"], -0.289),
        "global": (final["global"], -0.078),
    }
    for name, (got, want) in checks.items():
        if abs(got - want) > 0.0005:
            raise AssertionError(f"{name}: calibrated to {got:.6f}, target {want:.6f}")
    print("calibrated rates:", {k: round(v[0], 6) for k, v in checks.items()})
    return beta_p, beta_t, beta_i


# ---------------------------------------------------------------------------
# Reference (published-value) fixtures
# ---------------------------------------------------------------------------

S2_CELLS = {
    # region: [power, transport, industry, residential, domestic aviation]
    "China": [-91.1, -84.4, -43.8, -7.5, -7.8],
    "India": [-39.7, -21.4, -22.1, 7.3, -0.7],
    "US": [-43.8, -78.3, -17.1, -14.8, -8.3],
    "Europe (EU27 & UK)": [-82.0, -26.8, -15.1, -13.3, -1.2],
    "Russia": [-7.0, -3.6, 0.2, -8.1, -0.3],
    "Japan": [-5.5, -4.3, -5.5, -1.9, -0.2],
    "Brazil": [1.1, -8.3, -2.2, 0.0, -0.5],
    "ROW": [-24.6, -113.1, -30.7, -5.1, -10.3],
}
S2_ROW_SUMS = {
    "China": -234.5, "India": -76.6, "US": -162.4, "Europe (EU27 & UK)": -138.3,
    "Russia": -18.7, "Japan": -17.3, "Brazil": -9.9, "ROW": -183.7,
}
S2_ROW_GROWTH = {
    "China": -0.069, "India": -0.085, "US": -0.095, "Europe (EU27 & UK)": -0.120,
    "Russia": -0.034, "Japan": -0.043, "Brazil": -0.070, "ROW": -0.054,
}
S2_COL_GROWTH = [-0.064, -0.155, -0.044, -0.027, -0.234]
S2_SECTORS = ["Power", "GroundTransport", "Industry", "Residential", "DomesticAviation"]
S2_BUNKERS = {"InternationalAviation": (-63.6, -0.324), "InternationalShipping": (-32.6, -0.150)}


def write_reference_table() -> None:
    """Published table cells adjusted so each row re-sums exactly, plus IPF baselines."""
    cells = {}
    for region, values in S2_CELLS.items():
        adjusted = list(values)
        residual = S2_ROW_SUMS[region] - sum(values)
        biggest = max(range(5), key=lambda i: abs(adjusted[i]))
        adjusted[biggest] += residual
        cells[region] = adjusted

    row_base = {r: S2_ROW_SUMS[r] / S2_ROW_GROWTH[r] for r in S2_CELLS}
    col_diff = [sum(cells[r][i] for r in S2_CELLS) for i in range(5)]
    col_base = [col_diff[i] / S2_COL_GROWTH[i] for i in range(5)]

    base = np.array([[row_base[r] / 5.0 for _ in range(5)] for r in S2_CELLS])
    rows = list(S2_CELLS)
    target_rows = np.array([row_base[r] for r in rows])
    target_cols = np.array(col_base)
    for _ in range(200):
        base *= (target_rows / base.sum(axis=1))[:, None]
        base *= target_cols / base.sum(axis=0)
    # The row and column baseline margins disagree by about half a percent
    # (they are independently back-derived from rounded figures), so neither
    # side can be exact. A half-step row correction after converging on
    # columns splits the residual, keeping every growth rate within a few
    # hundredths of a point.
    base *= np.sqrt(target_rows / base.sum(axis=1))[:, None]

    out_rows = []
    for i, region in enumerate(rows):
        for j, sector in enumerate(S2_SECTORS):
            out_rows.append([region, sector, f"{cells[region][j]:.6f}", f"{base[i, j]:.6f}"])
    for sector, (diff, growth) in S2_BUNKERS.items():
        out_rows.append(["Global", sector, f"{diff:.6f}", f"{diff / growth:.6f}"])
    write_csv(FIXTURES / "reference" / "table_s2.csv", ["region", "sector", "diff_mt", "baseline_2019_mt"], out_rows)


def write_reference_notes() -> None:
    text = """# Reference fixture provenance

table_s2.csv
  Published sectoral window declines by region. Cells are adjusted by at
  most 0.2 Mt onto each row's largest entry so that every row re-sums
  exactly to its published row total (the printed cells carry independent
  rounding and do not). Baselines are back-derived from the published
  growth rates; the cell-level baseline matrix is an iterative proportional
  fit to the row and column baselines, which are themselves inconsistent at
  the 0.5% level; the residual is split between the two sides, so row and
  column growth rates reproduce to within about 0.07 points.

Window process-emission baseline for Chinese cement (259 Mt over
January-April) is back-derived from the published 37.3 Mt abatement at the
published -14.4% cement decline; the pipeline fixture carries its annual
equivalent (259 * 365/120 Mt, mass-scaled).

Chemical (0.258) and other-industry (0.104) emission shares complete the
published steel (0.416) and cement (0.222) shares to a unit sum; the pair
is solved so the published sub-sector window growths reproduce the
published total industry growth.

The bundled activity snapshot is a miniature world: all masses carry a
1e-3 scale against the published magnitudes, growth rates are full size.
"""
    path = FIXTURES / "reference" / "notes.md"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------


def main() -> None:
    if FIXTURES.exists():
        shutil.rmtree(FIXTURES)
    FIXTURES.mkdir(parents=True)

    write_countries()
    write_inventory_and_growth()
    write_china_energy()
    write_policies_holidays_ledger()
    write_temperature_population()
    write_flights()
    write_shipping()
    write_paris_calibration()
    write_feed_registry()

    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        beta_p, beta_t, beta_i = calibrate(Path(tmp))
    print(f"betas: power={beta_p:.6f} transport={beta_t:.6f} industry={beta_i:.6f}")

    write_reference_table()
    write_reference_notes()
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
