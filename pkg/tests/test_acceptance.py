"""Acceptance criteria, one test per criterion, each printing a verdict line.

Run with `pytest tests/test_acceptance.py -s` to see the PASS/FAIL lines.
"""

import csv
import functools
import statistics
import time
from datetime import date

import numpy as np
import pytest

from carbon_pulse.assembly import SeriesPair
from carbon_pulse.bunkers import AviationScale, great_circle_km
from carbon_pulse.config import load_config
from carbon_pulse.core import RegionGroup, Sector, distribute_annual
from carbon_pulse.industry import disaggregate_month
from carbon_pulse.ingestion import MAD_EPSILON, MAD_SCALE, clean_column
from carbon_pulse.pipeline import run as run_pipeline
from carbon_pulse.reporting import build_s2_table, write_s2_csv
from carbon_pulse.transport import fit_traffic_curve, traffic_proxy
from carbon_pulse.uncertainty import GaussianInput, combine_mult, combine_sum, monte_carlo_ci, percentile_standard_error

from conftest import FIXTURES, REPO_ROOT, flat_series

WINDOW = (date(2020, 1, 1), date(2020, 4, 30))

SECTOR_BY_LABEL = {
    "Power": Sector.POWER,
    "GroundTransport": Sector.GROUND_TRANSPORT,
    "Industry": Sector.INDUSTRY,
    "Residential": Sector.RESIDENTIAL,
    "DomesticAviation": Sector.DOMESTIC_AVIATION,
    "InternationalAviation": Sector.INTERNATIONAL_AVIATION,
    "InternationalShipping": Sector.INTERNATIONAL_SHIPPING,
}
REGION_BY_LABEL = {r.value: r for r in RegionGroup}

PUBLISHED_ROW_SUMS = {
    "China": -234.5, "India": -76.6, "US": -162.4, "Europe (EU27 & UK)": -138.3,
    "Russia": -18.7, "Japan": -17.3, "Brazil": -9.9, "ROW": -183.7,
}
PUBLISHED_ROW_GROWTH = {
    "China": -6.9, "India": -8.5, "US": -9.5, "Europe (EU27 & UK)": -12.0,
    "Russia": -3.4, "Japan": -4.3, "Brazil": -7.0, "ROW": -5.4,
}
PUBLISHED_COL_GROWTH = {
    "power": -6.4,
    "transport": -15.5,
    "industry_with_process": -4.4,
    "residential": -2.7,
    "domestic_aviation": -23.4,
}


def criterion(name):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] {name}")
                raise
            print(f"[PASS] {name}")
            return result

        return wrapper

    return deco


def load_reference_pairs():
    """Flat series pairs from the published-table fixture."""
    national, aviation, shipping = [], [], []
    with open(FIXTURES / "reference" / "table_s2.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            sector = SECTOR_BY_LABEL[row["sector"]]
            base_mt = float(row["baseline_2019_mt"])
            diff_mt = float(row["diff_mt"])
            # one representative country per region keeps the mapping simple
            country = REFERENCE_COUNTRIES[row["region"]]
            pair = SeriesPair(
                baseline=flat_series(base_mt * 1e6, date(2019, 1, 1), 120, country, sector),
                current=flat_series((base_mt + diff_mt) * 1e6, date(2020, 1, 1), 121, country, sector, zero_feb29=True),
            )
            if sector is Sector.INTERNATIONAL_AVIATION:
                aviation.append(pair)
            elif sector is Sector.INTERNATIONAL_SHIPPING:
                shipping.append(pair)
            else:
                national.append(pair)
    return national, aviation, shipping


REFERENCE_COUNTRIES = {
    "China": "CHN", "India": "IND", "US": "USA", "Europe (EU27 & UK)": "DEU",
    "Russia": "RUS", "Japan": "JPN", "Brazil": "BRA", "ROW": "MEX", "Global": "GLB",
}
REFERENCE_REGIONS = {v: REGION_BY_LABEL[k] for k, v in REFERENCE_COUNTRIES.items() if k != "Global"}


@pytest.fixture(scope="module")
def reference_table(tmp_path_factory):
    national, aviation, shipping = load_reference_pairs()
    t0 = time.perf_counter()
    table = build_s2_table(national, aviation, shipping, REFERENCE_REGIONS, *WINDOW)
    elapsed = time.perf_counter() - t0
    out = tmp_path_factory.mktemp("s2") / "summary_s2.csv"
    write_s2_csv(out, table)
    return table, out, elapsed


@pytest.fixture(scope="module")
def bundled_run(tmp_path_factory):
    """One pipeline run on the bundled snapshot, reused across criteria."""
    out_dir = tmp_path_factory.mktemp("acceptance_run")
    text = (REPO_ROOT / "run_config.toml").read_text(encoding="utf-8")
    text = text.replace('fixture_dir = "fixtures"', f'fixture_dir = "{FIXTURES.as_posix()}"')
    text = text.replace('output_dir = "out"', f'output_dir = "{(out_dir / "run").as_posix()}"')
    config_path = out_dir / "config.toml"
    config_path.write_text(text, encoding="utf-8")
    config = load_config(config_path)
    t0 = time.perf_counter()
    run_pipeline(config)
    elapsed = time.perf_counter() - t0
    return config_path, out_dir / "run", elapsed


@criterion("Reference table (s2): row sums, global total, growth rates")
def test_table_s2_consistency(reference_table):
    table, _, elapsed = reference_table
    assert elapsed < 1.0, f"aggregation took {elapsed:.3f}s"
    for region_label, published in PUBLISHED_ROW_SUMS.items():
        summary = table.row_summary(RegionGroup(region_label))
        assert summary.diff_t / 1e6 == pytest.approx(published, abs=0.3), region_label
    global_summary = table.global_summary()
    assert global_summary.diff_t / 1e6 == pytest.approx(-937.6, abs=0.3)
    for region_label, published in PUBLISHED_ROW_GROWTH.items():
        summary = table.row_summary(RegionGroup(region_label))
        assert summary.growth * 100.0 == pytest.approx(published, abs=0.1), region_label
    col_by_label = {
        "power": Sector.POWER,
        "transport": Sector.GROUND_TRANSPORT,
        "industry_with_process": Sector.INDUSTRY,
        "residential": Sector.RESIDENTIAL,
        "domestic_aviation": Sector.DOMESTIC_AVIATION,
    }
    for label, published in PUBLISHED_COL_GROWTH.items():
        summary = table.column_summary(col_by_label[label])
        assert summary.growth * 100.0 == pytest.approx(published, abs=0.1), label
    assert global_summary.growth * 100.0 == pytest.approx(-7.8, abs=0.1)


@criterion("Global bunker composition: -841.4 - 63.6 - 32.6 = -937.6")
def test_global_bunker_composition(reference_table):
    table, csv_path, _ = reference_table
    national = table.national_summary()
    aviation = table.international_aviation
    shipping = table.international_shipping
    global_summary = table.global_summary()
    # composed from components, never stored independently (1e-3 t slack
    # covers float association order across the two accumulation paths)
    composed = national.diff_t + aviation.diff_t + shipping.diff_t
    assert global_summary.diff_t == pytest.approx(composed, abs=1e-3)
    assert national.diff_t / 1e6 == pytest.approx(-841.4, abs=1e-6)
    assert aviation.diff_t / 1e6 == pytest.approx(-63.6, abs=1e-6)
    assert shipping.diff_t / 1e6 == pytest.approx(-32.6, abs=1e-6)
    assert global_summary.diff_t / 1e6 == pytest.approx(-937.6, abs=1e-6)
    # and the emitted report file carries the same numbers
    with open(csv_path, newline="", encoding="utf-8") as fh:
        rows = {row[0]: row for row in csv.reader(fh)}
    assert float(rows["Sum"][6]) == pytest.approx(-841.4, abs=1e-5)
    assert float(rows["International aviation"][6]) == pytest.approx(-63.6, abs=1e-5)
    assert float(rows["International shipping"][6]) == pytest.approx(-32.6, abs=1e-5)
    assert float(rows["Global"][6]) == pytest.approx(-937.6, abs=1e-5)


@criterion("Modified MAD constant, brute-force match, idempotence")
def test_modified_mad_and_cleaning():
    from scipy.special import erfcinv

    oracle = float(-1.0 / (np.sqrt(2.0) * erfcinv(1.5)))
    assert abs(MAD_SCALE - 1.482602) < 1e-6
    assert MAD_SCALE == pytest.approx(oracle, abs=1e-15)

    def brute_force(values):
        work = [0.0 if v != v else float(v) for v in values]
        while True:
            med = statistics.median(work)
            deviations = [abs(v - med) for v in work]
            threshold = 3.0 * MAD_SCALE * statistics.median(deviations) - MAD_EPSILON
            if threshold <= 0.0:
                return work
            flagged = [d > threshold for d in deviations]
            if not any(flagged):
                return work
            donors = [v for v, f in zip(work, flagged) if not f]
            replacement = sum(donors) / len(donors)
            work = [replacement if f else v for v, f in zip(work, flagged)]

    rng = np.random.default_rng(20200430)
    for _ in range(1000):
        n = int(rng.integers(8, 97))
        a = rng.normal(100, 5, n)
        if rng.random() < 0.5:
            for idx in rng.integers(0, n, int(rng.integers(1, 3))):
                a[idx] *= rng.uniform(2, 10)
        cleaned, _, _ = clean_column(a)
        assert cleaned.tolist() == brute_force(a.tolist())
        again, replaced, _ = clean_column(cleaned)
        assert replaced == 0 and again.tolist() == cleaned.tolist()


@criterion("Sigmoid round trip: noiseless 1e-4, 5% noise within 5%, R2 > 0.95")
def test_sigmoid_round_trip():
    t0 = time.perf_counter()
    truth = (50.0, 200.0, 2.0, 30.0)
    x = np.linspace(1.0, 120.0, 60)
    from carbon_pulse.transport import SigmoidParams

    q = traffic_proxy(x, SigmoidParams(*truth))
    fit = fit_traffic_curve(x, q)
    for got, want in zip((fit.params.a, fit.params.b, fit.params.c, fit.params.d), truth):
        assert got == pytest.approx(want, rel=1e-4)

    rng = np.random.default_rng(1)
    x = np.linspace(1.0, 120.0, 200)
    q = traffic_proxy(x, SigmoidParams(*truth)) * (1.0 + 0.05 * rng.standard_normal(200))
    noisy = fit_traffic_curve(x, q)
    for got, want in zip((noisy.params.a, noisy.params.b, noisy.params.c, noisy.params.d), truth):
        assert got == pytest.approx(want, rel=0.05)
    assert noisy.r_squared > 0.95
    assert time.perf_counter() - t0 < 5.0


@criterion("Aviation factor 13.92 kg/km and quarter-arc 10007.5 km")
def test_aviation_factor_and_great_circle():
    assert AviationScale().factor_kg_per_km() == pytest.approx(13.92, abs=0.01)
    assert great_circle_km((0.0, 0.0), (0.0, 90.0)) == pytest.approx(10007.5, abs=0.1)


@criterion("Conservation: annual and monthly distribution within 1e-9 relative")
def test_conservation_suite():
    rng = np.random.default_rng(271828)
    for _ in range(100):
        n = int(rng.integers(5, 400))
        weights = rng.random(n) * rng.uniform(1.0, 1e6)
        total = float(rng.uniform(1.0, 1e7))
        series = distribute_annual(total, weights, "CHN", Sector.POWER, date(2019, 1, 1))
        assert abs(series.values.sum() - total) <= 1e-9 * total
    for _ in range(100):
        n = int(rng.integers(28, 32))
        proxy = rng.random(n) * rng.uniform(1.0, 1e6)
        total = float(rng.uniform(0.1, 1e4))
        daily, _ = disaggregate_month(total, proxy)
        assert abs(daily.sum() - total) <= 1e-9 * total


@criterion("Uncertainty: 3-4-5 quadrature, MC vs analytic within 5%, seed stability")
def test_uncertainty_criteria():
    assert combine_mult([3.0, 4.0]) == 5.0

    t0 = time.perf_counter()
    mu = [38.5, 18.2, 28.6, 8.4, 2.8, 1.9]
    u_pct = [1.5, 9.3, 36.0, 40.0, 10.2, 13.0]
    inputs = {f"s{i}": GaussianInput(m, m * u / 100.0) for i, (m, u) in enumerate(zip(mu, u_pct))}
    result = monte_carlo_ci(lambda d: sum(d.values()), inputs, n_trials=10000, seed=42)
    analytic_pct = combine_sum(u_pct, mu)
    half_width_pct = (result.upper - result.lower) / 2.0 / sum(mu) * 100.0
    assert half_width_pct == pytest.approx(analytic_pct, rel=0.05)
    assert time.perf_counter() - t0 < 10.0

    a = monte_carlo_ci(lambda d: sum(d.values()), inputs, n_trials=10000, seed=7)
    b = monte_carlo_ci(lambda d: sum(d.values()), inputs, n_trials=10000, seed=8)
    rng = np.random.default_rng(0)
    probe = np.array([sum(GaussianInput(m, m * u / 100.0).draw(rng) for m, u in zip(mu, u_pct)) for _ in range(10000)])
    se = percentile_standard_error(probe, 16.0)
    assert abs(a.lower - b.lower) <= 3.0 * np.sqrt(2.0) * se
    assert abs(a.upper - b.upper) <= 3.0 * np.sqrt(2.0) * se


@criterion("End-to-end determinism and runtime under 30 s")
def test_end_to_end_determinism(bundled_run, tmp_path):
    config_path, first_out, elapsed = bundled_run
    assert elapsed < 30.0, f"pipeline took {elapsed:.1f}s"

    text = config_path.read_text(encoding="utf-8")
    for variant, extra in (("again", ""), ("threaded", "threads = 4\n")):
        out = tmp_path / variant
        patched = extra + text.replace(f'output_dir = "{first_out.as_posix()}"', f'output_dir = "{out.as_posix()}"')
        if extra:
            patched = patched.replace("\nthreads = 1", "\nthreads_base = 1")
        variant_config = tmp_path / f"{variant}.toml"
        variant_config.write_text(patched, encoding="utf-8")
        run_pipeline(load_config(variant_config))
        for name in sorted(p.name for p in first_out.iterdir()):
            assert (out / name).read_bytes() == (first_out / name).read_bytes(), f"{name} differs ({variant})"


@criterion("Calibrated snapshot reproduces the published sector changes")
def test_calibrated_fixture_targets(bundled_run):
    _, out, _ = bundled_run
    rates = {}
    with open(out / "summary_s2.csv", newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if row[0] == "Growth Rates (%)":
                rates.update(
                    power=float(row[1]), transport=float(row[2]), industry=float(row[3]), residential=float(row[4])
                )
            if row[0] == "Global":
                rates["global"] = float(row[7])
    import json

    totals = json.loads((out / "uncertainty.json").read_text(encoding="utf-8"))["window_totals_mt"]["Aviation"]
    rates["aviation"] = (totals["sum_2020"] / totals["sum_2019"] - 1.0) * 100.0

    assert rates["power"] == pytest.approx(-6.4, abs=0.1)
    assert rates["transport"] == pytest.approx(-15.5, abs=0.1)
    assert rates["industry"] == pytest.approx(-4.4, abs=0.1)
    assert rates["residential"] == pytest.approx(-2.7, abs=0.1)
    assert rates["aviation"] == pytest.approx(-28.9, abs=0.1)
    assert rates["global"] == pytest.approx(-7.8, abs=0.1)
