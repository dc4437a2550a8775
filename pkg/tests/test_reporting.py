import csv
import json
from datetime import date

import numpy as np
import pytest

from carbon_pulse.reporting import fmt, month_windows, running_mean_7d

from conftest import GOLDEN


class TestRunningMean:
    def test_constant_series_unchanged(self):
        out = running_mean_7d(np.full(30, 4.2))
        assert out == pytest.approx(np.full(30, 4.2))

    def test_edges_use_shrinking_window(self):
        x = np.arange(10.0)
        out = running_mean_7d(x)
        assert out[0] == x[0]
        assert out[-1] == x[-1]
        assert out[1] == pytest.approx(x[0:3].mean())
        assert out[2] == pytest.approx(x[0:5].mean())

    def test_interior_is_centered_seven_day_mean(self):
        rng = np.random.default_rng(17)
        x = rng.random(40)
        out = running_mean_7d(x)
        for i in range(3, 37):
            assert out[i] == pytest.approx(x[i - 3 : i + 4].mean())


class TestFormatting:
    def test_negative_zero_normalized(self):
        assert fmt(-0.0) == "0.000000"

    def test_fixed_decimals(self):
        assert fmt(1.23456789, 6) == "1.234568"
        assert fmt(1.5, 12) == "1.500000000000"


class TestMonthWindows:
    def test_full_months(self):
        windows = month_windows(date(2020, 1, 1), date(2020, 4, 30))
        assert [w[0] for w in windows] == [1, 2, 3, 4]
        assert windows[1] == (2, date(2020, 2, 1), date(2020, 2, 29))

    def test_partial_months_clipped(self):
        windows = month_windows(date(2020, 1, 15), date(2020, 2, 10))
        assert windows == [(1, date(2020, 1, 15), date(2020, 1, 31)), (2, date(2020, 2, 1), date(2020, 2, 10))]


class TestGoldenOutputsInternallyConsistent:
    """Totals must be re-derivable from the daily file by plain summation."""

    def load_daily(self):
        by_sector: dict[str, float] = {}
        total = 0.0
        with open(GOLDEN / "daily_emissions.csv", newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                if row["diff_mt"] == "":
                    continue  # Feb 29 has no comparison
                diff = float(row["diff_mt"])
                by_sector[row["sector"]] = by_sector.get(row["sector"], 0.0) + diff
                total += diff
        return by_sector, total

    def test_sector_columns_match_summary(self):
        by_sector, _ = self.load_daily()
        with open(GOLDEN / "summary_s2.csv", newline="", encoding="utf-8") as fh:
            rows = {row[0]: row for row in csv.reader(fh)}
        sums = rows["Sum"]
        assert by_sector["Power"] == pytest.approx(float(sums[1]), abs=1e-6)
        assert by_sector["GroundTransport"] == pytest.approx(float(sums[2]), abs=1e-6)
        assert by_sector["Industry"] == pytest.approx(float(sums[3]), abs=1e-6)
        assert by_sector["Residential"] == pytest.approx(float(sums[4]), abs=1e-6)
        assert by_sector["DomesticAviation"] == pytest.approx(float(sums[5]), abs=1e-6)
        assert by_sector["InternationalAviation"] == pytest.approx(float(rows["International aviation"][6]), abs=1e-6)
        assert by_sector["InternationalShipping"] == pytest.approx(float(rows["International shipping"][6]), abs=1e-6)

    def test_global_total_matches_summary(self):
        _, total = self.load_daily()
        with open(GOLDEN / "summary_s2.csv", newline="", encoding="utf-8") as fh:
            rows = {row[0]: row for row in csv.reader(fh)}
        assert total == pytest.approx(float(rows["Global"][6]), abs=1e-6)

    def test_uncertainty_totals_match_daily(self):
        by_sector, _ = self.load_daily()
        payload = json.loads((GOLDEN / "uncertainty.json").read_text(encoding="utf-8"))
        aviation = payload["window_totals_mt"]["Aviation"]
        aviation_diff = aviation["sum_2020"] - aviation["sum_2019"]
        daily_diff = by_sector["DomesticAviation"] + by_sector["InternationalAviation"]
        assert aviation_diff == pytest.approx(daily_diff, abs=1e-5)

    def test_no_data_rows_lost(self):
        with open(GOLDEN / "daily_emissions.csv", newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        # every row carries a full 2020 value; only Feb 29 lacks a comparison
        feb29 = [r for r in rows if r["date"] == "2020-02-29"]
        assert feb29 and all(r["mt_co2_2019"] == "" and r["mt_co2_2020"] != "" for r in feb29)
        assert all(r["mt_co2_2019"] != "" for r in rows if r["date"] != "2020-02-29")
