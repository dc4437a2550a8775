from datetime import date

import numpy as np
import pytest

from carbon_pulse.assembly import (
    ClosurePolicy,
    GroupRates,
    HolidayCalendar,
    HolidayRange,
    SeriesPair,
    aggregate,
    annotate_holidays,
    apply_closure_rates,
    closure_group_rates,
    nox_crosscheck,
)
from carbon_pulse.core import ConfigError, DailyEmissionSeries, DomainError, RegionGroup, Sector

from conftest import flat_series


def policy(country, has_closure, start=None, end=None):
    return ClosurePolicy(country, has_closure, start, end)


CLOSURE_WINDOW = (date(2020, 2, 1), date(2020, 3, 1))


class TestClosureGroupRates:
    def test_single_country_groups(self):
        changes = {("CHN", Sector.POWER, 2): -0.10, ("NGA", Sector.POWER, 2): 0.02}
        weights = {("CHN", Sector.POWER): 100.0, ("NGA", Sector.POWER): 10.0}
        policies = {"CHN": policy("CHN", True, *CLOSURE_WINDOW), "NGA": policy("NGA", False)}
        rates = closure_group_rates(changes, weights, policies)
        assert rates[(Sector.POWER, 2)] == GroupRates(with_closure=-0.10, without_closure=0.02)

    def test_equal_weight_mean(self):
        changes = {
            ("CHN", Sector.POWER, 1): -0.10,
            ("IND", Sector.POWER, 1): -0.20,
            ("NGA", Sector.POWER, 1): 0.0,
        }
        weights = {("CHN", Sector.POWER): 5.0, ("IND", Sector.POWER): 5.0, ("NGA", Sector.POWER): 1.0}
        policies = {
            "CHN": policy("CHN", True, *CLOSURE_WINDOW),
            "IND": policy("IND", True, *CLOSURE_WINDOW),
            "NGA": policy("NGA", False),
        }
        rates = closure_group_rates(changes, weights, policies)
        assert rates[(Sector.POWER, 1)].with_closure == pytest.approx(-0.15)

    def test_weighted_mean_oracle(self):
        changes = {
            ("CHN", Sector.INDUSTRY, 3): -0.06,
            ("USA", Sector.INDUSTRY, 3): -0.02,
            ("NGA", Sector.INDUSTRY, 3): 0.01,
            ("KEN", Sector.INDUSTRY, 3): 0.03,
        }
        weights = {
            ("CHN", Sector.INDUSTRY): 300.0,
            ("USA", Sector.INDUSTRY): 100.0,
            ("NGA", Sector.INDUSTRY): 10.0,
            ("KEN", Sector.INDUSTRY): 30.0,
        }
        policies = {
            "CHN": policy("CHN", True, *CLOSURE_WINDOW),
            "USA": policy("USA", True, *CLOSURE_WINDOW),
            "NGA": policy("NGA", False),
            "KEN": policy("KEN", False),
        }
        rates = closure_group_rates(changes, weights, policies)
        assert rates[(Sector.INDUSTRY, 3)].with_closure == pytest.approx((300 * -0.06 + 100 * -0.02) / 400)
        assert rates[(Sector.INDUSTRY, 3)].without_closure == pytest.approx((10 * 0.01 + 30 * 0.03) / 40)

    def test_empty_group_named_in_error(self):
        changes = {("CHN", Sector.POWER, 1): -0.10}
        weights = {("CHN", Sector.POWER): 1.0}
        policies = {"CHN": policy("CHN", True, *CLOSURE_WINDOW)}
        with pytest.raises(DomainError, match="without closures"):
            closure_group_rates(changes, weights, policies)


class TestApplyClosureRates:
    RATES = {(Sector.POWER, m): GroupRates(with_closure=-0.20, without_closure=0.0) for m in (1, 2, 3, 4)}

    def test_no_closure_country_flat(self):
        annual = {("NGA", Sector.POWER): 366.0}
        out = apply_closure_rates(annual, self.RATES, {"NGA": policy("NGA", False)}, date(2020, 1, 1), date(2020, 4, 30))
        assert out[0].values == pytest.approx(np.full(121, 1.0))

    def test_closure_days_scaled(self):
        annual = {("MEX", Sector.POWER): 366.0}
        policies = {"MEX": policy("MEX", True, date(2020, 3, 23), date(2020, 4, 21))}
        out = apply_closure_rates(annual, self.RATES, policies, date(2020, 1, 1), date(2020, 4, 30))
        series = out[0]
        assert series.value_on(date(2020, 4, 1)) == pytest.approx(0.8)
        assert series.value_on(date(2020, 3, 1)) == pytest.approx(1.0)
        scaled_days = sum(1 for d in series.dates() if abs(series.value_on(d) - 0.8) < 1e-12)
        assert scaled_days == 30

    def test_unclassified_country_is_error(self):
        with pytest.raises(ConfigError, match="ZWE"):
            apply_closure_rates({("ZWE", Sector.POWER): 10.0}, self.RATES, {}, date(2020, 1, 1), date(2020, 1, 31))

    def test_month_without_rate_unrevised(self):
        rates = {(Sector.POWER, 1): GroupRates(with_closure=-0.5, without_closure=-0.1)}
        annual = {("NGA", Sector.POWER): 366.0}
        out = apply_closure_rates(annual, rates, {"NGA": policy("NGA", False)}, date(2020, 1, 1), date(2020, 2, 29))
        series = out[0]
        assert series.value_on(date(2020, 1, 15)) == pytest.approx(0.9)
        assert series.value_on(date(2020, 2, 15)) == pytest.approx(1.0)


class TestAggregate:
    WINDOW = (date(2020, 1, 1), date(2020, 4, 30))

    def make_pair(self, country, sector, base_mt, diff_mt):
        # 2019 window Jan 1 - Apr 30 has 120 days; 2020 has 121 with Feb 29
        base = flat_series(base_mt * 1e6, date(2019, 1, 1), 120, country, sector)
        cur = flat_series((base_mt + diff_mt) * 1e6, date(2020, 1, 1), 121, country, sector, zero_feb29=True)
        return SeriesPair(baseline=base, current=cur)

    def test_single_series_sums_itself(self):
        pair = self.make_pair("CHN", Sector.POWER, 100.0, -10.0)
        out = aggregate([pair], *self.WINDOW, by="country")
        assert out["CHN"].sum_2019_t == pytest.approx(100.0e6)
        assert out["CHN"].diff_t == pytest.approx(-10.0e6)
        assert out["CHN"].growth == pytest.approx(-0.10)

    def test_region_grouping(self):
        pairs = [
            self.make_pair("DEU", Sector.POWER, 50.0, -5.0),
            self.make_pair("FRA", Sector.POWER, 30.0, -4.0),
            self.make_pair("CHN", Sector.POWER, 100.0, -6.0),
        ]
        regions = {"DEU": RegionGroup.EU27UK, "FRA": RegionGroup.EU27UK, "CHN": RegionGroup.CHINA}
        out = aggregate(pairs, *self.WINDOW, by="region", regions=regions)
        assert out["Europe (EU27 & UK)"].diff_t == pytest.approx(-9.0e6)
        assert out["China"].diff_t == pytest.approx(-6.0e6)

    def test_global_total_from_components(self):
        pairs = [
            self.make_pair("CHN", Sector.POWER, 10.0, -1.0),
            self.make_pair("CHN", Sector.INDUSTRY, 20.0, -2.0),
            self.make_pair("USA", Sector.POWER, 30.0, 3.0),
        ]
        out = aggregate(pairs, *self.WINDOW, by="global")
        assert out["Global"].diff_t == pytest.approx(0.0, abs=1e-3)

    def test_window_exceeding_data_is_error(self):
        pair = self.make_pair("CHN", Sector.POWER, 10.0, 0.0)
        with pytest.raises(DomainError, match="exceeds available"):
            aggregate([pair], date(2020, 1, 1), date(2020, 6, 30), by="country")

    def test_unknown_grouping_rejected(self):
        with pytest.raises(ConfigError):
            aggregate([], *self.WINDOW, by="continent")


class TestHolidays:
    def calendar(self):
        return HolidayCalendar(
            [
                HolidayRange("CHN", date(2019, 2, 4), date(2019, 2, 10), "Spring Festival"),
                HolidayRange("CHN", date(2019, 4, 5), date(2019, 4, 5), "Qingming"),
            ]
        )

    def test_no_holidays_all_untagged(self):
        series = flat_series(100.0, date(2019, 1, 1), 31, "FRA", Sector.POWER)
        tags, effects = annotate_holidays(series, self.calendar())
        assert all(tag is None for tag in tags)
        assert effects == []

    def test_spring_festival_dip_measured_against_february(self):
        # February 2019 with festival days at a level making the window mean
        # land 10% below the month mean.
        values = np.full(59, 100.0)
        feb = slice(31, 59)
        festival = slice(34, 41)  # Feb 4-10
        values[festival] = 100.0 * (1 - 0.129)
        # solve month mean with dip: 7 days at 87.1, 21 at 100
        series = DailyEmissionSeries("CHN", Sector.POWER, date(2019, 1, 1), values)
        _, effects = annotate_holidays(series, self.calendar())
        festival_effect = [e for e in effects if e.label == "Spring Festival"][0]
        assert festival_effect.relative_effect * 100.0 == pytest.approx(-10.0, abs=1.0)

    def test_qingming_single_day_tagged(self):
        series = flat_series(100.0, date(2019, 4, 1), 30, "CHN", Sector.POWER)
        tags, effects = annotate_holidays(series, self.calendar())
        assert tags[4] == "Qingming"
        assert tags[3] is None and tags[5] is None
        assert len(effects) == 1

    def test_overlapping_ranges_rejected(self):
        with pytest.raises(DomainError):
            HolidayCalendar(
                [
                    HolidayRange("CHN", date(2019, 2, 4), date(2019, 2, 10), "A"),
                    HolidayRange("CHN", date(2019, 2, 8), date(2019, 2, 12), "B"),
                ]
            )


class TestNoxCrosscheck:
    CHANGES = {"power": -0.068, "transport": -0.372, "industry": -0.081}

    def test_equal_shares_arithmetic_mean(self):
        shares = {"power": 0.32, "transport": 0.32, "industry": 0.32}
        assert nox_crosscheck(self.CHANGES, shares) == pytest.approx(-0.173667, abs=1e-5)

    def test_hand_weighted_mean(self):
        shares = {"power": 0.3, "transport": 0.4, "industry": 0.3}
        assert nox_crosscheck(self.CHANGES, shares) == pytest.approx(-0.1935, abs=1e-6)

    def test_single_nonzero_share(self):
        shares = {"power": 0.0, "transport": 0.5, "industry": 0.0}
        assert nox_crosscheck(self.CHANGES, shares) == pytest.approx(-0.372)

    def test_result_within_envelope(self):
        shares = {"power": 0.2, "transport": 0.5, "industry": 0.26}
        out = nox_crosscheck(self.CHANGES, shares)
        assert min(self.CHANGES.values()) <= out <= max(self.CHANGES.values())

    def test_zero_share_sum_rejected(self):
        with pytest.raises(DomainError):
            nox_crosscheck(self.CHANGES, {})

    def test_share_sum_above_one_rejected(self):
        with pytest.raises(DomainError):
            nox_crosscheck(self.CHANGES, {"power": 0.6, "transport": 0.6, "industry": 0.2})
