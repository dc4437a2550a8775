from datetime import date

import numpy as np
import pytest

from carbon_pulse.core import ConfigError, DailyEmissionSeries, DomainError, Sector, window_change
from carbon_pulse.power import (
    GenerationKind,
    GenerationSeries,
    TemperatureAdjustment,
    apply_temperature_adjustment,
    power_emission_series,
    thermal_aggregate,
)


def gen(values, start=date(2019, 1, 1), country="IND", kind=GenerationKind.THERMAL):
    return GenerationSeries(country, kind, start, np.asarray(values, dtype=float))


def baseline(values, start=date(2019, 1, 1), country="IND"):
    return DailyEmissionSeries(country, Sector.POWER, start, np.asarray(values, dtype=float))


class TestThermalAggregate:
    def test_sum_of_categories(self):
        per_type = {"Coal": gen([100.0]), "Lignite": gen([20.0]), "Gas, Naphtha & Diesel": gen([30.0])}
        out = thermal_aggregate(per_type, ["Coal", "Lignite", "Gas, Naphtha & Diesel"], "IND")
        assert out.values.tolist() == [150.0]

    def test_single_category_identity(self):
        out = thermal_aggregate({"Thermal": gen([77.0, 88.0])}, ["Thermal"], "CHN")
        assert out.values.tolist() == [77.0, 88.0]

    def test_india_day_matches_hand_sum(self):
        rng = np.random.default_rng(11)
        coal, lignite, gas = rng.random(5) * 1000, rng.random(5) * 100, rng.random(5) * 50
        per_type = {"Coal": gen(coal), "Lignite": gen(lignite), "Gas, Naphtha & Diesel": gen(gas)}
        out = thermal_aggregate(per_type, ["Coal", "Lignite", "Gas, Naphtha & Diesel"], "IND")
        hand = [coal[i] + lignite[i] + gas[i] for i in range(5)]
        assert out.values == pytest.approx(hand)

    def test_no_category_present_is_error(self):
        with pytest.raises(ConfigError):
            thermal_aggregate({"Wind": gen([1.0])}, ["Coal"], "IND")


class TestPowerEmissionSeries:
    def test_identical_generation_gives_zero_change(self):
        g19 = gen([100.0, 110, 120], start=date(2019, 1, 1))
        g20 = gen([100.0, 110, 120], start=date(2020, 1, 1))
        base = baseline([50.0, 55, 60])
        estimate = power_emission_series(g20, g19, base)
        change = window_change(estimate.series, base, date(2020, 1, 1), date(2020, 1, 3))
        assert change == pytest.approx(0.0, abs=1e-12)

    def test_halved_generation_halves_emissions(self):
        g19 = gen([100.0, 100], start=date(2019, 1, 1))
        g20 = gen([50.0, 50], start=date(2020, 1, 1))
        base = baseline([80.0, 80])
        estimate = power_emission_series(g20, g19, base)
        change = window_change(estimate.series, base, date(2020, 1, 1), date(2020, 1, 2))
        assert change == pytest.approx(-0.5)

    def test_scale_invariant_in_generation_units(self):
        rng = np.random.default_rng(3)
        g19_vals = 100 + rng.random(10) * 20
        g20_vals = 90 + rng.random(10) * 20
        base = baseline(50 + rng.random(10) * 5)
        one = power_emission_series(gen(g20_vals, date(2020, 1, 1)), gen(g19_vals), base).series
        alpha = 3.7
        scaled = power_emission_series(gen(alpha * g20_vals, date(2020, 1, 1)), gen(alpha * g19_vals), base).series
        assert one.values == pytest.approx(scaled.values, rel=1e-12)

    def test_zero_denominator_day_flagged_and_excluded(self):
        g19 = gen([100.0, 0.0], start=date(2019, 1, 1))
        g20 = gen([100.0, 50.0], start=date(2020, 1, 1))
        base = baseline([10.0, 10.0])
        estimate = power_emission_series(g20, g19, base)
        assert estimate.excluded_days == [date(2020, 1, 2)]
        assert estimate.series.values[1] == 0.0

    def test_feb29_changes_raw_total_by_exactly_its_value(self):
        days_2019 = 59  # Jan 1 .. Feb 28 2019
        days_2020 = 60  # Jan 1 .. Feb 29 2020
        g19 = gen(np.full(days_2019, 100.0), start=date(2019, 1, 1))
        g20 = gen(np.full(days_2020, 100.0), start=date(2020, 1, 1))
        base = baseline(np.full(days_2019, 10.0))
        series = power_emission_series(g20, g19, base).series
        raw_total = series.values.sum()
        comparison_total = sum(
            series.value_on(d) for d in series.dates() if not (d.month == 2 and d.day == 29)
        )
        feb29 = series.value_on(date(2020, 2, 29))
        assert feb29 == pytest.approx(10.0)  # borrowed Feb 28 baseline
        assert raw_total - comparison_total == pytest.approx(feb29)


class TestTemperatureAdjustment:
    def test_zero_factor_identity(self):
        series = baseline([100.0] * 31)
        adj = TemperatureAdjustment(date(2019, 1, 1), date(2019, 1, 31), 0.0)
        assert apply_temperature_adjustment(series, adj).values == pytest.approx(series.values)

    def test_literal_minus_0_8_percent(self):
        series = baseline([100.0] * 90)
        adj = TemperatureAdjustment(date(2019, 1, 1), date(2019, 3, 31), -0.008)
        out = apply_temperature_adjustment(series, adj)
        assert out.values[0] == pytest.approx(99.2)

    def test_outside_window_unchanged(self):
        series = baseline([100.0] * 60)
        adj = TemperatureAdjustment(date(2019, 1, 1), date(2019, 1, 31), -0.008)
        out = apply_temperature_adjustment(series, adj)
        assert out.values[31:] == pytest.approx(100.0)

    def test_window_outside_series_is_error(self):
        series = baseline([100.0] * 10)
        adj = TemperatureAdjustment(date(2019, 1, 1), date(2019, 3, 31), -0.008)
        with pytest.raises(DomainError):
            apply_temperature_adjustment(series, adj)

    def test_factor_magnitude_bounded(self):
        with pytest.raises(DomainError):
            TemperatureAdjustment(date(2019, 1, 1), date(2019, 1, 2), 0.15)
