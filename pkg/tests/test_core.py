from datetime import date

import numpy as np
import pytest
from hypothesis import given, strategies as st

from carbon_pulse.core import (
    AnnualInventory,
    Country,
    DailyEmissionSeries,
    DomainError,
    EmissionFactor,
    GrowthRate,
    MappingError,
    RegionGroup,
    Sector,
    align_comparison_date,
    align_or_borrow,
    distribute_annual,
    energy_to_co2,
    scale_inventory,
    sector_for_edgar_category,
    window_change,
)

FACTOR = EmissionFactor(heating_value_tj_per_t=0.02, carbon_content_t_per_tj=25.8, oxidation_rate=0.94)


class TestEnergyToCo2:
    def test_zero_activity(self):
        assert energy_to_co2(0.0, FACTOR) == 0.0

    def test_hand_arithmetic(self):
        # 100 TJ * 25.8 tC/TJ * 0.94 * 44/12
        assert energy_to_co2(100.0, FACTOR) == pytest.approx(8892.4, abs=1e-9)

    def test_conversion_identity(self):
        factor = EmissionFactor(0.02, 12.0 / 44.0, 1.0)
        assert energy_to_co2(1.0, factor) == pytest.approx(1.0, rel=1e-12)

    def test_negative_energy_rejected(self):
        with pytest.raises(DomainError):
            energy_to_co2(-1.0, FACTOR)

    @given(st.floats(min_value=0, max_value=1e6), st.floats(min_value=0, max_value=100))
    def test_linear_in_energy(self, energy, alpha):
        direct = energy_to_co2(alpha * energy, FACTOR)
        scaled = alpha * energy_to_co2(energy, FACTOR)
        assert direct == pytest.approx(scaled, rel=1e-12, abs=1e-9)


class TestEmissionFactorInvariants:
    def test_oxidation_above_one_rejected(self):
        with pytest.raises(DomainError):
            EmissionFactor(0.02, 25.8, 1.2)

    def test_nonpositive_carbon_content_rejected(self):
        with pytest.raises(DomainError):
            EmissionFactor(0.02, 0.0, 0.9)


class TestScaleInventory:
    def test_single_entry_rate(self):
        inv = AnnualInventory(2018, {("CHN", Sector.POWER): 100.0})
        out = scale_inventory(inv, [GrowthRate("CHN", 0.005)])
        assert out.year == 2019
        assert out.entries[("CHN", Sector.POWER)] == pytest.approx(100.5)

    def test_zero_rate_identity(self):
        inv = AnnualInventory(2018, {("CHN", Sector.POWER): 100.0})
        out = scale_inventory(inv, [GrowthRate("CHN", 0.0)])
        assert out.entries[("CHN", Sector.POWER)] == pytest.approx(100.0)

    def test_default_rate_for_missing_country(self):
        inv = AnnualInventory(2018, {("RUS", Sector.POWER): 200.0})
        out = scale_inventory(inv, [GrowthRate("CHN", 0.02)])
        assert out.entries[("RUS", Sector.POWER)] == pytest.approx(201.0)

    def test_preserves_key_set(self):
        entries = {("CHN", Sector.POWER): 1.0, ("IND", Sector.INDUSTRY): 2.0, ("USA", Sector.RESIDENTIAL): 3.0}
        out = scale_inventory(AnnualInventory(2018, entries), [])
        assert set(out.entries) == set(entries)

    def test_rate_at_minus_one_rejected(self):
        with pytest.raises(DomainError):
            GrowthRate("CHN", -1.0)

    def test_fixture_inventory_matches_hand_summed_oracle(self):
        # Spreadsheet-style recomputation: independent loop over the rows.
        rows = [
            ("CHN", Sector.POWER, 4500.0, 0.026),
            ("CHN", Sector.INDUSTRY, 3800.0, 0.026),
            ("USA", Sector.POWER, 1700.0, -0.017),
            ("RUS", Sector.RESIDENTIAL, 300.0, None),  # default rate
            ("JPN", Sector.GROUND_TRANSPORT, 200.0, None),
        ]
        inv = AnnualInventory(2018, {(c, s): v for c, s, v, _ in rows})
        rates = [GrowthRate(c, r) for c, _, _, r in rows if r is not None]
        out = scale_inventory(inv, rates, default_rate=0.005)
        expected_total = 0.0
        for country, sector, mt, rate in rows:
            expected_total += mt * (1.0 + (rate if rate is not None else 0.005))
        assert sum(out.entries.values()) == pytest.approx(expected_total, rel=1e-12)


class TestSectorMapping:
    @pytest.mark.parametrize(
        "label,sector",
        [
            ("Electricity and heat production", Sector.POWER),
            ("Manufacturing industries and construction", Sector.INDUSTRY),
            ("Other energy industries", Sector.INDUSTRY),
            ("Road transportation", Sector.GROUND_TRANSPORT),
            ("Rail transportation", Sector.GROUND_TRANSPORT),
            ("Inland navigation", Sector.GROUND_TRANSPORT),
            ("Other transportation", Sector.GROUND_TRANSPORT),
            ("Residential and other sectors", Sector.RESIDENTIAL),
        ],
    )
    def test_total_over_known_labels(self, label, sector):
        assert sector_for_edgar_category(label) is sector

    def test_unknown_label_named_in_error(self):
        with pytest.raises(MappingError, match="Helicopters"):
            sector_for_edgar_category("Helicopters")


class TestDistributeAnnual:
    def test_uniform_weights(self):
        series = distribute_annual(365.0, np.ones(365), "CHN", Sector.POWER, date(2019, 1, 1))
        assert np.allclose(series.values, 1.0)

    def test_degenerate_single_day(self):
        weights = np.zeros(10)
        weights[3] = 5.0
        series = distribute_annual(42.0, weights, "CHN", Sector.POWER, date(2019, 1, 1))
        assert series.values[3] == pytest.approx(42.0)
        assert series.values.sum() == pytest.approx(42.0)

    def test_electricity_shaped_weights_conserve_mass(self):
        rng = np.random.default_rng(7)
        weights = 100.0 + 30.0 * rng.random(120)
        series = distribute_annual(1234.5, weights, "CHN", Sector.POWER, date(2019, 1, 1))
        assert abs(series.values.sum() - 1234.5) <= 1e-9 * 1234.5

    def test_all_zero_weights_rejected(self):
        with pytest.raises(DomainError):
            distribute_annual(10.0, np.zeros(5), "CHN", Sector.POWER, date(2019, 1, 1))

    @given(st.lists(st.floats(min_value=0, max_value=1e4), min_size=1, max_size=200), st.floats(min_value=0, max_value=1e9))
    def test_conservation_property(self, weights, total):
        weights = np.asarray(weights)
        if weights.sum() <= 0:
            return
        series = distribute_annual(total, weights, "CHN", Sector.POWER, date(2019, 1, 1))
        assert abs(series.values.sum() - total) <= 1e-9 * max(total, 1.0)


class TestCalendar:
    def test_plain_alignment(self):
        assert align_comparison_date(date(2020, 3, 15)) == date(2019, 3, 15)
        assert align_comparison_date(date(2020, 1, 1)) == date(2019, 1, 1)

    def test_leap_day_excluded(self):
        assert align_comparison_date(date(2020, 2, 29)) is None

    def test_leap_day_borrows_feb_28(self):
        assert align_or_borrow(date(2020, 2, 29)) == date(2019, 2, 28)

    def test_window_change_is_ratio_of_sums_not_mean_of_ratios(self):
        # Two days: ratios 0.5 and 1.5 but mass-weighted toward day one.
        base = DailyEmissionSeries("CHN", Sector.POWER, date(2019, 1, 1), [100.0, 1.0])
        cur = DailyEmissionSeries("CHN", Sector.POWER, date(2020, 1, 1), [50.0, 1.5])
        change = window_change(cur, base, date(2020, 1, 1), date(2020, 1, 2))
        assert change == pytest.approx(51.5 / 101.0 - 1.0)
        assert change != pytest.approx((0.5 + 1.5) / 2.0 - 1.0)


class TestEnergySummation:
    def test_three_fuel_bundle(self):
        from carbon_pulse.core import FuelType, sum_energy_emissions

        factors = {
            FuelType.COAL: EmissionFactor(0.0209, 26.59, 0.92),
            FuelType.OIL: EmissionFactor(0.0418, 20.08, 0.98),
            FuelType.NATURAL_GAS: EmissionFactor(0.0389, 15.32, 0.99),
        }
        consumption = {FuelType.COAL: 1000.0, FuelType.OIL: 200.0, FuelType.NATURAL_GAS: 100.0}
        hand = (
            1000.0 * 26.59 * 0.92 + 200.0 * 20.08 * 0.98 + 100.0 * 15.32 * 0.99
        ) * 44.0 / 12.0
        assert sum_energy_emissions(consumption, factors) == pytest.approx(hand, rel=1e-12)

    def test_missing_factor_is_config_error(self):
        from carbon_pulse.core import ConfigError, FuelType, sum_energy_emissions

        with pytest.raises(ConfigError, match="Coal"):
            sum_energy_emissions({FuelType.COAL: 10.0}, {})


class TestDomainTypes:
    def test_country_code_format_enforced(self):
        with pytest.raises(DomainError):
            Country("cn", RegionGroup.CHINA)
        Country("CHN", RegionGroup.CHINA)

    def test_series_rejects_negative_values(self):
        with pytest.raises(DomainError):
            DailyEmissionSeries("CHN", Sector.POWER, date(2019, 1, 1), [1.0, -0.5])

    def test_series_window_sum_clips(self):
        series = DailyEmissionSeries("CHN", Sector.POWER, date(2019, 1, 1), [1.0, 2.0, 3.0])
        assert series.window_sum(date(2018, 12, 25), date(2019, 1, 2)) == pytest.approx(3.0)

    def test_inventory_rejects_negative_mass(self):
        with pytest.raises(DomainError):
            AnnualInventory(2018, {("CHN", Sector.POWER): -1.0})
