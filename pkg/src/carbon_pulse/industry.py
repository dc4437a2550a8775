"""Industrial emission growth from production statistics and production indexes.

China's industry splits into steel, cement, chemicals and other products
whose monthly production growth is emission-share weighted; other countries
use a cumulative industrial production index. Cement clinker process CO2
follows the cement fuel-combustion growth. Monthly results are spread to
days proportionally to national daily electricity generation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import DomainError

#: Share weights within a product group must sum to one at this tolerance.
WEIGHT_TOLERANCE = 1e-9


class SubSector(Enum):
    STEEL = "Steel"
    CEMENT = "Cement"
    CHEMICALS = "Chemicals"
    OTHER = "Other"


@dataclass(frozen=True)
class MonthlyProduction:
    product: str
    month: str  # "YYYY-MM"
    quantity: float
    weight: float

    def __post_init__(self) -> None:
        if self.quantity < 0:
            raise DomainError(f"negative production quantity for {self.product} {self.month}")


@dataclass(frozen=True)
class IpiRecord:
    country: str
    month: str  # "YYYY-MM"
    cumulative_index: float

    def __post_init__(self) -> None:
        if self.cumulative_index <= 0:
            raise DomainError(f"production index must be positive, got {self.cumulative_index}")


class GrowthUndefinedError(DomainError):
    """The base-period quantity is zero, so relative growth has no value."""


def product_growth(q_2020: float, q_2019: float) -> float:
    """Year-over-year relative growth of one product's monthly quantity."""
    if q_2019 <= 0:
        raise GrowthUndefinedError(f"base quantity must be positive, got {q_2019}")
    return q_2020 / q_2019 - 1.0


def group_growth(pairs: list[tuple[MonthlyProduction, MonthlyProduction]]) -> float:
    """Weight-averaged growth over a product basket.

    Each pair is (2019 record, 2020 record) for the same product; weights
    come from the 2019 records and must sum to one.
    """
    if not pairs:
        raise DomainError("empty product basket")
    weight_sum = sum(base.weight for base, _ in pairs)
    if abs(weight_sum - 1.0) > WEIGHT_TOLERANCE:
        raise DomainError(f"product weights sum to {weight_sum}, expected 1")
    total = 0.0
    for base, current in pairs:
        try:
            growth = product_growth(current.quantity, base.quantity)
        except GrowthUndefinedError:
            raise GrowthUndefinedError(f"growth undefined for product {base.product!r} in {base.month}") from None
        total += base.weight * growth
    return total


def china_industry_growth(subsector_growth: dict[SubSector, float], shares: dict[SubSector, float]) -> float:
    """Share-weighted industrial fuel-combustion growth across sub-sectors."""
    missing = [s.value for s in SubSector if s not in subsector_growth]
    if missing:
        raise DomainError(f"missing sub-sector growth for: {', '.join(missing)}")
    share_sum = sum(shares.get(s, 0.0) for s in SubSector)
    if abs(share_sum - 1.0) > WEIGHT_TOLERANCE:
        raise DomainError(f"sub-sector shares sum to {share_sum}, expected 1")
    return sum(shares[s] * subsector_growth[s] for s in SubSector)


def cement_process_change(fuel_growth: float, baseline_process_mt: float) -> float:
    """Mt change of clinker process CO2, tracking the cement fuel growth."""
    if baseline_process_mt < 0:
        raise DomainError(f"negative process baseline: {baseline_process_mt}")
    return baseline_process_mt * fuel_growth


def decumulate_index(cumulative: dict[int, float]) -> dict[int, float]:
    """Month-specific values from a cumulative (running-mean) index.

    Published cumulative indexes here average months 1..m, so the month-m
    value is C(m)*m - C(m-1)*(m-1). Keys are month numbers starting at 1
    and must be contiguous from the first reported month.
    """
    months = sorted(cumulative)
    if not months:
        raise DomainError("empty cumulative index")
    if months != list(range(months[0], months[0] + len(months))) or months[0] != 1:
        raise DomainError(f"cumulative index months must run contiguously from 1, got {months}")
    out: dict[int, float] = {}
    previous = 0.0
    for m in months:
        out[m] = cumulative[m] * m - previous * (m - 1)
        previous = cumulative[m]
    return out


def ipi_growth(cumulative_2019: dict[int, float], cumulative_2020: dict[int, float]) -> dict[int, float]:
    """Per-month growth of a de-cumulated production index, 2020 vs 2019.

    Months present in 2019 but absent from 2020 are simply left out of the
    result; the caller decides whether to forecast them.
    """
    monthly_2019 = decumulate_index(cumulative_2019)
    common = sorted(set(cumulative_2020))
    if not common:
        raise DomainError("no months reported for the current year")
    monthly_2020 = decumulate_index({m: cumulative_2020[m] for m in common})
    growth: dict[int, float] = {}
    for m in common:
        if m not in monthly_2019:
            raise DomainError(f"month {m} missing from the base-year index")
        if monthly_2019[m] <= 0:
            raise GrowthUndefinedError(f"non-positive base index in month {m}")
        growth[m] = monthly_2020[m] / monthly_2019[m] - 1.0
    return growth


def forecast_missing_month(donor_growth: dict[str, float], donors: tuple[str, ...] = ("JPN", "RUS", "BRA")) -> float:
    """Arithmetic mean of the donor countries' growth for a missing month."""
    missing = [d for d in donors if d not in donor_growth]
    if missing:
        raise DomainError(f"missing donor growth for: {', '.join(missing)}")
    return float(np.mean([donor_growth[d] for d in donors]))


def disaggregate_month(monthly_total: float, daily_proxy: np.ndarray) -> tuple[np.ndarray, bool]:
    """Spread a monthly total over days proportionally to a daily proxy.

    Returns (daily values, used_uniform_fallback). A proxy summing to zero
    falls back to a uniform split with a warning instead of failing, since
    missing electricity data should not erase industrial mass.
    """
    proxy = np.asarray(daily_proxy, dtype=float)
    if proxy.ndim != 1 or len(proxy) == 0:
        raise DomainError("daily proxy must be a non-empty vector")
    if np.any(proxy < 0):
        raise DomainError("daily proxy must be non-negative")
    total = proxy.sum()
    if total == 0.0:
        warnings.warn("zero proxy total, splitting month uniformly", stacklevel=2)
        return np.full(len(proxy), monthly_total / len(proxy)), True
    return monthly_total * proxy / total, False
