from datetime import date
from pathlib import Path

import numpy as np
import pytest

from carbon_pulse.core import DailyEmissionSeries, Sector

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def flat_series(
    total: float,
    start: date,
    n_days: int,
    country: str = "CHN",
    sector: Sector = Sector.POWER,
    zero_feb29: bool = False,
) -> DailyEmissionSeries:
    """A contiguous series carrying `total` tonnes spread over its days.

    With zero_feb29 the mass sits entirely on comparison days, which keeps
    window sums exact when the range includes the leap day.
    """
    values = np.full(n_days, total / n_days)
    if zero_feb29:
        days = [date.fromordinal(start.toordinal() + i) for i in range(n_days)]
        mask = np.array([not (d.month == 2 and d.day == 29) for d in days])
        values = np.where(mask, total / mask.sum(), 0.0)
    return DailyEmissionSeries(country, sector, start, values)
