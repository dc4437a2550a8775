"""Error propagation and seeded Monte Carlo confidence intervals.

Percentage uncertainties combine in quadrature: a mass-weighted quadrature
for sums of sectors and a plain quadrature for products. Monte Carlo
intervals are the empirical 16th/84th percentiles of a model evaluated on
independently drawn inputs; every trial derives its own random stream from
the run seed and the trial index, so results do not depend on execution
order or thread count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.stats import norm

from .core import DomainError, ParseError


def combine_sum(u_percent: list[float], mu: list[float]) -> float:
    """Uncertainty of a sum: sqrt(sum((U_s * mu_s)^2)) / |sum(mu_s)|.

    The squared terms follow the standard quadrature for independent
    absolute uncertainties U_s * mu_s.
    """
    if len(u_percent) != len(mu):
        raise DomainError("uncertainty and mass lists differ in length")
    if not u_percent:
        raise DomainError("nothing to combine")
    mu_arr = np.asarray(mu, dtype=float)
    u_arr = np.asarray(u_percent, dtype=float)
    if np.any(u_arr < 0):
        raise DomainError("negative percentage uncertainty")
    denom = abs(mu_arr.sum())
    if denom == 0:
        raise DomainError("masses sum to zero, relative uncertainty undefined")
    return float(np.sqrt(((u_arr * mu_arr) ** 2).sum()) / denom)


def combine_mult(u_percent: list[float]) -> float:
    """Uncertainty of a product: sqrt(sum(U_i^2))."""
    if not u_percent:
        raise DomainError("nothing to combine")
    u_arr = np.asarray(u_percent, dtype=float)
    if np.any(u_arr < 0):
        raise DomainError("negative percentage uncertainty")
    return float(np.sqrt((u_arr**2).sum()))


@dataclass(frozen=True)
class GaussianInput:
    """An uncertain scalar input, optionally truncated at physical bounds."""

    mean: float
    sigma: float
    lower: float | None = None
    upper: float | None = None

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise DomainError(f"negative sigma: {self.sigma}")
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise DomainError("truncation bounds reversed")

    def draw(self, rng: np.random.Generator) -> float:
        if self.sigma == 0:
            return self.mean
        for _ in range(1000):
            x = rng.normal(self.mean, self.sigma)
            if (self.lower is None or x >= self.lower) and (self.upper is None or x <= self.upper):
                return float(x)
        raise DomainError("truncated Gaussian rejected 1000 consecutive draws")


@dataclass
class CiResult:
    point: float
    lower: float
    upper: float
    n_trials: int
    seed: int
    n_rejected: int = 0

    def __post_init__(self) -> None:
        if not self.lower <= self.point <= self.upper:
            raise DomainError("confidence interval does not bracket the point estimate")


class TrialFailure(Exception):
    """Raised by a model to reject one Monte Carlo draw."""


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    # Counter-based: each trial's stream depends only on (seed, trial).
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def monte_carlo_ci(
    model: Callable[[dict[str, float]], float],
    inputs: dict[str, GaussianInput],
    n_trials: int = 10000,
    seed: int = 0,
    level: float = 0.68,
    threads: int = 1,
) -> CiResult:
    """Empirical confidence interval of `model` under Gaussian input noise.

    The point estimate evaluates the model at the input means. Trials where
    the model raises TrialFailure are dropped; more than 1% drops aborts the
    run since the interval would no longer be trustworthy.
    """
    if n_trials < 1000:
        raise DomainError(f"need at least 1000 trials, got {n_trials}")
    if not 0 < level < 1:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    names = sorted(inputs)

    def run_trial(trial: int) -> float | None:
        rng = _trial_rng(seed, trial)
        draw = {name: inputs[name].draw(rng) for name in names}
        try:
            return float(model(draw))
        except TrialFailure:
            return None

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            raw = list(pool.map(run_trial, range(n_trials)))
    else:
        raw = [run_trial(t) for t in range(n_trials)]

    samples = np.array([r for r in raw if r is not None], dtype=float)
    rejected = n_trials - len(samples)
    if rejected > 0.01 * n_trials:
        raise DomainError(f"{rejected} of {n_trials} trials rejected, interval unreliable")

    point = float(model({name: inputs[name].mean for name in names}))
    tail = (1.0 - level) / 2.0 * 100.0
    lower, upper = np.percentile(samples, [tail, 100.0 - tail])
    return CiResult(
        point=point,
        lower=float(min(lower, point)),
        upper=float(max(upper, point)),
        n_trials=n_trials,
        seed=seed,
        n_rejected=rejected,
    )


def percentile_standard_error(samples: np.ndarray, percentile: float) -> float:
    """Asymptotic Monte Carlo standard error of an empirical percentile.

    Uses the Gaussian density approximation at the quantile, which is exact
    enough for the near-linear models propagated here.
    """
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    if n < 2:
        raise DomainError("need at least two samples")
    p = percentile / 100.0
    if not 0 < p < 1:
        raise DomainError("percentile must be strictly between 0 and 100")
    sigma = float(samples.std(ddof=1))
    if sigma == 0:
        return 0.0
    density = norm.pdf(norm.ppf(p)) / sigma
    return float(np.sqrt(p * (1.0 - p) / n) / density)


@dataclass(frozen=True)
class LedgerItem:
    item: str
    u_percent: float
    sigma_convention: str  # "1-sigma" or "2-sigma"
    mu_mt_per_day: float | None

    def __post_init__(self) -> None:
        if self.u_percent < 0:
            raise DomainError(f"negative uncertainty for {self.item}")
        if self.sigma_convention not in ("1-sigma", "2-sigma"):
            raise DomainError(f"unknown sigma convention {self.sigma_convention!r}")

    def one_sigma_percent(self) -> float:
        return self.u_percent / 2.0 if self.sigma_convention == "2-sigma" else self.u_percent


def load_ledger(path: Path) -> dict[str, LedgerItem]:
    """Read the uncertainty ledger fixture."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        expected = ["item", "u_percent", "sigma_convention", "mu_mt_per_day"]
        if reader.fieldnames != expected:
            raise ParseError(f"{path.name}: expected header {','.join(expected)}")
        items: dict[str, LedgerItem] = {}
        for row in reader:
            mu = float(row["mu_mt_per_day"]) if row["mu_mt_per_day"] else None
            items[row["item"]] = LedgerItem(row["item"], float(row["u_percent"]), row["sigma_convention"], mu)
    return items
