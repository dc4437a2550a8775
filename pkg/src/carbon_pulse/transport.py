"""Ground-transport emission changes from city congestion levels.

A saturating curve maps the congestion level (percent extra travel time,
zero meaning free-flowing traffic rather than empty roads) to a car-count
proxy. Daily relative emission changes equal the relative change of the
proxy; city changes aggregate to countries weighted by each city's share of
road-transport emissions.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np
from scipy import optimize, stats

from .core import ConfigError, DomainError


class FitError(RuntimeError):
    """The traffic-curve regression could not produce usable parameters."""


@dataclass(frozen=True)
class SigmoidParams:
    """Saturating congestion-to-traffic curve q = a + b*x^c / (d^c + x^c).

    `a` is the free-flow car-count floor, `b` the span to saturation, `d`
    the half-saturation congestion level and `c` the shape exponent.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        if self.a < 0:
            raise DomainError(f"car-count floor must be non-negative, got {self.a}")
        if self.b <= 0 or self.c <= 0 or self.d <= 0:
            raise DomainError("span, exponent and half-saturation must be positive")


def traffic_proxy(x: np.ndarray | float, params: SigmoidParams) -> np.ndarray | float:
    """Car-count proxy at congestion level x (non-negative, percent)."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise DomainError("congestion level must be non-negative")
    out = params.a + params.b * _saturation(x_arr, params.c, params.d)
    return float(out) if np.isscalar(x) else out


def _saturation(x: np.ndarray, c: float, d: float) -> np.ndarray:
    """x^c / (d^c + x^c) for non-negative x and positive c, d."""
    xc = np.power(x, c)
    return xc / (d**c + xc)


@dataclass
class CongestionSeries:
    city: str
    country: str
    start: date
    values: np.ndarray  # daily mean congestion, percent

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.values < 0):
            raise DomainError(f"negative congestion for {self.city}")


@dataclass(frozen=True)
class CityWeight:
    city: str
    country: str
    weight_mt: float

    def __post_init__(self) -> None:
        if self.weight_mt < 0:
            raise DomainError(f"negative city weight for {self.city}")


@dataclass
class TrafficFit:
    """Fitted curve with a linearized residual-variance prediction interval."""

    params: SigmoidParams
    r_squared: float
    residual_rms: float
    residual_variance: float  # unbiased, dof = n - 4
    covariance: np.ndarray  # parameter covariance from the linearization
    n_observations: int

    def predict(self, x: np.ndarray | float) -> np.ndarray | float:
        return traffic_proxy(x, self.params)

    def prediction_interval(self, x: float, level: float = 0.68) -> tuple[float, float]:
        """Two-sided prediction interval for a new observation at x."""
        grad = _gradient(np.asarray([x], dtype=float), self.params)[0]
        var = self.residual_variance * (1.0 + grad @ self.covariance @ grad / self.residual_variance)
        dof = self.n_observations - 4
        half = stats.t.ppf(0.5 + level / 2.0, dof) * np.sqrt(var)
        center = self.predict(x)
        return float(center - half), float(center + half)


def _gradient(x: np.ndarray, params: SigmoidParams) -> np.ndarray:
    """Jacobian of the curve w.r.t. (a, b, c, d), rows per observation."""
    a, b, c, d = params.a, params.b, params.c, params.d
    xc = np.where(x > 0, np.power(x, c), 0.0)
    dc = d**c
    denom = dc + xc
    g = np.zeros((len(x), 4))
    g[:, 0] = 1.0
    g[:, 1] = xc / denom
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.where(x > 0, np.log(x), 0.0)
    g[:, 2] = b * dc * xc * (logx - np.log(d)) / denom**2
    g[:, 3] = -b * xc * c * d ** (c - 1.0) / denom**2
    return g


def fit_traffic_curve(x: np.ndarray, q: np.ndarray, max_evaluations: int = 2000) -> TrafficFit:
    """Least-squares fit of the congestion-to-traffic curve.

    Positivity of b, c, d is enforced by optimizing their logarithms with a
    trust-region reflective solver (damped Gauss-Newton steps). Start
    values: a at the smallest observed q, b at the observed span, c = 2,
    d at the median congestion.
    """
    x = np.asarray(x, dtype=float)
    q = np.asarray(q, dtype=float)
    if len(x) != len(q):
        raise DomainError("x and q must have equal length")
    if len(x) < 8:
        raise FitError(f"need at least 8 observations, got {len(x)}")
    positive = x[x > 0]
    if len(positive) == 0 or positive.max() < 2.0 * positive.min():
        raise FitError("congestion levels must span at least a 2x range")
    if np.ptp(q) == 0.0:
        raise FitError("constant car counts cannot identify the curve")

    q_span = float(q.max() - q.min())
    theta0 = np.array([
        float(q.min()),
        np.log(q_span),
        np.log(2.0),
        np.log(max(float(np.median(x)), 1e-9)),
    ])

    def residuals(theta: np.ndarray) -> np.ndarray:
        return theta[0] + np.exp(theta[1]) * _saturation(x, np.exp(theta[2]), np.exp(theta[3])) - q

    result = optimize.least_squares(residuals, theta0, method="trf", max_nfev=max_evaluations)
    if not result.success:
        raise FitError(f"no convergence after {max_evaluations} evaluations: {result.message}")

    a_hat = float(result.x[0])
    if a_hat < -1e-9 * max(q_span, 1.0):
        raise FitError(f"fitted car-count floor is negative: {a_hat}")
    params = SigmoidParams(max(a_hat, 0.0), float(np.exp(result.x[1])), float(np.exp(result.x[2])), float(np.exp(result.x[3])))
    resid = traffic_proxy(x, params) - q
    ss_res = float(resid @ resid)
    ss_tot = float(((q - q.mean()) ** 2).sum())
    r_squared = 1.0 - ss_res / ss_tot
    dof = len(x) - 4
    if dof <= 0:
        raise FitError("not enough degrees of freedom for an interval model")
    s2 = ss_res / dof
    jac = _gradient(x, params)
    jtj = jac.T @ jac
    try:
        cov = s2 * np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        raise FitError("singular normal equations at the optimum") from None
    return TrafficFit(
        params=params,
        r_squared=r_squared,
        residual_rms=float(np.sqrt(ss_res / len(x))),
        residual_variance=s2,
        covariance=cov,
        n_observations=len(x),
    )


def city_change_series(x_2020: CongestionSeries, x_2019: CongestionSeries, params: SigmoidParams) -> np.ndarray:
    """Daily relative emission change: proxy(2020) / proxy(2019) - 1.

    Series must already be date-aligned (equal length, matching day order).
    """
    if params.a == 0:
        raise ConfigError("a zero car-count floor makes the change ratio unsafe")
    if len(x_2020.values) != len(x_2019.values):
        raise DomainError(f"misaligned congestion series for {x_2020.city}")
    q_2020 = traffic_proxy(x_2020.values, params)
    q_2019 = traffic_proxy(x_2019.values, params)
    return q_2020 / q_2019 - 1.0


def national_change(city_changes: dict[str, np.ndarray], weights: list[CityWeight]) -> np.ndarray:
    """Emission-weighted mean of city change series for one country."""
    weight_by_city = {w.city: w.weight_mt for w in weights}
    total = 0.0
    acc: np.ndarray | None = None
    for city in sorted(city_changes):
        w = weight_by_city.get(city, 0.0)
        if w == 0.0:
            continue
        contribution = w * city_changes[city]
        acc = contribution if acc is None else acc + contribution
        total += w
    if acc is None or total == 0.0:
        raise DomainError("no city with positive weight")
    return acc / total


def peer_group_change(peer_changes: dict[str, np.ndarray], peer_weights: dict[str, float]) -> np.ndarray:
    """Fallback for countries without congestion data.

    Emission-weighted mean change of the peer group (EU members follow the
    estimated EU countries, everyone else the whole estimated set).
    """
    if not peer_changes:
        raise ConfigError("empty peer group")
    total = 0.0
    acc: np.ndarray | None = None
    for country in sorted(peer_changes):
        w = peer_weights.get(country, 0.0)
        contribution = w * peer_changes[country]
        acc = contribution if acc is None else acc + contribution
        total += w
    if acc is None or total == 0.0:
        raise ConfigError("peer group has zero total weight")
    return acc / total
