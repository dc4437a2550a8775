"""Raw power-feed parsing and daily-matrix anomaly cleaning.

A feed delivers sub-daily generation observations per production category.
One calendar day of one feed forms a daily power matrix: one column vector
per category with 24*60/interval slots. Cleaning works column by column:
not-a-number slots are zeroed for detection only, values deviating from the
column median by more than three scaled MADs (less a 1e-6 float guard) are
replaced by the mean of the remaining elements, and missing slots are
preserved untouched and kept out of all means.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.special import erfcinv

from .core import ConfigError, DomainError, ParseError

#: Scaling that makes the median absolute deviation estimate a Gaussian sigma.
MAD_SCALE = float(-1.0 / (math.sqrt(2.0) * erfcinv(1.5)))

#: Detection threshold: |x - median| > 3 * scaled MAD - this float guard.
MAD_EPSILON = 1e-6

VALID_INTERVALS = (15, 30, 60)


class Quality(Enum):
    VALUE = "value"
    MISSING = "missing"
    NOT_A_NUMBER = "nan"


@dataclass(frozen=True)
class RawObservation:
    source_id: str
    timestamp: datetime
    interval_minutes: int
    category: str
    value: float | None
    quality: Quality


@dataclass
class Column:
    """One category's slot vector for a single day."""

    values: np.ndarray  # float, NaN where no numeric value exists
    quality: np.ndarray  # Quality codes, object dtype


@dataclass
class DailyPowerMatrix:
    day: date
    sampling_times: int
    columns: dict[str, Column]


@dataclass
class ColumnCleanStats:
    day: date
    category: str
    duplicates_averaged: int = 0
    anomalies_replaced: int = 0
    missing_preserved: int = 0
    replacement_value: float | None = None


@dataclass
class CleanReport:
    entries: list[ColumnCleanStats] = field(default_factory=list)
    omitted_columns: list[tuple[date, str]] = field(default_factory=list)

    def total_anomalies(self) -> int:
        return sum(e.anomalies_replaced for e in self.entries)


@dataclass(frozen=True)
class FeedSchema:
    schema_id: str
    timestamp_column: str
    interval_column: str
    category_column: str
    value_column: str
    missing_tokens: tuple[str, ...]
    nan_tokens: tuple[str, ...]

    @property
    def header(self) -> list[str]:
        return [self.timestamp_column, self.interval_column, self.category_column, self.value_column]


#: The default feed layout; sentinel strings are matched bit-exactly.
STANDARD_SCHEMA = FeedSchema(
    schema_id="standard",
    timestamp_column="timestamp_utc",
    interval_column="interval_min",
    category_column="category",
    value_column="value",
    missing_tokens=("n/e",),
    nan_tokens=("N/A", "void"),
)


@dataclass
class FeedRegistry:
    """Declared feed files and their schemas, loaded from a registry file."""

    schemas: dict[str, FeedSchema]
    feeds: list[dict[str, str]]  # file, schema, country

    @classmethod
    def load(cls, path: Path) -> "FeedRegistry":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        schemas = {}
        for sid, entry in raw.get("schemas", {}).items():
            cols = entry["columns"]
            schemas[sid] = FeedSchema(
                schema_id=sid,
                timestamp_column=cols["timestamp"],
                interval_column=cols["interval"],
                category_column=cols["category"],
                value_column=cols["value"],
                missing_tokens=tuple(entry["missing"]),
                nan_tokens=tuple(entry["not_a_number"]),
            )
        return cls(schemas=schemas, feeds=list(raw.get("feeds", [])))

    def schema(self, schema_id: str) -> FeedSchema:
        try:
            return self.schemas[schema_id]
        except KeyError:
            raise ConfigError(f"unknown feed schema id: {schema_id!r}") from None


def parse_power_feed(path: Path, schema: FeedSchema) -> list[RawObservation]:
    """Parse one feed file into observations, one per row.

    Sentinel strings become Missing / NotANumber observations; any other
    unparseable numeric cell degrades to NotANumber, an absent cell to
    Missing.
    """
    observations: list[RawObservation] = []
    source_id = path.stem
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path.name}: empty feed file") from None
        if header != schema.header:
            raise ParseError(f"{path.name}: expected columns {','.join(schema.header)}, got {','.join(header)}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise ParseError(f"{path.name}:{lineno}: expected 4 fields, got {len(row)}")
            ts_raw, interval_raw, category, value_raw = row
            try:
                ts = datetime.fromisoformat(ts_raw).replace(tzinfo=timezone.utc)
                interval = int(interval_raw)
            except ValueError:
                raise ParseError(f"{path.name}:{lineno}: bad timestamp or interval") from None
            if interval not in VALID_INTERVALS:
                raise ParseError(f"{path.name}:{lineno}: interval must be one of {VALID_INTERVALS}")
            if value_raw in schema.missing_tokens or value_raw == "":
                quality, value = Quality.MISSING, None
            elif value_raw in schema.nan_tokens:
                quality, value = Quality.NOT_A_NUMBER, None
            else:
                try:
                    value = float(value_raw)
                    quality = Quality.VALUE
                except ValueError:
                    quality, value = Quality.NOT_A_NUMBER, None
            observations.append(RawObservation(source_id, ts, interval, category, value, quality))
    return observations


def resolve_duplicates(observations: list[RawObservation]) -> list[RawObservation]:
    """Collapse repeated (timestamp, category) keys to a single observation.

    Numeric duplicates average; a mix keeps the mean of the numeric copies;
    all-non-numeric duplicates collapse to one observation (NotANumber wins
    over Missing because the slot did carry a cell).
    """
    grouped: dict[tuple[datetime, str], list[RawObservation]] = {}
    order: list[tuple[datetime, str]] = []
    for obs in observations:
        key = (obs.timestamp, obs.category)
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        grouped[key].append(obs)

    resolved: list[RawObservation] = []
    for key in order:
        copies = grouped[key]
        if len(copies) == 1:
            resolved.append(copies[0])
            continue
        numeric = [c.value for c in copies if c.quality is Quality.VALUE]
        first = copies[0]
        if numeric:
            mean = float(np.mean(numeric))
            resolved.append(RawObservation(first.source_id, first.timestamp, first.interval_minutes, first.category, mean, Quality.VALUE))
        else:
            quality = Quality.NOT_A_NUMBER if any(c.quality is Quality.NOT_A_NUMBER for c in copies) else Quality.MISSING
            resolved.append(RawObservation(first.source_id, first.timestamp, first.interval_minutes, first.category, None, quality))
    return resolved


def build_daily_matrices(observations: list[RawObservation]) -> tuple[list[DailyPowerMatrix], dict[date, dict[str, int]]]:
    """Arrange observations into per-day matrices and count averaged duplicates."""
    if not observations:
        return [], {}
    intervals = {obs.interval_minutes for obs in observations}
    if len(intervals) != 1:
        raise ParseError(f"mixed sampling intervals in one feed: {sorted(intervals)}")
    interval = intervals.pop()
    slots = 24 * 60 // interval

    raw_by_day: dict[date, list[RawObservation]] = {}
    for obs in observations:
        raw_by_day.setdefault(obs.timestamp.date(), []).append(obs)

    matrices: list[DailyPowerMatrix] = []
    dup_counts: dict[date, dict[str, int]] = {}
    for day in sorted(raw_by_day):
        day_obs = raw_by_day[day]
        seen: dict[tuple[datetime, str], int] = {}
        for obs in day_obs:
            seen[(obs.timestamp, obs.category)] = seen.get((obs.timestamp, obs.category), 0) + 1
        dup_counts[day] = {}
        for (ts, category), n in seen.items():
            if n > 1:
                dup_counts[day][category] = dup_counts[day].get(category, 0) + (n - 1)

        columns: dict[str, Column] = {}
        for obs in resolve_duplicates(day_obs):
            if obs.category not in columns:
                columns[obs.category] = Column(
                    values=np.full(slots, np.nan),
                    quality=np.full(slots, Quality.MISSING, dtype=object),
                )
            col = columns[obs.category]
            slot = (obs.timestamp.hour * 60 + obs.timestamp.minute) // interval
            if obs.quality is Quality.VALUE:
                col.values[slot] = obs.value
            col.quality[slot] = obs.quality
        matrices.append(DailyPowerMatrix(day=day, sampling_times=slots, columns=columns))
    return matrices, dup_counts


def scaled_mad(a: np.ndarray) -> float:
    """Median absolute deviation scaled to a Gaussian sigma estimate.

    NaN entries stand in for not-a-number slots and are treated as 0 before
    the medians are taken.
    """
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        raise DomainError("scaled_mad needs a non-empty vector")
    a = np.where(np.isnan(a), 0.0, a)
    return MAD_SCALE * float(np.median(np.abs(a - np.median(a))))


def clean_column(a: np.ndarray) -> tuple[np.ndarray, int, float | None]:
    """Replace anomalous elements by the mean of the remaining ones.

    Detection and replacement repeat until no element is flagged, so a
    cleaned column is a fixpoint and cleaning is idempotent. Returns
    (cleaned vector, number of distinct slots replaced, last replacement
    value).

    A column is returned as-is once the detection threshold 3*MAD - 1e-6
    is no longer positive: below that point the rule would flag every
    element, including exact-median ones, and leave no donors for the
    replacement mean. This covers constant columns (MAD exactly zero) and
    near-constant ones where the float guard dominates.
    """
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        raise DomainError("clean_column needs a non-empty vector")
    work = np.where(np.isnan(a), 0.0, a)
    ever_flagged = np.zeros(work.shape, dtype=bool)
    replacement: float | None = None
    for _ in range(100):
        threshold = 3.0 * scaled_mad(work) - MAD_EPSILON
        if threshold <= 0.0:
            break
        deviation = np.abs(work - np.median(work))
        flagged = deviation > threshold
        if not flagged.any():
            break
        if flagged.all():
            raise AssertionError("every element flagged despite positive threshold")
        # Sequential sum: numpy's pairwise blocking may change between
        # versions, and the replacement must stay bit-stable for goldens.
        donors = work[~flagged].tolist()
        replacement = sum(donors) / len(donors)
        work[flagged] = replacement
        ever_flagged |= flagged
    else:
        raise AssertionError("column cleaning did not converge")
    return work, int(ever_flagged.sum()), replacement


def clean_matrix(matrix: DailyPowerMatrix, duplicates: dict[str, int] | None = None) -> tuple[DailyPowerMatrix, list[ColumnCleanStats]]:
    """Clean every column of a daily matrix, preserving missing slots."""
    duplicates = duplicates or {}
    cleaned_columns: dict[str, Column] = {}
    stats: list[ColumnCleanStats] = []
    for category in sorted(matrix.columns):
        col = matrix.columns[category]
        present = col.quality != Quality.MISSING
        entry = ColumnCleanStats(
            day=matrix.day,
            category=category,
            duplicates_averaged=duplicates.get(category, 0),
            missing_preserved=int((~present).sum()),
        )
        new_values = col.values.copy()
        new_quality = col.quality.copy()
        if present.any():
            cleaned, replaced, replacement = clean_column(col.values[present])
            new_values[present] = cleaned
            new_quality[present] = Quality.VALUE
            entry.anomalies_replaced = replaced
            entry.replacement_value = replacement
        cleaned_columns[category] = Column(values=new_values, quality=new_quality)
        stats.append(entry)
    return DailyPowerMatrix(matrix.day, matrix.sampling_times, cleaned_columns), stats


def aggregate_daily(matrix: DailyPowerMatrix, report: CleanReport | None = None) -> dict[str, float]:
    """Daily generation per category: mean of the cleaned column x sampling times.

    Missing slots stay out of the mean; a fully missing column is omitted
    and recorded on the report.
    """
    out: dict[str, float] = {}
    for category in sorted(matrix.columns):
        col = matrix.columns[category]
        present = col.quality != Quality.MISSING
        if not present.any():
            if report is not None:
                report.omitted_columns.append((matrix.day, category))
            continue
        out[category] = float(col.values[present].mean()) * matrix.sampling_times
    return out


def ingest_feed(path: Path, schema: FeedSchema, report: CleanReport | None = None) -> dict[date, dict[str, float]]:
    """Full feed pipeline: parse, de-duplicate, clean, aggregate per day."""
    observations = parse_power_feed(path, schema)
    matrices, dup_counts = build_daily_matrices(observations)
    daily: dict[date, dict[str, float]] = {}
    for matrix in matrices:
        cleaned, stats = clean_matrix(matrix, dup_counts.get(matrix.day))
        if report is not None:
            report.entries.extend(stats)
        daily[matrix.day] = aggregate_daily(cleaned, report)
    return daily
