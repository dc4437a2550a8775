"""Deterministic output serialization and summary tables.

All tabular output is UTF-8 CSV with header rows, written in a fixed
canonical order with fixed decimal formatting so identical runs produce
identical bytes. Summary masses use six decimals; the daily series file
uses twelve so that independently re-summing it reproduces the summary
totals well inside 1e-6 Mt.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .assembly import SeriesPair, WindowSummary, aggregate
from .core import ConfigError, RegionGroup, Sector, TONNES_PER_MT, align_comparison_date

REGION_ORDER = [
    RegionGroup.CHINA,
    RegionGroup.INDIA,
    RegionGroup.US,
    RegionGroup.EU27UK,
    RegionGroup.RUSSIA,
    RegionGroup.JAPAN,
    RegionGroup.BRAZIL,
    RegionGroup.ROW,
]

NATIONAL_SECTOR_ORDER = [
    Sector.POWER,
    Sector.GROUND_TRANSPORT,
    Sector.INDUSTRY,
    Sector.RESIDENTIAL,
    Sector.DOMESTIC_AVIATION,
]

S2_HEADER = [
    "region",
    "power",
    "transport",
    "industry_with_process",
    "residential",
    "domestic_aviation",
    "sum",
    "growth_pct",
]

MONTHLY_STYLES = {
    "s3": Sector.POWER,
    "s4": Sector.GROUND_TRANSPORT,
    "s6": Sector.INDUSTRY,
}


def fmt(x: float, decimals: int = 6) -> str:
    """Fixed-decimal float text with negative zero normalized away."""
    if x == 0:
        x = 0.0
    return f"{x:.{decimals}f}"


def running_mean_7d(values: np.ndarray) -> np.ndarray:
    """Seven-day centered running mean with symmetric shrinking edges.

    The window radius shrinks near the edges so the first and last outputs
    equal the raw values.
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    out = np.empty(n)
    for i in range(n):
        radius = min(3, i, n - 1 - i)
        out[i] = values[i - radius : i + radius + 1].mean()
    return out


def month_windows(start: date, end: date) -> list[tuple[int, date, date]]:
    """(month number, clipped month start, clipped month end) covering the window."""
    windows = []
    cursor = date(start.year, start.month, 1)
    while cursor <= end:
        if cursor.month == 12:
            nxt = date(cursor.year + 1, 1, 1)
        else:
            nxt = date(cursor.year, cursor.month + 1, 1)
        windows.append((cursor.month, max(cursor, start), min(nxt - timedelta(days=1), end)))
        cursor = nxt
    return windows


def write_daily_csv(path: Path, pairs: list[SeriesPair], start: date, end: date) -> int:
    """The per-day comparison file: one row per (country, sector, day).

    The 2019 columns are empty on Feb 29, which has no aligned counterpart.
    Returns the number of data rows written.
    """
    rows = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "country", "sector", "mt_co2_2019", "mt_co2_2020", "diff_mt"])
        for pair in sorted(pairs, key=lambda p: (p.current.country, p.current.sector.value)):
            day = start
            while day <= end:
                current_mt = pair.current.value_on(day) / TONNES_PER_MT
                aligned = align_comparison_date(day)
                if aligned is None:
                    base_text = ""
                    diff_text = ""
                else:
                    base_mt = pair.baseline.value_on(aligned) / TONNES_PER_MT
                    base_text = fmt(base_mt, 12)
                    diff_text = fmt(current_mt - base_mt, 12)
                writer.writerow([day.isoformat(), pair.current.country, pair.current.sector.value, base_text, fmt(current_mt, 12), diff_text])
                rows += 1
                day += timedelta(days=1)
    return rows


@dataclass
class S2Table:
    """Region-by-sector window changes plus bunker and global rows."""

    cells: dict[tuple[RegionGroup, Sector], WindowSummary]
    international_aviation: WindowSummary
    international_shipping: WindowSummary

    def row_summary(self, region: RegionGroup) -> WindowSummary:
        total = WindowSummary(key=region.value)
        for sector in NATIONAL_SECTOR_ORDER:
            cell = self.cells.get((region, sector))
            if cell is not None:
                total.sum_2019_t += cell.sum_2019_t
                total.sum_2020_t += cell.sum_2020_t
        return total

    def column_summary(self, sector: Sector) -> WindowSummary:
        total = WindowSummary(key=sector.value)
        for region in REGION_ORDER:
            cell = self.cells.get((region, sector))
            if cell is not None:
                total.sum_2019_t += cell.sum_2019_t
                total.sum_2020_t += cell.sum_2020_t
        return total

    def national_summary(self) -> WindowSummary:
        total = WindowSummary(key="Sum")
        for region in REGION_ORDER:
            row = self.row_summary(region)
            total.sum_2019_t += row.sum_2019_t
            total.sum_2020_t += row.sum_2020_t
        return total

    def global_summary(self) -> WindowSummary:
        total = self.national_summary()
        total.key = "Global"
        for bunker in (self.international_aviation, self.international_shipping):
            total.sum_2019_t += bunker.sum_2019_t
            total.sum_2020_t += bunker.sum_2020_t
        return total


def build_s2_table(
    national_pairs: list[SeriesPair],
    aviation_pairs: list[SeriesPair],
    shipping_pairs: list[SeriesPair],
    regions: dict[str, RegionGroup],
    start: date,
    end: date,
) -> S2Table:
    cells: dict[tuple[RegionGroup, Sector], WindowSummary] = {}
    for sector in NATIONAL_SECTOR_ORDER:
        sector_pairs = [p for p in national_pairs if p.current.sector is sector]
        if not sector_pairs:
            continue
        for key, summary in aggregate(sector_pairs, start, end, by="region", regions=regions).items():
            cells[(RegionGroup(key), sector)] = summary

    def bunker_total(pairs: list[SeriesPair], label: str) -> WindowSummary:
        total = WindowSummary(key=label)
        if pairs:
            grouped = aggregate(pairs, start, end, by="global")
            total.sum_2019_t = grouped["Global"].sum_2019_t
            total.sum_2020_t = grouped["Global"].sum_2020_t
        return total

    return S2Table(
        cells=cells,
        international_aviation=bunker_total(aviation_pairs, "International aviation"),
        international_shipping=bunker_total(shipping_pairs, "International shipping"),
    )


def _growth_text(summary: WindowSummary) -> str:
    return fmt(summary.growth * 100.0) if summary.sum_2019_t else ""


def write_s2_csv(path: Path, table: S2Table) -> None:
    empty = (
        not table.cells
        and table.international_aviation.sum_2019_t == 0
        and table.international_shipping.sum_2019_t == 0
    )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(S2_HEADER)
        if empty:
            return
        for region in REGION_ORDER:
            row = [region.value]
            for sector in NATIONAL_SECTOR_ORDER:
                cell = table.cells.get((region, sector))
                row.append(fmt(cell.diff_t / TONNES_PER_MT) if cell is not None else "")
            summary = table.row_summary(region)
            row.append(fmt(summary.diff_t / TONNES_PER_MT))
            row.append(_growth_text(summary))
            writer.writerow(row)

        sum_row = ["Sum"]
        for sector in NATIONAL_SECTOR_ORDER:
            sum_row.append(fmt(table.column_summary(sector).diff_t / TONNES_PER_MT))
        national = table.national_summary()
        sum_row.append(fmt(national.diff_t / TONNES_PER_MT))
        sum_row.append(_growth_text(national))
        writer.writerow(sum_row)

        growth_row = ["Growth Rates (%)"]
        for sector in NATIONAL_SECTOR_ORDER:
            growth_row.append(_growth_text(table.column_summary(sector)))
        growth_row.extend([_growth_text(national), ""])
        writer.writerow(growth_row)

        for label, bunker in (
            ("International aviation", table.international_aviation),
            ("International shipping", table.international_shipping),
        ):
            row = [label, "", "", "", "", ""]
            row.append(fmt(bunker.diff_t / TONNES_PER_MT))
            row.append(_growth_text(bunker))
            writer.writerow(row)

        global_summary = table.global_summary()
        writer.writerow(
            ["Global", "", "", "", "", "", fmt(global_summary.diff_t / TONNES_PER_MT), _growth_text(global_summary)]
        )


def write_monthly_csv(
    path: Path,
    pairs: list[SeriesPair],
    regions: dict[str, RegionGroup],
    start: date,
    end: date,
) -> None:
    """Monthly growth table for one sector: regions x months plus totals."""
    months = month_windows(start, end)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        month_names = [date(2020, m, 1).strftime("%b") for m, _, _ in months]
        writer.writerow(["region", *month_names, "window"])
        if not pairs:
            return

        def growth_text(summary: WindowSummary | None) -> str:
            if summary is None or summary.sum_2019_t == 0:
                return ""
            return fmt(summary.growth * 100.0)

        monthly_by_region = [aggregate(pairs, lo, hi, by="region", regions=regions) for _, lo, hi in months]
        window_by_region = aggregate(pairs, start, end, by="region", regions=regions)
        present = {key for grouped in monthly_by_region for key in grouped}
        for region in REGION_ORDER:
            if region.value not in present:
                continue
            row = [region.value]
            row.extend(growth_text(grouped.get(region.value)) for grouped in monthly_by_region)
            row.append(growth_text(window_by_region.get(region.value)))
            writer.writerow(row)

        world_row = ["World"]
        for _, lo, hi in months:
            world_row.append(growth_text(aggregate(pairs, lo, hi, by="global")["Global"]))
        world_row.append(growth_text(aggregate(pairs, start, end, by="global")["Global"]))
        writer.writerow(world_row)


def write_fig1_csv(path: Path, pairs: list[SeriesPair], start: date, end: date) -> None:
    """Plot-ready global daily difference, seven-day running mean, in Mt."""
    if not pairs:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh).writerow(["date", "global_diff_mt_7day_mean"])
        return
    days = []
    day = start
    while day <= end:
        days.append(day)
        day += timedelta(days=1)
    diffs = []
    plot_days = []
    for day in days:
        aligned = align_comparison_date(day)
        if aligned is None:
            continue
        diff = 0.0
        for pair in pairs:
            diff += pair.current.value_on(day) - pair.baseline.value_on(aligned)
        plot_days.append(day)
        diffs.append(diff / TONNES_PER_MT)
    smooth = running_mean_7d(np.asarray(diffs))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", "global_diff_mt_7day_mean"])
        for day, value in zip(plot_days, smooth):
            writer.writerow([day.isoformat(), fmt(value)])


def render_table(csv_path: Path) -> str:
    """Align a summary CSV as monospace text for terminal display."""
    if not csv_path.exists():
        raise ConfigError(f"missing run output: {csv_path}")
    with open(csv_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return ""
    widths = [max(len(row[i]) for row in rows if i < len(row)) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        padded = [cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i]) for i, cell in enumerate(row)]
        lines.append("  ".join(padded).rstrip())
    return "\n".join(lines) + "\n"


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
