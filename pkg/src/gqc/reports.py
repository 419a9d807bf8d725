"""Tabular results: validated tables, CSV emission, and static SVG plots.

CSV files contain only the header row and the data rows, formatted with
12 significant digits, so reruns with the same seed are byte-identical.
Run metadata (version, seed, tolerances, timestamp) goes to a sidecar
``<name>.meta.json`` where the timestamp cannot perturb comparisons.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError

__all__ = ["ReportTable", "format_cell", "table_to_csv", "emit_report"]

_SVG_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                "#8c564b", "#17becf", "#7f7f7f")


@dataclass(eq=False)
class ReportTable:
    """Named columns over homogeneous rows plus free-form run metadata."""

    columns: tuple
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(str(c) for c in self.columns)
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValidationError(
                    f"report table: row {i} has {len(row)} cells for {width} columns")
            for j, cell in enumerate(row):
                if isinstance(cell, float) and not math.isfinite(cell):
                    raise ValidationError(
                        f"report table: non-finite value in row {i}, "
                        f"column {self.columns[j]!r}")

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def numeric_columns(self) -> tuple:
        if not self.rows:
            return ()
        probe = self.rows[0]
        return tuple(c for c, v in zip(self.columns, probe)
                     if isinstance(v, (int, float)) and not isinstance(v, bool))


def format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, int):
        return str(value)
    return str(value)


def table_to_csv(table: ReportTable) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _svg_line_plot(table: ReportTable, x_col: str, width: int = 640,
                   height: int = 420) -> str:
    """Minimal deterministic line plot: one polyline per numeric series."""
    series_names = [c for c in table.numeric_columns() if c != x_col]
    xs = [float(v) for v in table.column(x_col)]
    margin_l, margin_r, margin_t, margin_b = 60, 160, 20, 45
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b
    all_y = [float(v) for name in series_names for v in table.column(name)]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(all_y), max(all_y)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(x):
        return margin_l + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return margin_t + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{margin_l}" y1="{margin_t + plot_h}" x2="{margin_l + plot_w}" '
        f'y2="{margin_t + plot_h}" stroke="black"/>',
        f'<line x1="{margin_l}" y1="{margin_t}" x2="{margin_l}" '
        f'y2="{margin_t + plot_h}" stroke="black"/>',
    ]
    for k in range(5):
        xv = x_lo + k * (x_hi - x_lo) / 4
        yv = y_lo + k * (y_hi - y_lo) / 4
        parts.append(f'<text x="{px(xv):.1f}" y="{height - 18}" font-size="11" '
                     f'text-anchor="middle">{xv:.4g}</text>')
        parts.append(f'<text x="{margin_l - 6}" y="{py(yv):.1f}" font-size="11" '
                     f'text-anchor="end" dominant-baseline="middle">{yv:.4g}</text>')
    parts.append(f'<text x="{margin_l + plot_w / 2:.1f}" y="{height - 4}" '
                 f'font-size="12" text-anchor="middle">{x_col}</text>')
    for i, name in enumerate(series_names):
        color = _SVG_PALETTE[i % len(_SVG_PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(float(y)):.2f}"
                       for x, y in zip(xs, table.column(name)))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        ly = margin_t + 14 + 16 * i
        lx = margin_l + plot_w + 10
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 24}" y="{ly}" font-size="11">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_report(table: ReportTable, out_dir, basename: str,
                formats=("csv",), x_col: str = "t") -> list[Path]:
    """Write the table under deterministic filenames; returns the paths.

    ``csv`` always writes ``<basename>.csv`` plus ``<basename>.meta.json``.
    ``svg`` adds a line plot of every numeric series against ``x_col``,
    skipped when the table is empty or lacks that column.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    formats = set(formats)
    unknown = formats - {"csv", "svg"}
    if unknown:
        raise ValidationError(f"emit_report: unknown formats {sorted(unknown)}")
    if "csv" in formats:
        csv_path = out / f"{basename}.csv"
        csv_path.write_text(table_to_csv(table), encoding="utf-8")
        written.append(csv_path)
        meta = dict(table.metadata)
        meta.setdefault("generated_unix_time", time.time())
        meta_path = out / f"{basename}.meta.json"
        meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True, default=str)
                             + "\n", encoding="utf-8")
        written.append(meta_path)
    if "svg" in formats and table.rows and x_col in table.numeric_columns():
        svg_path = out / f"{basename}.svg"
        svg_path.write_text(_svg_line_plot(table, x_col), encoding="utf-8")
        written.append(svg_path)
    return written
