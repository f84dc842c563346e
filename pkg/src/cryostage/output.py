"""Deterministic CSV and SVG emission.

CSV files start with comment-prefixed metadata lines (`# key=value`),
then a header row, then data.  Numbers are formatted with 12 significant
digits and a '.' decimal separator, so identical configs produce
byte-identical files and values survive re-parsing.  SVG output is a
small static drawing with no external dependencies.
"""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .sweeps import SweepResult

FLOAT_FORMAT = "%.12g"


def format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return FLOAT_FORMAT % float(value)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence],
               metadata: Mapping[str, str] | None = None) -> str:
    buf = io.StringIO()
    for key, value in (metadata or {}).items():
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path: Path | str, columns: Sequence[str], rows: Iterable[Sequence],
              metadata: Mapping[str, str] | None = None) -> None:
    Path(path).write_text(render_csv(columns, rows, metadata), encoding="utf-8")


def write_sweep_csv(path: Path | str, result: SweepResult,
                    extra_metadata: Mapping[str, str] | None = None) -> None:
    meta = dict(result.metadata)
    meta.update(extra_metadata or {})
    write_csv(path, result.columns, result.rows, meta)


# ---------------------------------------------------------------- SVG ----

_VIRIDIS_STOPS = (
    (0.267, 0.005, 0.329),
    (0.283, 0.141, 0.458),
    (0.254, 0.265, 0.530),
    (0.207, 0.372, 0.553),
    (0.164, 0.471, 0.558),
    (0.128, 0.567, 0.551),
    (0.135, 0.659, 0.518),
    (0.267, 0.749, 0.441),
    (0.478, 0.821, 0.318),
    (0.741, 0.873, 0.150),
    (0.993, 0.906, 0.144),
)

_LINE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def _color(frac: float) -> str:
    frac = min(max(frac, 0.0), 1.0)
    pos = frac * (len(_VIRIDIS_STOPS) - 1)
    lo = int(pos)
    hi = min(lo + 1, len(_VIRIDIS_STOPS) - 1)
    t = pos - lo
    rgb = [(1 - t) * a + t * b for a, b in zip(_VIRIDIS_STOPS[lo], _VIRIDIS_STOPS[hi])]
    return "#%02x%02x%02x" % tuple(int(round(255 * c)) for c in rgb)


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def _fmt(x: float) -> str:
    return "%.6g" % x


class _Canvas:
    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>',
        ]

    def text(self, x: float, y: float, s: str, size: int = 12, anchor: str = "middle",
             rotate: float | None = None) -> None:
        transform = f' transform="rotate({rotate} {_fmt(x)} {_fmt(y)})"' if rotate else ""
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="sans-serif" '
            f'font-size="{size}" text-anchor="{anchor}"{transform}>{s}</text>'
        )

    def line(self, x1, y1, x2, y2, color="black", width=1.0) -> None:
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def polyline(self, points: Sequence[tuple[float, float]], color: str) -> None:
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )

    def rect(self, x, y, w, h, fill: str) -> None:
        self.parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'fill="{fill}"/>'
        )

    def save(self, path: Path | str) -> None:
        self.parts.append("</svg>")
        Path(path).write_text("\n".join(self.parts), encoding="utf-8")


class _Frame:
    """Plot frame with linear or log axes mapping data to pixels."""

    def __init__(self, canvas: _Canvas, x_lo, x_hi, y_lo, y_hi,
                 log_x: bool = False, log_y: bool = False, margin=(70, 25, 45, 60)):
        self.c = canvas
        self.left, self.right, self.top, self.bottom = margin
        self.log_x = log_x
        self.log_y = log_y
        if log_x:
            x_lo, x_hi = math.log10(x_lo), math.log10(x_hi)
        if log_y:
            y_lo, y_hi = math.log10(y_lo), math.log10(y_hi)
        self.x_lo, self.x_hi = x_lo, (x_hi if x_hi > x_lo else x_lo + 1.0)
        self.y_lo, self.y_hi = y_lo, (y_hi if y_hi > y_lo else y_lo + 1.0)

    def px(self, x: float) -> float:
        if self.log_x:
            x = math.log10(x)
        frac = (x - self.x_lo) / (self.x_hi - self.x_lo)
        return self.left + frac * (self.c.width - self.left - self.right)

    def py(self, y: float) -> float:
        if self.log_y:
            y = math.log10(y)
        frac = (y - self.y_lo) / (self.y_hi - self.y_lo)
        return self.c.height - self.bottom - frac * (self.c.height - self.top - self.bottom)

    def axes(self, xlabel: str, ylabel: str, title: str) -> None:
        c = self.c
        x0, x1 = self.left, c.width - self.right
        y0, y1 = c.height - self.bottom, self.top
        c.line(x0, y0, x1, y0)
        c.line(x0, y0, x0, y1)
        for xv in _ticks(self.x_lo, self.x_hi):
            xpix = self.px(10**xv if self.log_x else xv)
            c.line(xpix, y0, xpix, y0 + 4)
            label = _fmt(10**xv) if self.log_x else _fmt(xv)
            c.text(xpix, y0 + 17, label, size=10)
        for yv in _ticks(self.y_lo, self.y_hi):
            ypix = self.py(10**yv if self.log_y else yv)
            c.line(x0 - 4, ypix, x0, ypix)
            label = _fmt(10**yv) if self.log_y else _fmt(yv)
            c.text(x0 - 8, ypix + 3, label, size=10, anchor="end")
        c.text((x0 + x1) / 2, c.height - 8, xlabel)
        c.text(16, (y0 + y1) / 2, ylabel, rotate=-90.0)
        c.text((x0 + x1) / 2, 16, title, size=13)


def svg_line_chart(path: Path | str, x: Sequence[float],
                   series: Mapping[str, Sequence[float]], *,
                   xlabel: str, ylabel: str, title: str,
                   log_x: bool = False) -> None:
    """Write a line chart; NaN samples break the polyline."""
    x = np.asarray(x, dtype=float)
    all_y = np.concatenate([np.asarray(v, dtype=float) for v in series.values()])
    finite = all_y[np.isfinite(all_y)]
    y_lo = float(finite.min()) if finite.size else 0.0
    y_hi = float(finite.max()) if finite.size else 1.0
    pad = 0.05 * (y_hi - y_lo or 1.0)
    canvas = _Canvas(640, 480)
    frame = _Frame(canvas, float(x.min()), float(x.max()), y_lo - pad, y_hi + pad,
                   log_x=log_x)
    frame.axes(xlabel, ylabel, title)
    for k, (label, ys) in enumerate(series.items()):
        color = _LINE_COLORS[k % len(_LINE_COLORS)]
        run: list[tuple[float, float]] = []
        for xv, yv in zip(x, np.asarray(ys, dtype=float)):
            if np.isfinite(yv):
                run.append((frame.px(xv), frame.py(yv)))
            elif run:
                canvas.polyline(run, color)
                run = []
        if run:
            canvas.polyline(run, color)
        canvas.text(canvas.width - 30, 30 + 16 * k, label, size=11, anchor="end")
        canvas.line(canvas.width - 140, 26 + 16 * k, canvas.width - 120, 26 + 16 * k,
                    color=color, width=2.0)
    canvas.save(path)


def svg_heatmap(path: Path | str, x_axis: Sequence[float], y_axis: Sequence[float],
                grid: np.ndarray, *, xlabel: str, ylabel: str, title: str,
                log_y: bool = False) -> None:
    """Write a heat map of grid[i, j] over (x_axis[i], y_axis[j]).

    NaN cells render light gray.  Cell boundaries are midpoints between
    axis values, so non-uniform grids keep their proportions.
    """
    x = np.asarray(x_axis, dtype=float)
    y = np.asarray(y_axis, dtype=float)
    values = np.asarray(grid, dtype=float)
    finite = values[np.isfinite(values)]
    v_lo = float(finite.min()) if finite.size else 0.0
    v_hi = float(finite.max()) if finite.size else 1.0
    span = (v_hi - v_lo) or 1.0

    canvas = _Canvas(700, 480)
    frame = _Frame(canvas, float(x.min()), float(x.max()), float(y.min()), float(y.max()),
                   log_y=log_y, margin=(70, 95, 45, 60))
    frame.axes(xlabel, ylabel, title)

    def edges(axis: np.ndarray) -> np.ndarray:
        mids = 0.5 * (axis[1:] + axis[:-1])
        first = axis[0] - (mids[0] - axis[0]) if axis.size > 1 else axis[0] - 0.5
        last = axis[-1] + (axis[-1] - mids[-1]) if axis.size > 1 else axis[-1] + 0.5
        return np.concatenate([[first], mids, [last]])

    # cell boundaries at midpoints, in the plotted coordinate
    xe = edges(x)
    ye = 10.0 ** edges(np.log10(y)) if log_y else edges(y)
    for i in range(x.size):
        for j in range(y.size):
            v = values[i, j]
            fill = "#dddddd" if not np.isfinite(v) else _color((v - v_lo) / span)
            x0, x1 = frame.px(xe[i]), frame.px(xe[i + 1])
            y0, y1 = frame.py(ye[j]), frame.py(ye[j + 1])
            canvas.rect(min(x0, x1), min(y0, y1), abs(x1 - x0), abs(y1 - y0), fill)
    # colorbar
    bar_x, bar_w = canvas.width - 70, 18
    bar_top, bar_bot = 60, canvas.height - 70
    steps = 40
    for k in range(steps):
        frac = k / (steps - 1)
        ypix = bar_bot - frac * (bar_bot - bar_top)
        canvas.rect(bar_x, ypix - (bar_bot - bar_top) / steps, bar_w,
                    (bar_bot - bar_top) / steps + 0.5, _color(frac))
    canvas.text(bar_x + bar_w / 2, bar_top - 8, _fmt(v_hi), size=10)
    canvas.text(bar_x + bar_w / 2, bar_bot + 14, _fmt(v_lo), size=10)
    canvas.save(path)
