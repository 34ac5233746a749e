"""Deterministic SVG charts for mass trajectories.

Renders the stock and in-flight series of a trajectory CSV as step charts
(mass is piecewise constant between samples, so steps are the honest
rendering), one panel per document. The SVG is assembled by hand with
fixed formatting and no timestamps or generated ids, so the same table
always produces the same bytes; that keeps chart outputs diffable.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import TrajectoryDataError
from .flow import TrajectoryTable

# tab10 palette, cycled when a panel holds more than ten series
_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

_WIDTH = 900
_HEIGHT = 360
_PANEL_H = 250
_MARGIN_L = 72
_MARGIN_R = 170
_MARGIN_T = 46


def _series_label(column: str) -> str:
    if column.startswith("stock_"):
        return "stock " + column[len("stock_"):]
    if column.startswith("flow_"):
        tail, _, head = column[len("flow_"):].partition("_")
        return f"arc {tail}->{head}"
    return column


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * mag
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(value) < 1e-12 else value)
        value += step
    return ticks


def _fmt(value: float) -> str:
    # fixed two decimals for coordinates keeps the output byte-stable
    return format(value, ".2f")


def _step_path(xs: list[float], ys: list[float]) -> str:
    parts = [f"M {_fmt(xs[0])} {_fmt(ys[0])}"]
    for i in range(1, len(xs)):
        parts.append(f"H {_fmt(xs[i])}")
        if ys[i] != ys[i - 1]:
            parts.append(f"V {_fmt(ys[i])}")
    return " ".join(parts)


def _chart(title: str, t: tuple[float, ...],
           series: dict[str, tuple[int, ...]]) -> str:
    if len(t) < 2:
        raise TrajectoryDataError("need at least two samples to plot a trajectory")
    left = _MARGIN_L
    top = _MARGIN_T
    width = _WIDTH - _MARGIN_L - _MARGIN_R
    bottom = top + _PANEL_H
    t_max = t[-1]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
        f'<text x="{left}" y="26" font-size="16" fill="#111111">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{width}" height="{_PANEL_H}" '
        'fill="none" stroke="#444444" stroke-width="1"/>',
    ]
    if not series:
        out.append(f'<text x="{_fmt(left + width / 2)}" y="{_fmt(top + _PANEL_H / 2)}" '
                   'font-size="13" fill="#888888" text-anchor="middle">no series</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    grams = {name: [v / 1000.0 for v in values] for name, values in series.items()}
    y_max = max(max(vals) for vals in grams.values())
    if y_max <= 0.0:
        y_max = 1.0
    y_ticks = _nice_ticks(0.0, y_max)
    y_top = max(y_max, y_ticks[-1]) * 1.02

    def sx(tv: float) -> float:
        return left + (tv / t_max) * width if t_max > 0 else left

    def sy(v: float) -> float:
        return bottom - (v / y_top) * _PANEL_H

    for tick in y_ticks:
        y = sy(tick)
        out.append(f'<line x1="{left}" y1="{_fmt(y)}" x2="{left + width}" y2="{_fmt(y)}" '
                   'stroke="#dddddd" stroke-width="1"/>')
        out.append(f'<text x="{left - 8}" y="{_fmt(y + 4)}" font-size="11" fill="#444444" '
                   f'text-anchor="end">{format(tick, ".6g")}</text>')
    for tick in _nice_ticks(0.0, t_max, target=8):
        x = sx(tick)
        out.append(f'<line x1="{_fmt(x)}" y1="{bottom}" x2="{_fmt(x)}" '
                   f'y2="{bottom + 5}" stroke="#444444" stroke-width="1"/>')
        out.append(f'<text x="{_fmt(x)}" y="{bottom + 18}" font-size="11" '
                   f'fill="#444444" text-anchor="middle">{format(tick, ".6g")}</text>')
    out.append(f'<text x="{_fmt(left + width / 2)}" y="{bottom + 36}" font-size="12" '
               'fill="#222222" text-anchor="middle">time [s]</text>')
    out.append(f'<text x="{left - 52}" y="{_fmt(top + _PANEL_H / 2)}" font-size="12" '
               f'fill="#222222" text-anchor="middle" '
               f'transform="rotate(-90 {left - 52} {_fmt(top + _PANEL_H / 2)})">mass [g]</text>')

    legend_x = left + width + 14
    for idx, (name, values) in enumerate(grams.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        xs = [sx(tv) for tv in t]
        ys = [sy(v) for v in values]
        out.append(f'<path d="{_step_path(xs, ys)}" fill="none" stroke="{color}" '
                   'stroke-width="1.5"/>')
        ly = top + 14 + idx * 16
        out.append(f'<line x1="{legend_x}" y1="{ly}" x2="{legend_x + 18}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{legend_x + 24}" y="{ly + 4}" font-size="11" '
                   f'fill="#222222">{escape(_series_label(name))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def stocks_svg(table: TrajectoryTable) -> str:
    """Step chart of every stock series, grams over seconds."""
    return _chart("stocks vs. time", table.t_seconds, table.stock_series)


def flows_svg(table: TrajectoryTable) -> str:
    """Step chart of every in-flight transfer series, grams over seconds."""
    return _chart("flows vs. time", table.t_seconds, table.flow_series)


def write_trajectory_charts(table: TrajectoryTable, out_dir: str | Path,
                            stem: str) -> tuple[Path, Path]:
    """Write <stem>_stocks.svg and <stem>_flows.svg; returns both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stocks_path = out / f"{stem}_stocks.svg"
    flows_path = out / f"{stem}_flows.svg"
    stocks_path.write_text(stocks_svg(table), encoding="utf-8")
    flows_path.write_text(flows_svg(table), encoding="utf-8")
    return stocks_path, flows_path
