"""Deterministic CSV, JSON and SVG writers.

Floats are written with 17 significant digits so identical runs give
byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Sequence

import numpy as np


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def write_csv(path: Path, header: Sequence[str], columns: Sequence[Sequence[float]]) -> Path:
    rows = zip(*columns)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def _json(obj, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(inner + _json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return fmt(x)
    return json.dumps(obj)


def write_json(path: Path, obj) -> Path:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_json(obj) + "\n")
    return path


_W, _H = 800, 600
_LEFT, _RIGHT, _TOP, _BOTTOM = 90, 30, 50, 70
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def _span(lo: float, hi: float) -> tuple[float, float]:
    if hi - lo <= 1e-12 * max(1.0, abs(lo), abs(hi)):
        pad = 0.5 * max(abs(lo), 1.0) * 1e-3
        return lo - pad, hi + pad
    return lo, hi


def write_line_svg(
    path: Path,
    series: Sequence[tuple[Sequence[float], Sequence[float], str]],
    title: str,
    xlabel: str,
    ylabel: str,
) -> Path:
    """Static line chart in a fixed 800x600 viewBox with min/max axis labels."""
    xs = np.concatenate([np.asarray(s[0], float) for s in series])
    ys = np.concatenate([np.asarray(s[1], float) for s in series])
    x0, x1 = _span(float(xs.min()), float(xs.max()))
    y0, y1 = _span(float(ys.min()), float(ys.max()))
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def px(x):
        return _LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return _TOP + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_W} {_H}" width="{_W}" height="{_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.0f}" y="30" text-anchor="middle" font-family="sans-serif" font-size="18">{title}</text>',
        f'<line x1="{_LEFT}" y1="{_TOP + ph}" x2="{_LEFT + pw}" y2="{_TOP + ph}" stroke="black"/>',
        f'<line x1="{_LEFT}" y1="{_TOP}" x2="{_LEFT}" y2="{_TOP + ph}" stroke="black"/>',
        f'<text x="{_LEFT}" y="{_TOP + ph + 20}" text-anchor="start" font-family="sans-serif" font-size="12">{x0:.6g}</text>',
        f'<text x="{_LEFT + pw}" y="{_TOP + ph + 20}" text-anchor="end" font-family="sans-serif" font-size="12">{x1:.6g}</text>',
        f'<text x="{_LEFT - 6}" y="{_TOP + ph}" text-anchor="end" font-family="sans-serif" font-size="12">{y0:.6g}</text>',
        f'<text x="{_LEFT - 6}" y="{_TOP + 10}" text-anchor="end" font-family="sans-serif" font-size="12">{y1:.6g}</text>',
        f'<text x="{_LEFT + pw / 2:.0f}" y="{_H - 20}" text-anchor="middle" font-family="sans-serif" font-size="14">{xlabel}</text>',
        f'<text x="20" y="{_TOP + ph / 2:.0f}" text-anchor="middle" font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 20 {_TOP + ph / 2:.0f})">{ylabel}</text>',
    ]
    for i, (sx, sy, label) in enumerate(series):
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(sx, sy))
        color = _COLORS[i % len(_COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"><title>{label}</title></polyline>')
    out.append("</svg>")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path
