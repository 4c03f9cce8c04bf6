"""Minimal self-contained SVG line and heat plots."""

from __future__ import annotations

from html import escape
from typing import Mapping, Sequence

import numpy as np

from .experiments import SweepCell, WindowPoint

_PALETTE = ("#1f77b4", "#7f7f7f", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
_W, _H, _PAD = 560, 380, 56


def _frame(title: str, xlabel: str, ylabel: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="14" y="{_H / 2}" text-anchor="middle" transform="rotate(-90 14 {_H / 2})">{escape(ylabel)}</text>',
        f'<rect x="{_PAD}" y="{_PAD / 2}" width="{_W - 1.5 * _PAD}" height="{_H - 2 * _PAD}" fill="none" stroke="black"/>',
    ]


def _scale(lo, hi, a, b):
    span = hi - lo if hi > lo else 1.0
    return lambda v: a + (v - lo) / span * (b - a)


def line_plot_svg(
    curves: Mapping[str, Sequence[WindowPoint]],
    title: str = "",
    xlabel: str = "R2-sortability",
    ylabel: str = "SID",
) -> str:
    """Window-averaged curves with shaded 95% intervals."""
    pts = [p for c in curves.values() for p in c]
    out = _frame(title, xlabel, ylabel)
    if not pts:
        return "\n".join(out + ["</svg>"]) + "\n"
    y_lo = min(p.ci_low for p in pts)
    y_hi = max(p.ci_high for p in pts)
    sx = _scale(0.0, 1.0, _PAD, _W - _PAD / 2)
    sy = _scale(y_lo, y_hi, _H - 1.5 * _PAD, _PAD / 2)
    for tick in np.linspace(0, 1, 6):
        out.append(f'<text x="{sx(tick):.1f}" y="{_H - 1.5 * _PAD + 16}" text-anchor="middle">{tick:.1f}</text>')
    for tick in np.linspace(y_lo, y_hi, 5):
        out.append(f'<text x="{_PAD - 4}" y="{sy(tick) + 4:.1f}" text-anchor="end">{tick:.3g}</text>')
    for k, (name, points) in enumerate(curves.items()):
        if not points:
            continue
        color = _PALETTE[k % len(_PALETTE)]
        band = [f"{sx(p.center):.1f},{sy(p.ci_high):.1f}" for p in points]
        band += [f"{sx(p.center):.1f},{sy(p.ci_low):.1f}" for p in reversed(points)]
        out.append(f'<polygon points="{" ".join(band)}" fill="{color}" fill-opacity="0.2" stroke="none"/>')
        line = " ".join(f"{sx(p.center):.1f},{sy(p.mean):.1f}" for p in points)
        out.append(f'<polyline points="{line}" fill="none" stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text x="{_W - _PAD}" y="{_PAD / 2 + 16 * (k + 1)}" text-anchor="end" fill="{color}">{escape(name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap_svg(cells: Sequence[SweepCell], value: str = "v_r2", title: str = "") -> str:
    """Grid of mean sortabilities: in-degree on x, E[log|V|] target on y."""
    gammas = sorted({c.gamma for c in cells})
    targets = sorted({c.target for c in cells})
    out = _frame(title, "average in-degree", "E[log|V|]")
    if not cells:
        return "\n".join(out + ["</svg>"]) + "\n"
    x0, y0 = _PAD, _PAD / 2
    cw = (_W - 1.5 * _PAD) / len(gammas)
    ch = (_H - 2 * _PAD) / len(targets)
    for c in cells:
        v = getattr(c, value)
        i, j = gammas.index(c.gamma), targets.index(c.target)
        x, y = x0 + i * cw, y0 + (len(targets) - 1 - j) * ch
        if np.isnan(v):
            fill, label = "#dddddd", "n/a"
        else:
            level = int(round(255 * (1 - min(max(v, 0.0), 1.0))))
            fill, label = f"rgb(255,{level},{level})", f"{v:.2f}"
        out.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{cw:.1f}" height="{ch:.1f}" fill="{fill}" stroke="white"/>')
        out.append(f'<text x="{x + cw / 2:.1f}" y="{y + ch / 2 + 4:.1f}" text-anchor="middle">{label}</text>')
    for i, g in enumerate(gammas):
        out.append(f'<text x="{x0 + (i + 0.5) * cw:.1f}" y="{_H - 1.5 * _PAD + 16}" text-anchor="middle">{g:g}</text>')
    for j, t in enumerate(targets):
        y = y0 + (len(targets) - 1 - j + 0.5) * ch
        out.append(f'<text x="{_PAD - 4}" y="{y + 4:.1f}" text-anchor="end">{t:.2f}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
