"""Minimal deterministic SVG line plots (no plotting dependency, stable bytes).

Output is a fixed 800x600 canvas with 1-2-5 linear ticks or decade log
ticks.  Every coordinate is emitted with fixed precision and nothing
time- or environment-dependent is written, so identical inputs give
byte-identical files.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = ["line_plot"]

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 30, 50, 60
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _nice_ticks(lo: float, hi: float, target: int = 6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + step * 1e-9:
        ticks.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return ticks


def _decade_ticks(lo: float, hi: float):
    lo_e = math.floor(math.log10(lo))
    hi_e = math.ceil(math.log10(hi))
    exps = range(lo_e, hi_e + 1)
    step = max(1, (hi_e - lo_e) // 8)
    return [10.0**e for e in exps][::step]


def _fmt(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


def line_plot(path, series, title="", xlabel="", ylabel="", logy=False, markers=False):
    """Write an SVG line chart.

    series is a list of (label, x, y) triples; with logy, nonpositive y
    values are dropped point-wise.  Files end with a newline and are
    byte-deterministic for identical inputs.
    """
    cleaned = []
    for label, x, y in series:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        keep = np.isfinite(x) & np.isfinite(y)
        if logy:
            keep &= y > 0.0
        cleaned.append((str(label), x[keep], y[keep]))
    xs = np.concatenate([c[1] for c in cleaned if len(c[1])] or [np.array([0.0, 1.0])])
    ys = np.concatenate([c[2] for c in cleaned if len(c[2])] or [np.array([1.0, 10.0])])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    if logy:
        y_ticks = _decade_ticks(y_lo, y_hi)
        y_lo, y_hi = math.log10(y_lo), math.log10(y_hi)
        if y_hi <= y_lo:
            y_hi = y_lo + 1.0
    else:
        pad = 0.05 * (y_hi - y_lo or 1.0)
        y_lo, y_hi = y_lo - pad, y_hi + pad
        y_ticks = _nice_ticks(y_lo, y_hi)
    x_ticks = _nice_ticks(x_lo, x_hi)

    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(v):
        return MARGIN_L + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        vv = math.log10(v) if logy else v
        return MARGIN_T + (1.0 - (vv - y_lo) / (y_hi - y_lo)) * ph

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="28" font-family="sans-serif" font-size="17" '
            f'text-anchor="middle">{title}</text>'
        )
    # frame
    out.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="#333" stroke-width="1"/>'
    )
    for t in x_ticks:
        if not (x_lo <= t <= x_hi):
            continue
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{MARGIN_T + ph}" x2="{x:.2f}" y2="{MARGIN_T + ph + 5}" stroke="#333"/>')
        out.append(
            f'<text x="{x:.2f}" y="{MARGIN_T + ph + 20}" font-family="sans-serif" '
            f'font-size="12" text-anchor="middle">{_fmt(t)}</text>'
        )
    for t in y_ticks:
        y = py(t)
        if not (MARGIN_T - 1 <= y <= MARGIN_T + ph + 1):
            continue
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{y:.2f}" x2="{MARGIN_L}" y2="{y:.2f}" stroke="#333"/>')
        label = f"1e{round(math.log10(t))}" if logy else _fmt(t)
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{y + 4:.2f}" font-family="sans-serif" '
            f'font-size="12" text-anchor="end">{label}</text>'
        )
        out.append(
            f'<line x1="{MARGIN_L}" y1="{y:.2f}" x2="{MARGIN_L + pw}" y2="{y:.2f}" '
            f'stroke="#ddd" stroke-width="0.5"/>'
        )
    if xlabel:
        out.append(
            f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 15}" font-family="sans-serif" '
            f'font-size="14" text-anchor="middle">{xlabel}</text>'
        )
    if ylabel:
        cx, cy = 22, MARGIN_T + ph / 2
        out.append(
            f'<text x="{cx}" y="{cy:.1f}" font-family="sans-serif" font-size="14" '
            f'text-anchor="middle" transform="rotate(-90 {cx} {cy:.1f})">{ylabel}</text>'
        )
    for i, (label, x, y) in enumerate(cleaned):
        color = PALETTE[i % len(PALETTE)]
        if len(x):
            pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
            if markers:
                for a, b in zip(x, y):
                    out.append(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="3" fill="{color}"/>')
        if label:
            ly = MARGIN_T + 18 + 16 * i
            out.append(
                f'<line x1="{MARGIN_L + pw - 120}" y1="{ly - 4}" x2="{MARGIN_L + pw - 95}" '
                f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
            )
            out.append(
                f'<text x="{MARGIN_L + pw - 90}" y="{ly}" font-family="sans-serif" '
                f'font-size="12">{label}</text>'
            )
    out.append("</svg>")
    data = "\n".join(out) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(data)
