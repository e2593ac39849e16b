"""CSV and SVG writers for :class:`CurveTable`. Both are pure functions of the
table, so output is byte-identical for identical tables."""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from ..errors import CKNError, PreconditionError
from .curves import CurveTable

CSV_HEADER = "p,a_bar,a_star,a_1,a_0,a_c"
_CSV_COLUMNS = ("a_bar", "a_star_ckn", "a_1", "a_0", "a_c")


class EmitError(CKNError, OSError):
    """I/O failure while writing an output file."""


def format_number(x: float) -> str:
    """Positional decimal with 9 significant digits; empty for NaN."""
    if not math.isfinite(x):
        return ""
    return np.format_float_positional(float(x), precision=9, unique=False, fractional=False, trim="k")


def csv_text(table: CurveTable) -> str:
    lines = [f"# ckn-atlas d={table.d} theta=critical", CSV_HEADER]
    for i, p in enumerate(table.p_grid):
        cells = [format_number(p)]
        for name in _CSV_COLUMNS:
            col = table.columns.get(name)
            cells.append("" if col is None else format_number(col[i]))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _write(destination, text: str) -> None:
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise EmitError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(table: CurveTable, destination) -> None:
    _write(destination, csv_text(table))


# ---------------------------------------------------------------------------
# SVG

PANEL_W, PANEL_H = 420.0, 300.0
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 60.0, 20.0, 40.0, 45.0

STYLE = {
    "a_bar": ("#1b7837", "a_bar (linear instability)"),
    "a_star_ckn": ("#b2182b", "a_star (GN comparison)"),
    "a_1": ("#2166ac", "a_1 (a priori estimates)"),
    "a_0": ("#762a83", "a_0 (Schwarz symmetrization)"),
    "a_c": ("#000000", "a_c"),
}

# (lower curve, upper curve, fill, label); None means the panel edge
FIGURES = {
    "existence": (
        "Existence regions, theta = d(p-2)/(2p)",
        ("a_star_ckn", "a_1", "a_0"),
        [("a_0", "a_c", "#d9f0d3", "(1) radial extremals"),
         ("a_1", "a_0", "#c7e9f1", "(2) a priori estimates"),
         ("a_star_ckn", "a_1", "#fddbc7", "(3) GN comparison")],
    ),
    "symmetry": (
        "Symmetry regions, theta = d(p-2)/(2p)",
        ("a_bar", "a_star_ckn", "a_0"),
        [(None, "a_bar", "#f4a582", "(1) linear instability"),
         ("a_bar", "a_star_ckn", "#fddbc7", "(2) GN comparison"),
         ("a_star_ckn", "a_0", "#f7f7f7", "(3) unknown"),
         ("a_0", "a_c", "#d9f0d3", "(4) symmetry")],
    ),
}


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _segments(xs, ys):
    """Split a polyline at NaN entries."""
    seg = []
    for x, y in zip(xs, ys):
        if math.isfinite(y):
            seg.append((x, y))
        elif seg:
            yield seg
            seg = []
    if seg:
        yield seg


class _Panel:
    def __init__(self, table: CurveTable, x0: float, y_lo: float, y_hi: float):
        self.x0 = x0
        self.p_lo, self.p_hi = float(table.p_grid[0]), float(table.p_grid[-1])
        self.y_lo, self.y_hi = y_lo, y_hi
        self.w = PANEL_W - MARGIN_L - MARGIN_R
        self.h = PANEL_H - MARGIN_T - MARGIN_B

    def X(self, p):
        return self.x0 + MARGIN_L + (p - self.p_lo) / (self.p_hi - self.p_lo) * self.w

    def Y(self, a):
        return MARGIN_T + (self.y_hi - a) / (self.y_hi - self.y_lo) * self.h


def _y_range(table: CurveTable) -> tuple[float, float]:
    a_c = float(table.columns["a_c"][0]) if "a_c" in table.columns else 0.0
    finite = [c[np.isfinite(c)] for c in table.columns.values()]
    values = np.concatenate([f for f in finite if len(f)] or [np.array([a_c - 1.0])])
    lo = min(float(values.min()), a_c - 1e-3)
    span = max(a_c - lo, 1e-3)
    return lo - 0.08 * span, a_c + 0.08 * span


def _panel_svg(table: CurveTable, figure: str, x0: float, y_lo: float, y_hi: float) -> list[str]:
    title, curves, regions = FIGURES[figure]
    pn = _Panel(table, x0, y_lo, y_hi)
    ps = table.p_grid
    out = [f'<g id="{figure}">']
    out.append(f'<text x="{_fmt(x0 + PANEL_W / 2)}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>')
    # regions
    for lower, upper, fill, label in regions:
        lo_col = np.full(len(ps), y_lo) if lower is None else table.columns.get(lower)
        hi_col = table.columns.get(upper)
        if lo_col is None or hi_col is None:
            continue
        ok = np.isfinite(lo_col) & np.isfinite(hi_col)
        if ok.sum() < 2:
            continue
        top = [(pn.X(p), pn.Y(max(a, b))) for p, a, b in zip(ps[ok], hi_col[ok], lo_col[ok])]
        bottom = [(pn.X(p), pn.Y(min(a, b))) for p, a, b in zip(ps[ok], lo_col[ok], hi_col[ok])]
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in top + bottom[::-1])
        out.append(f'<polygon points="{pts}" fill="{fill}" stroke="none"><title>{escape(label)}</title></polygon>')
    # axes
    left, right = pn.X(pn.p_lo), pn.X(pn.p_hi)
    top_y, bot_y = pn.Y(y_hi), pn.Y(y_lo)
    out.append(f'<rect x="{_fmt(left)}" y="{_fmt(top_y)}" width="{_fmt(right - left)}" '
               f'height="{_fmt(bot_y - top_y)}" fill="none" stroke="#444444"/>')
    for t in np.linspace(pn.p_lo, pn.p_hi, 5):
        out.append(f'<text x="{_fmt(pn.X(t))}" y="{_fmt(bot_y + 15)}" text-anchor="middle" font-size="10">{t:.2f}</text>')
    for t in np.linspace(y_lo, y_hi, 5):
        out.append(f'<text x="{_fmt(left - 5)}" y="{_fmt(pn.Y(t) + 3)}" text-anchor="end" font-size="10">{t:.2f}</text>')
    out.append(f'<text x="{_fmt((left + right) / 2)}" y="{_fmt(bot_y + 32)}" text-anchor="middle" font-size="12">p</text>')
    out.append(f'<text x="{_fmt(x0 + 15)}" y="{_fmt((top_y + bot_y) / 2)}" text-anchor="middle" font-size="12">a</text>')
    # curves
    for name in (*curves, "a_c"):
        col = table.columns.get(name)
        if col is None:
            continue
        color, label = STYLE[name]
        for seg in _segments(ps, col):
            if len(seg) < 2:
                continue
            pts = " ".join(f"{_fmt(pn.X(p))},{_fmt(pn.Y(a))}" for p, a in seg)
            dash = ' stroke-dasharray="4 3"' if name == "a_c" else ""
            out.append(f'<polyline class="{name}" points="{pts}" fill="none" stroke="{color}" '
                       f'stroke-width="1.5"{dash}><title>{escape(label)}</title></polyline>')
    # legend
    ly = top_y + 12
    for name in (*curves, "a_c"):
        if name not in table.columns or not np.isfinite(table.columns[name]).any():
            continue
        color, label = STYLE[name]
        out.append(f'<line x1="{_fmt(left + 8)}" y1="{_fmt(ly)}" x2="{_fmt(left + 26)}" y2="{_fmt(ly)}" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{_fmt(left + 30)}" y="{_fmt(ly + 3)}" font-size="9">{escape(label)}</text>')
        ly += 12
    out.append("</g>")
    return out


def svg_text(table: CurveTable) -> str:
    """Two panels: existence regions (left) and symmetry regions (right)."""
    if len(table) < 2:
        raise PreconditionError("SVG needs at least 2 grid points")
    y_lo, y_hi = _y_range(table)
    width, height = 2 * PANEL_W, PANEL_H
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f"<desc>ckn-atlas d={table.d} theta=critical</desc>",
        f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff"/>',
    ]
    lines += _panel_svg(table, "existence", 0.0, y_lo, y_hi)
    lines += _panel_svg(table, "symmetry", PANEL_W, y_lo, y_hi)
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(table: CurveTable, destination) -> None:
    _write(destination, svg_text(table))
