"""Minimal self-contained SVG plots (no plotting library, byte-stable output)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

W, H = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 70, 70, 40, 50


def _f(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, count: int = 5):
    if hi == lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / count))
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (step * mult) <= count:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-12 * abs(step):
        out.append(round(v, 12))
        v += step
    return out


def _label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return f"{v:g}"


class _Axis:
    def __init__(self, lo, hi, pixel_lo, pixel_hi):
        if hi == lo:
            hi = lo + 1.0
        self.lo, self.hi, self.plo, self.phi = lo, hi, pixel_lo, pixel_hi

    def __call__(self, v):
        return self.plo + (v - self.lo) / (self.hi - self.lo) * (self.phi - self.plo)


def _frame(title, xlabel):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2}" y="22" text-anchor="middle" font-family="sans-serif" font-size="14">{escape(title)}</text>',
        f'<text x="{W / 2}" y="{H - 10}" text-anchor="middle" font-family="sans-serif" font-size="12">{escape(xlabel)}</text>',
        f'<rect x="{LEFT}" y="{TOP}" width="{W - LEFT - RIGHT}" height="{H - TOP - BOTTOM}" fill="none" stroke="black"/>',
    ]


def _x_ticks(ax, lo, hi):
    out = []
    for t in _ticks(lo, hi):
        x = ax(t)
        out.append(f'<line x1="{_f(x)}" y1="{H - BOTTOM}" x2="{_f(x)}" y2="{H - BOTTOM + 5}" stroke="black"/>')
        out.append(f'<text x="{_f(x)}" y="{H - BOTTOM + 18}" text-anchor="middle" font-family="sans-serif" font-size="10">{_label(t)}</text>')
    return out


def _y_ticks(ay, lo, hi, side, label, colour, fmt=_label):
    x0 = LEFT if side == "left" else W - RIGHT
    sgn = -1 if side == "left" else 1
    anchor = "end" if side == "left" else "start"
    out = []
    for t in _ticks(lo, hi):
        y = ay(t)
        out.append(f'<line x1="{x0}" y1="{_f(y)}" x2="{x0 + 5 * sgn}" y2="{_f(y)}" stroke="{colour}"/>')
        out.append(f'<text x="{x0 + 8 * sgn}" y="{_f(y + 3)}" text-anchor="{anchor}" font-family="sans-serif" font-size="10" fill="{colour}">{fmt(t)}</text>')
    lx = 16 if side == "left" else W - 12
    out.append(f'<text x="{lx}" y="{H / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" fill="{colour}" transform="rotate(-90 {lx} {H / 2})">{escape(label)}</text>')
    return out


def _path(ax, ay, xs, ys, colour, dashed=False):
    pts = " ".join(f"{_f(ax(x))},{_f(ay(y))}" for x, y in zip(xs, ys))
    dash = ' stroke-dasharray="6,4"' if dashed else ""
    return f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1.5"{dash}/>'


def dual_axis_chart(xs, left, right, *, title, xlabel, left_label, right_label) -> str:
    """Dashed ``left`` series on the left axis, solid ``right`` series on the right axis."""
    xs = list(xs)
    ax = _Axis(min(xs), max(xs), LEFT, W - RIGHT)
    lmin, lmax = min(left), max(left)
    rmin, rmax = 0.0, max(right)
    al = _Axis(lmin, lmax, H - BOTTOM, TOP)
    ar = _Axis(rmin, rmax, H - BOTTOM, TOP)
    out = _frame(title, xlabel)
    out += _x_ticks(ax, ax.lo, ax.hi)
    out += _y_ticks(al, lmin, lmax, "left", left_label, "#1f4e99")
    out += _y_ticks(ar, rmin, rmax, "right", right_label, "#b22222")
    out.append(_path(ax, al, xs, left, "#1f4e99", dashed=True))
    out.append(_path(ax, ar, xs, right, "#b22222"))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bar_chart(xs, ys, *, title, xlabel, ylabel, log_y=False, floor=1e-30, highlight=None) -> str:
    """Vertical bars; ``highlight`` is a predicate on x selecting a shaded band."""
    xs, ys = list(xs), list(ys)
    ax = _Axis(min(xs), max(xs), LEFT + 10, W - RIGHT - 10)
    if log_y:
        vals = [math.log10(max(y, floor)) for y in ys]
        lo = math.floor(min(vals))
        hi = max(0.0, math.ceil(max(vals)))
        fmt = lambda t: f"1e{int(t)}" if t == int(t) else f"{t:g}"
        ylabel = f"{ylabel} (log10)"
    else:
        vals = ys
        lo, hi = 0.0, max(ys) * 1.05 if max(ys) > 0 else 1.0
        fmt = _label
    ay = _Axis(lo, hi, H - BOTTOM, TOP)
    out = _frame(title, xlabel)
    if highlight is not None:
        sel = [x for x in xs if highlight(x)]
        if sel:
            x0, x1 = ax(min(sel)), ax(max(sel))
            out.append(f'<rect x="{_f(min(x0, x1))}" y="{TOP}" width="{_f(abs(x1 - x0))}" height="{H - TOP - BOTTOM}" fill="#f4cccc"/>')
    out += _x_ticks(ax, ax.lo, ax.hi)
    out += _y_ticks(ay, lo, hi, "left", ylabel, "black", fmt)
    width = max(1.0, 0.8 * (ax.phi - ax.plo) / max(len(xs) - 1, 1))
    base = ay(lo)
    for x, v in zip(xs, vals):
        top = ay(v)
        out.append(f'<rect x="{_f(ax(x) - width / 2)}" y="{_f(top)}" width="{_f(width)}" height="{_f(base - top)}" fill="#333333"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
