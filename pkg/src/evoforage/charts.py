"""Line charts as self-contained SVG text.

Axes and ticks are drawn with <line> elements; each data series is exactly
one <polyline>, so a chart's series count is checkable from the markup.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2")

_WIDTH, _HEIGHT = 800, 500
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 20, 40, 50


def _ticks(high: float, count: int = 5) -> list[float]:
    return [high * i / count for i in range(count + 1)]


def _fmt(v: float) -> str:
    return f"{v:g}"


def line_chart(series, title: str = "", x_label: str = "", y_label: str = "") -> str:
    """Render [(label, xs, ys), ...] as one polyline per series."""
    x_max = max((max(xs) for _, xs, _ in series if len(xs)), default=0) or 1
    y_max = max((max(ys) for _, _, ys in series if len(ys)), default=0) or 1
    plot_w = _WIDTH - _LEFT - _RIGHT
    plot_h = _HEIGHT - _TOP - _BOTTOM

    def px(x):
        return _LEFT + plot_w * (x / x_max)

    def py(y):
        return _TOP + plot_h * (1 - y / y_max)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_WIDTH} {_HEIGHT}" '
        f'width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2}" y="24" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{escape(title)}</text>',
        # axes
        f'<line x1="{_LEFT}" y1="{_TOP}" x2="{_LEFT}" y2="{_TOP + plot_h}" stroke="black"/>',
        f'<line x1="{_LEFT}" y1="{_TOP + plot_h}" x2="{_LEFT + plot_w}" '
        f'y2="{_TOP + plot_h}" stroke="black"/>',
    ]
    for t in _ticks(x_max):
        x = px(t)
        out.append(f'<line x1="{x:.1f}" y1="{_TOP + plot_h}" x2="{x:.1f}" '
                   f'y2="{_TOP + plot_h + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{_TOP + plot_h + 20}" text-anchor="middle" '
                   f'font-size="11" font-family="sans-serif">{_fmt(t)}</text>')
    for t in _ticks(y_max):
        y = py(t)
        out.append(f'<line x1="{_LEFT - 5}" y1="{y:.1f}" x2="{_LEFT}" y2="{y:.1f}" '
                   'stroke="black"/>')
        out.append(f'<text x="{_LEFT - 8}" y="{y + 4:.1f}" text-anchor="end" '
                   f'font-size="11" font-family="sans-serif">{_fmt(t)}</text>')
    out.append(f'<text x="{_LEFT + plot_w / 2}" y="{_HEIGHT - 8}" text-anchor="middle" '
               f'font-size="13" font-family="sans-serif">{escape(x_label)}</text>')
    out.append(f'<text x="18" y="{_TOP + plot_h / 2}" text-anchor="middle" font-size="13" '
               f'font-family="sans-serif" transform="rotate(-90 18 {_TOP + plot_h / 2})">'
               f'{escape(y_label)}</text>')

    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                   f'points="{points}"/>')
        ly = _TOP + 14 + 16 * i
        out.append(f'<line x1="{_LEFT + plot_w - 150}" y1="{ly - 4}" '
                   f'x2="{_LEFT + plot_w - 126}" y2="{ly - 4}" stroke="{color}" '
                   'stroke-width="2"/>')
        out.append(f'<text x="{_LEFT + plot_w - 120}" y="{ly}" font-size="12" '
                   f'font-family="sans-serif">{escape(str(label))}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
