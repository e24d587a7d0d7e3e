"""Byte-deterministic static SVG scatter plots for 2-D orbit dumps."""

from __future__ import annotations

VIEW = 1000.0
MARGIN = 60.0
POINT_RADIUS = 2.0


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def scatter_svg(points: list[tuple[float, float]]) -> str:
    """Fixed 1000x1000 viewBox scatter with axes; identical input bytes
    produce identical output bytes."""
    if points:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        lo_x, hi_x = min(xs), max(xs)
        lo_y, hi_y = min(ys), max(ys)
    else:
        lo_x = lo_y = -1.0
        hi_x = hi_y = 1.0
    span_x = (hi_x - lo_x) or 1.0
    span_y = (hi_y - lo_y) or 1.0
    pad_x, pad_y = 0.05 * span_x, 0.05 * span_y
    lo_x, hi_x = lo_x - pad_x, hi_x + pad_x
    lo_y, hi_y = lo_y - pad_y, hi_y + pad_y
    scale_x = (VIEW - 2 * MARGIN) / (hi_x - lo_x)
    scale_y = (VIEW - 2 * MARGIN) / (hi_y - lo_y)

    def sx(x: float) -> float:
        return MARGIN + (x - lo_x) * scale_x

    def sy(y: float) -> float:
        return VIEW - MARGIN - (y - lo_y) * scale_y

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {VIEW:.0f} {VIEW:.0f}">',
        f'<rect x="{_fmt(MARGIN)}" y="{_fmt(MARGIN)}" '
        f'width="{_fmt(VIEW - 2 * MARGIN)}" height="{_fmt(VIEW - 2 * MARGIN)}" '
        'fill="white" stroke="black" stroke-width="1"/>',
    ]
    # data axes, when visible inside the frame
    if lo_x <= 0.0 <= hi_x:
        x0 = sx(0.0)
        lines.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(MARGIN)}" '
                     f'x2="{_fmt(x0)}" y2="{_fmt(VIEW - MARGIN)}" '
                     'stroke="#888" stroke-width="1"/>')
    if lo_y <= 0.0 <= hi_y:
        y0 = sy(0.0)
        lines.append(f'<line x1="{_fmt(MARGIN)}" y1="{_fmt(y0)}" '
                     f'x2="{_fmt(VIEW - MARGIN)}" y2="{_fmt(y0)}" '
                     'stroke="#888" stroke-width="1"/>')
    for x, y in points:
        lines.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" '
                     f'r="{POINT_RADIUS:.0f}" fill="#1f4e9c"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
