"""Minimal deterministic SVG renderers for the three analysis charts.

Hand-built SVG strings rather than a plotting library: output is stable
byte-for-byte across runs and platforms, which the reproducibility contract
requires. Rasterization is left to the web UI.
"""

from __future__ import annotations

__all__ = ["svg_score_frequency", "svg_interval_over_scales", "svg_posterior_marginal"]

BAND_COLORS = ("#d9534f", "#f0ad4e", "#ffd76e", "#9acd68", "#5cb85c", "#4e9a8f", "#67809f",
               "#8e6fa8", "#c577a0", "#b0a18c", "#7f8c8d")


def _f(x: float) -> str:
    return format(float(x), ".6g")


def _header(width: int, height: int) -> str:
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">')


def _x_axis(x0: float, x1: float, y: float, lo: float = 0.0, hi: float = 100.0) -> list[str]:
    parts = [f'<line x1="{_f(x0)}" y1="{_f(y)}" x2="{_f(x1)}" y2="{_f(y)}" stroke="#333"/>']
    for tick in (0, 25, 50, 75, 100):
        px = x0 + (tick - lo) / (hi - lo) * (x1 - x0)
        parts.append(f'<line x1="{_f(px)}" y1="{_f(y)}" x2="{_f(px)}" y2="{_f(y + 4)}" stroke="#333"/>')
        parts.append(f'<text x="{_f(px)}" y="{_f(y + 16)}" text-anchor="middle">{tick}</text>')
    return parts


def svg_score_frequency(freq: dict, width: int = 640, height: int = 360) -> str:
    """Bar chart of score counts; freq is {"values": [...], "counts": [...]}."""
    values, counts = freq["values"], freq["counts"]
    margin, bottom = 40, 40
    x0, x1 = margin, width - 20
    y0, y1 = height - bottom, 20
    peak = max(counts) if counts else 1
    parts = [_header(width, height)]
    bar_w = max(4.0, (x1 - x0) / 41 * 0.8)
    for v, c in zip(values, counts):
        px = x0 + v / 100.0 * (x1 - x0)
        h = c / peak * (y0 - y1)
        parts.append(
            f'<rect x="{_f(px - bar_w / 2)}" y="{_f(y0 - h)}" width="{_f(bar_w)}" '
            f'height="{_f(h)}" fill="#4878a8"/>'
        )
    parts += _x_axis(x0, x1, y0)
    parts.append(f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x0)}" y2="{_f(y1)}" stroke="#333"/>')
    parts.append(f'<text x="{_f(x0 - 6)}" y="{_f(y1 + 4)}" text-anchor="end">{peak}</text>')
    parts.append(f'<text x="{_f((x0 + x1) / 2)}" y="{_f(height - 6)}" text-anchor="middle">SUS score</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def svg_interval_over_scales(bands_payload: dict, width: int = 720, height: int = 420) -> str:
    """Selected interval overlaid on every label scale, one row per scale."""
    scales = bands_payload["scales"]
    sel = bands_payload["selected"]
    mean = bands_payload["mean"]
    margin, top, bottom = 110, 30, 40
    x0, x1 = margin, width - 30
    row_h = (height - top - bottom) / max(len(scales), 1)

    def px(score: float) -> float:
        return x0 + min(max(score, 0.0), 100.0) / 100.0 * (x1 - x0)

    parts = [_header(width, height)]
    for i, scale in enumerate(scales):
        y = top + i * row_h
        bar_y, bar_h = y + row_h * 0.25, row_h * 0.5
        parts.append(f'<text x="{_f(x0 - 8)}" y="{_f(bar_y + bar_h / 2 + 4)}" text-anchor="end">{scale["name"]}</text>')
        if scale["kind"] == "bands":
            for j, band in enumerate(scale["bands"]):
                bx, bw = px(band["lower"]), px(band["upper"]) - px(band["lower"])
                color = BAND_COLORS[j % len(BAND_COLORS)]
                parts.append(f'<rect x="{_f(bx)}" y="{_f(bar_y)}" width="{_f(bw)}" height="{_f(bar_h)}" '
                             f'fill="{color}" fill-opacity="0.55"/>')
                if bw > 26:
                    parts.append(f'<text x="{_f(bx + bw / 2)}" y="{_f(bar_y + bar_h / 2 + 4)}" '
                                 f'text-anchor="middle">{band["label"]}</text>')
        else:
            for score, pct in scale["anchors"]:
                ax = px(score)
                parts.append(f'<line x1="{_f(ax)}" y1="{_f(bar_y)}" x2="{_f(ax)}" y2="{_f(bar_y + bar_h)}" '
                             f'stroke="#999"/>')
                if pct in (10.0, 50.0, 90.0):
                    parts.append(f'<text x="{_f(ax)}" y="{_f(bar_y - 3)}" text-anchor="middle">{_f(pct)}%</text>')
    # interval overlay spanning all rows
    lx, ux, mx = px(sel["lower"]), px(sel["upper"]), px(mean)
    parts.append(f'<rect x="{_f(lx)}" y="{_f(top - 8)}" width="{_f(ux - lx)}" '
                 f'height="{_f(height - top - bottom + 16)}" fill="#2c3e50" fill-opacity="0.14"/>')
    for vx in (lx, ux):
        parts.append(f'<line x1="{_f(vx)}" y1="{_f(top - 8)}" x2="{_f(vx)}" '
                     f'y2="{_f(height - bottom + 8)}" stroke="#2c3e50" stroke-width="2"/>')
    parts.append(f'<line x1="{_f(mx)}" y1="{_f(top - 8)}" x2="{_f(mx)}" y2="{_f(height - bottom + 8)}" '
                 f'stroke="#2c3e50" stroke-dasharray="4 3"/>')
    parts += _x_axis(x0, x1, height - bottom + 8)
    parts.append(f'<text x="{_f((x0 + x1) / 2)}" y="{_f(height - 4)}" text-anchor="middle">'
                 f'{sel["method"]} interval [{_f(sel["lower"])}, {_f(sel["upper"])}], mean {_f(mean)}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def svg_posterior_marginal(series: dict, interval: dict | None = None,
                           width: int = 640, height: int = 360) -> str:
    """Marginal posterior density of the mean with the credible region shaded."""
    mu, dens = series["mu"], series["density"]
    margin, bottom = 40, 40
    x0, x1 = margin, width - 20
    y0, y1 = height - bottom, 20
    peak = max(dens) or 1.0

    def pt(m: float, d: float) -> str:
        return f"{_f(x0 + m / 100.0 * (x1 - x0))},{_f(y0 - d / peak * (y0 - y1))}"

    parts = [_header(width, height)]
    if interval is not None:
        lo, hi = interval["lower"], interval["upper"]
        inside = [(m, d) for m, d in zip(mu, dens) if lo <= m <= hi]
        if inside:
            path = " ".join(pt(m, d) for m, d in inside)
            first, last = inside[0][0], inside[-1][0]
            parts.append(f'<polygon points="{pt(first, 0)} {path} {pt(last, 0)}" '
                         f'fill="#4878a8" fill-opacity="0.35"/>')
    parts.append('<polyline points="' + " ".join(pt(m, d) for m, d in zip(mu, dens)) +
                 '" fill="none" stroke="#2c3e50" stroke-width="1.5"/>')
    parts += _x_axis(x0, x1, y0)
    parts.append(f'<text x="{_f((x0 + x1) / 2)}" y="{_f(height - 6)}" text-anchor="middle">mean SUS score</text>')
    parts.append("</svg>")
    return "\n".join(parts)
