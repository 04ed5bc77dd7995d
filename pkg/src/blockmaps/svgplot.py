"""Minimal static SVG plots for scaling reports. No plotting dependency;
output is byte-stable for identical input."""
from __future__ import annotations

import math

W, H = 640, 420
MARGIN = 56
COLORS = ["#1f6fb2", "#c23b22", "#3a8f3a", "#7b52a1"]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def scaling_svg(report) -> str:
    """Median largest-block curves vs map size (log x)."""
    ns = report.n_grid
    if not ns:
        raise ValueError("empty report")
    series = []
    for j in range(report.j_max):
        label = f"L{j + 1} median"
        ys = [report.stats[n][f"L{j + 1}"]["median"] for n in ns]
        series.append((label, ys))
    xs = [math.log(n) for n in ns]
    xlo, xhi = min(xs), max(xs)
    ylo = 0.0
    yhi = max(max(ys) for _, ys in series) or 1.0

    def px(x):
        if xhi == xlo:
            return W / 2
        return MARGIN + (x - xlo) / (xhi - xlo) * (W - 2 * MARGIN)

    def py(y):
        return H - MARGIN - (y - ylo) / (yhi - ylo) * (H - 2 * MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{H - MARGIN}" x2="{W - MARGIN}" '
        f'y2="{H - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" '
        f'y2="{H - MARGIN}" stroke="black"/>',
        f'<text x="{W // 2}" y="{H - 12}" text-anchor="middle" '
        f'font-size="12">map size n (log scale)</text>',
        f'<text x="{W // 2}" y="18" text-anchor="middle" font-size="13">'
        f'scheme {report.scheme_id}, u={report.u}, {report.regime}, '
        f'{report.replicates} replicates</text>',
    ]
    for t in _ticks(xlo, xhi):
        parts.append(
            f'<text x="{_fmt(px(t))}" y="{H - MARGIN + 16}" '
            f'text-anchor="middle" font-size="10">{_fmt(math.exp(t))}</text>')
    for t in _ticks(ylo, yhi):
        parts.append(
            f'<text x="{MARGIN - 6}" y="{_fmt(py(t) + 3)}" '
            f'text-anchor="end" font-size="10">{_fmt(t)}</text>')
    for idx, (label, ys) in enumerate(series):
        color = COLORS[idx % len(COLORS)]
        if len(ns) > 1:
            pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
            parts.append(f'<polyline points="{pts}" fill="none" '
                         f'stroke="{color}" stroke-width="1.5"/>')
        for x, y in zip(xs, ys):
            parts.append(f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" '
                         f'r="3" fill="{color}"/>')
        parts.append(f'<text x="{W - MARGIN + 4}" y="{MARGIN + 14 * idx + 10}" '
                     f'font-size="11" fill="{color}">{label}</text>')
    if report.regime == "supercritical" and "log_slope" in report.fits and len(ns) > 1:
        s = report.fits["log_slope"]
        c = report.fits["log_intercept"]
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(s * x + c))}" for x in xs)
        parts.append(f'<polyline points="{pts}" fill="none" stroke="#888" '
                     f'stroke-dasharray="5,3" stroke-width="1"/>')
        parts.append(f'<text x="{MARGIN + 8}" y="{MARGIN + 12}" font-size="11" '
                     f'fill="#555">fit: {_fmt(s)} ln n {"+" if c >= 0 else "-"} '
                     f'{_fmt(abs(c))}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def condensation_svg(pairs) -> str:
    """Largest sequence element vs node degree (scheme 8 diagnostic)."""
    if not pairs:
        raise ValueError("no condensation data")
    xs = [k for k, _ in pairs]
    ys = [m for _, m in pairs]
    xlo, xhi = 0, max(xs)
    ylo, yhi = 0, max(max(ys), xhi // 2) or 1

    def px(x):
        return MARGIN + x / (xhi or 1) * (W - 2 * MARGIN)

    def py(y):
        return H - MARGIN - y / (yhi or 1) * (H - 2 * MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{H - MARGIN}" x2="{W - MARGIN}" '
        f'y2="{H - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{H - MARGIN}" '
        f'stroke="black"/>',
        '<text x="320" y="408" text-anchor="middle" font-size="12">'
        'node degree k</text>',
        '<text x="320" y="18" text-anchor="middle" font-size="13">'
        'largest sequence element vs degree (k/2 line dashed)</text>',
        f'<polyline points="{_fmt(px(0))},{_fmt(py(0))} '
        f'{_fmt(px(xhi))},{_fmt(py(xhi / 2))}" fill="none" stroke="#888" '
        f'stroke-dasharray="5,3"/>',
    ]
    for x, y in pairs:
        parts.append(f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="2.5" '
                     f'fill="#1f6fb2" fill-opacity="0.6"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
