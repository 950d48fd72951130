"""Tiny SVG emitter for d=1 overlay plots (no plotting dependency).

Writes a fixed-size canvas with axes, tick labels, and one polyline per
curve.  Only the real part of the samples is drawn.
"""

WIDTH, HEIGHT = 720.0, 420.0
MARGIN = 48.0
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")

_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
    'viewBox="0 0 {w:.0f} {h:.0f}">\n'
    '<rect width="{w:.0f}" height="{h:.0f}" fill="#ffffff"/>\n'
)


def _ticks(lo, hi, n=5):
    span = hi - lo
    if span <= 0:
        return [lo]
    return [lo + span * i / (n - 1) for i in range(n)]


def write_overlay_svg(path, x, curves):
    """Write an overlay plot of 1-d curves.

    Parameters
    ----------
    x : sequence of float
        Shared abscissae.
    curves : list of (label, values) pairs
        values are real sequences of the same length as x.
    """
    x = [float(v) for v in x]
    series = [(label, [float(v) for v in vals]) for label, vals in curves]
    lo_x, hi_x = min(x), max(x)
    all_y = [v for _, vals in series for v in vals] or [0.0]
    lo_y, hi_y = min(all_y), max(all_y)
    if hi_y == lo_y:
        hi_y = lo_y + 1.0
    pad = 0.05 * (hi_y - lo_y)
    lo_y, hi_y = lo_y - pad, hi_y + pad

    def sx(v):
        return MARGIN + (v - lo_x) / (hi_x - lo_x) * (WIDTH - 2 * MARGIN)

    def sy(v):
        return HEIGHT - MARGIN - (v - lo_y) / (hi_y - lo_y) * (HEIGHT - 2 * MARGIN)

    parts = [_HEADER.format(w=WIDTH, h=HEIGHT)]
    # axes box
    parts.append(
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
        f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="#444444"/>\n'
    )
    for tv in _ticks(lo_x, hi_x):
        px = sx(tv)
        parts.append(
            f'<line x1="{px:.1f}" y1="{HEIGHT - MARGIN}" x2="{px:.1f}" '
            f'y2="{HEIGHT - MARGIN + 5}" stroke="#444444"/>\n'
            f'<text x="{px:.1f}" y="{HEIGHT - MARGIN + 18}" font-size="11" '
            f'text-anchor="middle" font-family="sans-serif">{tv:.3g}</text>\n'
        )
    for tv in _ticks(lo_y, hi_y):
        py = sy(tv)
        parts.append(
            f'<line x1="{MARGIN - 5}" y1="{py:.1f}" x2="{MARGIN}" y2="{py:.1f}" '
            f'stroke="#444444"/>\n'
            f'<text x="{MARGIN - 8}" y="{py + 4:.1f}" font-size="11" '
            f'text-anchor="end" font-family="sans-serif">{tv:.3g}</text>\n'
        )
    for i, (label, vals) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, vals))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>\n'
        )
        ly = MARGIN + 16 + 16 * i
        parts.append(
            f'<line x1="{WIDTH - MARGIN - 120}" y1="{ly - 4}" x2="{WIDTH - MARGIN - 96}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>\n'
            f'<text x="{WIDTH - MARGIN - 90}" y="{ly}" font-size="12" '
            f'font-family="sans-serif">{label}</text>\n'
        )
    parts.append("</svg>\n")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("".join(parts))
