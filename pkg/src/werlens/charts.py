"""Self-contained SVG emitters for attribution bars and gain histograms.

No plotting dependency: the charts are plain rect/text/line elements with
fixed 2-decimal coordinates, so identical inputs produce identical bytes and
the files diff cleanly in tests.  Every figure also exists as CSV, so any
plotting stack can re-render it.
"""

from __future__ import annotations

from typing import Sequence

POSITIVE_COLOR = "#d6604d"
NEGATIVE_COLOR = "#4393c3"
MIXED_COLOR = "#999999"
AXIS_COLOR = "#333333"
FONT = 'font-family="monospace" font-size="12"'


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _svg_document(width: float, height: float, body: list[str], comments: Sequence[str]) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        *(f"<!-- {c} -->" for c in comments),
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def bar_chart_svg(
    rows: Sequence[tuple[str, float]],
    title: str,
    comments: Sequence[str] = (),
    width: float = 720.0,
    bar_height: float = 20.0,
) -> str:
    """Horizontal bar chart; negative values extend left of the zero line."""
    if not rows:
        raise ValueError("no rows to chart")
    label_w = max(len(label) for label, _ in rows) * 7.2 + 16
    top, bottom, right = 40.0, 24.0, 70.0
    plot_w = width - label_w - right
    height = top + bottom + len(rows) * (bar_height + 6)

    lo = min(0.0, min(v for _, v in rows))
    hi = max(0.0, max(v for _, v in rows))
    span = hi - lo or 1.0
    zero_x = label_w + (0.0 - lo) / span * plot_w

    body = [f'<text x="{_fmt(label_w)}" y="20" {FONT} font-weight="bold">{_escape(title)}</text>']
    y = top
    for label, value in rows:
        x_val = label_w + (value - lo) / span * plot_w
        bar_x = min(zero_x, x_val)
        bar_w = abs(x_val - zero_x)
        color = POSITIVE_COLOR if value >= 0 else NEGATIVE_COLOR
        body.append(
            f'<rect x="{_fmt(bar_x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
            f'height="{_fmt(bar_height)}" fill="{color}"/>'
        )
        body.append(
            f'<text x="{_fmt(label_w - 6)}" y="{_fmt(y + bar_height - 5)}" {FONT} '
            f'text-anchor="end">{_escape(label)}</text>'
        )
        text_x = x_val + 4 if value >= 0 else x_val - 4
        anchor = "start" if value >= 0 else "end"
        body.append(
            f'<text x="{_fmt(text_x)}" y="{_fmt(y + bar_height - 5)}" {FONT} '
            f'text-anchor="{anchor}">{value:+.3f}</text>'
        )
        y += bar_height + 6
    body.append(
        f'<line x1="{_fmt(zero_x)}" y1="{_fmt(top - 6)}" x2="{_fmt(zero_x)}" '
        f'y2="{_fmt(y)}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
    )
    return _svg_document(width, height, body, comments)


def histogram_svg(
    bins: Sequence[tuple[float, float, int, str]],
    title: str,
    comments: Sequence[str] = (),
    width: float = 720.0,
    height: float = 360.0,
) -> str:
    """Vertical histogram with sign-based coloring of the bins."""
    if not bins:
        raise ValueError("no bins to chart")
    left, right, top, bottom = 56.0, 20.0, 40.0, 44.0
    plot_w = width - left - right
    plot_h = height - top - bottom
    max_count = max(count for _, _, count, _ in bins) or 1
    colors = {"neg": NEGATIVE_COLOR, "pos": POSITIVE_COLOR, "mixed": MIXED_COLOR}

    bar_w = plot_w / len(bins)
    body = [f'<text x="{_fmt(left)}" y="20" {FONT} font-weight="bold">{_escape(title)}</text>']
    for i, (_, _, count, sign) in enumerate(bins):
        bar_h = plot_h * count / max_count
        x = left + i * bar_w
        y = top + plot_h - bar_h
        body.append(
            f'<rect x="{_fmt(x + 1)}" y="{_fmt(y)}" width="{_fmt(max(bar_w - 2, 1.0))}" '
            f'height="{_fmt(bar_h)}" fill="{colors.get(sign, MIXED_COLOR)}"/>'
        )
        if count:
            body.append(
                f'<text x="{_fmt(x + bar_w / 2)}" y="{_fmt(y - 4)}" {FONT} '
                f'text-anchor="middle">{count}</text>'
            )
    baseline = top + plot_h
    body.append(
        f'<line x1="{_fmt(left)}" y1="{_fmt(baseline)}" x2="{_fmt(left + plot_w)}" '
        f'y2="{_fmt(baseline)}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
    )
    lo, hi = bins[0][0], bins[-1][1]
    body.append(
        f'<text x="{_fmt(left)}" y="{_fmt(baseline + 16)}" {FONT} text-anchor="middle">{lo:.2f}</text>'
    )
    body.append(
        f'<text x="{_fmt(left + plot_w)}" y="{_fmt(baseline + 16)}" {FONT} '
        f'text-anchor="middle">{hi:.2f}</text>'
    )
    return _svg_document(width, height, body, comments)


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
