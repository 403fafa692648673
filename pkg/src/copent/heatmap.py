"""Hand-emitted SVG heatmaps of association matrices.

No imaging dependency: the output is one 12px <rect> per matrix cell in
row-major order, axis labels taken from the column names, and a vertical
legend bar.  Cell color linearly interpolates between the two documented
endpoints over the observed finite min/max; masked cells (the diagonal by
default, and NA entries) use a fixed neutral fill.  Output is a pure
function of the input matrix, byte-identical across runs.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .assoc import AssociationMatrix

CELL = 12
LOW_COLOR = "#f7fbff"
HIGH_COLOR = "#08306b"
MASK_COLOR = "#cccccc"
_LEGEND_STEPS = 24
_CHAR_W = 7  # monospace label width estimate at font-size 11
_FONT = 'font-family="monospace" font-size="11"'


def _hex_to_rgb(color: str) -> tuple[int, int, int]:
    return tuple(int(color[i:i + 2], 16) for i in (1, 3, 5))


def _blend(t: float) -> str:
    lo = _hex_to_rgb(LOW_COLOR)
    hi = _hex_to_rgb(HIGH_COLOR)
    rgb = tuple(round(a + t * (b - a)) for a, b in zip(lo, hi))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def render_heatmap(
    m: AssociationMatrix,
    *,
    mask_diagonal: bool = True,
    clamp_nonneg: bool = False,
) -> str:
    """Render an AssociationMatrix as an SVG document string.

    clamp_nonneg clamps negative values to zero before the color scale is
    computed (display only; the matrix itself is never clamped).
    """
    n = m.n_cols
    values = np.array(m.values, dtype=np.float64)
    if clamp_nonneg:
        values = np.maximum(values, 0.0)
    if mask_diagonal:
        np.fill_diagonal(values, np.nan)

    finite = values[np.isfinite(values)]
    vmin = float(finite.min()) if finite.size else 0.0
    vmax = float(finite.max()) if finite.size else 1.0
    span = vmax - vmin

    label_px = max((len(nm) for nm in m.names), default=1) * _CHAR_W + 6
    left = label_px
    top = label_px
    grid = n * CELL
    legend_x = left + grid + 18
    width = legend_x + 16 + 8 * _CHAR_W
    height = top + max(grid, _LEGEND_STEPS * 8) + 10

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<title>{escape(m.measure)} association matrix</title>',
    ]
    for i in range(n):
        for j in range(n):
            v = values[i, j]
            if np.isnan(v):
                fill = MASK_COLOR
            else:
                t = 0.0 if span == 0.0 else (v - vmin) / span
                fill = _blend(t)
            parts.append(
                f'<rect class="cell" x="{left + j * CELL}" y="{top + i * CELL}" '
                f'width="{CELL}" height="{CELL}" fill="{fill}"/>'
            )
    for i, name in enumerate(m.names):
        y = top + i * CELL + CELL - 3
        parts.append(
            f'<text class="row-label" x="{left - 4}" y="{y}" '
            f'text-anchor="end" {_FONT}>{escape(name)}</text>'
        )
    for j, name in enumerate(m.names):
        x = left + j * CELL + CELL - 3
        parts.append(
            f'<text class="col-label" x="{x}" y="{top - 4}" text-anchor="start" '
            f'transform="rotate(-90 {x} {top - 4})" {_FONT}>{escape(name)}</text>'
        )
    # legend: vertical bar, max at the top
    step_h = max(grid // _LEGEND_STEPS, 4)
    for s in range(_LEGEND_STEPS):
        t = 1.0 - s / (_LEGEND_STEPS - 1)
        parts.append(
            f'<rect class="legend-step" x="{legend_x}" y="{top + s * step_h}" '
            f'width="12" height="{step_h}" fill="{_blend(t)}"/>'
        )
    parts.append(
        f'<text class="legend-max" x="{legend_x + 16}" y="{top + 9}" '
        f'{_FONT}>{_fmt(vmax)}</text>'
    )
    parts.append(
        f'<text class="legend-min" x="{legend_x + 16}" '
        f'y="{top + _LEGEND_STEPS * step_h}" {_FONT}>{_fmt(vmin)}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
