"""SVG drawings of wedges, branch cut and contours in the complex ``x`` plane.

The drawn plane is one Riemann sheet: the unwrapped angles in
``(c - 2*pi, c]`` where ``c = pi/2 + cut_rotation`` is the direction of the
cut. Contour pieces lying on that sheet are solid, pieces on other sheets
are dashed. Output depends only on the arguments (fixed number format, no
timestamps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .contour import Contour, bg_line, wedge_join
from .wedges import wedges_between

FILL = {"minus": "#9ecae1", "plus": "#fdae6b"}
STROKES = ("#08306b", "#a50f15", "#006d2c", "#54278f")


@dataclass(frozen=True)
class SvgOptions:
    size: int = 480
    extent: float = 3.0
    s_max: float = 12.0
    samples: int = 1201


def _f(v: float) -> str:
    v = round(float(v), 3)
    return "%.3f" % (0.0 if v == 0 else v)


def _xy(z: complex, opts: SvgOptions) -> tuple[str, str]:
    half = opts.size / 2
    k = half / opts.extent
    return _f(half + z.real * k), _f(half - z.imag * k)


def _sector(lo: float, hi: float, opts: SvgOptions) -> str:
    steps = max(2, int(math.ceil((hi - lo) / (math.pi / 90))))
    pts = [_xy(0j, opts)]
    for t in np.linspace(lo, hi, steps + 1):
        pts.append(_xy(1.5 * opts.extent * complex(math.cos(t), math.sin(t)), opts))
    return " ".join(f"{a},{b}" for a, b in pts)


def _runs(mask: np.ndarray):
    """Start/stop indices of maximal runs where ``mask`` is constant."""
    edges = np.nonzero(np.diff(mask.astype(int)))[0] + 1
    bounds = [0, *edges.tolist(), len(mask)]
    for a, b in zip(bounds[:-1], bounds[1:]):
        yield a, b, bool(mask[a])


def export_svg(
    contours: Sequence[Contour],
    *,
    D: int,
    signs: Sequence[str] = ("minus",),
    cut_rotation: float = 0.0,
    options: SvgOptions = SvgOptions(),
    title: str = "",
) -> str:
    opts = options
    top = math.pi / 2 + cut_rotation
    bottom = top - 2 * math.pi
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{opts.size}" height="{opts.size}" '
        f'viewBox="0 0 {opts.size} {opts.size}">',
        f"<title>{title}</title>" if title else "",
        f'<rect x="0" y="0" width="{opts.size}" height="{opts.size}" fill="white"/>',
        f'<clipPath id="frame"><rect x="0" y="0" width="{opts.size}" height="{opts.size}"/></clipPath>',
        '<g id="wedges" clip-path="url(#frame)">',
    ]
    for w in wedges_between(D, bottom, top):
        if w.ansatz_sign not in signs:
            continue
        lo, hi = max(w.interval[0], bottom), min(w.interval[1], top)
        out.append(
            f'<polygon class="wedge {w.ansatz_sign}" data-label="{w.label}" '
            f'points="{_sector(lo, hi, opts)}" fill="{FILL[w.ansatz_sign]}" fill-opacity="0.6" stroke="none"/>'
        )
    out.append("</g>")
    c0, c1 = _xy(0j, opts), _xy(2 * opts.extent * complex(math.cos(top), math.sin(top)), opts)
    out.append(
        f'<line id="cut" x1="{c0[0]}" y1="{c0[1]}" x2="{c1[0]}" y2="{c1[1]}" '
        'stroke="black" stroke-width="2" stroke-dasharray="2,3"/>'
    )
    a0, a1 = _xy(-opts.extent + 0j, opts), _xy(opts.extent + 0j, opts)
    b0, b1 = _xy(-1j * opts.extent, opts), _xy(1j * opts.extent, opts)
    out.append(f'<line class="axis" x1="{a0[0]}" y1="{a0[1]}" x2="{a1[0]}" y2="{a1[1]}" stroke="#888" stroke-width="0.5"/>')
    out.append(f'<line class="axis" x1="{b0[0]}" y1="{b0[1]}" x2="{b1[0]}" y2="{b1[1]}" stroke="#888" stroke-width="0.5"/>')
    s = np.linspace(-opts.s_max, opts.s_max, opts.samples)
    out.append('<g id="contours" clip-path="url(#frame)" fill="none" stroke-width="1.6">')
    for i, c in enumerate(contours):
        x = c.position(s)
        theta = np.asarray(c.angle(s))
        keep = np.abs(x) <= 1.2 * opts.extent
        visible = (theta > bottom) & (theta <= top)
        color = STROKES[i % len(STROKES)]
        for a, b, on_sheet in _runs(visible):
            seg = [j for j in range(a, min(b + 1, len(s))) if keep[j]]
            if len(seg) < 2:
                continue
            pts = " ".join("%s,%s" % _xy(complex(x[j]), opts) for j in seg)
            dash = "" if on_sheet else ' stroke-dasharray="6,4"'
            out.append(f'<polyline class="contour" data-index="{i}" points="{pts}" stroke="{color}"{dash}/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(line for line in out if line) + "\n"


# (contours, D, signs, cut rotation) for the seven reference drawings
def figure_specs() -> dict[str, dict]:
    return {
        "fig1": dict(contours=(bg_line(0.3), wedge_join(1, 6), wedge_join(5, 6)), D=10, signs=("minus",), cut_rotation=0.0),
        "fig2": dict(contours=(wedge_join(2, 6), wedge_join(4, 6)), D=10, signs=("plus",), cut_rotation=0.0),
        "fig3": dict(contours=(bg_line(0.3), wedge_join(3, 2)), D=2, signs=("minus",), cut_rotation=0.0),
        "fig4": dict(contours=(wedge_join(2, 2),), D=2, signs=("plus",), cut_rotation=0.0),
        "fig5": dict(contours=(wedge_join(3, 2),), D=2, signs=("minus",), cut_rotation=-math.pi / 2),
        "fig6": dict(contours=(wedge_join(3, 2),), D=2, signs=("minus",), cut_rotation=math.pi / 2),
        "fig7": dict(contours=(wedge_join(4, 2),), D=2, signs=("plus",), cut_rotation=-math.pi),
    }


def figures(options: SvgOptions = SvgOptions()) -> dict[str, str]:
    return {
        name: export_svg(spec["contours"], D=spec["D"], signs=spec["signs"],
                         cut_rotation=spec["cut_rotation"], options=options, title=name)
        for name, spec in figure_specs().items()
    }
