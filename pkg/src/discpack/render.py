"""Static SVG figures of a disc tree.

One circle element per disc, painted level by level so children sit on top
of their parents.  Odd levels are filled, even levels are painted in the
background color so they read as holes; the optional enlarged systems are
dashed outlines.  The viewport is fitted to the drawn geometry with a 5%
margin.
"""

from __future__ import annotations

from .hierarchy import DiscTree
from .packing import enlarge

FILL_ODD = "#35618f"
FILL_EVEN = "#ffffff"
STROKE = "#1d2a38"
ENLARGED_STROKE = "#c23b22"
CANVAS = 800


def render_svg(tree: DiscTree, show_enlarged: bool = False) -> str:
    discs = [(n.disc, n.level) for level in tree.levels for n in level]
    extras: list[tuple[float, float, float]] = []
    if show_enlarged:
        ps = tree.root_packing()
        extras.extend(
            (d.center.x, d.center.y, d.radius) for d in enlarge(ps).discs
        )
        for k in range(tree.depth - 1):
            for node in tree.levels[k]:
                kids = tree.children_packing(node)
                extras.extend(
                    (d.center.x, d.center.y, d.radius) for d in enlarge(kids).discs
                )

    xs: list[float] = []
    ys: list[float] = []
    for d, _ in discs:
        xs.extend((d.center.x - d.radius, d.center.x + d.radius))
        ys.extend((d.center.y - d.radius, d.center.y + d.radius))
    for cx, cy, r in extras:
        xs.extend((cx - r, cx + r))
        ys.extend((cy - r, cy + r))
    if not xs:
        xs = ys = [-1.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-12)
    margin = 0.05 * span
    vx = x0 - margin
    vy = y0 - margin
    vw = (x1 - x0) + 2.0 * margin
    vh = (y1 - y0) + 2.0 * margin
    stroke_w = 0.0015 * max(vw, vh)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{CANVAS}" height="{CANVAS}" viewBox="{vx} {vy} {vw} {vh}">',
        f'<rect x="{vx}" y="{vy}" width="{vw}" height="{vh}" fill="{FILL_EVEN}"/>',
    ]
    for d, level in discs:
        fill = FILL_ODD if level % 2 == 1 else FILL_EVEN
        parts.append(
            f'<circle cx="{d.center.x}" cy="{d.center.y}" r="{d.radius}" '
            f'fill="{fill}" stroke="{STROKE}" stroke-width="{stroke_w}"/>'
        )
    for cx, cy, r in extras:
        parts.append(
            f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" '
            f'stroke="{ENLARGED_STROKE}" stroke-width="{stroke_w}" '
            f'stroke-dasharray="{4 * stroke_w} {3 * stroke_w}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_svg(tree: DiscTree, path: str, show_enlarged: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(tree, show_enlarged=show_enlarged))
