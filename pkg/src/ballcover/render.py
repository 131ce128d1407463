"""SVG drawings of regions, coverings and their partitions."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import SEGMENT, Configuration, Region, build_partition

__all__ = ["RenderOptions", "render_svg"]

PALETTE = {
    "background": "#ffffff",
    "region_fill": "#dfe7f2",
    "region_stroke": "#1f3b63",
    "interior_edge": "#9fb3cc",
    "disk_fill": "#f2a541",
    "disk_stroke": "#b86e00",
    "partition": "#4d4d4d",
    "arc": "#d62728",
    "center": "#222222",
}


@dataclass(frozen=True)
class RenderOptions:
    max_px: int = 1024
    margin: float = 0.04
    show_partition: bool = False
    show_arcs: bool = True
    show_interior_edges: bool = False
    disk_opacity: float = 0.35


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(region: Region, cfg: Configuration | None = None, options: RenderOptions | None = None) -> str:
    """SVG 1.1 document for ``region`` and, optionally, a covering ``cfg``.

    The viewport is fitted to the bounding box of the region (and of the
    disks, when given) plus a relative margin. Output depends only on the
    inputs, so identical inputs give identical bytes.
    """
    opt = options or RenderOptions()
    x0, y0, x1, y1 = region.bbox
    if cfg is not None:
        r = cfg.radius
        for cx, cy in cfg.centers:
            x0, y0 = min(x0, cx - r), min(y0, cy - r)
            x1, y1 = max(x1, cx + r), max(y1, cy + r)
    w, h = x1 - x0, y1 - y0
    pad = opt.margin * max(w, h)
    x0 -= pad
    y0 -= pad
    w += 2 * pad
    h += 2 * pad
    scale = opt.max_px / max(w, h)
    W = max(1, round(w * scale))
    H = max(1, round(h * scale))

    def X(x):
        return _fmt((x - x0) * scale)

    def Y(y):
        return _fmt((y0 + h - y) * scale)

    def path(points):
        return "M" + " L".join(f"{X(x)},{Y(y)}" for x, y in points) + " Z"

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="{PALETTE["background"]}"/>',
        f'<g id="region" fill="{PALETTE["region_fill"]}" stroke="none">',
    ]
    for poly in region.polygons:
        out.append(f'<path d="{path(poly)}"/>')
    out.append("</g>")

    sw = _fmt(max(1.0, opt.max_px / 512))
    if opt.show_interior_edges:
        out.append(f'<g id="interior-edges" stroke="{PALETTE["interior_edge"]}" stroke-width="{_fmt(0.5 * float(sw))}">')
        for poly, flags in zip(region.polygons, region.boundary_flags):
            n = len(poly)
            for k in range(n):
                if not flags[k]:
                    (ax, ay), (bx, by) = poly[k], poly[(k + 1) % n]
                    out.append(f'<line x1="{X(ax)}" y1="{Y(ay)}" x2="{X(bx)}" y2="{Y(by)}"/>')
        out.append("</g>")

    out.append(f'<g id="boundary" stroke="{PALETTE["region_stroke"]}" stroke-width="{sw}" stroke-linecap="round">')
    for poly, flags in zip(region.polygons, region.boundary_flags):
        n = len(poly)
        for k in range(n):
            if flags[k]:
                (ax, ay), (bx, by) = poly[k], poly[(k + 1) % n]
                out.append(f'<line x1="{X(ax)}" y1="{Y(ay)}" x2="{X(bx)}" y2="{Y(by)}"/>')
    out.append("</g>")

    if cfg is not None:
        rr = _fmt(cfg.radius * scale)
        out.append(
            f'<g id="disks" fill="{PALETTE["disk_fill"]}" fill-opacity="{_fmt(opt.disk_opacity)}" '
            f'stroke="{PALETTE["disk_stroke"]}" stroke-width="{_fmt(0.5 * float(sw))}">'
        )
        for cx, cy in cfg.centers:
            out.append(f'<circle cx="{X(cx)}" cy="{Y(cy)}" r="{rr}"/>')
        out.append("</g>")

        if opt.show_partition or opt.show_arcs:
            pieces, book = build_partition(region, cfg)
            if opt.show_partition:
                out.append(
                    f'<g id="partition" fill="none" stroke="{PALETTE["partition"]}" '
                    f'stroke-width="{_fmt(0.5 * float(sw))}">'
                )
                for piece in pieces:
                    if piece.is_full_ball:
                        continue
                    pts = [z for z, kind, _ in piece.cycle]
                    segs = []
                    n = len(piece.cycle)
                    for k in range(n):
                        if piece.cycle[k][1] == SEGMENT:
                            (ax, ay), (bx, by) = pts[k], pts[(k + 1) % n]
                            segs.append(f"M{X(ax)},{Y(ay)} L{X(bx)},{Y(by)}")
                    if segs:
                        out.append(f'<path d="{" ".join(segs)}"/>')
                out.append("</g>")
            if opt.show_arcs:
                out.append(f'<g id="arcs" fill="none" stroke="{PALETTE["arc"]}" stroke-width="{sw}">')
                for i, (cx, cy) in enumerate(cfg.centers):
                    if book.circle[i]:
                        out.append(f'<circle cx="{X(cx)}" cy="{Y(cy)}" r="{rr}"/>')
                        continue
                    for arc in book.arcs[i]:
                        out.append(f'<path d="{_arc_path(cx, cy, cfg.radius, arc.theta_v, arc.theta_w, X, Y, rr)}"/>')
                out.append("</g>")

        out.append(f'<g id="centers" fill="{PALETTE["center"]}">')
        dot = _fmt(max(1.0, 1.5 * float(sw)))
        for cx, cy in cfg.centers:
            out.append(f'<circle cx="{X(cx)}" cy="{Y(cy)}" r="{dot}"/>')
        out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _arc_path(cx, cy, r, tv, tw, X, Y, rr):
    span = tw - tv
    # y is flipped in SVG, so a counter-clockwise arc is drawn with sweep-flag 0
    pieces = max(1, math.ceil(span / math.pi))
    d = [f"M{X(cx + r * math.cos(tv))},{Y(cy + r * math.sin(tv))}"]
    for k in range(1, pieces + 1):
        t = tv + span * k / pieces
        d.append(f"A{rr},{rr} 0 0 0 {X(cx + r * math.cos(t))},{Y(cy + r * math.sin(t))}")
    return " ".join(d)
