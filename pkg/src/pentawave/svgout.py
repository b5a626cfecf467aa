"""Minimal hand-rolled SVG output: schematic lines, circles, and polygons.

World coordinates map linearly onto a square pixel viewport with the y
axis flipped (world +y is up, SVG +y is down). The world bounding box
given at construction is centered and scaled uniformly to fill the
viewport minus a margin, so aspect ratio is preserved. No rasterization
and no third-party drawing dependency.
"""

from __future__ import annotations

import math


def diverging_color(value, vmax):
    """Blue-white-red hex color for value in [-vmax, vmax]."""
    if vmax <= 0:
        return "#ffffff"
    t = max(-1.0, min(1.0, value / vmax))
    if t >= 0:
        r, g, b = 255, round(255 * (1 - t)), round(255 * (1 - t))
    else:
        r, g, b = round(255 * (1 + t)), round(255 * (1 + t)), 255
    return f"#{r:02x}{g:02x}{b:02x}"


class SvgCanvas:
    """Accumulates SVG elements in world coordinates and serializes them."""

    def __init__(self, world_bbox, size=800, margin=40):
        xmin, xmax, ymin, ymax = (float(v) for v in world_bbox)
        if not (xmin < xmax and ymin < ymax):
            raise ValueError("world_bbox must have positive extent")
        self.size = int(size)
        span = max(xmax - xmin, ymax - ymin)
        self._scale = (self.size - 2.0 * margin) / span
        self._cx = 0.5 * (xmin + xmax)
        self._cy = 0.5 * (ymin + ymax)
        self._elements = []

    def map_point(self, x, y):
        px = 0.5 * self.size + self._scale * (x - self._cx)
        py = 0.5 * self.size - self._scale * (y - self._cy)
        return px, py

    @property
    def scale(self):
        return self._scale

    def line(self, p0, p1, stroke="#888888", width=1.0, opacity=1.0):
        x0, y0 = self.map_point(*p0)
        x1, y1 = self.map_point(*p1)
        self._elements.append(
            f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" '
            f'stroke="{stroke}" stroke-width="{width:g}" stroke-opacity="{opacity:g}" />'
        )

    def circle(self, center, radius_px, fill="#000000", stroke="none", width=1.0):
        x, y = self.map_point(*center)
        self._elements.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius_px:g}" fill="{fill}" '
            f'stroke="{stroke}" stroke-width="{width:g}" />'
        )

    def polygon(self, points, fill="none", stroke="#000000", width=1.0, opacity=1.0):
        mapped = " ".join(
            f"{px:.2f},{py:.2f}" for px, py in (self.map_point(x, y) for x, y in points)
        )
        self._elements.append(
            f'<polygon points="{mapped}" fill="{fill}" fill-opacity="{opacity:g}" '
            f'stroke="{stroke}" stroke-width="{width:g}" />'
        )

    def text(self, anchor, label, size_px=12, fill="#333333"):
        x, y = self.map_point(*anchor)
        self._elements.append(
            f'<text x="{x:.2f}" y="{y:.2f}" font-size="{size_px:g}" '
            f'font-family="monospace" fill="{fill}">{label}</text>'
        )

    def world_circle(self, center, radius, stroke="#333333", width=1.0, fill="none"):
        """Circle whose radius is given in world units rather than pixels."""
        x, y = self.map_point(*center)
        self._elements.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius * self._scale:.2f}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="{width:g}" />'
        )

    def to_string(self):
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" '
            f'height="{self.size}" viewBox="0 0 {self.size} {self.size}">'
        )
        background = f'<rect width="{self.size}" height="{self.size}" fill="#ffffff" />'
        return "\n".join([head, background, *self._elements, "</svg>"]) + "\n"

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_string())


def clip_line_to_box(point, direction, bbox):
    """Clip the infinite line point + t*direction to a rectangle.

    Returns (p0, p1) world endpoints, or None when the line misses the box.
    """
    xmin, xmax, ymin, ymax = bbox
    px, py = point
    dx, dy = direction
    t_lo, t_hi = -math.inf, math.inf
    for p, d, lo, hi in ((px, dx, xmin, xmax), (py, dy, ymin, ymax)):
        if abs(d) < 1e-15:
            if p < lo or p > hi:
                return None
            continue
        t0, t1 = (lo - p) / d, (hi - p) / d
        if t0 > t1:
            t0, t1 = t1, t0
        t_lo, t_hi = max(t_lo, t0), min(t_hi, t1)
    if t_lo >= t_hi:
        return None
    return (
        (px + t_lo * dx, py + t_lo * dy),
        (px + t_hi * dx, py + t_hi * dy),
    )
