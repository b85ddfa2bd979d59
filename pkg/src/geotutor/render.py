"""Rasterize figures for the detection pipeline and draw debug overlays.

The renderer is the ground-truth side of the detection round trip: a figure
drawn here at a known scale must be recoverable by `detect.digitize` with
small pixel error.  Rendering is deterministic (no antialiasing, fixed
stroke) so the pipeline can be tested against exact expectations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw

from .geom import ProblemFigure

DEFAULT_SIZE = 400             # longest image side in pixels
DEFAULT_MARGIN = 30            # pixels of blank border
DEFAULT_STROKE = 2             # stroke width in pixels
BACKGROUND = 255
INK = 0


@dataclass(frozen=True)
class ViewTransform:
    """Affine map from figure coordinates to pixel coordinates (y flipped)."""

    scale: float
    offset_x: float
    offset_y: float
    height: int

    def to_pixel(self, x: float, y: float) -> tuple[float, float]:
        return (self.offset_x + self.scale * x,
                self.height - 1 - (self.offset_y + self.scale * y))

    def to_figure(self, px: float, py: float) -> tuple[float, float]:
        return ((px - self.offset_x) / self.scale,
                (self.height - 1 - py - self.offset_y) / self.scale)


def fit_transform(fig: ProblemFigure, size: int = DEFAULT_SIZE,
                  margin: int = DEFAULT_MARGIN) -> ViewTransform:
    """Transform placing the figure inside a size x size canvas."""
    xs = [p.x for p in fig.points.values()]
    ys = [p.y for p in fig.points.values()]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    scale = (size - 2 * margin) / span
    return ViewTransform(scale,
                         margin - scale * min(xs),
                         margin - scale * min(ys),
                         size)


def render_figure(fig: ProblemFigure, size: int = DEFAULT_SIZE,
                  margin: int = DEFAULT_MARGIN,
                  stroke: int = DEFAULT_STROKE):
    """Draw the figure's segments; returns (grayscale array, transform)."""
    tf = fit_transform(fig, size, margin)
    img = Image.new("L", (size, size), BACKGROUND)
    draw = ImageDraw.Draw(img)
    for (a, b) in sorted(fig.segments):
        pa = tf.to_pixel(*fig.xy(a))
        pb = tf.to_pixel(*fig.xy(b))
        draw.line([pa, pb], fill=INK, width=stroke)
    return np.asarray(img, dtype=np.uint8), tf


def overlay_svg(width: int, height: int, lines, points) -> str:
    """Debug overlay: detected lines and recovered points on a blank canvas.

    `lines` is an iterable of ((x1, y1), (x2, y2)) pixel pairs, `points` of
    (label, (x, y)).
    """
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for (p1, p2) in lines:
        parts.append(
            f'<line x1="{p1[0]:.2f}" y1="{p1[1]:.2f}" x2="{p2[0]:.2f}" '
            f'y2="{p2[1]:.2f}" stroke="crimson" stroke-width="1.5"/>')
    for (label, (x, y)) in points:
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" '
                     f'fill="navy"/>')
        parts.append(f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" '
                     f'font-size="12" fill="navy">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def figure_svg(fig: ProblemFigure, size: int = DEFAULT_SIZE,
               margin: int = DEFAULT_MARGIN) -> str:
    """The figure itself as SVG (labeled points, solid given segments)."""
    tf = fit_transform(fig, size, margin)
    lines = []
    for (a, b) in sorted(fig.segments):
        lines.append((tf.to_pixel(*fig.xy(a)), tf.to_pixel(*fig.xy(b))))
    pts = [(pid, tf.to_pixel(*fig.xy(pid))) for pid in sorted(fig.points)]
    return overlay_svg(size, size, lines, pts)


def rigid_jitter_angle(seed: int) -> float:
    """Small deterministic rotation used by the synthetic test corpus."""
    return math.radians((seed * 37 % 21) - 10)
