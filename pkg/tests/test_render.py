"""Figure rasterization: geometry of the transform and drawn ink."""
import math

import numpy as np

from geotutor.geom import Point, ProblemFigure, seg
from geotutor.render import (DEFAULT_MARGIN, DEFAULT_SIZE, figure_svg,
                             fit_transform, overlay_svg, render_figure)


def _square_fig():
    fig = ProblemFigure()
    for pid, xy in (("A", (0, 0)), ("B", (2, 0)), ("C", (2, 2)),
                    ("D", (0, 2))):
        fig.add_point(Point(pid, *map(float, xy)))
    for ab in (("A", "B"), ("B", "C"), ("C", "D"), ("A", "D")):
        fig.add_segment(seg(*ab))
    return fig


def test_transform_round_trip():
    fig = _square_fig()
    tf = fit_transform(fig)
    for pid in fig.points:
        x, y = fig.xy(pid)
        px, py = tf.to_pixel(x, y)
        assert 0 <= px < DEFAULT_SIZE and 0 <= py < DEFAULT_SIZE
        bx, by = tf.to_figure(px, py)
        assert math.isclose(bx, x, abs_tol=1e-9)
        assert math.isclose(by, y, abs_tol=1e-9)


def test_transform_flips_y():
    fig = _square_fig()
    tf = fit_transform(fig)
    _, py_low = tf.to_pixel(*fig.xy("A"))   # y = 0
    _, py_high = tf.to_pixel(*fig.xy("D"))  # y = 2
    assert py_high < py_low


def test_render_puts_ink_on_segments_only():
    fig = _square_fig()
    img, tf = render_figure(fig)
    assert img.shape == (DEFAULT_SIZE, DEFAULT_SIZE)
    assert img.dtype == np.uint8
    # ink exists and respects the margin
    ys, xs = np.nonzero(img < 128)
    assert len(xs) > 0
    pad = DEFAULT_MARGIN - 2
    assert xs.min() >= pad and ys.min() >= pad
    assert xs.max() < DEFAULT_SIZE - pad and ys.max() < DEFAULT_SIZE - pad
    # the square's interior stays blank
    cx, cy = tf.to_pixel(1.0, 1.0)
    assert img[int(cy), int(cx)] == 255


def test_render_is_deterministic():
    fig = _square_fig()
    a, _ = render_figure(fig)
    b, _ = render_figure(fig)
    assert np.array_equal(a, b)


def test_overlay_svg_mentions_every_point():
    svg = overlay_svg(100, 100, [((0, 0), (50, 50))], [("A", (10, 10))])
    assert svg.startswith("<svg")
    assert "<line" in svg and ">A</text>" in svg


def test_figure_svg_lists_segments_and_labels():
    svg = figure_svg(_square_fig())
    assert svg.count("<line") == 4
    for pid in "ABCD":
        assert f">{pid}</text>" in svg
