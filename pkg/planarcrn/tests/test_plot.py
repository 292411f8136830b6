import base64
import io
import re
from unittest import TestCase

import numpy as np
import png
from pyexpect import expect

from planarcrn.curves.ovals import Window, extract_zero_set
from planarcrn.plot import Canvas, _ticks, render_svg, shading_png
from planarcrn.polynomial import Poly2
from planarcrn.sim import SimConfig, Status, TerminalStatus, Trajectory


CIRCLE = Poly2.parse("x^2 + y^2 - 4 x - 4 y + 7")
WINDOW = Window(0.0, 4.0, 0.0, 4.0)


def _trajectory(points: np.ndarray) -> Trajectory:
    return Trajectory(
        np.linspace(0.0, 1.0, len(points)),
        points,
        TerminalStatus(Status.REACHED_T_MAX),
        SimConfig(),
    )


class CanvasTest(TestCase):
    def test_to_pixels(self) -> None:
        canvas = Canvas(WINDOW, width=500, height=500, margin=50)
        pixels = canvas.to_pixels(np.array([[0.0, 0.0], [4.0, 4.0], [2.0, 1.0]]))
        expect(pixels.tolist()).to_equal([[50.0, 450.0], [450.0, 50.0], [250.0, 350.0]])

    def test_log_axes(self) -> None:
        canvas = Canvas(Window(0.1, 10.0, 0.1, 10.0, log_scale=True), 500, 500, 50)
        (u, v), = canvas.to_pixels(np.array([[1.0, 1.0]]))
        expect(u).close_to(250.0, max_delta=1e-9)
        expect(v).close_to(250.0, max_delta=1e-9)
        xs, _ = canvas.inverse_axes(2, 2)
        expect(xs[0] * xs[1]).close_to(1.0, max_delta=1e-9)


class TicksTest(TestCase):
    def test_linear_ticks(self) -> None:
        expect(_ticks(0.0, 4.0, False)).to_equal([0.0, 1.0, 2.0, 3.0, 4.0])
        expect(_ticks(0.3, 4.0, False)).to_equal([1.0, 2.0, 3.0, 4.0])

    def test_log_ticks(self) -> None:
        expect(_ticks(0.01, 100.0, True)).to_equal([0.01, 0.1, 1.0, 10.0, 100.0])
        expect(_ticks(0.5, 4.0, True)).to_equal([0.5, 1.0, 2.0])


class RenderTest(TestCase):
    def test_curve_only(self) -> None:
        ovals = extract_zero_set(CIRCLE, WINDOW, 64)
        svg = render_svg(WINDOW, ovals=ovals, title="circle & co")
        expect(svg.startswith('<?xml version="1.0" encoding="UTF-8"?>')).is_true()
        expect(svg.rstrip().endswith("</svg>")).is_true()
        expect(svg.count('stroke-dasharray="6 4"')).to_equal(1)
        expect("circle &amp; co" in svg).is_true()
        expect("<circle" in svg).is_false()
        expect("<image" in svg).is_false()

    def test_trajectories(self) -> None:
        first = _trajectory(np.array([[1.0, 1.0], [2.0, 1.5], [3.0, 3.0]]))
        second = _trajectory(np.array([[3.5, 0.5], [2.0, 2.0]]))
        svg = render_svg(WINDOW, trajectories=[first, second])
        expect(svg.count('class="trajectory"')).to_equal(2)
        expect(svg.count('class="start"')).to_equal(2)
        paths = re.findall(r'class="trajectory" d="([^"]*)"', svg)
        expect(paths[1]).to_equal("M518.00,518.00 L320.00,320.00")

    def test_long_trajectories_are_thinned(self) -> None:
        t = np.linspace(0, 20, 10001)
        points = np.stack([2 + np.cos(t), 2 + np.sin(t)], axis=1)
        svg = render_svg(WINDOW, trajectories=[_trajectory(points)])
        (path,) = re.findall(r'class="trajectory" d="([^"]*)"', svg)
        expect(path.count("L") <= 2001).is_true()

    def test_points_outside_a_log_window_break_the_path(self) -> None:
        window = Window(0.1, 10.0, 0.1, 10.0, log_scale=True)
        points = np.array([[1.0, 1.0], [0.0, 2.0], [2.0, 2.0], [3.0, 3.0]])
        svg = render_svg(window, trajectories=[_trajectory(points)])
        (path,) = re.findall(r'class="trajectory" d="([^"]*)"', svg)
        expect(path.count("M")).to_equal(2)

    def test_line_and_shading(self) -> None:
        svg = render_svg(
            WINDOW, line=Poly2.parse("y - x"), shade_field=Poly2.parse("x - 2")
        )
        expect(svg.count('class="shading"')).to_equal(1)
        expect('stroke="#d12f1f"' in svg).is_true()

    def test_shading_png(self) -> None:
        canvas = Canvas(WINDOW)
        data = shading_png(Poly2.parse("x - 2"), canvas, columns=8, rows=4)
        width, height, rows, info = png.Reader(bytes=data).read()
        expect((width, height)).to_equal((8, 4))
        expect(info["alpha"]).is_true()
        first_row = list(next(iter(rows)))
        # left half of the window has x < 2
        expect(first_row[3]).to_equal(96)
        expect(first_row[-1]).to_equal(0)

    def test_shading_is_embedded(self) -> None:
        svg = render_svg(WINDOW, shade_field=Poly2.parse("x - 2"))
        (encoded,) = re.findall(r"data:image/png;base64,([A-Za-z0-9+/=]+)", svg)
        reader = png.Reader(file=io.BytesIO(base64.b64decode(encoded)))
        width, height, _, _ = reader.read()
        expect((width, height)).to_equal((200, 200))
