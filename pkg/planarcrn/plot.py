"""
Standalone SVG phase portraits: a framed window with ticks, the traced curve
drawn dashed, trajectories with their start points, and optionally the
region where the transversality field is negative shaded in magenta. The
shading is a PNG raster embedded in the SVG.
"""
import base64
import io
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np
import png

from planarcrn.curves.ovals import OvalSet, Window, extract_zero_set
from planarcrn.polynomial import Poly2
from planarcrn.sim import Trajectory


logger: logging.Logger = logging.getLogger(__name__)

CURVE_COLOR = "#1f4fd1"
LINE_COLOR = "#d12f1f"
SHADE_RGBA = (224, 64, 224, 96)
TRAJECTORY_COLORS = ("#222222", "#2a7f3f", "#b8641c", "#6b2fa3", "#0f7c8c")
MAX_TRAJECTORY_POINTS = 2000
LINE_RESOLUTION = 64


@dataclass(frozen=True)
class Canvas:
    window: Window
    width: int = 640
    height: int = 640
    margin: int = 56

    @property
    def plot_width(self) -> int:
        return self.width - 2 * self.margin

    @property
    def plot_height(self) -> int:
        return self.height - 2 * self.margin

    def _axis(self, value: np.ndarray, lo: float, hi: float) -> np.ndarray:
        if self.window.log_scale:
            with np.errstate(divide="ignore", invalid="ignore"):
                return (np.log(value) - math.log(lo)) / (math.log(hi) - math.log(lo))
        return (value - lo) / (hi - lo)

    def to_pixels(self, points: np.ndarray) -> np.ndarray:
        w = self.window
        u = self._axis(points[:, 0], w.x_min, w.x_max)
        v = self._axis(points[:, 1], w.y_min, w.y_max)
        return np.stack(
            [
                self.margin + u * self.plot_width,
                self.margin + (1 - v) * self.plot_height,
            ],
            axis=1,
        )

    def inverse_axes(self, columns: int, rows: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Plane coordinates at the centres of a ``columns`` x ``rows`` raster
        laid over the plot area, top row first.
        """
        w = self.window
        u = (np.arange(columns) + 0.5) / columns
        v = 1 - (np.arange(rows) + 0.5) / rows
        if w.log_scale:
            xs = np.exp(math.log(w.x_min) + u * (math.log(w.x_max) - math.log(w.x_min)))
            ys = np.exp(math.log(w.y_min) + v * (math.log(w.y_max) - math.log(w.y_min)))
        else:
            xs = w.x_min + u * (w.x_max - w.x_min)
            ys = w.y_min + v * (w.y_max - w.y_min)
        return xs, ys


def _ticks(lo: float, hi: float, log_scale: bool) -> List[float]:
    if log_scale:
        decades = range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)
        ticks = [10.0**k for k in decades if lo <= 10.0**k <= hi]
        if len(ticks) < 3:
            ticks = sorted(
                m * 10.0**k
                for k in decades
                for m in (1, 2, 5)
                if lo <= m * 10.0**k <= hi
            )
        return ticks
    raw = (hi - lo) / 6
    magnitude = 10.0 ** math.floor(math.log10(raw))
    step = next(m * magnitude for m in (1, 2, 5, 10) if m * magnitude >= raw)
    first = math.ceil(lo / step)
    last = math.floor(hi / step)
    return [k * step for k in range(first, last + 1)]


def _path_data(pixels: np.ndarray) -> str:
    finite = np.all(np.isfinite(pixels), axis=1)
    parts: List[str] = []
    pen_down = False
    for (u, v), ok in zip(pixels, finite):
        if not ok:
            pen_down = False
            continue
        parts.append(f"{'L' if pen_down else 'M'}{u:.2f},{v:.2f}")
        pen_down = True
    return " ".join(parts)


def shading_png(
    field: Poly2, canvas: Canvas, columns: int = 200, rows: int = 200
) -> bytes:
    """
    RGBA raster of the region where ``field`` is negative, transparent
    elsewhere.
    """
    xs, ys = canvas.inverse_axes(columns, rows)
    grid_x, grid_y = np.meshgrid(xs, ys)
    negative = field.eval_grid(grid_x, grid_y) < 0
    rows_data: List[List[int]] = []
    for row in negative:
        pixels: List[int] = []
        for inside in row:
            pixels += list(SHADE_RGBA) if inside else [0, 0, 0, 0]
        rows_data.append(pixels)
    image: png.Image = png.from_array(rows_data, "RGBA")
    buffer = io.BytesIO()
    image.write(buffer)
    return buffer.getvalue()


def _polylines(
    canvas: Canvas, polylines: Iterable[np.ndarray], color: str, dashed: bool
) -> List[str]:
    dash = ' stroke-dasharray="6 4"' if dashed else ""
    return [
        f'<path d="{_path_data(canvas.to_pixels(polyline))}" fill="none"'
        f' stroke="{color}" stroke-width="2"{dash}/>'
        for polyline in polylines
        if len(polyline) > 1
    ]


def _thin(points: np.ndarray) -> np.ndarray:
    if len(points) <= MAX_TRAJECTORY_POINTS:
        return points
    stride = math.ceil(len(points) / MAX_TRAJECTORY_POINTS)
    thinned = points[::stride]
    if not np.array_equal(thinned[-1], points[-1]):
        thinned = np.vstack([thinned, points[-1:]])
    return thinned


def _axes(canvas: Canvas) -> List[str]:
    w = canvas.window
    m = canvas.margin
    elements = [
        f'<rect x="{m}" y="{m}" width="{canvas.plot_width}"'
        f' height="{canvas.plot_height}" fill="none" stroke="#000" stroke-width="1"/>'
    ]
    bottom = m + canvas.plot_height
    for value in _ticks(w.x_min, w.x_max, w.log_scale):
        (u, _), = canvas.to_pixels(np.array([[value, w.y_min]]))
        elements.append(
            f'<line x1="{u:.2f}" y1="{bottom}" x2="{u:.2f}" y2="{bottom + 6}"'
            ' stroke="#000"/>'
        )
        elements.append(
            f'<text x="{u:.2f}" y="{bottom + 22}" font-size="12"'
            f' text-anchor="middle">{value:g}</text>'
        )
    for value in _ticks(w.y_min, w.y_max, w.log_scale):
        (_, v), = canvas.to_pixels(np.array([[w.x_min, value]]))
        elements.append(
            f'<line x1="{m - 6}" y1="{v:.2f}" x2="{m}" y2="{v:.2f}" stroke="#000"/>'
        )
        elements.append(
            f'<text x="{m - 10}" y="{v + 4:.2f}" font-size="12"'
            f' text-anchor="end">{value:g}</text>'
        )
    elements.append(
        f'<text x="{m + canvas.plot_width / 2:.2f}" y="{canvas.height - 10}"'
        ' font-size="14" text-anchor="middle">x</text>'
    )
    elements.append(
        f'<text x="14" y="{m + canvas.plot_height / 2:.2f}" font-size="14"'
        ' text-anchor="middle">y</text>'
    )
    return elements


def render_svg(
    window: Window,
    ovals: Optional[OvalSet] = None,
    trajectories: Sequence[Trajectory] = (),
    line: Optional[Poly2] = None,
    shade_field: Optional[Poly2] = None,
    title: str = "",
    canvas: Optional[Canvas] = None,
) -> str:
    canvas = canvas or Canvas(window)
    m = canvas.margin
    body: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg"'
        f' xmlns:xlink="http://www.w3.org/1999/xlink"'
        f' width="{canvas.width}" height="{canvas.height}"'
        f' viewBox="0 0 {canvas.width} {canvas.height}">',
        '<rect width="100%" height="100%" fill="#fff"/>',
        "<defs>",
        f'<clipPath id="plot-area"><rect x="{m}" y="{m}"'
        f' width="{canvas.plot_width}" height="{canvas.plot_height}"/></clipPath>',
        "</defs>",
    ]
    if title:
        body.append(
            f'<text x="{canvas.width / 2:.2f}" y="{m / 2:.2f}" font-size="14"'
            f' text-anchor="middle">{escape(title)}</text>'
        )
    body.append('<g clip-path="url(#plot-area)">')
    if shade_field is not None:
        encoded = base64.b64encode(shading_png(shade_field, canvas)).decode("ascii")
        body.append(
            f'<image class="shading" x="{m}" y="{m}" width="{canvas.plot_width}"'
            f' height="{canvas.plot_height}" preserveAspectRatio="none"'
            f' xlink:href="data:image/png;base64,{encoded}"/>'
        )
    if line is not None:
        traced = extract_zero_set(line, window, LINE_RESOLUTION)
        body += _polylines(
            canvas, traced.ovals + traced.open_components, LINE_COLOR, dashed=False
        )
    if ovals is not None:
        body += _polylines(canvas, ovals.ovals, CURVE_COLOR, dashed=True)
        body += _polylines(canvas, ovals.open_components, CURVE_COLOR, dashed=True)
    for index, trajectory in enumerate(trajectories):
        color = TRAJECTORY_COLORS[index % len(TRAJECTORY_COLORS)]
        points = _thin(trajectory.points)
        body.append(
            f'<path class="trajectory" d="{_path_data(canvas.to_pixels(points))}"'
            f' fill="none" stroke="{color}" stroke-width="1.2"/>'
        )
        (u, v), = canvas.to_pixels(points[:1])
        if math.isfinite(u) and math.isfinite(v):
            body.append(
                f'<circle class="start" cx="{u:.2f}" cy="{v:.2f}" r="3"'
                f' fill="{color}"/>'
            )
    body.append("</g>")
    body += _axes(canvas)
    body.append("</svg>")
    logger.debug(f"rendered {len(trajectories)} trajectories into an SVG")
    return "\n".join(body) + "\n"
