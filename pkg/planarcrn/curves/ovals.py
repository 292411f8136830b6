"""
Oval extraction for real algebraic curves ``h(x, y) = 0``.

The curve is located with marching squares on a sign grid over a window.
Crossings are placed on cell edges by linear interpolation, and the segments
of neighbouring cells are linked through the edges they share. Components
that close up are ovals; components that run into the window boundary are
kept apart as open components.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np

from planarcrn.exceptions import BadParams, ResolutionTooCoarse
from planarcrn.polynomial import LoweredPoly2, Poly2


logger: logging.Logger = logging.getLogger(__name__)

MIN_RESOLUTION = 32

# cell sides, named by the corner pair they join
BOTTOM, RIGHT, TOP, LEFT = range(4)
# corners counter-clockwise from bottom-left, with the two sides touching each
CORNER_SIDES: Tuple[Tuple[int, int], ...] = (
    (BOTTOM, LEFT),
    (BOTTOM, RIGHT),
    (RIGHT, TOP),
    (TOP, LEFT),
)


@dataclass(frozen=True)
class Window:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    log_scale: bool = False

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise BadParams(f"empty window {self.bounds}")
        if self.log_scale and min(self.x_min, self.y_min) <= 0:
            raise BadParams("log-scale windows must lie in the open positive quadrant")

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        return (self.x_min, self.x_max, self.y_min, self.y_max)

    def axes(self, resolution: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Grid coordinates along each axis, in log space for log-scale windows.
        """
        if self.log_scale:
            return (
                np.linspace(math.log(self.x_min), math.log(self.x_max), resolution + 1),
                np.linspace(math.log(self.y_min), math.log(self.y_max), resolution + 1),
            )
        return (
            np.linspace(self.x_min, self.x_max, resolution + 1),
            np.linspace(self.y_min, self.y_max, resolution + 1),
        )

    def to_plane(self, points: np.ndarray) -> np.ndarray:
        if self.log_scale:
            return np.exp(points)
        return points

    def cell_size(self, resolution: int) -> float:
        if self.log_scale:
            # plane size of the largest cell, at the far corner
            return max(
                self.x_max * (1 - (self.x_min / self.x_max) ** (1 / resolution)),
                self.y_max * (1 - (self.y_min / self.y_max) ** (1 / resolution)),
            )
        return max(self.x_max - self.x_min, self.y_max - self.y_min) / resolution


@dataclass(frozen=True, eq=False)
class OvalSet:
    ovals: Tuple[np.ndarray, ...]
    open_components: Tuple[np.ndarray, ...]
    window: Window
    resolution: int
    degenerate: bool = False

    @property
    def count(self) -> int:
        return len(self.ovals)

    @property
    def cell_size(self) -> float:
        return self.window.cell_size(self.resolution)

    def areas(self) -> List[float]:
        return [abs(signed_area(oval)) for oval in self.ovals]

    def nesting_depths(self) -> List[int]:
        """
        Number of other ovals enclosing each oval.
        """
        depths = []
        for index, oval in enumerate(self.ovals):
            depths.append(
                sum(
                    1
                    for other_index, other in enumerate(self.ovals)
                    if other_index != index and contains(other, oval[0])
                )
            )
        return depths

    def order_by_area(self) -> List[int]:
        areas = self.areas()
        return sorted(range(len(self.ovals)), key=lambda index: areas[index])

    def nearest_oval(self, point: Tuple[float, float]) -> Tuple[int, float]:
        best_index = -1
        best_distance = math.inf
        for index, oval in enumerate(self.ovals):
            distance = distance_to_polyline(point, oval)
            if distance < best_distance:
                best_index, best_distance = index, distance
        return best_index, best_distance


def signed_area(polyline: np.ndarray) -> float:
    x = polyline[:, 0]
    y = polyline[:, 1]
    return 0.5 * float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


def centroid(polyline: np.ndarray) -> Tuple[float, float]:
    x = polyline[:, 0]
    y = polyline[:, 1]
    cross = x[:-1] * y[1:] - x[1:] * y[:-1]
    area = 0.5 * float(np.sum(cross))
    if area == 0.0:
        return (float(np.mean(x[:-1])), float(np.mean(y[:-1])))
    cx = float(np.sum((x[:-1] + x[1:]) * cross)) / (6 * area)
    cy = float(np.sum((y[:-1] + y[1:]) * cross)) / (6 * area)
    return (cx, cy)


def contains(polyline: np.ndarray, point: Sequence[float]) -> bool:
    """
    Even-odd test of ``point`` against the closed ``polyline``.
    """
    px, py = float(point[0]), float(point[1])
    x0 = polyline[:-1, 0]
    y0 = polyline[:-1, 1]
    x1 = polyline[1:, 0]
    y1 = polyline[1:, 1]
    straddles = (y0 > py) != (y1 > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        crossing_x = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
    hits = np.logical_and(straddles, px < crossing_x)
    return bool(np.count_nonzero(hits) % 2)


def distance_to_polyline(point: Sequence[float], polyline: np.ndarray) -> float:
    p = np.asarray(point, dtype=np.float64)
    a = polyline[:-1]
    b = polyline[1:]
    ab = b - a
    lengths = np.einsum("ij,ij->i", ab, ab)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(lengths > 0, np.einsum("ij,ij->i", p - a, ab) / lengths, 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a + ab * t[:, None]
    return float(np.min(np.linalg.norm(closest - p, axis=1)))


class _SignGrid:
    def __init__(self, poly: LoweredPoly2, window: Window, resolution: int) -> None:
        self.poly = poly
        self.window = window
        self.resolution = resolution
        self.us, self.vs = window.axes(resolution)
        plane_x = window.to_plane(self.us)
        plane_y = window.to_plane(self.vs)
        grid_x, grid_y = np.meshgrid(plane_x, plane_y)
        # values[j, i] is the value at (us[i], vs[j])
        self.values: np.ndarray = poly.grid(grid_x, grid_y)
        self.positive: np.ndarray = self.values > 0

    def cell_corner_signs(self) -> np.ndarray:
        p = self.positive
        return np.stack([p[:-1, :-1], p[:-1, 1:], p[1:, 1:], p[1:, :-1]], axis=-1)

    def saddle_cells(self) -> np.ndarray:
        corners = self.cell_corner_signs()
        diagonals_agree = np.logical_and(
            corners[..., 0] == corners[..., 2], corners[..., 1] == corners[..., 3]
        )
        return np.logical_and(diagonals_agree, corners[..., 0] != corners[..., 1])

    def center_values(self, cells: np.ndarray) -> np.ndarray:
        i = cells[:, 1]
        j = cells[:, 0]
        u = (self.us[i] + self.us[i + 1]) / 2
        v = (self.vs[j] + self.vs[j + 1]) / 2
        return self.poly.grid(self.window.to_plane(u), self.window.to_plane(v))

    def edge_id(self, i: int, j: int, side: int) -> int:
        n = self.resolution
        if side == BOTTOM:
            return j * n + i
        if side == TOP:
            return (j + 1) * n + i
        vertical_offset = (n + 1) * n
        if side == LEFT:
            return vertical_offset + j * (n + 1) + i
        return vertical_offset + j * (n + 1) + i + 1

    def crossing(self, edge: int) -> Tuple[float, float]:
        n = self.resolution
        vertical_offset = (n + 1) * n
        if edge < vertical_offset:
            j, i = divmod(edge, n)
            v0 = self.values[j, i]
            v1 = self.values[j, i + 1]
            t = _interpolation_parameter(v0, v1)
            return (self.us[i] + t * (self.us[i + 1] - self.us[i]), self.vs[j])
        j, i = divmod(edge - vertical_offset, n + 1)
        v0 = self.values[j, i]
        v1 = self.values[j + 1, i]
        t = _interpolation_parameter(v0, v1)
        return (self.us[i], self.vs[j] + t * (self.vs[j + 1] - self.vs[j]))


def _interpolation_parameter(v0: float, v1: float) -> float:
    if v0 == v1:
        return 0.5
    return min(max(v0 / (v0 - v1), 0.0), 1.0)


def _cell_segments(
    grid: _SignGrid, center_signs: Dict[Tuple[int, int], bool]
) -> List[Tuple[int, int]]:
    corners = grid.cell_corner_signs()
    mixed = np.logical_and(np.any(corners, axis=-1), ~np.all(corners, axis=-1))
    segments: List[Tuple[int, int]] = []
    for j, i in np.argwhere(mixed):
        j, i = int(j), int(i)
        signs = [bool(s) for s in corners[j, i]]
        center = center_signs.get((j, i))
        if center is not None:
            # saddle: every corner whose sign differs from the center is cut off
            for corner, sign in enumerate(signs):
                if sign != center:
                    side_a, side_b = CORNER_SIDES[corner]
                    segments.append(
                        (grid.edge_id(i, j, side_a), grid.edge_id(i, j, side_b))
                    )
            continue
        sides = [
            side
            for side, (c0, c1) in enumerate(((0, 1), (1, 2), (3, 2), (0, 3)))
            if signs[c0] != signs[c1]
        ]
        segments.append((grid.edge_id(i, j, sides[0]), grid.edge_id(i, j, sides[1])))
    return segments


def _link(
    grid: _SignGrid, segments: Sequence[Tuple[int, int]]
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    neighbours: Dict[int, List[int]] = {}
    for a, b in segments:
        neighbours.setdefault(a, []).append(b)
        neighbours.setdefault(b, []).append(a)

    visited: Set[int] = set()

    def walk(start: int) -> Tuple[List[int], bool]:
        path = [start]
        visited.add(start)
        current = start
        while True:
            following = next((e for e in neighbours[current] if e not in visited), None)
            if following is None:
                closed = start in neighbours[current] and len(path) > 2
                return path, closed
            path.append(following)
            visited.add(following)
            current = following

    def to_polyline(path: List[int], closed: bool) -> np.ndarray:
        points = [grid.crossing(edge) for edge in path]
        if closed:
            points.append(points[0])
        return grid.window.to_plane(np.array(points, dtype=np.float64))

    ovals: List[np.ndarray] = []
    open_components: List[np.ndarray] = []
    ends = sorted(edge for edge, linked in neighbours.items() if len(linked) == 1)
    for edge in ends:
        if edge not in visited:
            path, _ = walk(edge)
            open_components.append(to_polyline(path, False))
    for edge in sorted(neighbours):
        if edge not in visited:
            path, closed = walk(edge)
            if closed:
                ovals.append(to_polyline(path, True))
            else:
                open_components.append(to_polyline(path, False))
    return ovals, open_components


def extract_zero_set(poly: Poly2, window: Window, resolution: int) -> OvalSet:
    if resolution < MIN_RESOLUTION:
        raise BadParams(
            f"resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )
    lowered = poly.lower()
    grid = _SignGrid(lowered, window, resolution)
    saddles = np.argwhere(grid.saddle_cells())
    if len(saddles):
        logger.debug(
            f"{len(saddles)} saddle cells at resolution {resolution}, refining"
        )
        grid = _SignGrid(lowered, window, resolution * 2)
        saddles = np.argwhere(grid.saddle_cells())
    center_signs: Dict[Tuple[int, int], bool] = {}
    if len(saddles):
        centers = grid.center_values(saddles)
        if np.any(centers == 0):
            raise ResolutionTooCoarse(grid.resolution)
        for (j, i), value in zip(saddles, centers):
            center_signs[(int(j), int(i))] = bool(value > 0)
    ovals, open_components = _link(grid, _cell_segments(grid, center_signs))
    oval_set = OvalSet(
        ovals=tuple(ovals),
        open_components=tuple(open_components),
        window=window,
        resolution=grid.resolution,
        degenerate=bool(len(saddles)),
    )
    logger.debug(
        f"found {oval_set.count} ovals and {len(open_components)} open components"
        f" at resolution {grid.resolution}"
    )
    return oval_set
