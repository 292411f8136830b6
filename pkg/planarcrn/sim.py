"""
Adaptive integration of planar systems and convergence certification.

Trajectories are integrated with the Dormand-Prince 5(4) pair under PI step
size control. Output is sampled on a fixed time grid by cubic Hermite
interpolation between accepted steps, so the recorded samples do not depend
on the internal step sequence. When a target curve ``h = 0`` is attached, a
trajectory counts as converged once ``|h|`` stays below ``converge_tol`` for
``dwell_time`` time units.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from planarcrn import config
from planarcrn.curves.ovals import OvalSet, Window
from planarcrn.exceptions import BadParams
from planarcrn.network import PlanarSystem
from planarcrn.polynomial import Poly2


logger: logging.Logger = logging.getLogger(__name__)

Point = Tuple[float, float]

# Dormand-Prince 5(4) tableau
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = (
    9017 / 3168,
    -355 / 33,
    46732 / 5247,
    49 / 176,
    -5103 / 18656,
)
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# difference between the 5th and the embedded 4th order weights
E1, E3, E4, E5, E6, E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
ERROR_EXPONENT = 0.7 / 5
PREVIOUS_ERROR_EXPONENT = 0.4 / 5

MIN_REL_TOL = 1e-13


class Status(Enum):
    CONVERGED_TO_CURVE = "ConvergedToCurve"
    REACHED_T_MAX = "ReachedTmax"
    LEFT_DOMAIN = "LeftDomain"
    STEP_FAILURE = "StepFailure"


@dataclass(frozen=True)
class TerminalStatus:
    status: Status
    oval_index: Optional[int] = None

    @property
    def converged(self) -> bool:
        return self.status == Status.CONVERGED_TO_CURVE

    def __str__(self) -> str:
        if self.converged and self.oval_index is not None:
            return f"{self.status.value}({self.oval_index})"
        return self.status.value

    @classmethod
    def parse(cls, text: str) -> "TerminalStatus":
        name, _, rest = text.partition("(")
        try:
            status = Status(name)
        except ValueError:
            raise BadParams(f"unknown terminal status {repr(text)}")
        if rest:
            return cls(status, int(rest.rstrip(")")))
        return cls(status)


@dataclass(frozen=True)
class SimConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    t_max: float = 200.0
    max_steps: int = 2_000_000
    converge_tol: float = 1e-6
    dwell_time: float = 5.0
    sample_interval: float = 0.01
    workers: int = 1

    def __post_init__(self) -> None:
        for name in (
            "rel_tol",
            "abs_tol",
            "t_max",
            "max_steps",
            "converge_tol",
            "dwell_time",
            "sample_interval",
            "workers",
        ):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise BadParams(f"{name} must be positive, got {value}")
        if self.rel_tol < MIN_REL_TOL:
            raise BadParams(
                f"rel_tol must be at least {MIN_REL_TOL}, got {self.rel_tol}"
            )

    @classmethod
    def from_config(cls, **overrides: Optional[float]) -> "SimConfig":
        values = {
            "rel_tol": config.get_rel_tol(),
            "abs_tol": config.get_abs_tol(),
            "t_max": config.get_t_max(),
            "max_steps": config.get_max_steps(),
            "converge_tol": config.get_converge_tol(),
            "dwell_time": config.get_dwell_time(),
            "sample_interval": config.get_sample_interval(),
            "workers": config.get_workers(),
        }
        for key, value in overrides.items():
            if key not in values:
                raise BadParams(f"unknown simulation setting {key}")
            if value is not None:
                values[key] = value
        return cls(**values)  # pyre-ignore[6]


@dataclass(frozen=True)
class Target:
    h: Poly2
    ovals: OvalSet


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    points: np.ndarray
    status: TerminalStatus
    config: SimConfig
    h_residuals: Optional[np.ndarray] = None
    steps: int = 0
    rejected_steps: int = 0

    @property
    def samples(self) -> List[Tuple[float, float, float]]:
        return [
            (float(t), float(x), float(y))
            for t, (x, y) in zip(self.times, self.points)
        ]

    @property
    def start(self) -> Point:
        return (float(self.points[0, 0]), float(self.points[0, 1]))

    @property
    def end(self) -> Point:
        return (float(self.points[-1, 0]), float(self.points[-1, 1]))

    @property
    def final_residual(self) -> Optional[float]:
        if self.h_residuals is None or not len(self.h_residuals):
            return None
        return float(self.h_residuals[-1])


def _hermite(
    theta: float,
    step: float,
    y0: Point,
    y1: Point,
    k0: Point,
    k1: Point,
) -> Point:
    t2 = theta * theta
    t3 = t2 * theta
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + theta
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return (
        h00 * y0[0] + h10 * step * k0[0] + h01 * y1[0] + h11 * step * k1[0],
        h00 * y0[1] + h10 * step * k0[1] + h01 * y1[1] + h11 * step * k1[1],
    )


def _error_norm(
    error: Point, y0: Point, y1: Point, cfg: SimConfig
) -> float:
    total = 0.0
    for e, a, b in zip(error, y0, y1):
        scale = cfg.abs_tol + cfg.rel_tol * max(abs(a), abs(b))
        total += (e / scale) ** 2
    return math.sqrt(total / 2)


def _initial_step(
    rhs: Callable[[float, float], Point], y0: Point, k0: Point, cfg: SimConfig
) -> float:
    scale = [cfg.abs_tol + cfg.rel_tol * abs(v) for v in y0]
    d0 = math.sqrt(sum((v / s) ** 2 for v, s in zip(y0, scale)) / 2)
    d1 = math.sqrt(sum((v / s) ** 2 for v, s in zip(k0, scale)) / 2)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, cfg.t_max)
    y1 = (y0[0] + h0 * k0[0], y0[1] + h0 * k0[1])
    k1 = rhs(*y1)
    d2 = (
        math.sqrt(sum(((a - b) / s) ** 2 for a, b, s in zip(k1, k0, scale)) / 2)
        / h0
    )
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, cfg.t_max)


def _finite(point: Point) -> bool:
    return math.isfinite(point[0]) and math.isfinite(point[1])


def dormand_prince_step(
    rhs: Callable[[float, float], Point], point: Point, slope: Point, step: float
) -> Tuple[Point, Point, Point]:
    """
    Takes one Dormand-Prince 5(4) step of size ``step`` from ``point``, where
    ``slope`` is ``rhs(point)``.

    Returns the 5th order solution, the slope there and the difference to the
    embedded 4th order solution. The slope is NaN when the solution overflows.
    """
    k1 = slope
    x, y = point
    k2 = rhs(x + step * A21 * k1[0], y + step * A21 * k1[1])
    k3 = rhs(
        x + step * (A31 * k1[0] + A32 * k2[0]),
        y + step * (A31 * k1[1] + A32 * k2[1]),
    )
    k4 = rhs(
        x + step * (A41 * k1[0] + A42 * k2[0] + A43 * k3[0]),
        y + step * (A41 * k1[1] + A42 * k2[1] + A43 * k3[1]),
    )
    k5 = rhs(
        x + step * (A51 * k1[0] + A52 * k2[0] + A53 * k3[0] + A54 * k4[0]),
        y + step * (A51 * k1[1] + A52 * k2[1] + A53 * k3[1] + A54 * k4[1]),
    )
    k6 = rhs(
        x
        + step
        * (A61 * k1[0] + A62 * k2[0] + A63 * k3[0] + A64 * k4[0] + A65 * k5[0]),
        y
        + step
        * (A61 * k1[1] + A62 * k2[1] + A63 * k3[1] + A64 * k4[1] + A65 * k5[1]),
    )
    y1: Point = (
        x + step * (B1 * k1[0] + B3 * k3[0] + B4 * k4[0] + B5 * k5[0] + B6 * k6[0]),
        y + step * (B1 * k1[1] + B3 * k3[1] + B4 * k4[1] + B5 * k5[1] + B6 * k6[1]),
    )
    if not _finite(y1):
        return y1, (math.nan, math.nan), (math.inf, math.inf)
    k7 = rhs(*y1)
    error = (
        step
        * (
            E1 * k1[0]
            + E3 * k3[0]
            + E4 * k4[0]
            + E5 * k5[0]
            + E6 * k6[0]
            + E7 * k7[0]
        ),
        step
        * (
            E1 * k1[1]
            + E3 * k3[1]
            + E4 * k4[1]
            + E5 * k5[1]
            + E6 * k6[1]
            + E7 * k7[1]
        ),
    )
    return y1, k7, error


def integrate(
    sys: PlanarSystem,
    start: Point,
    cfg: SimConfig,
    target: Optional[Target] = None,
) -> Trajectory:
    if not _finite(start):
        raise BadParams(f"start point {start} is not finite")
    f = sys.f.lower()
    g = sys.g.lower()
    h = target.h.lower() if target is not None else None

    def rhs(x: float, y: float) -> Point:
        return (f(x, y), g(x, y))

    t = 0.0
    y0: Point = (float(start[0]), float(start[1]))
    k1 = rhs(*y0)
    step = _initial_step(rhs, y0, k1, cfg)
    previous_error = 1e-4
    rejected_last = False

    times: List[float] = [0.0]
    points: List[Point] = [y0]
    next_sample = 1
    below_since: Optional[float] = None
    if h is not None and abs(h(*y0)) < cfg.converge_tol:
        below_since = 0.0

    steps = 0
    rejected = 0
    status: Optional[Status] = None
    min_step = 16 * np.finfo(np.float64).eps

    while status is None:
        if steps >= cfg.max_steps:
            logger.warning(f"gave up after {steps} steps at t = {t}")
            status = Status.STEP_FAILURE
            break
        remaining = cfg.t_max - t
        last_step = step >= remaining
        if last_step:
            step = remaining
        if step <= min_step * max(1.0, abs(t)):
            logger.warning(f"step size underflow at t = {t}, point {y0}")
            status = Status.STEP_FAILURE
            break
        steps += 1
        y1, k7, error = dormand_prince_step(rhs, y0, k1, step)
        if not (_finite(y1) and _finite(k7)):
            # overflow in a stage counts as a rejected step
            rejected += 1
            step *= MIN_FACTOR
            rejected_last = True
            continue
        norm = _error_norm(error, y0, y1, cfg)

        if norm > 1.0:
            rejected += 1
            factor = max(MIN_FACTOR, SAFETY * norm ** (-1 / 5))
            step *= factor
            rejected_last = True
            continue

        t_next = cfg.t_max if last_step else t + step
        while next_sample * cfg.sample_interval <= t_next:
            sample_t = next_sample * cfg.sample_interval
            theta = (sample_t - t) / step
            times.append(sample_t)
            points.append(_hermite(theta, step, y0, y1, k1, k7))
            next_sample += 1

        norm = max(norm, 1e-10)
        factor = SAFETY * norm ** (-ERROR_EXPONENT) * previous_error ** (
            PREVIOUS_ERROR_EXPONENT
        )
        factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
        if rejected_last:
            factor = min(factor, 1.0)
        previous_error = norm
        rejected_last = False

        t, y0, k1 = t_next, y1, k7
        step *= factor

        if y0[0] < -cfg.abs_tol or y0[1] < -cfg.abs_tol:
            status = Status.LEFT_DOMAIN
        elif h is not None:
            if abs(h(*y0)) < cfg.converge_tol:
                if below_since is None:
                    below_since = t
                if t - below_since >= cfg.dwell_time:
                    status = Status.CONVERGED_TO_CURVE
            else:
                below_since = None
        if status is None and t >= cfg.t_max:
            status = Status.REACHED_T_MAX

    if t > times[-1]:
        times.append(t)
        points.append(y0)

    oval_index: Optional[int] = None
    if status == Status.CONVERGED_TO_CURVE and target is not None:
        index, distance = target.ovals.nearest_oval(y0)
        oval_index = index if index >= 0 else None
        logger.debug(f"converged at t = {t} onto oval {oval_index} ({distance})")

    point_array = np.array(points, dtype=np.float64)
    residuals = None
    if h is not None:
        residuals = np.abs(h.grid(point_array[:, 0], point_array[:, 1]))
    terminal = TerminalStatus(status, oval_index)
    logger.debug(
        f"trajectory from {start}: {terminal} at t = {t} after {steps} steps"
        f" ({rejected} rejected)"
    )
    return Trajectory(
        times=np.array(times, dtype=np.float64),
        points=point_array,
        status=terminal,
        config=cfg,
        h_residuals=residuals,
        steps=steps,
        rejected_steps=rejected,
    )


def sweep(
    sys: PlanarSystem,
    starts: Sequence[Point],
    cfg: SimConfig,
    target: Optional[Target] = None,
) -> List[Trajectory]:
    if not starts:
        return []
    run = partial(integrate, sys, cfg=cfg, target=target)
    if cfg.workers > 1 and len(starts) > 1:
        logger.debug(f"sweeping {len(starts)} starts over {cfg.workers} workers")
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            trajectories = list(executor.map(run, starts))
    else:
        trajectories = [run(start) for start in starts]
    unconverged = sum(1 for traj in trajectories if not traj.status.converged)
    if target is not None and unconverged:
        logger.warning(
            f"{unconverged} of {len(trajectories)} trajectories did not converge"
        )
    return trajectories


def monotone_residual_check(traj: Trajectory) -> bool:
    """
    Whether ``|h|`` is non-increasing along the trajectory, up to a slack
    derived from the integration tolerances. Only meaningful for systems
    built by the gradient construction, and only inside the open positive
    quadrant where the cofactor is nonpositive.
    """
    if traj.h_residuals is None:
        raise BadParams("trajectory has no target curve attached")
    if np.any(traj.points <= 0):
        raise BadParams("trajectory leaves the open positive quadrant")
    residuals = traj.h_residuals
    if len(residuals) < 2:
        return True
    cfg = traj.config
    slack = 10 * (cfg.rel_tol * float(np.max(residuals)) + cfg.abs_tol)
    return bool(np.all(np.diff(residuals) <= slack))


def grid_starts(window: Window, nx: int, ny: int) -> List[Point]:
    if nx < 1 or ny < 1:
        raise BadParams(f"grid needs at least one point per axis, got {nx}x{ny}")
    xs = np.linspace(window.x_min, window.x_max, nx)
    ys = np.linspace(window.y_min, window.y_max, ny)
    return [(float(x), float(y)) for y in ys for x in xs]


def boundary_starts(window: Window, count: int) -> List[Point]:
    """
    ``count`` points spread evenly along the window boundary, walked
    counter-clockwise from the lower left corner and offset by half a spacing
    so that no point falls on that corner.
    """
    if count < 1:
        raise BadParams(f"need at least one boundary start, got {count}")
    width = window.x_max - window.x_min
    height = window.y_max - window.y_min
    perimeter = 2 * (width + height)
    points: List[Point] = []
    for k in range(count):
        s = (k + 0.5) * perimeter / count
        if s < width:
            points.append((window.x_min + s, window.y_min))
        elif s < width + height:
            points.append((window.x_max, window.y_min + s - width))
        elif s < 2 * width + height:
            points.append((window.x_max - (s - width - height), window.y_max))
        else:
            points.append((window.x_min, window.y_max - (s - 2 * width - height)))
    return points
