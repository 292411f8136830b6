"""
Command line entry point. Every subcommand reads its inputs, runs one step
of the pipeline, prints a short report and writes its side outputs (oval and
trajectory CSVs, SVG portraits) under the output directory.

Exit status is 0 on success, 1 when a computation cannot be carried out or a
requested check fails, and 2 for bad input, unreadable files included.
"""
import argparse
import dataclasses
import logging
import math
import pathlib
import sys
from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from planarcrn import config
from planarcrn.construct import (
    check_invariant_curve,
    classify_transversality,
    transversality_field,
)
from planarcrn.curves import (
    CurveSpec,
    ParamValue,
    catalog,
    extract_ovals,
    parse_param_text,
)
from planarcrn.curves.ovals import OvalSet, Window, centroid
from planarcrn.exceptions import BadParams, PlanarCRNException
from planarcrn.file_formats.network import NetworkFile
from planarcrn.file_formats.ovals import OvalFile
from planarcrn.file_formats.recipe import RecipeFile
from planarcrn.file_formats.system import SystemFile
from planarcrn.file_formats.trajectory import TrajectoryFile
from planarcrn.file_formats.utils import get_file_format
from planarcrn.network import (
    Network,
    PlanarSystem,
    derive_mass_action,
    is_weakly_reversible,
    molecularity,
    order,
)
from planarcrn.plot import render_svg
from planarcrn.polynomial import Poly2
from planarcrn.presets import (
    figure_names,
    figure_preset,
    system_preset,
    system_preset_curve,
)
from planarcrn.realize import ClassReport, is_M_n, is_S_n, realize_M_n, realize_S_n
from planarcrn.recipe import build_from_recipe
from planarcrn.sim import (
    Point,
    SimConfig,
    Target,
    Trajectory,
    boundary_starts,
    grid_starts,
    sweep,
)


logger: logging.Logger = logging.getLogger(__name__)

SIM_OPTIONS = ("t_max", "rel_tol", "abs_tol", "converge_tol", "workers")
# curve parameters with a flag of their own next to -p KEY=VALUE
CURVE_OPTIONS = ("mu", "delta", "deltas")


def _parse_params(values: Sequence[str]) -> Dict[str, ParamValue]:
    params: Dict[str, ParamValue] = {}
    for value in values:
        key, separator, text = value.partition("=")
        key = key.strip()
        if not separator or not key:
            raise BadParams(f"parameters are written key=value, got {repr(value)}")
        if key in params:
            raise BadParams(f"parameter {key} given twice")
        params[key] = parse_param_text(key, text)
    return params


def _parse_floats(name: str, text: str, count: int) -> Tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise BadParams(f"{name} must be {count} comma separated numbers")
    if len(values) != count or not all(math.isfinite(v) for v in values):
        raise BadParams(f"{name} must be {count} comma separated numbers")
    return values


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a subcommand needs besides its positional inputs, checked
    before any computation starts.
    """

    out: pathlib.Path
    resolution: int
    sim: SimConfig
    window: Optional[Window] = None
    params: Tuple[Tuple[str, ParamValue], ...] = ()
    # simulation settings given on the command line
    sim_overrides: Tuple[Tuple[str, float], ...] = ()

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        out = args.out if args.out is not None else config.get_output_directory()
        resolution = getattr(args, "resolution", None) or config.get_resolution()
        window = None
        if getattr(args, "window", None) is not None:
            bounds = _parse_floats("--window", args.window, 4)
            window = Window(*bounds, log_scale=args.log_scale)
        overrides = {
            key: getattr(args, key)
            for key in SIM_OPTIONS
            if getattr(args, key, None) is not None
        }
        params = _parse_params(getattr(args, "param", None) or [])
        for key in CURVE_OPTIONS:
            text = getattr(args, key, None)
            if text is None:
                continue
            if key in params:
                raise BadParams(f"parameter {key} given twice")
            params[key] = parse_param_text(key, text)
        return cls(
            out=pathlib.Path(out),
            resolution=resolution,
            sim=SimConfig.from_config(**overrides),
            window=window,
            params=tuple(sorted(params.items())),
            sim_overrides=tuple(sorted(overrides.items())),
        )

    def output(self, stem: str, extension: str) -> pathlib.Path:
        return self.out / f"{stem}{extension}"


@dataclass(frozen=True)
class Subject:
    """
    The system a subcommand works on, with the network and the invariant
    curve it came with, when there are any.
    """

    name: str
    system: PlanarSystem
    network: Optional[Network] = None
    curve: Optional[CurveSpec] = None


def _custom_curve(h: Poly2, window: Optional[Window]) -> CurveSpec:
    return CurveSpec("custom", h, (), window or Window(*config.get_window_shifted()))


def _load_subject(args: argparse.Namespace, run: RunConfig) -> Subject:
    params = dict(run.params)
    if args.preset is not None:
        if args.input is not None:
            raise BadParams("give either an input file or --preset, not both")
        system = system_preset(args.preset, params)
        curve = system_preset_curve(args.preset, params)
        subject = Subject(args.preset, system, curve=curve)
    elif args.input is not None:
        if params:
            raise BadParams("--param only applies to presets")
        path = pathlib.Path(args.input)
        file_format = get_file_format(str(path))
        stem = path.name[: -len(file_format.extension)] or path.name
        if file_format is NetworkFile:
            network = NetworkFile.read(path)
            subject = Subject(stem, derive_mass_action(network), network=network)
        elif file_format is SystemFile:
            subject = Subject(stem, SystemFile.read(path))
        elif file_format is RecipeFile:
            recipe = RecipeFile.read(path)
            subject = Subject(
                stem, build_from_recipe(recipe), curve=recipe.curve_spec()
            )
        else:
            raise BadParams(f"{path} is not a network, system or recipe file")
    else:
        raise BadParams("give an input file or --preset")
    curve = subject.curve
    meta = subject.system.meta
    if curve is None and meta is not None:
        curve = _custom_curve(meta.h, run.window)
    elif curve is not None and run.window is not None:
        curve = dataclasses.replace(curve, window=run.window)
    return dataclasses.replace(subject, curve=curve)


def _require_curve(subject: Subject) -> CurveSpec:
    if subject.curve is None:
        raise BadParams(f"{subject.name} carries no invariant curve")
    return subject.curve


def _transversal_pair(
    args: argparse.Namespace, subject: Subject
) -> Tuple[Poly2, Poly2]:
    if args.f0 is not None or args.g0 is not None:
        if args.f0 is None or args.g0 is None:
            raise BadParams("give both --f0 and --g0")
        return Poly2.parse(args.f0), Poly2.parse(args.g0)
    meta = subject.system.meta
    if meta is None:
        raise BadParams(f"{subject.name} has no (f0, g0), give --f0 and --g0")
    return meta.f0, meta.g0


def _write_text(path: pathlib.Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as file:
        file.write(text)


def _speed(system: PlanarSystem, point: Point) -> float:
    f = system.f.lower()
    g = system.g.lower()
    return math.hypot(f(*point), g(*point))


def _oval_report(ovals: OvalSet) -> List[str]:
    lines = [f"ovals: {ovals.count}"]
    if ovals.degenerate:
        lines.append("degenerate: yes (saddle cells resolved by the centre value)")
    areas = ovals.areas()
    depths = ovals.nesting_depths()
    for index in ovals.order_by_area():
        oval = ovals.ovals[index]
        cx, cy = centroid(oval)
        radii = np.hypot(oval[:, 0] - cx, oval[:, 1] - cy)
        lines.append(
            f"  oval {index}: area {areas[index]:.6g}, centroid ({cx:.6g}, {cy:.6g}),"
            f" radius {float(np.mean(radii)):.6g}"
            f" [{float(np.min(radii)):.6g}, {float(np.max(radii)):.6g}],"
            f" depth {depths[index]}"
        )
    if ovals.open_components:
        lines.append(f"open components: {len(ovals.open_components)}")
    return lines


def _trajectory_report(
    system: PlanarSystem, trajectories: Sequence[Trajectory]
) -> List[str]:
    lines = []
    for index, trajectory in enumerate(trajectories):
        x, y = trajectory.start
        residual = trajectory.final_residual
        rendered = "" if residual is None else f", |h| {residual:.3e}"
        lines.append(
            f"trajectory {index}: ({x:.4g}, {y:.4g}) -> {trajectory.status}"
            f"{rendered}, |F| {_speed(system, trajectory.end):.3e}"
        )
    hits = Counter(
        trajectory.status.oval_index
        for trajectory in trajectories
        if trajectory.status.converged
    )
    if hits:
        lines.append(
            "ovals reached: "
            + ", ".join(f"{index} ({hits[index]})" for index in sorted(hits))
        )
    return lines


def _starts(args: argparse.Namespace, default_window: Optional[Window]) -> List[Point]:
    window = default_window
    if args.starts_window is not None:
        window = Window(*_parse_floats("--starts-window", args.starts_window, 4))
    points: List[Point] = []
    for text in args.start or []:
        x, y = _parse_floats("--start", text, 2)
        points.append((x, y))
    generated = args.grid is not None or args.boundary is not None or args.corners
    if generated and window is None:
        raise BadParams("generated starts need --starts-window")
    if window is not None and args.grid is not None:
        nx, ny = (int(v) for v in _parse_floats("--grid", args.grid, 2))
        points += grid_starts(window, nx, ny)
    if window is not None and args.boundary is not None:
        points += boundary_starts(window, args.boundary)
    if window is not None and args.corners:
        points += [
            (window.x_min, window.y_min),
            (window.x_max, window.y_min),
            (window.x_max, window.y_max),
            (window.x_min, window.y_max),
        ]
    return points


def cmd_derive(args: argparse.Namespace, run: RunConfig) -> int:
    network = NetworkFile.read(pathlib.Path(args.network))
    system = derive_mass_action(network)
    logger.debug(
        f"order {order(network)}, molecularity {molecularity(network)}"
    )
    text = SystemFile.dumps(system)
    if args.save is not None:
        SystemFile.write(pathlib.Path(args.save), system)
    print(text, end="")
    return 0


def cmd_realize(args: argparse.Namespace, run: RunConfig) -> int:
    system = _load_subject(args, run).system.without_meta()
    if args.klass == "m":
        network = realize_M_n(system, args.n or max(system.degree, 1))
    else:
        network = realize_S_n(system)
    if args.save is not None:
        NetworkFile.write(pathlib.Path(args.save), network)
    print(NetworkFile.dumps(network), end="")
    return 0


def cmd_check(args: argparse.Namespace, run: RunConfig) -> int:
    subject = _load_subject(args, run)
    system = subject.system
    n = args.n or max(system.degree, 1)
    classes = args.klass or ([] if args.weakly_reversible else ["s"])
    report = ClassReport(degree=system.degree)
    for klass in classes:
        report = report.merge(is_M_n(system, n) if klass == "m" else is_S_n(system, n))
    lines = [report.to_text().rstrip("\n")]
    passed = report.passed
    if args.weakly_reversible:
        if subject.network is None:
            raise BadParams("weak reversibility is a property of a network file")
        reversible = is_weakly_reversible(subject.network)
        lines.append(f"weakly reversible: {'yes' if reversible else 'no'}")
        passed = passed and reversible
    print("\n".join(lines))
    return 0 if passed else 1


def cmd_construct(args: argparse.Namespace, run: RunConfig) -> int:
    path = pathlib.Path(args.recipe)
    recipe = RecipeFile.read(path)
    stem = path.name[: -len(RecipeFile.extension)] or path.name
    system = build_from_recipe(recipe)
    h = recipe.curve_spec().poly
    result = check_invariant_curve(h, system)
    SystemFile.write(run.output(stem, SystemFile.extension), system)
    lines = [SystemFile.dumps(system).rstrip("\n")]
    lines.append(f"# degree = {system.degree}")
    if result.is_invariant:
        lines.append(f"# cofactor = {result.cofactor}")
    else:
        lines.append("# h = 0 is not invariant")
    if args.realize:
        network = realize_S_n(system.without_meta())
        NetworkFile.write(run.output(stem, NetworkFile.extension), network)
        lines.append("")
        lines.append(NetworkFile.dumps(network).rstrip("\n"))
    print("\n".join(lines))
    return 0 if result.is_invariant else 1


def cmd_ovals(args: argparse.Namespace, run: RunConfig) -> int:
    spec = catalog(args.curve, dict(run.params), run.window)
    ovals = extract_ovals(spec, run.resolution)
    OvalFile.write(run.output(args.name or spec.name, OvalFile.extension), ovals)
    lines = [f"curve: {spec.name} {spec.describe_params()}".rstrip()]
    if spec.expected_ovals is not None:
        lines.append(f"expected: {spec.expected_ovals}")
    print("\n".join(lines + _oval_report(ovals)))
    return 0


def cmd_classify(args: argparse.Namespace, run: RunConfig) -> int:
    subject = _load_subject(args, run)
    spec = _require_curve(subject)
    f0, g0 = _transversal_pair(args, subject)
    ovals = extract_ovals(spec, run.resolution)
    OvalFile.write(run.output(args.name or subject.name, OvalFile.extension), ovals)
    verdict = classify_transversality(spec.poly, f0, g0, ovals, config.get_tau())
    areas = ovals.areas()
    lines = [f"ovals: {ovals.count}"]
    for index in ovals.order_by_area():
        lines.append(
            f"  oval {index} (area {areas[index]:.6g}): {verdict.tags[index].value}"
        )
    print("\n".join(lines))
    return 0


def _simulate(
    args: argparse.Namespace, run: RunConfig
) -> Tuple[Subject, Optional[OvalSet], List[Trajectory]]:
    subject = _load_subject(args, run)
    ovals = None
    target = None
    if subject.curve is not None:
        ovals = extract_ovals(subject.curve, run.resolution)
        target = Target(subject.curve.poly, ovals)
    default_window = subject.curve.window if subject.curve is not None else None
    starts = _starts(args, default_window)
    if not starts:
        logger.warning("no start points given")
    trajectories = sweep(subject.system, starts, run.sim, target)
    stem = args.name or subject.name
    TrajectoryFile.write(run.output(stem, TrajectoryFile.extension), trajectories)
    if ovals is not None:
        OvalFile.write(run.output(stem, OvalFile.extension), ovals)
    return subject, ovals, trajectories


def cmd_simulate(args: argparse.Namespace, run: RunConfig) -> int:
    subject, _, trajectories = _simulate(args, run)
    print("\n".join(_trajectory_report(subject.system, trajectories)))
    return 0


def cmd_plot(args: argparse.Namespace, run: RunConfig) -> int:
    subject, ovals, trajectories = _simulate(args, run)
    window = run.window or (subject.curve.window if subject.curve else None)
    if window is None:
        raise BadParams("nothing fixes the plot window, give --window")
    shade = None
    if args.shade:
        f0, g0 = _transversal_pair(args, subject)
        shade = transversality_field(_require_curve(subject).poly, f0, g0)
    svg = render_svg(
        window,
        ovals=ovals,
        trajectories=trajectories,
        line=Poly2.parse(args.line) if args.line else None,
        shade_field=shade,
        title=args.title or subject.name,
    )
    path = run.output(args.name or subject.name, ".svg")
    _write_text(path, svg)
    print("\n".join(_trajectory_report(subject.system, trajectories) + [str(path)]))
    return 0


def _preset_sim(values: Sequence[Tuple[str, Any]], run: RunConfig) -> SimConfig:
    overrides: Dict[str, Any] = {}
    for key, value in values:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise BadParams(f"sim.{key} must be a number")
        overrides[key] = value
    # command line settings win over the figure's own
    overrides.update(run.sim_overrides)
    return SimConfig.from_config(**overrides)


def cmd_repro(args: argparse.Namespace, run: RunConfig) -> int:
    preset = figure_preset(args.figure)
    spec = preset.curve_spec()
    ovals = extract_ovals(spec, run.resolution)
    system = preset.build_system()
    trajectories: List[Trajectory] = []
    lines = [
        preset.description,
        f"curve: {spec.name} {spec.describe_params()}".rstrip(),
    ]
    lines += _oval_report(ovals)
    if system is not None:
        cfg = _preset_sim(preset.sim, run)
        trajectories = sweep(
            system, preset.start_points(), cfg, Target(spec.poly, ovals)
        )
        TrajectoryFile.write(
            run.output(preset.name, TrajectoryFile.extension), trajectories
        )
        if system.meta is not None and ovals.count:
            verdict = classify_transversality(
                system.meta.h, system.meta.f0, system.meta.g0, ovals, config.get_tau()
            )
            lines += [
                f"  oval {index}: {verdict.tags[index].value}"
                for index in ovals.order_by_area()
            ]
        lines += _trajectory_report(system, trajectories)
    OvalFile.write(run.output(preset.name, OvalFile.extension), ovals)
    shade = None
    if preset.shade and system is not None and system.meta is not None:
        meta = system.meta
        shade = transversality_field(meta.h, meta.f0, meta.g0)
    svg = render_svg(
        preset.plot_window or spec.window,
        ovals=ovals,
        trajectories=trajectories,
        line=preset.line,
        shade_field=shade,
        title=preset.name,
    )
    path = run.output(preset.name, ".svg")
    _write_text(path, svg)
    lines.append(str(path))
    print("\n".join(lines))
    return 0


def cmd_serve(args: argparse.Namespace, run: RunConfig) -> int:
    from planarcrn.server import main as serve

    serve()
    return 0


def _add_subject_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "input", nargs="?", help="network (.crn), system (.sys) or recipe (.recipe)"
    )
    parser.add_argument("--preset", help="named system instead of an input file")
    parser.add_argument(
        "-p",
        "--param",
        action="append",
        metavar="KEY=VALUE",
        help="preset or curve parameter, lists as comma separated rationals",
    )


def _add_window_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", metavar="X0,X1,Y0,Y1")
    parser.add_argument("--log-scale", action="store_true")
    parser.add_argument("--resolution", type=int, help="marching squares grid size")


def _add_simulation_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--start", action="append", metavar="X,Y")
    parser.add_argument("--grid", metavar="NX,NY")
    parser.add_argument("--boundary", type=int, metavar="COUNT")
    parser.add_argument("--corners", action="store_true")
    parser.add_argument("--starts-window", metavar="X0,X1,Y0,Y1")
    _add_simulation_settings(parser)
    parser.add_argument("--name", help="stem of the output files")


def _add_simulation_settings(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t-max", dest="t_max", type=float)
    parser.add_argument("--rel-tol", dest="rel_tol", type=float)
    parser.add_argument("--abs-tol", dest="abs_tol", type=float)
    parser.add_argument("--converge-tol", dest="converge_tol", type=float)
    parser.add_argument("--workers", type=int)


def _add_pair_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--f0", help="overrides the recorded transversal pair")
    parser.add_argument("--g0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planarcrn",
        description="Planar mass-action systems with algebraic limit cycles.",
    )
    parser.add_argument("--config", type=pathlib.Path, help="configuration file")
    parser.add_argument("--out", type=pathlib.Path, help="output directory")
    parser.add_argument("-v", "--verbose", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    derive = commands.add_parser("derive", help="mass-action ODEs of a network")
    derive.add_argument("network")
    derive.add_argument("--save", help="also write the system to this file")
    derive.set_defaults(handler=cmd_derive)

    realize = commands.add_parser("realize", help="network realizing a system")
    _add_subject_arguments(realize)
    realize.add_argument("--class", dest="klass", choices=["s", "m"], default="s")
    realize.add_argument("--n", type=int)
    realize.add_argument("--save", help="also write the network to this file")
    realize.set_defaults(handler=cmd_realize)

    check = commands.add_parser("check", help="class membership and reversibility")
    _add_subject_arguments(check)
    check.add_argument("--class", dest="klass", choices=["s", "m"], action="append")
    check.add_argument("--n", type=int)
    check.add_argument("--weakly-reversible", action="store_true")
    check.set_defaults(handler=cmd_check)

    construct = commands.add_parser("construct", help="build a system from a recipe")
    construct.add_argument("recipe")
    construct.add_argument("--realize", action="store_true")
    construct.set_defaults(handler=cmd_construct)

    ovals = commands.add_parser("ovals", help="trace the ovals of a catalog curve")
    ovals.add_argument("--curve", required=True)
    ovals.add_argument("-p", "--param", action="append", metavar="KEY=VALUE")
    ovals.add_argument("--mu", help="same as -p mu=VALUE")
    ovals.add_argument("--delta", help="same as -p delta=VALUE")
    ovals.add_argument("--deltas", help="same as -p deltas=V1,V2,...")
    ovals.add_argument("--name", help="stem of the output file")
    _add_window_arguments(ovals)
    ovals.set_defaults(handler=cmd_ovals)

    classify = commands.add_parser("classify", help="stability of each oval")
    _add_subject_arguments(classify)
    _add_window_arguments(classify)
    _add_pair_arguments(classify)
    classify.add_argument("--name", help="stem of the output file")
    classify.set_defaults(handler=cmd_classify)

    simulate = commands.add_parser("simulate", help="integrate trajectories")
    _add_subject_arguments(simulate)
    _add_window_arguments(simulate)
    _add_simulation_arguments(simulate)
    simulate.set_defaults(handler=cmd_simulate)

    plot = commands.add_parser("plot", help="integrate and draw a phase portrait")
    _add_subject_arguments(plot)
    _add_window_arguments(plot)
    _add_simulation_arguments(plot)
    _add_pair_arguments(plot)
    plot.add_argument("--shade", action="store_true")
    plot.add_argument("--line", help="polynomial whose zero set is drawn solid")
    plot.add_argument("--title")
    plot.set_defaults(handler=cmd_plot)

    repro = commands.add_parser("repro", help="regenerate a pinned figure")
    repro.add_argument("figure", choices=figure_names())
    repro.add_argument("--resolution", type=int, help="marching squares grid size")
    _add_simulation_settings(repro)
    repro.set_defaults(handler=cmd_repro)

    serve = commands.add_parser("serve", help="run the HTTP API")
    serve.set_defaults(handler=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> None:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler: Callable[[argparse.Namespace, RunConfig], int] = args.handler
    try:
        config.set_config_path(args.config)
        config.validate()
        run = RunConfig.from_args(args)
        code = handler(args, run)
    except PlanarCRNException as error:
        print(f"{error.get_title()}: {error.get_description()}", file=sys.stderr)
        code = error.exit_code
    except OSError as error:
        print(f"I/O Error: {error}", file=sys.stderr)
        code = 2
    sys.exit(code)


if __name__ == "__main__":
    main()
