import traceback
from typing import Any, Dict, Mapping, Optional, Tuple

from flask import Blueprint, Response, jsonify, request
from pyre_extensions import none_throws

from planarcrn import config
from planarcrn.construct import check_invariant_curve
from planarcrn.curves import catalog_summary, parse_param_text
from planarcrn.exceptions import (
    BadParams,
    ComputationFailure,
    PlanarCRNException,
)
from planarcrn.file_formats.network import parse_network, print_network
from planarcrn.file_formats.recipe import RecipeFile
from planarcrn.network import (
    PlanarSystem,
    derive_mass_action,
    is_weakly_reversible,
    molecularity,
    order,
)
from planarcrn.polynomial import Poly2
from planarcrn.realize import is_M_n, is_S_n, realize_M_n, realize_S_n
from planarcrn.recipe import build_from_recipe
from planarcrn.server.utils import read_cached_ovals


api = Blueprint("api", __name__, url_prefix="/api")

CLASSES = ("s", "m")


@api.errorhandler(PlanarCRNException)
def handle_planarcrn_exception(
    exception: PlanarCRNException,
) -> Tuple[Response, int]:
    tb = traceback.TracebackException.from_exception(exception)
    return (
        jsonify(
            {
                "title": exception.get_title(),
                "description": exception.get_description(),
                "traceback": "".join(tb.format()),
            }
        ),
        500 if isinstance(exception, ComputationFailure) else 400,
    )


def _json_body() -> Mapping[str, Any]:
    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        raise BadParams("the request body must be a JSON object")
    return body


def _string(body: Mapping[str, Any], key: str) -> str:
    value = body.get(key)
    if not isinstance(value, str):
        raise BadParams(f"{key} must be a string")
    return value


def _system(body: Mapping[str, Any]) -> PlanarSystem:
    return PlanarSystem(
        Poly2.parse(_string(body, "f")), Poly2.parse(_string(body, "g"))
    )


def _class_and_n(body: Mapping[str, Any], system: PlanarSystem) -> Tuple[str, int]:
    klass = body.get("class", "s")
    if klass not in CLASSES:
        raise BadParams(f"class must be one of {', '.join(CLASSES)}")
    n = body.get("n", max(system.degree, 1))
    if isinstance(n, bool) or not isinstance(n, int):
        raise BadParams("n must be an integer")
    return klass, n


@api.route("/derive", methods=["POST"])
def derive() -> Response:
    network = parse_network(_string(_json_body(), "network"))
    system = derive_mass_action(network)
    return jsonify(
        {
            "f": str(system.f),
            "g": str(system.g),
            "order": order(network),
            "molecularity": molecularity(network),
            "weakly_reversible": is_weakly_reversible(network),
        }
    )


@api.route("/check", methods=["POST"])
def check() -> Response:
    body = _json_body()
    system = _system(body)
    klass, n = _class_and_n(body, system)
    report = is_M_n(system, n) if klass == "m" else is_S_n(system, n)
    return jsonify({**report.to_kv(), "passed": report.passed})


@api.route("/realize", methods=["POST"])
def realize() -> Response:
    body = _json_body()
    system = _system(body)
    klass, n = _class_and_n(body, system)
    network = realize_M_n(system, n) if klass == "m" else realize_S_n(system)
    return jsonify({"network": print_network(network)})


@api.route("/construct", methods=["POST"])
def construct() -> Response:
    recipe_value = _json_body().get("recipe")
    if isinstance(recipe_value, str):
        recipe = RecipeFile.loads(recipe_value)
    elif isinstance(recipe_value, dict):
        recipe = RecipeFile.from_mapping(recipe_value)
    else:
        raise BadParams("recipe must be TOML text or a JSON object")
    system = build_from_recipe(recipe)
    result = check_invariant_curve(recipe.curve_spec().poly, system)
    cofactor: Optional[str] = None
    if result.is_invariant:
        cofactor = str(none_throws(result.cofactor))
    return jsonify(
        {
            "f": str(system.f),
            "g": str(system.g),
            "degree": system.degree,
            "cofactor": cofactor,
        }
    )


@api.route("/ovals", methods=["GET"])
def ovals() -> Response:
    name = request.args.get("curve")
    if name is None:
        raise BadParams("the curve query parameter is required")
    resolution_text = request.args.get("resolution")
    resolution = config.get_resolution()
    if resolution_text is not None:
        try:
            resolution = int(resolution_text)
        except ValueError:
            raise BadParams(f"resolution must be an integer, got {resolution_text}")
    params = {
        key: parse_param_text(key, value)
        for key, value in request.args.items()
        if key not in ("curve", "resolution")
    }
    oval_set = read_cached_ovals(name, tuple(sorted(params.items())), resolution)
    return jsonify(
        {
            "count": oval_set.count,
            "ovals": [oval.tolist() for oval in oval_set.ovals],
            "areas": oval_set.areas(),
            "open_components": len(oval_set.open_components),
            "degenerate": oval_set.degenerate,
        }
    )


@api.route("/catalog", methods=["GET"])
def curve_catalog() -> Response:
    curves: Dict[str, Any] = catalog_summary()
    return jsonify(
        {
            "curves": [
                {"name": name, "params": list(params)}
                for name, params in sorted(curves.items())
            ]
        }
    )
