from typing import Tuple

from flask_caching import Cache

from planarcrn.curves import ParamValue, catalog, extract_ovals
from planarcrn.curves.ovals import OvalSet
from planarcrn.server.app import app


cache = Cache(app)


@cache.memoize(timeout=0)
def read_cached_ovals(
    name: str, params: Tuple[Tuple[str, ParamValue], ...], resolution: int
) -> OvalSet:
    return extract_ovals(catalog(name, dict(params)), resolution)
