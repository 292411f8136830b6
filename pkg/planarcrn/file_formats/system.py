from typing import Dict, List

from planarcrn.exceptions import BadParams, PolynomialSyntaxError
from planarcrn.file_formats import TextFileFormat
from planarcrn.network import PlanarSystem, SystemMeta
from planarcrn.polynomial import Poly2, format_rational, parse_rational


META_KEYS = ("h", "f0", "g0", "eps")


class SystemFile(TextFileFormat[PlanarSystem]):
    """
    A planar system as ``key = value`` lines. ``f`` and ``g`` are required,
    the construction record (``h``, ``f0``, ``g0``, ``eps``) is optional but
    must be complete when given.
    """

    extension: str = ".sys"

    @classmethod
    def loads(cls, text: str) -> PlanarSystem:
        values: Dict[str, str] = {}
        for line_number, raw_line in enumerate(text.splitlines(), start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise PolynomialSyntaxError(line, 0, f"line {line_number} has no '='")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in ("f", "g") + META_KEYS:
                raise BadParams(f"unknown key {repr(key)} on line {line_number}")
            values[key] = value
        for required in ("f", "g"):
            if required not in values:
                raise BadParams(f"system is missing the {required} line")
        f = Poly2.parse(values["f"])
        g = Poly2.parse(values["g"])
        present = [key for key in META_KEYS if key in values]
        if not present:
            return PlanarSystem(f, g)
        if len(present) != len(META_KEYS):
            missing = ", ".join(key for key in META_KEYS if key not in values)
            raise BadParams(f"incomplete construction record, missing {missing}")
        try:
            eps = parse_rational(values["eps"])
        except ValueError as error:
            raise BadParams(str(error))
        meta = SystemMeta(
            h=Poly2.parse(values["h"]),
            f0=Poly2.parse(values["f0"]),
            g0=Poly2.parse(values["g0"]),
            eps=eps,
        )
        return PlanarSystem(f, g, meta)

    @classmethod
    def dumps(cls, value: PlanarSystem) -> str:
        lines: List[str] = [f"f = {value.f}", f"g = {value.g}"]
        if value.meta is not None:
            lines += [
                f"h = {value.meta.h}",
                f"f0 = {value.meta.f0}",
                f"g0 = {value.meta.g0}",
                f"eps = {format_rational(value.meta.eps)}",
            ]
        return "\n".join(lines) + "\n"
