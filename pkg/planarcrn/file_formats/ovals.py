import csv
import io
from typing import Dict, List, Tuple

import numpy as np

from planarcrn.curves.ovals import OvalSet, Window
from planarcrn.exceptions import BadParams
from planarcrn.file_formats import TextFileFormat


HEADER = ["index", "closed", "x", "y"]


class OvalFile(TextFileFormat[OvalSet]):
    """
    Traced components as CSV, one row per vertex. Closed components come
    first and keep their repeated closing vertex. The window, resolution and
    degeneracy flag travel in ``#`` comment lines ahead of the header.
    """

    extension: str = ".ovals.csv"

    @classmethod
    def dumps(cls, value: OvalSet) -> str:
        window = value.window
        buffer = io.StringIO()
        buffer.write(
            "# window = "
            + ",".join(repr(v) for v in window.bounds)
            + f",{'log' if window.log_scale else 'linear'}\n"
        )
        buffer.write(f"# resolution = {value.resolution}\n")
        buffer.write(f"# degenerate = {str(value.degenerate).lower()}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(HEADER)
        components = [(oval, True) for oval in value.ovals]
        components += [(component, False) for component in value.open_components]
        for index, (polyline, closed) in enumerate(components):
            for x, y in polyline:
                flag = "true" if closed else "false"
                writer.writerow([index, flag, repr(float(x)), repr(float(y))])
        return buffer.getvalue()

    @classmethod
    def loads(cls, text: str) -> OvalSet:
        meta: Dict[str, str] = {}
        body: List[str] = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, rest = line[1:].partition("=")
                meta[key.strip()] = rest.strip()
            elif line.strip():
                body.append(line)
        for key in ("window", "resolution"):
            if key not in meta:
                raise BadParams(f"oval file has no {key} line")
        bounds = meta["window"].split(",")
        if len(bounds) != 5:
            raise BadParams(f"malformed window {repr(meta['window'])}")
        window = Window(
            *(float(v) for v in bounds[:4]), log_scale=bounds[4].strip() == "log"
        )

        reader = csv.reader(body)
        if next(reader, None) != HEADER:
            raise BadParams(f"oval file header must be {','.join(HEADER)}")
        vertices: Dict[int, List[Tuple[float, float]]] = {}
        closed: Dict[int, bool] = {}
        for row in reader:
            if len(row) != len(HEADER):
                raise BadParams(f"malformed oval row {row}")
            index = int(row[0])
            vertices.setdefault(index, []).append((float(row[2]), float(row[3])))
            closed[index] = row[1] == "true"
        ovals = []
        open_components = []
        for index in sorted(vertices):
            polyline = np.array(vertices[index], dtype=np.float64)
            if closed[index]:
                ovals.append(polyline)
            else:
                open_components.append(polyline)
        return OvalSet(
            ovals=tuple(ovals),
            open_components=tuple(open_components),
            window=window,
            resolution=int(meta["resolution"]),
            degenerate=meta.get("degenerate", "false") == "true",
        )
