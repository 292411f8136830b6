import csv
import io
from typing import Dict, List, Sequence, Tuple

import numpy as np

from planarcrn.exceptions import BadParams
from planarcrn.file_formats import TextFileFormat
from planarcrn.sim import SimConfig, TerminalStatus, Trajectory


HEADER = ["index", "t", "x", "y", "h_abs", "status"]


class TrajectoryFile(TextFileFormat[Sequence[Trajectory]]):
    """
    A batch of trajectories in one CSV, told apart by the ``index`` column.
    ``h_abs`` is empty when no target curve was attached; ``status`` repeats
    the terminal status on every row.
    """

    extension: str = ".traj.csv"

    @classmethod
    def dumps(cls, value: Sequence[Trajectory]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(HEADER)
        for index, trajectory in enumerate(value):
            status = str(trajectory.status)
            residuals = trajectory.h_residuals
            for row, (t, (x, y)) in enumerate(zip(trajectory.times, trajectory.points)):
                h_abs = "" if residuals is None else repr(float(residuals[row]))
                writer.writerow(
                    [
                        index,
                        repr(float(t)),
                        repr(float(x)),
                        repr(float(y)),
                        h_abs,
                        status,
                    ]
                )
        return buffer.getvalue()

    @classmethod
    def loads(cls, text: str) -> List[Trajectory]:
        reader = csv.reader(line for line in text.splitlines() if line.strip())
        if next(reader, None) != HEADER:
            raise BadParams(f"trajectory file header must be {','.join(HEADER)}")
        rows: Dict[int, List[Tuple[float, float, float, str, str]]] = {}
        for row in reader:
            if len(row) != len(HEADER):
                raise BadParams(f"malformed trajectory row {row}")
            rows.setdefault(int(row[0]), []).append(
                (float(row[1]), float(row[2]), float(row[3]), row[4], row[5])
            )
        trajectories = []
        for index in sorted(rows):
            entries = rows[index]
            residuals = None
            if all(entry[3] for entry in entries):
                residuals = np.array([float(entry[3]) for entry in entries])
            trajectories.append(
                Trajectory(
                    times=np.array([entry[0] for entry in entries]),
                    points=np.array([(entry[1], entry[2]) for entry in entries]),
                    status=TerminalStatus.parse(entries[-1][4]),
                    config=SimConfig(),
                    h_residuals=residuals,
                )
            )
        return trajectories
