import os
from typing import Mapping, Set, Type

from planarcrn.exceptions import UnsupportedFileFormat
from planarcrn.file_formats import TextFileFormat
from planarcrn.file_formats.network import NetworkFile
from planarcrn.file_formats.ovals import OvalFile
from planarcrn.file_formats.recipe import RecipeFile
from planarcrn.file_formats.system import SystemFile
from planarcrn.file_formats.trajectory import TrajectoryFile


EXTENSION_TO_FILE_FORMAT: Mapping[str, Type[TextFileFormat]] = {  # pyre-ignore[24]
    ".crn": NetworkFile,
    ".sys": SystemFile,
    ".recipe": RecipeFile,
    ".ovals.csv": OvalFile,
    ".traj.csv": TrajectoryFile,
}


def get_file_extension(filename: str) -> str:
    lowered = filename.lower()
    # longest first, so compound extensions win over their last part
    for extension in sorted(EXTENSION_TO_FILE_FORMAT, key=len, reverse=True):
        if lowered.endswith(extension):
            return extension
    (_, extension) = os.path.splitext(lowered)
    return extension


def get_file_format(filename: str) -> Type[TextFileFormat]:  # pyre-ignore[24]
    file_format = EXTENSION_TO_FILE_FORMAT.get(get_file_extension(filename))
    if file_format is None:
        raise UnsupportedFileFormat(filename)
    return file_format


def get_supported_extensions() -> Set[str]:
    return set(EXTENSION_TO_FILE_FORMAT.keys())
