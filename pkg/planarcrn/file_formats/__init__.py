import pathlib
from abc import ABC, abstractmethod
from typing import Generic, TypeVar


V = TypeVar("V")


class TextFileFormat(ABC, Generic[V]):
    extension: str = ""

    @classmethod
    @abstractmethod
    def loads(cls, text: str) -> V:
        ...

    @classmethod
    @abstractmethod
    def dumps(cls, value: V) -> str:
        ...

    @classmethod
    def read(cls, path: pathlib.Path) -> V:
        with open(path, "r") as file:
            return cls.loads(file.read())

    @classmethod
    def write(cls, path: pathlib.Path, value: V) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as file:
            file.write(cls.dumps(value))
