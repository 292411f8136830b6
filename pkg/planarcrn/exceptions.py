from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from planarcrn.realize import ClassReport


class PlanarCRNException(Exception, ABC):
    # 2 flags bad input, 1 a computation that could not be carried out
    exit_code: int = 2

    @abstractmethod
    def get_title(self) -> str:
        raise NotImplementedError

    @abstractmethod
    def get_description(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return f"{self.get_title()}: {self.get_description()}"


class ComputationFailure(PlanarCRNException, ABC):
    exit_code: int = 1


class NetworkSyntaxError(PlanarCRNException):
    def __init__(self, line: int, column: int, message: str) -> None:
        self.line = line
        self.column = column
        self.message = message

    def get_title(self) -> str:
        return "Network Syntax Error"

    def get_description(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class PolynomialSyntaxError(PlanarCRNException):
    def __init__(self, text: str, position: int, message: str) -> None:
        self.text = text
        self.position = position
        self.message = message

    def get_title(self) -> str:
        return "Polynomial Syntax Error"

    def get_description(self) -> str:
        return f"{self.message} at position {self.position} of {repr(self.text)}"


class EmptyNetwork(PlanarCRNException):
    def get_title(self) -> str:
        return "Empty Network"

    def get_description(self) -> str:
        return "A reaction network needs at least one reaction."


class DuplicateReaction(PlanarCRNException):
    def __init__(self, reaction: str) -> None:
        self.reaction = reaction

    def get_title(self) -> str:
        return "Duplicate Reaction"

    def get_description(self) -> str:
        return f"The reaction {self.reaction} occurs more than once."


class TrivialReaction(PlanarCRNException):
    def __init__(self, reaction: str) -> None:
        self.reaction = reaction

    def get_title(self) -> str:
        return "Trivial Reaction"

    def get_description(self) -> str:
        return f"The reaction {self.reaction} changes neither X nor Y."


class NonpositiveRate(PlanarCRNException):
    def __init__(self, reaction: str, rate: str) -> None:
        self.reaction = reaction
        self.rate = rate

    def get_title(self) -> str:
        return "Nonpositive Rate"

    def get_description(self) -> str:
        return f"The reaction {self.reaction} has rate {self.rate}, must be positive."


class MissingSpecies(PlanarCRNException):
    def __init__(self, species: Sequence[str]) -> None:
        self.species = species

    def get_title(self) -> str:
        return "Missing Species"

    def get_description(self) -> str:
        names = ", ".join(self.species)
        return f"Both species must take part in the network, missing: {names}."


class DegreeError(PlanarCRNException):
    def __init__(self, what: str, expected: int, actual: int) -> None:
        self.what = what
        self.expected = expected
        self.actual = actual

    def get_title(self) -> str:
        return "Degree Error"

    def get_description(self) -> str:
        return f"{self.what} must have degree {self.expected}, got {self.actual}."


class DuplicateDelta(PlanarCRNException):
    def __init__(self, delta: str) -> None:
        self.delta = delta

    def get_title(self) -> str:
        return "Duplicate Delta"

    def get_description(self) -> str:
        return f"The delta {self.delta} appears more than once."


class NonpositiveDelta(PlanarCRNException):
    def __init__(self, delta: str) -> None:
        self.delta = delta

    def get_title(self) -> str:
        return "Nonpositive Delta"

    def get_description(self) -> str:
        return f"Deltas must be positive, got {self.delta}."


class ZeroCurve(PlanarCRNException):
    def get_title(self) -> str:
        return "Zero Curve"

    def get_description(self) -> str:
        return "The zero polynomial does not define a curve."


class UnknownCurve(PlanarCRNException):
    def __init__(self, name: str) -> None:
        self.name = name

    def get_title(self) -> str:
        return "Unknown Curve"

    def get_description(self) -> str:
        return f"There is no curve named {repr(self.name)} in the catalog."


class UnknownPreset(PlanarCRNException):
    def __init__(self, name: str) -> None:
        self.name = name

    def get_title(self) -> str:
        return "Unknown Preset"

    def get_description(self) -> str:
        return f"There is no preset named {repr(self.name)}."


class BadParams(PlanarCRNException):
    def __init__(self, message: str) -> None:
        self.message = message

    def get_title(self) -> str:
        return "Bad Parameters"

    def get_description(self) -> str:
        return self.message


class RecipeError(PlanarCRNException):
    def __init__(self, message: str) -> None:
        self.message = message

    def get_title(self) -> str:
        return "Invalid Recipe"

    def get_description(self) -> str:
        return self.message


class ConfigError(PlanarCRNException):
    def __init__(self, message: str) -> None:
        self.message = message

    def get_title(self) -> str:
        return "Invalid Configuration"

    def get_description(self) -> str:
        return self.message


class UnsupportedFileFormat(PlanarCRNException):
    def __init__(self, filename: str) -> None:
        self.filename = filename

    def get_title(self) -> str:
        return "Unsupported File Format"

    def get_description(self) -> str:
        return f"Cannot tell which format {repr(self.filename)} is in."


class ZeroDivisor(ComputationFailure):
    def get_title(self) -> str:
        return "Zero Divisor"

    def get_description(self) -> str:
        return "Cannot divide by the zero polynomial."


class NotDivisible(ComputationFailure):
    def __init__(self, numerator: str, denominator: str) -> None:
        self.numerator = numerator
        self.denominator = denominator

    def get_title(self) -> str:
        return "Not Divisible"

    def get_description(self) -> str:
        return f"{self.numerator} is not divisible by {self.denominator}."


class NotInClass(ComputationFailure):
    def __init__(self, class_name: str, report: "ClassReport") -> None:
        self.class_name = class_name
        self.report = report

    def get_title(self) -> str:
        return "Not In Class"

    def get_description(self) -> str:
        violators = ", ".join(
            f"{which}[{i},{j}] = {value}"
            for which, i, j, value in self.report.violating_coefficients
        )
        return f"The system is not in {self.class_name}, violating: {violators}."


class EmptyRealization(ComputationFailure):
    def get_title(self) -> str:
        return "Empty Realization"

    def get_description(self) -> str:
        return "The zero system has no reaction network realization."


class EmptyOvalSet(ComputationFailure):
    def get_title(self) -> str:
        return "Empty Oval Set"

    def get_description(self) -> str:
        return "No closed ovals were found to classify."


class ResolutionTooCoarse(ComputationFailure):
    def __init__(self, resolution: int) -> None:
        self.resolution = resolution

    def get_title(self) -> str:
        return "Resolution Too Coarse"

    def get_description(self) -> str:
        return (
            f"Grid resolution {self.resolution} leaves cells with unresolved "
            "crossings, try a finer grid."
        )
