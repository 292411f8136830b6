import logging
import re
from fractions import Fraction
from typing import List, Tuple

from planarcrn.exceptions import NetworkSyntaxError
from planarcrn.file_formats import TextFileFormat
from planarcrn.network import Complex, Network, Reaction


logger: logging.Logger = logging.getLogger(__name__)

# (kind, text, 1-based column)
Token = Tuple[str, str, int]

TOKEN_PATTERN: "re.Pattern[str]" = re.compile(
    r"(?P<space>\s+)"
    r"|(?P<arrow>->)"
    r"|(?P<number>\d+)"
    r"|(?P<species>[XY])"
    r"|(?P<empty>∅)"
    r"|(?P<plus>\+)"
    r"|(?P<minus>-)"
    r"|(?P<slash>/)"
    r"|(?P<at>@)"
)


def _tokenize(line: str, line_number: int) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while position < len(line):
        match = TOKEN_PATTERN.match(line, position)
        if match is None:
            raise NetworkSyntaxError(
                line_number,
                position + 1,
                f"unexpected character {repr(line[position])}",
            )
        kind = match.lastgroup or ""
        if kind != "space":
            tokens.append((kind, match.group(0), position + 1))
        position = match.end()
    tokens.append(("end", "", len(line) + 1))
    return tokens


class _LineParser:
    def __init__(self, line: str, line_number: int) -> None:
        self.line_number = line_number
        self.tokens: List[Token] = _tokenize(line, line_number)
        self.position = 0

    def peek(self) -> Token:
        return self.tokens[self.position]

    def take(self, kind: str) -> Token:
        token = self.peek()
        if token[0] != kind:
            shown = repr(token[1]) if token[1] else "end of line"
            raise NetworkSyntaxError(
                self.line_number, token[2], f"expected {kind}, got {shown}"
            )
        self.position += 1
        return token

    def reaction(self) -> Reaction:
        source = self.complex_()
        self.take("arrow")
        target = self.complex_()
        self.take("at")
        rate = self.rate()
        self.take("end")
        return Reaction(source[0], source[1], target[0], target[1], rate)

    def complex_(self) -> Complex:
        kind, text, _ = self.peek()
        if kind == "empty" or (
            kind == "number" and text == "0" and self.tokens[self.position + 1][0]
            in ("arrow", "at")
        ):
            self.position += 1
            return (0, 0)
        counts = [0, 0]
        while True:
            coefficient = 1
            if self.peek()[0] == "number":
                coefficient = int(self.take("number")[1])
            species = self.take("species")[1]
            counts[0 if species == "X" else 1] += coefficient
            if self.peek()[0] != "plus":
                break
            self.take("plus")
        return (counts[0], counts[1])

    def rate(self) -> Fraction:
        sign = 1
        if self.peek()[0] == "minus":
            self.take("minus")
            sign = -1
        numerator = int(self.take("number")[1])
        denominator = 1
        if self.peek()[0] == "slash":
            self.take("slash")
            token = self.take("number")
            denominator = int(token[1])
            if denominator == 0:
                raise NetworkSyntaxError(self.line_number, token[2], "zero denominator")
        return Fraction(sign * numerator, denominator)


def parse_network(text: str) -> Network:
    reactions: List[Reaction] = []
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        if not line.strip():
            continue
        reactions.append(_LineParser(line, line_number).reaction())
    network = Network(tuple(reactions))
    network.check_species()
    logger.debug(f"parsed network with {len(network)} reactions")
    return network


def print_network(network: Network) -> str:
    return "".join(f"{reaction}\n" for reaction in network.normalized())


class NetworkFile(TextFileFormat[Network]):
    extension: str = ".crn"

    @classmethod
    def loads(cls, text: str) -> Network:
        return parse_network(text)

    @classmethod
    def dumps(cls, value: Network) -> str:
        return print_network(value)
