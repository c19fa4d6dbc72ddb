"""Text grammar, JSON mirror and ASCII drawing of spatial partitions.

The text form is

    P{m=2; up="wb"; low="wwb"; blocks=[[1.1,3.2],[1.2,3.1],...]}

with words over w (white) and b (black) and points written column.level.
"""
import json
import string
from typing import Any, Dict, List, Tuple

import click

from .partition import PartitionError, SpatialPartition, make_partition


class PartitionSyntaxError(PartitionError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


#### $ text ####
def format_partition(p: SpatialPartition) -> str:
    blocks = ",".join(
        "[" + ",".join(f"{pt.column}.{pt.level}" for pt in block) + "]"
        for block in p.blocks
    )
    return f'P{{m={p.m}; up="{p.up}"; low="{p.low}"; blocks=[{blocks}]}}'


class _Reader:
    """Cursor over the input that knows its line and column."""

    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def where(self, pos: int = None) -> Tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def fail(self, message: str):
        raise PartitionSyntaxError(message, *self.where())

    def skip(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self.pos += 1
            elif ch == "#":
                end = self.text.find("\n", self.pos)
                self.pos = len(self.text) if end < 0 else end
            else:
                break

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, token: str):
        self.skip()
        if not self.text.startswith(token, self.pos):
            found = self.text[self.pos : self.pos + len(token)] or "end of input"
            self.fail(f"expected '{token}', found '{found}'")
        self.pos += len(token)

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected an integer")
        return int(self.text[start : self.pos])

    def word(self) -> str:
        self.expect('"')
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "wb":
            self.pos += 1
        if self.pos >= len(self.text) or self.text[self.pos] != '"':
            self.fail("color words may only contain the letters w and b")
        value = self.text[start : self.pos]
        self.pos += 1
        return value

    def point(self) -> Tuple[int, int]:
        column = self.integer()
        self.expect(".")
        return column, self.integer()

    def block(self) -> List[Tuple[int, int]]:
        self.expect("[")
        points = [self.point()]
        while self.peek() == ",":
            self.expect(",")
            points.append(self.point())
        self.expect("]")
        return points

    def blocks(self) -> List[List[Tuple[int, int]]]:
        self.expect("[")
        blocks = []
        if self.peek() != "]":
            blocks.append(self.block())
            while self.peek() == ",":
                self.expect(",")
                blocks.append(self.block())
        self.expect("]")
        return blocks

    def partition(self) -> SpatialPartition:
        self.expect("P{")
        self.expect("m=")
        m = self.integer()
        self.expect(";")
        self.expect("up=")
        up = self.word()
        self.expect(";")
        self.expect("low=")
        low = self.word()
        self.expect(";")
        self.expect("blocks=")
        blocks = self.blocks()
        self.expect("}")
        return make_partition(m, up, low, blocks)


def parse_partition(text: str) -> SpatialPartition:
    reader = _Reader(text)
    p = reader.partition()
    if not reader.at_end():
        reader.fail("unexpected text after partition")
    return p


def parse_partitions(text: str) -> List[SpatialPartition]:
    """Any number of partitions separated by whitespace; '#' starts a comment."""
    reader, found = _Reader(text), []
    while not reader.at_end():
        found.append(reader.partition())
    return found


#### $ json ####
def partition_to_json(p: SpatialPartition) -> Dict[str, Any]:
    return {
        "m": p.m,
        "up": p.up,
        "low": p.low,
        "blocks": [[[pt.column, pt.level] for pt in block] for block in p.blocks],
    }


def partition_from_json(obj: Dict[str, Any]) -> SpatialPartition:
    try:
        return make_partition(obj["m"], obj["up"], obj["low"], obj["blocks"])
    except (KeyError, TypeError) as e:
        raise PartitionError(f"malformed partition object: {e}")


def load_partitions(path: str) -> List[SpatialPartition]:
    """Read partitions from a JSON list, a category file, or the text grammar."""
    with open(path, "r") as f:
        text = f.read()
    if text.lstrip().startswith(("[", "{")):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise PartitionSyntaxError(e.msg, e.lineno, e.colno)
        if isinstance(obj, dict):
            obj = obj.get("partitions", [])
        return [partition_from_json(item) for item in obj]
    return parse_partitions(text)


def dump_partitions(parts: List[SpatialPartition], path: str):
    with open(path, "w") as f:
        json.dump([partition_to_json(p) for p in parts], f, indent=2)


#### $ ascii ####
_LABELS = string.ascii_uppercase + string.ascii_lowercase


def _label(i: int) -> str:
    return _LABELS[i] if i < len(_LABELS) else str(i)


def render_ascii(p: SpatialPartition, art: bool = False) -> str:
    """Draw one row per level; each point shows the label of its block."""
    x = len(p.up)
    index = p.block_index()
    words = p.up + p.low
    widths = []
    for c in range(1, p.columns + 1):
        labels = [len(_label(index[pt])) for pt in p.points() if pt.column == c]
        widths.append(max([len(str(c))] + labels))

    def row(head: str, cells: List[str]) -> str:
        padded = [cell.rjust(w) for cell, w in zip(cells, widths)]
        left, right = " ".join(padded[:x]), " ".join(padded[x:])
        return f"{head:<8}{left} | {right}".rstrip()

    colors = ["o" if c == "w" else "*" for c in words] if art else list(words)
    lines = [
        f"P^({p.m})({p.up or '-'}, {p.low or '-'})",
        row("", [str(c) for c in range(1, p.columns + 1)]),
        row("colors", colors),
    ]
    for level in range(1, p.m + 1):
        cells = [_label(index[(c, level)]) for c in range(1, p.columns + 1)]
        lines.append(row(f"level {level}", cells))
    return "\n".join(lines)


def echo_partition(p: SpatialPartition, as_json: bool = False, art: bool = False):
    if as_json:
        click.echo(json.dumps(partition_to_json(p)))
    elif art:
        click.echo(render_ascii(p, art=True))
    else:
        click.echo(format_partition(p))
