"""Colored spatial partitions on m levels and their elementary operations.

A partition in P^(m)(x, y) lives on the grid of points (column, level) with
columns 1..|x| forming the upper row (colored by x) and columns
|x|+1..|x|+|y| forming the lower row (colored by y). Partitions are kept in
canonical form: points sorted by (column, level) inside each block, blocks
ordered by their least point. Equal partitions therefore compare equal as
plain tuples and hash alike.
"""
import re
from enum import Enum
from functools import reduce
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import click

from .unionfind import UnionFind


class PartitionError(click.ClickException):
    """Base class for every domain error raised by spart."""


class OverlapError(PartitionError):
    pass


class CoverageError(PartitionError):
    pass


class RangeError(PartitionError):
    pass


class LevelMismatch(PartitionError):
    pass


class ColorMismatch(PartitionError):
    pass


class EmptyRow(PartitionError):
    pass


class ShapeError(PartitionError):
    pass


class GradingError(PartitionError):
    pass


#### Colors ####
class Color(str, Enum):
    WHITE = "w"
    BLACK = "b"

    def conjugate(self) -> "Color":
        return Color.BLACK if self is Color.WHITE else Color.WHITE


# A color word is a plain string over {w, b}; the empty string is the empty word.
ColorWord = str

_WORD = re.compile(r"^[wb]*$")


def check_word(word: str) -> ColorWord:
    """Validate a color word written over the letters w and b."""
    if not _WORD.match(word):
        raise ColorMismatch(f"'{word}' is not a color word over w/b")
    return word


def conjugate_word(word: ColorWord) -> ColorWord:
    """Reverse the word and flip every color."""
    return "".join(Color(letter).conjugate().value for letter in reversed(word))


#### Points, gradings, permutations ####
class Point(NamedTuple):
    column: int
    level: int

    def __str__(self):
        return f"{self.column}.{self.level}"


class Grading(NamedTuple):
    """Per-level dimensions n = (n_1, ..., n_m)."""

    dims: Tuple[int, ...]

    @classmethod
    def of(cls, dims: Iterable[int]) -> "Grading":
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise GradingError(f"grading entries must be positive, got {dims}")
        return cls(dims)

    @classmethod
    def parse(cls, text: str) -> "Grading":
        """Parse a comma separated grading such as '2,3,2'."""
        try:
            return cls.of(int(part) for part in text.split(","))
        except ValueError:
            raise GradingError(f"cannot parse grading '{text}'")

    @classmethod
    def uniform(cls, n: int, m: int) -> "Grading":
        return cls.of([n] * m)

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        """N = n_1 * ... * n_m"""
        return reduce(lambda a, b: a * b, self.dims, 1)

    def dim(self, level: int) -> int:
        return self.dims[level - 1]

    def repeat(self, d: int) -> "Grading":
        """The grading (n ... n) with d copies of n."""
        return Grading(self.dims * d)

    def __str__(self):
        return ",".join(str(d) for d in self.dims)


class Permutation(NamedTuple):
    """A permutation of [1, m] in one-line notation."""

    images: Tuple[int, ...]

    @classmethod
    def of(cls, images: Iterable[int]) -> "Permutation":
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise RangeError(f"{list(images)} is not a permutation")
        return cls(images)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse one-line notation like '[2,1,3]'."""
        body = text.strip().lstrip("[").rstrip("]")
        try:
            return cls.of(int(part) for part in body.split(",") if part.strip())
        except ValueError:
            raise RangeError(f"cannot parse permutation '{text}'")

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], m: int) -> "Permutation":
        images = list(range(1, m + 1))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a - 1] = b
        return cls.of(images)

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """(self . other)(i) = self(other(i))"""
        if self.size != other.size:
            raise LevelMismatch("permutations act on different level counts")
        return Permutation(tuple(self(other(i)) for i in range(1, self.size + 1)))

    def inverse(self) -> "Permutation":
        images = [0] * self.size
        for i, image in enumerate(self.images, start=1):
            images[image - 1] = i
        return Permutation(tuple(images))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.size + 1))

    def is_graded(self, n: Grading) -> bool:
        """True iff n_i = n_sigma(i) for every level i."""
        return n.m == self.size and all(
            n.dim(i) == n.dim(self(i)) for i in range(1, self.size + 1)
        )

    def cycles(self) -> List[Tuple[int, ...]]:
        seen, cycles = set(), []
        for start in range(1, self.size + 1):
            if start in seen:
                continue
            cycle, i = [], start
            while i not in seen:
                seen.add(i)
                cycle.append(i)
                i = self(i)
            cycles.append(tuple(cycle))
        return cycles

    def cycle_notation(self) -> str:
        sep = "" if self.size < 10 else " "
        return "".join(
            "(" + sep.join(str(i) for i in cycle) + ")" for cycle in self.cycles()
        )

    def one_line(self) -> str:
        return "[" + ",".join(str(i) for i in self.images) + "]"

    def __str__(self):
        return self.one_line()


#### Spatial partitions ####
Block = Tuple[Point, ...]


class SpatialPartition(NamedTuple):
    m: int
    up: ColorWord
    low: ColorWord
    blocks: Tuple[Block, ...]

    @property
    def columns(self) -> int:
        return len(self.up) + len(self.low)

    @property
    def size(self) -> int:
        """Number of points in the grid."""
        return self.columns * self.m

    def is_upper(self, point: Point) -> bool:
        return point.column <= len(self.up)

    def color(self, column: int) -> Color:
        word = self.up + self.low
        return Color(word[column - 1])

    def points(self) -> List[Point]:
        return [
            Point(c, l)
            for c in range(1, self.columns + 1)
            for l in range(1, self.m + 1)
        ]

    def block_index(self) -> Dict[Point, int]:
        return {pt: i for i, block in enumerate(self.blocks) for pt in block}


def _canonical(m: int, up: str, low: str, blocks: Iterable[Iterable[Point]]):
    ordered = sorted(tuple(sorted(Point(*pt) for pt in block)) for block in blocks)
    return SpatialPartition(m, up, low, tuple(ordered))


def canonicalize(p: SpatialPartition) -> SpatialPartition:
    return _canonical(p.m, p.up, p.low, p.blocks)


def make_partition(
    m: int, up: ColorWord, low: ColorWord, blocks: Iterable[Iterable[Sequence[int]]]
) -> SpatialPartition:
    """Validate a block list over the (|up|+|low|) x m grid and canonicalize it."""
    if m < 1:
        raise RangeError(f"level count must be positive, got {m}")
    check_word(up)
    check_word(low)
    columns = len(up) + len(low)

    seen = set()
    checked = []
    for block in blocks:
        block = [Point(*pt) for pt in block]
        if not block:
            raise CoverageError("blocks must be nonempty")
        for pt in block:
            if not (1 <= pt.column <= columns and 1 <= pt.level <= m):
                raise RangeError(
                    f"point {pt} lies outside the {columns} x {m} grid"
                )
            if pt in seen:
                raise OverlapError(f"point {pt} appears in two blocks")
            seen.add(pt)
        checked.append(block)

    missing = columns * m - len(seen)
    if missing:
        first = next(
            Point(c, l)
            for c in range(1, columns + 1)
            for l in range(1, m + 1)
            if Point(c, l) not in seen
        )
        raise CoverageError(f"{missing} point(s) not covered, first is {first}")

    return _canonical(m, up, low, checked)


def empty_partition(m: int = 1) -> SpatialPartition:
    return SpatialPartition(m, "", "", ())


def with_colors(p: SpatialPartition, up: ColorWord, low: ColorWord) -> SpatialPartition:
    """The same block structure under new color words of equal lengths."""
    if len(up) != len(p.up) or len(low) != len(p.low):
        raise ColorMismatch("recoloring must keep the row lengths")
    return SpatialPartition(p.m, check_word(up), check_word(low), p.blocks)


def _relabel(p: SpatialPartition, up: str, low: str, column_map) -> SpatialPartition:
    return _canonical(
        p.m,
        up,
        low,
        ([Point(column_map(pt.column), pt.level) for pt in block] for block in p.blocks),
    )


#### Category operations ####
def tensor(p: SpatialPartition, q: SpatialPartition) -> SpatialPartition:
    """Place q to the right of p."""
    if p.m != q.m:
        raise LevelMismatch(f"cannot tensor partitions on {p.m} and {q.m} levels")
    xp, xq, yp = len(p.up), len(q.up), len(p.low)

    def shift_p(c):
        return c if c <= xp else c + xq

    def shift_q(c):
        return c + xp if c <= xq else c + xp + yp

    blocks = [[Point(shift_p(pt.column), pt.level) for pt in block] for block in p.blocks]
    blocks += [[Point(shift_q(pt.column), pt.level) for pt in block] for block in q.blocks]
    return _canonical(p.m, p.up + q.up, p.low + q.low, blocks)


def involution(p: SpatialPartition) -> SpatialPartition:
    """Swap the upper and lower rows."""
    x, y = len(p.up), len(p.low)
    return _relabel(p, p.low, p.up, lambda c: c + y if c <= x else c - x)


class LoopRecord(NamedTuple):
    """Connected components dropped by a composition, as their level sets."""

    components: Tuple[FrozenSet[int], ...] = ()

    def __len__(self):
        return len(self.components)

    def dimensions(self, n: Grading) -> List[int]:
        dims = []
        for levels in self.components:
            values = {n.dim(level) for level in levels}
            if len(values) != 1:
                raise GradingError(
                    f"removed component on levels {sorted(levels)} is not graded by {n}"
                )
            dims.append(values.pop())
        return dims

    def factor(self, n: Grading) -> int:
        """Product of the component dimensions."""
        return reduce(lambda a, b: a * b, self.dimensions(n), 1)

    def total_scalar(self, n: Grading) -> int:
        """N to the power of the number of components."""
        return n.total ** len(self.components)


def compose(
    p: SpatialPartition, q: SpatialPartition
) -> Tuple[SpatialPartition, LoopRecord]:
    """The composition pq: q is placed on top of p and the middle row is erased."""
    if p.m != q.m:
        raise LevelMismatch(f"cannot compose partitions on {p.m} and {q.m} levels")
    if q.low != p.up:
        raise ColorMismatch(
            f"lower colors '{q.low}' of the top partition do not match "
            f"upper colors '{p.up}' of the bottom partition"
        )
    x = len(q.up)
    y = len(p.up)

    # nodes: ("t", c, l) top, ("m", c, l) middle, ("b", c, l) bottom
    def q_node(pt):
        if pt.column <= x:
            return ("t", pt.column, pt.level)
        return ("m", pt.column - x, pt.level)

    def p_node(pt):
        if pt.column <= y:
            return ("m", pt.column, pt.level)
        return ("b", pt.column - y, pt.level)

    uf = UnionFind()
    for block in q.blocks:
        nodes = [q_node(pt) for pt in block]
        for node in nodes:
            uf.add(node)
        uf.union_all(nodes)
    for block in p.blocks:
        nodes = [p_node(pt) for pt in block]
        for node in nodes:
            uf.add(node)
        uf.union_all(nodes)

    blocks, removed = [], []
    for group in uf.groups():
        kept = [
            Point(c if row == "t" else x + c, l) for row, c, l in group if row != "m"
        ]
        if kept:
            blocks.append(kept)
        else:
            removed.append(frozenset(l for _, _, l in group))

    removed.sort(key=sorted)
    return _canonical(p.m, q.up, p.low, blocks), LoopRecord(tuple(removed))


def compose_all(*parts: SpatialPartition) -> SpatialPartition:
    """Compose right to left, insisting that no loops are removed."""
    result = parts[-1]
    for p in reversed(parts[:-1]):
        result, loops = compose(p, result)
        if loops:
            raise ShapeError("composition removed a closed component")
    return result


#### Special partitions ####
def identity(x: ColorWord, m: int = 1) -> SpatialPartition:
    check_word(x)
    k = len(x)
    blocks = [
        [Point(c, l), Point(k + c, l)] for c in range(1, k + 1) for l in range(1, m + 1)
    ]
    return _canonical(m, x, x, blocks)


def amplify(p: SpatialPartition, k: int) -> SpatialPartition:
    """k level-wise copies of a one-level partition."""
    if p.m != 1:
        raise LevelMismatch("only one-level partitions can be amplified")
    if k < 1:
        raise RangeError(f"amplification needs k >= 1, got {k}")
    blocks = [
        [Point(pt.column, j) for pt in block] for block in p.blocks for j in range(1, k + 1)
    ]
    return _canonical(k, p.up, p.low, blocks)


def _sigma_blocks(sigma: Permutation):
    return [[Point(1, i), Point(2, sigma(i))] for i in range(1, sigma.size + 1)]


def sigma_lower(sigma: Permutation, x: Color, y: Color) -> SpatialPartition:
    """The partition sigma_xy in P(empty, xy)."""
    return _canonical(sigma.size, "", Color(x).value + Color(y).value, _sigma_blocks(sigma))


def sigma_through(sigma: Permutation, x: Color, y: Color) -> SpatialPartition:
    """The rotated version of sigma_xy, in P(x, y)."""
    return _canonical(sigma.size, Color(x).value, Color(y).value, _sigma_blocks(sigma))


def pair(x: ColorWord = "ww") -> SpatialPartition:
    """One-level lower pair on a two letter word."""
    return _canonical(1, "", x, [[Point(1, 1), Point(2, 1)]])


def part_id_bw(m: int = 1) -> SpatialPartition:
    """The identity-shaped partition in P(b, w), amplified to m levels."""
    return amplify(_canonical(1, "b", "w", [[Point(1, 1), Point(2, 1)]]), m)


#### Queries ####
def through_block_count(p: SpatialPartition) -> int:
    x = len(p.up)
    return sum(
        1
        for block in p.blocks
        if block[0].column <= x < block[-1].column
    )


def invert(p: SpatialPartition) -> Optional[SpatialPartition]:
    """The inverse p* when p is invertible, else None."""
    if len(p.up) != len(p.low):
        return None
    star = involution(p)
    top, loops_top = compose(star, p)
    bottom, loops_bottom = compose(p, star)
    if loops_top or loops_bottom:
        return None
    if top != identity(p.up, p.m) or bottom != identity(p.low, p.m):
        return None
    return star


def is_pair(p: SpatialPartition) -> bool:
    return all(len(block) == 2 for block in p.blocks)


def is_graded(p: SpatialPartition, n: Grading) -> bool:
    if n.m != p.m:
        raise LevelMismatch(f"grading {n} has {n.m} entries, partition has {p.m} levels")
    return all(len({n.dim(pt.level) for pt in block}) == 1 for block in p.blocks)


def check_graded(p: SpatialPartition, n: Grading):
    if not is_graded(p, n):
        raise GradingError(f"partition is not graded by n=({n})")


ROTATIONS = ("upper-left", "upper-right", "lower-left", "lower-right")


def rotate(p: SpatialPartition, side: str) -> SpatialPartition:
    """Move one boundary column to the other row, conjugating its color.

    lower-left: the leftmost lower column becomes the leftmost upper column.
    upper-left: the leftmost upper column becomes the leftmost lower column.
    upper-right: the rightmost upper column becomes the rightmost lower column.
    lower-right: the rightmost lower column becomes the rightmost upper column.
    """
    x, y = len(p.up), len(p.low)
    flip = lambda letter: Color(letter).conjugate().value

    if side in ("upper-left", "upper-right") and x == 0:
        raise EmptyRow("cannot rotate from an empty upper row")
    if side in ("lower-left", "lower-right") and y == 0:
        raise EmptyRow("cannot rotate from an empty lower row")

    if side == "lower-left":
        up, low = flip(p.low[0]) + p.up, p.low[1:]
        column_map = lambda c: c + 1 if c <= x else (1 if c == x + 1 else c)
    elif side == "upper-left":
        up, low = p.up[1:], flip(p.up[0]) + p.low
        column_map = lambda c: x if c == 1 else (c - 1 if c <= x else c)
    elif side == "upper-right":
        up, low = p.up[:-1], p.low + flip(p.up[-1])
        column_map = lambda c: x + y if c == x else (c if c < x else c - 1)
    elif side == "lower-right":
        up, low = p.up + flip(p.low[-1]), p.low[:-1]
        column_map = lambda c: x + 1 if c == x + y else (c if c <= x else c + 1)
    else:
        raise RangeError(f"unknown rotation side '{side}', expected one of {ROTATIONS}")

    return _relabel(p, up, low, column_map)


INVERSE_ROTATION = {
    "lower-left": "upper-left",
    "upper-left": "lower-left",
    "upper-right": "lower-right",
    "lower-right": "upper-right",
}
