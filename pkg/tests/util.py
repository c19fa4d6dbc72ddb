"""Shared builders and hypothesis strategies for spatial partitions."""
import os
from typing import List

from hypothesis import strategies as st

from spart.notation import parse_partitions
from spart.partition import Grading, Permutation, SpatialPartition, _canonical, Point
from spart.relations import parse_equation

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")

words = st.text(alphabet="wb", max_size=3)


def golden_equations(name: str, n: Grading):
    with open(os.path.join(GOLDEN_DIR, name), "r") as f:
        lines = [line.strip() for line in f]
    return [parse_equation(line, n) for line in lines if line and not line.startswith("#")]


def P(text: str) -> SpatialPartition:
    """Parse a single partition written in the text grammar."""
    (p,) = parse_partitions(text)
    return p


@st.composite
def gradings(draw, m: int, max_dim: int = 3) -> Grading:
    return Grading.of(draw(st.lists(st.integers(1, max_dim), min_size=m, max_size=m)))


def _blocks(draw, points: List[Point], n: Grading):
    # labels are tagged by dimension so every block is graded by n
    labels = [
        (n.dim(pt.level), draw(st.integers(0, max(len(points) - 1, 0)))) for pt in points
    ]
    groups = {}
    for pt, label in zip(points, labels):
        groups.setdefault(label, []).append(pt)
    return list(groups.values())


@st.composite
def graded_partitions(
    draw, n: Grading, up: str = None, low: str = None, max_points: int = 8
) -> SpatialPartition:
    """A random partition graded by n, with at most max_points points."""
    max_columns = max_points // n.m
    if up is None:
        up = draw(st.text(alphabet="wb", max_size=max_columns))
    if low is None:
        low = draw(st.text(alphabet="wb", max_size=max(max_columns - len(up), 0)))
    points = [
        Point(c, l) for c in range(1, len(up) + len(low) + 1) for l in range(1, n.m + 1)
    ]
    return _canonical(n.m, up, low, _blocks(draw, points, n))


@st.composite
def composable_pairs(draw, max_m: int = 3, max_dim: int = 3, max_points: int = 8):
    """(n, p, q) with q on top of p, each partition holding at most max_points points."""
    m = draw(st.integers(1, max_m))
    n = draw(gradings(m, max_dim))
    columns = max_points // m
    middle = draw(st.text(alphabet="wb", max_size=columns))
    top = draw(st.text(alphabet="wb", max_size=columns - len(middle)))
    bottom = draw(st.text(alphabet="wb", max_size=columns - len(middle)))
    q = draw(graded_partitions(n, top, middle, max_points))
    p = draw(graded_partitions(n, middle, bottom, max_points))
    return n, p, q


@st.composite
def permutations(draw, m: int) -> Permutation:
    return Permutation.of(draw(st.permutations(range(1, m + 1))))


@st.composite
def graded_permutations(draw, n: Grading) -> Permutation:
    """A permutation of levels that only swaps levels of equal dimension."""
    images = list(range(1, n.m + 1))
    for dim in set(n.dims):
        levels = [l for l in range(1, n.m + 1) if n.dim(l) == dim]
        shuffled = draw(st.permutations(levels))
        for level, image in zip(levels, shuffled):
            images[level - 1] = image
    return Permutation.of(images)


@st.composite
def partitions(draw, m: int, up: str = None, low: str = None, max_points: int = 8):
    """Ungraded random partitions on m levels."""
    return draw(graded_partitions(Grading.uniform(1, m), up, low, max_points))
