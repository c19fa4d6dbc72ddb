"""Bounded categories of spatial partitions: closure, membership, rigidity."""
import json
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from itertools import product
from typing import (
    Callable,
    DefaultDict,
    Dict,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Set,
    Tuple,
)

import click

from .notation import partition_from_json, partition_to_json
from .partition import (
    ROTATIONS,
    ColorWord,
    LevelMismatch,
    PartitionError,
    Permutation,
    Point,
    ShapeError,
    SpatialPartition,
    _canonical,
    amplify,
    check_word,
    compose,
    conjugate_word,
    identity,
    involution,
    pair,
    rotate,
    tensor,
)


class TooLarge(PartitionError):
    pass


class BoundTooSmall(PartitionError):
    pass


class NotRigid(PartitionError):
    pass


class TruncatedClosure(PartitionError):
    exit_code = 3


class Membership(str, Enum):
    YES = "yes"
    NO = "no-within-bound"
    UNKNOWN = "unknown"


class CategorySet:
    """A bounded, canonicalized set of partitions indexed by boundary words."""

    def __init__(self, m: int, bound: int, generators: Iterable[SpatialPartition] = ()):
        self.m = m
        self.bound = bound
        self.generators: List[SpatialPartition] = list(generators)
        self.store: DefaultDict[Tuple[str, str], Set[SpatialPartition]] = defaultdict(set)
        self.by_up: DefaultDict[str, Set[SpatialPartition]] = defaultdict(set)
        self.by_low: DefaultDict[str, Set[SpatialPartition]] = defaultdict(set)
        self.by_columns: DefaultDict[int, Set[SpatialPartition]] = defaultdict(set)
        self.closed = False
        self.truncated = False
        self.rounds = 0

    def add(self, p: SpatialPartition) -> bool:
        """Insert p, returning False when it was already stored."""
        hom = self.store[(p.up, p.low)]
        if p in hom:
            return False
        hom.add(p)
        self.by_up[p.up].add(p)
        self.by_low[p.low].add(p)
        self.by_columns[p.columns].add(p)
        return True

    def hom(self, up: ColorWord, low: ColorWord) -> Set[SpatialPartition]:
        return self.store.get((up, low), set())

    def __contains__(self, p: SpatialPartition) -> bool:
        return p in self.store.get((p.up, p.low), ())

    def __iter__(self) -> Iterator[SpatialPartition]:
        for key in sorted(self.store):
            yield from sorted(self.store[key])

    def __len__(self):
        return sum(len(hom) for hom in self.store.values())


#### $ closure ####
def _rotation_ready(cat: CategorySet) -> bool:
    cups = (amplify(pair("wb"), cat.m), amplify(pair("bw"), cat.m))
    return all(cup in cat for cup in cups)


def _expand(
    cat: CategorySet, frontier: List[SpatialPartition], rotate_all: bool
) -> Set[SpatialPartition]:
    bound, found = cat.bound, set()
    for f in frontier:
        found.add(involution(f))

        for columns in range(0, bound - f.columns + 1):
            for s in cat.by_columns.get(columns, ()):
                found.add(tensor(f, s))
                found.add(tensor(s, f))

        # an empty middle word only reproduces a tensor product
        if f.low:
            for s in cat.by_up.get(f.low, ()):
                if len(f.up) + len(s.low) <= bound:
                    found.add(compose(s, f)[0])
        if f.up:
            for s in cat.by_low.get(f.up, ()):
                if len(s.up) + len(f.low) <= bound:
                    found.add(compose(f, s)[0])

        if rotate_all:
            found.update(_rotations(f))
    return found


def _rotations(p: SpatialPartition) -> List[SpatialPartition]:
    rows = {"upper-left": p.up, "upper-right": p.up, "lower-left": p.low, "lower-right": p.low}
    return [rotate(p, side) for side in ROTATIONS if rows[side]]


def closure(
    generators: Iterable[SpatialPartition],
    m: int,
    bound: int,
    max_rounds: Optional[int] = None,
    threads: int = 1,
    verbose: bool = False,
    until: Optional[Callable[[CategorySet], bool]] = None,
) -> CategorySet:
    """Close generators and the one-column identities under the category operations.

    Products exceeding bound columns are discarded. Each round only combines
    partitions found in the previous round with the whole store. Once the
    amplified cups in P(1, wb) and P(1, bw) are present, rotations are added
    as well since they are then derivable.
    """
    generators = list(generators)
    if bound < 2:
        raise BoundTooSmall(f"bound {bound} cannot hold the one-column identities")
    for g in generators:
        if g.m != m:
            raise LevelMismatch(f"generator on {g.m} levels, expected {m}")
        if g.columns > bound:
            raise BoundTooSmall(f"a generator has {g.columns} columns, bound is {bound}")

    cat = CategorySet(m, bound, generators)
    frontier = [p for p in generators + [identity("w", m), identity("b", m)] if cat.add(p)]
    rotating = False

    while frontier:
        if until is not None and until(cat):
            cat.truncated = True
            break
        if max_rounds is not None and cat.rounds >= max_rounds:
            cat.truncated = True
            break

        rotated = set()
        if not rotating and _rotation_ready(cat):
            # older partitions were never rotated
            rotating = True
            frontier_set = set(frontier)
            for p in cat:
                if p not in frontier_set:
                    rotated.update(_rotations(p))

        if threads > 1 and len(frontier) > threads:
            chunks = [frontier[i::threads] for i in range(threads)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = pool.map(lambda chunk: _expand(cat, chunk, rotating), chunks)
                candidates = set().union(*parts)
        else:
            candidates = _expand(cat, frontier, rotating)
        candidates |= rotated

        frontier = sorted(c for c in candidates if c.columns <= bound and cat.add(c))
        cat.rounds += 1
        if verbose:
            click.secho(
                f"> round {cat.rounds}: {len(frontier)} new, {len(cat)} stored",
                dim=True,
                err=True,
            )

    cat.closed = not cat.truncated
    return cat


def contains(cat: CategorySet, p: SpatialPartition) -> Membership:
    if p.m != cat.m:
        raise LevelMismatch(f"partition on {p.m} levels, category on {cat.m}")
    if p in cat:
        return Membership.YES
    if p.columns <= cat.bound and cat.closed:
        return Membership.NO
    return Membership.UNKNOWN


#### $ enumeration ####
MAX_POINTS = 12


def _grid(m: int, up: ColorWord, low: ColorWord) -> List[Point]:
    check_word(up)
    check_word(low)
    points = [
        Point(c, l) for c in range(1, len(up) + len(low) + 1) for l in range(1, m + 1)
    ]
    if len(points) > MAX_POINTS:
        raise TooLarge(f"{len(points)} points exceed the enumeration cap of {MAX_POINTS}")
    return points


def _set_partitions(points: List[Point]) -> Iterator[List[List[Point]]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for smaller in _set_partitions(rest):
        yield [[first]] + smaller
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1 :]


def _matchings(points: List[Point]) -> Iterator[List[List[Point]]]:
    if not points:
        yield []
        return
    first = points[0]
    for i in range(1, len(points)):
        rest = points[1:i] + points[i + 1 :]
        for smaller in _matchings(rest):
            yield [[first, points[i]]] + smaller


def enumerate_partitions(m: int, up: ColorWord, low: ColorWord) -> List[SpatialPartition]:
    points = _grid(m, up, low)
    return sorted(_canonical(m, up, low, blocks) for blocks in _set_partitions(points))


def enumerate_pair_partitions(
    m: int, up: ColorWord, low: ColorWord
) -> List[SpatialPartition]:
    points = _grid(m, up, low)
    return sorted(_canonical(m, up, low, blocks) for blocks in _matchings(points))


#### $ duality ####
class DualityPair(NamedTuple):
    r: SpatialPartition
    s: SpatialPartition


def _conjugate_equation(r: SpatialPartition, s: SpatialPartition, letter: str) -> bool:
    """(r* (x) id_a)(id_a (x) s) == id_a without removed components."""
    m = r.m
    top = tensor(identity(letter, m), s)
    bottom = tensor(involution(r), identity(letter, m))
    result, loops = compose(bottom, top)
    return not loops and result == identity(letter, m)


def check_conjugate_pair(r: SpatialPartition, s: SpatialPartition) -> bool:
    if r.m != s.m:
        raise LevelMismatch("duality candidates live on different level counts")
    if (r.up, r.low) != ("", "wb") or (s.up, s.low) != ("", "bw"):
        raise ShapeError("expected r in P(1, wb) and s in P(1, bw)")
    return _conjugate_equation(r, s, "w") and _conjugate_equation(s, r, "b")


def _column_injective(p: SpatialPartition) -> bool:
    # two points of one column in a block would merge two identity strands
    return all(len({pt.column for pt in block}) == len(block) for block in p.blocks)


MAX_DUALITY_LEVELS = 4


def duality_pairs_all(m: int) -> List[DualityPair]:
    """Every solution of the conjugate equations on m levels."""
    if m > MAX_DUALITY_LEVELS:
        raise TooLarge(f"duality enumeration is capped at {MAX_DUALITY_LEVELS} levels")
    rs = [r for r in enumerate_partitions(m, "", "wb") if _column_injective(r)]
    ss = [s for s in enumerate_partitions(m, "", "bw") if _column_injective(s)]
    return [DualityPair(r, s) for r, s in product(rs, ss) if check_conjugate_pair(r, s)]


def sigma_of(r: SpatialPartition) -> Optional[Permutation]:
    """The sigma with r == sigma_lower(sigma, w, b), if r has that form."""
    if (r.up, r.low) != ("", "wb") or len(r.blocks) != r.m:
        return None
    images = [0] * r.m
    for block in r.blocks:
        if len(block) != 2 or block[0].column != 1 or block[1].column != 2:
            return None
        images[block[0].level - 1] = block[1].level
    return Permutation(tuple(images))


def find_duality_pair(cat: CategorySet) -> Optional[DualityPair]:
    for r in sorted(cat.hom("", "wb")):
        for s in sorted(cat.hom("", "bw")):
            if check_conjugate_pair(r, s):
                return DualityPair(r, s)
    return None


def is_rigid(cat: CategorySet) -> bool:
    return find_duality_pair(cat) is not None


def extract_duality(cat: CategorySet) -> Optional[Permutation]:
    found = find_duality_pair(cat)
    return sigma_of(found.r) if found else None


def _word_equation(r: SpatialPartition, s: SpatialPartition, word: ColorWord) -> bool:
    m = r.m
    top = tensor(identity(word, m), s)
    bottom = tensor(involution(r), identity(word, m))
    result, loops = compose(bottom, top)
    return not loops and result == identity(word, m)


def dual_partitions_for_word(
    cat: CategorySet, x: ColorWord
) -> Tuple[SpatialPartition, SpatialPartition]:
    """Nested duality partitions r_x in P(1, x x-bar) and s_x in P(1, x-bar x)."""
    check_word(x)
    base = find_duality_pair(cat)
    if base is None:
        raise NotRigid("the category holds no duality pair within its bound")
    m = cat.m
    cups = {"w": base, "b": DualityPair(base.s, base.r)}

    r_x = s_x = SpatialPartition(m, "", "", ())
    for letter in reversed(x):
        r_a, s_a = cups[letter]
        rest = r_x.low[: len(r_x.low) // 2]
        bar = conjugate_word(letter)
        # r_{a x'} = (id_a (x) r_x' (x) id_abar) r_a
        r_x, _ = compose(tensor(tensor(identity(letter, m), r_x), identity(bar, m)), r_a)
        # s_{a x'} = (id_x'bar (x) s_a (x) id_x') s_x'
        s_x, _ = compose(
            tensor(tensor(identity(conjugate_word(rest), m), s_a), identity(rest, m)), s_x
        )

    x_bar = conjugate_word(x)
    if not (_word_equation(r_x, s_x, x) and _word_equation(s_x, r_x, x_bar)):
        raise NotRigid(f"nested duality partitions for '{x}' fail the conjugate equations")
    return r_x, s_x


def has_even_columns_only(cat: CategorySet) -> bool:
    return all(p.columns % 2 == 0 for p in cat)


#### $ category files ####
def category_to_json(cat: CategorySet) -> Dict:
    return {
        "m": cat.m,
        "bound": cat.bound,
        "closed": cat.closed,
        "generators": [partition_to_json(g) for g in cat.generators],
        "partitions": [partition_to_json(p) for p in cat],
    }


def category_from_json(obj: Dict) -> CategorySet:
    try:
        cat = CategorySet(
            obj["m"],
            obj["bound"],
            [partition_from_json(g) for g in obj.get("generators", [])],
        )
        for item in obj["partitions"]:
            p = partition_from_json(item)
            if p.m != cat.m:
                raise LevelMismatch(f"stored partition on {p.m} levels, header says {cat.m}")
            cat.add(p)
    except (KeyError, TypeError) as e:
        raise PartitionError(f"malformed category file: {e}")
    cat.closed = bool(obj.get("closed", False))
    cat.truncated = not cat.closed
    return cat


def save_category(cat: CategorySet, path: str):
    with open(path, "w") as f:
        json.dump(category_to_json(cat), f, indent=2)


def load_category(path: str) -> CategorySet:
    with open(path, "r") as f:
        return category_from_json(json.load(f))


def merge_categories(a: CategorySet, b: CategorySet) -> CategorySet:
    """The union of two stores; the result is not known to be closed."""
    if a.m != b.m:
        raise LevelMismatch(f"cannot merge categories on {a.m} and {b.m} levels")
    merged = CategorySet(a.m, max(a.bound, b.bound), a.generators + b.generators)
    for p in list(a) + list(b):
        merged.add(p)
    merged.truncated = True
    return merged
