"""Universal-algebra presentations of the quantum groups defined by partitions.

For a generator p in P(x, y) the relation T_p u^x = u^y T_p is written out
entrywise. Lower points of p carry the free indices i1, i2, ... and upper
points the free indices j1, j2, ..., numbered (column - 1) * m + level within
their row. Entries of the conjugate representation u^b are rewritten as
starred entries of u using the duality permutation sigma:

    (u^b)^{I}_{J} = (u^{A}_{B})*   with A_t = I_sigma(t), B_t = J_sigma(t).
"""
import re
from collections import defaultdict
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import click

from .category import (
    CategorySet,
    DualityPair,
    Membership,
    NotRigid,
    check_conjugate_pair,
    closure,
    contains,
    find_duality_pair,
    is_rigid,
    sigma_of,
)
from .functors import FlatSignature, flat_apply, flat_preimage
from .partition import (
    Color,
    GradingError,
    Grading,
    LevelMismatch,
    PartitionError,
    Permutation,
    SpatialPartition,
    check_graded,
    compose,
    identity,
    involution,
    pair,
    part_id_bw,
    rotate,
    tensor,
    with_colors,
)
from .notation import PartitionSyntaxError, _Reader, format_partition
from .tensors import Axis, IntegerTensor, kron_all, realize


class NotRigidWithinBound(NotRigid):
    pass


class NotDualityForm(PartitionError):
    pass


class OddTotalColumns(PartitionError):
    pass


class NotAllWhite(PartitionError):
    pass


#### Equation terms ####
class Entry(NamedTuple):
    """u^{upper}_{lower}, starred when it is an entry of the adjoint."""

    upper: Tuple[str, ...]
    lower: Tuple[str, ...]
    star: bool = False

    def __str__(self):
        head = "u*" if self.star else "u"
        return f"{head}[{','.join(self.upper)};{','.join(self.lower)}]"


class Monomial(NamedTuple):
    coefficient: int
    deltas: Tuple[Tuple[str, str], ...]
    bound: Tuple[Tuple[str, int], ...]
    entries: Tuple[Entry, ...]

    def __str__(self):
        factors = [f"delta[{a},{b}]" for a, b in self.deltas]
        factors += [str(e) for e in self.entries]
        if self.bound:
            names = [name for name, _ in self.bound]
            total = "sum_" + (names[0] if len(names) == 1 else "{" + ",".join(names) + "}")
            factors.insert(0, total)
        if self.coefficient != 1 or not (self.deltas or self.entries):
            factors.insert(0, str(self.coefficient))
        return " ".join(factors)


def _symbol_key(name: str):
    match = re.match(r"([a-z]+)(\d*)$", name)
    prefix, number = match.groups() if match else (name, "")
    return prefix, int(number) if number else -1


def _render_side(monomials: Sequence[Monomial]) -> str:
    if not monomials:
        return "0"
    text = str(monomials[0])
    for mono in monomials[1:]:
        if mono.coefficient < 0:
            text += " - " + str(mono._replace(coefficient=-mono.coefficient))
        else:
            text += " + " + str(mono)
    return text


Instance = FrozenSet[Tuple[Tuple[Tuple[bool, Tuple[int, ...], Tuple[int, ...]], ...], int]]


class IndexEquation(NamedTuple):
    lhs: Tuple[Monomial, ...]
    rhs: Tuple[Monomial, ...]
    dims: Tuple[Tuple[str, int], ...]

    def __str__(self):
        return f"{_render_side(self.lhs)} = {_render_side(self.rhs)}"

    @property
    def free(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.dims)

    def normalize(self) -> "IndexEquation":
        """Canonical form; the side that renders first is written on the left."""
        lhs = _normalize_side(self.lhs, self.free)
        rhs = _normalize_side(self.rhs, self.free)
        if _render_side(rhs) < _render_side(lhs):
            lhs, rhs = rhs, lhs
        dims = tuple(sorted(self.dims, key=lambda item: _symbol_key(item[0])))
        return IndexEquation(lhs, rhs, dims)

    def instances(self) -> FrozenSet[Instance]:
        """All concrete instances as sign-normalized polynomials lhs - rhs.

        Instances that vanish identically are left out, so two families are
        equivalent iff these sets coincide.
        """
        names = self.free
        ranges = [range(1, d + 1) for _, d in self.dims]
        found = set()
        for values in product(*ranges):
            assignment = dict(zip(names, values))
            poly: Dict[Tuple, int] = defaultdict(int)
            for sign, side in ((1, self.lhs), (-1, self.rhs)):
                for mono in side:
                    _expand_monomial(mono, assignment, sign, poly)
            terms = {key: value for key, value in poly.items() if value}
            if not terms:
                continue
            if terms[min(terms)] < 0:
                terms = {key: -value for key, value in terms.items()}
            found.add(frozenset(terms.items()))
        return frozenset(found)

    def to_json(self) -> Dict:
        return {
            "dims": {name: d for name, d in self.dims},
            "lhs": [_monomial_json(mono) for mono in self.lhs],
            "rhs": [_monomial_json(mono) for mono in self.rhs],
        }


def _monomial_json(mono: Monomial) -> Dict:
    return {
        "coefficient": mono.coefficient,
        "deltas": [list(d) for d in mono.deltas],
        "sum": {name: d for name, d in mono.bound},
        "entries": [
            {"star": e.star, "upper": list(e.upper), "lower": list(e.lower)}
            for e in mono.entries
        ],
    }


def _expand_monomial(mono: Monomial, assignment: Dict[str, int], sign: int, poly: Dict):
    names = [name for name, _ in mono.bound]
    ranges = [range(1, d + 1) for _, d in mono.bound]
    for values in product(*ranges):
        env = dict(assignment)
        env.update(zip(names, values))
        if any(env[a] != env[b] for a, b in mono.deltas):
            continue
        key = tuple(
            (e.star, tuple(env[s] for s in e.upper), tuple(env[s] for s in e.lower))
            for e in mono.entries
        )
        poly[key] += sign * mono.coefficient


#### Normal form ####
def _normalize_monomial(mono: Monomial, free: Sequence[str]) -> Monomial:
    free = set(free)
    bound_dims = dict(mono.bound)

    # identify symbols joined by deltas
    parent: Dict[str, str] = {}

    def find(s):
        while parent.get(s, s) != s:
            s = parent[s]
        return s

    for a, b in mono.deltas:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    classes: Dict[str, List[str]] = defaultdict(list)
    for a, b in mono.deltas:
        for s in (a, b):
            if s not in classes[find(s)]:
                classes[find(s)].append(s)

    substitute: Dict[str, str] = {}
    deltas = set()
    for members in classes.values():
        frees = sorted((s for s in members if s in free), key=_symbol_key)
        bounds = [s for s in members if s not in free]
        rep = frees[0] if frees else bounds[0]
        for s in members:
            substitute[s] = rep
        for s in frees[1:]:
            deltas.add((rep, s))

    entries = [
        Entry(
            tuple(substitute.get(s, s) for s in e.upper),
            tuple(substitute.get(s, s) for s in e.lower),
            e.star,
        )
        for e in mono.entries
    ]

    # rename bound indices in order of first use
    used: List[str] = []
    for e in entries:
        for s in e.upper + e.lower:
            if s in bound_dims and s not in used:
                used.append(s)
    coefficient = mono.coefficient
    for s, d in mono.bound:
        if s not in used and substitute.get(s, s) == s:
            coefficient *= d
    names = ["l"] if len(used) == 1 else [f"l{k}" for k in range(1, len(used) + 1)]
    rename = dict(zip(used, names))
    entries = [
        Entry(
            tuple(rename.get(s, s) for s in e.upper),
            tuple(rename.get(s, s) for s in e.lower),
            e.star,
        )
        for e in entries
    ]
    bound = tuple((rename[s], bound_dims[s]) for s in used)
    deltas = tuple(sorted(deltas, key=lambda d: (_symbol_key(d[0]), _symbol_key(d[1]))))
    return Monomial(coefficient, deltas, bound, tuple(entries))


def _normalize_side(side: Sequence[Monomial], free: Sequence[str]) -> Tuple[Monomial, ...]:
    merged: Dict[Tuple, int] = {}
    for mono in side:
        mono = _normalize_monomial(mono, free)
        key = (mono.deltas, mono.bound, mono.entries)
        merged[key] = merged.get(key, 0) + mono.coefficient
    monomials = [
        Monomial(c, deltas, bound, entries)
        for (deltas, bound, entries), c in merged.items()
        if c
    ]
    return tuple(sorted(monomials, key=str))


#### Emission ####
def extract_sigma(r: SpatialPartition) -> Permutation:
    sigma = sigma_of(r)
    if sigma is None:
        raise NotDualityForm("partition is not of the form sigma_wb")
    return sigma


def _upper_symbol(p: SpatialPartition, column: int, level: int) -> str:
    return f"j{(column - 1) * p.m + level}"


def _lower_symbol(p: SpatialPartition, column: int, level: int) -> str:
    return f"i{(column - len(p.up) - 1) * p.m + level}"


def _u_entry(
    letter: str, upper: Sequence[str], lower: Sequence[str], sigma: Permutation
) -> Entry:
    if letter == Color.WHITE.value:
        return Entry(tuple(upper), tuple(lower))
    m = sigma.size
    return Entry(
        tuple(upper[sigma(t) - 1] for t in range(1, m + 1)),
        tuple(lower[sigma(t) - 1] for t in range(1, m + 1)),
        True,
    )


def intertwiner_equations(
    p: SpatialPartition, n: Grading, sigma: Optional[Permutation] = None
) -> List[IndexEquation]:
    """T_p u^x = u^y T_p entrywise; an empty list when it holds trivially."""
    check_graded(p, n)
    sigma = sigma or Permutation.identity(p.m)
    if sigma.size != p.m:
        raise LevelMismatch(f"sigma acts on {sigma.size} levels, partition has {p.m}")
    if not sigma.is_graded(n):
        raise GradingError(f"sigma {sigma.cycle_notation()} is not graded by n=({n})")
    m, x = p.m, len(p.up)

    def upper(pt):
        return pt.column <= x

    def lhs_name(pt):
        # T^I_K (u^x)^K_J: lower points free, upper points summed
        if upper(pt):
            return f"k{(pt.column - 1) * m + pt.level}"
        return _lower_symbol(p, pt.column, pt.level)

    def rhs_name(pt):
        # (u^y)^I_K T^K_J: upper points free, lower points summed
        if upper(pt):
            return _upper_symbol(p, pt.column, pt.level)
        return f"k{(pt.column - x - 1) * m + pt.level}"

    def block_deltas(name):
        deltas = []
        for block in p.blocks:
            names = [name(pt) for pt in block]
            deltas += [(names[0], other) for other in names[1:]]
        return tuple(deltas)

    lhs_entries = tuple(
        _u_entry(
            letter,
            [f"k{(a - 1) * m + l}" for l in range(1, m + 1)],
            [_upper_symbol(p, a, l) for l in range(1, m + 1)],
            sigma,
        )
        for a, letter in enumerate(p.up, start=1)
    )
    rhs_entries = tuple(
        _u_entry(
            letter,
            [_lower_symbol(p, x + a, l) for l in range(1, m + 1)],
            [f"k{(a - 1) * m + l}" for l in range(1, m + 1)],
            sigma,
        )
        for a, letter in enumerate(p.low, start=1)
    )
    lhs_bound = tuple(
        (f"k{(a - 1) * m + l}", n.dim(l)) for a in range(1, x + 1) for l in range(1, m + 1)
    )
    rhs_bound = tuple(
        (f"k{(a - 1) * m + l}", n.dim(l))
        for a in range(1, len(p.low) + 1)
        for l in range(1, m + 1)
    )

    dims = tuple(
        (_lower_symbol(p, x + a, l), n.dim(l))
        for a in range(1, len(p.low) + 1)
        for l in range(1, m + 1)
    ) + tuple(
        (_upper_symbol(p, a, l), n.dim(l)) for a in range(1, x + 1) for l in range(1, m + 1)
    )
    eq = IndexEquation(
        (Monomial(1, block_deltas(lhs_name), lhs_bound, lhs_entries),),
        (Monomial(1, block_deltas(rhs_name), rhs_bound, rhs_entries),),
        dims,
    ).normalize()
    return [] if eq.lhs == eq.rhs else [eq]


class Presentation(NamedTuple):
    grading: Grading
    sigma: Permutation
    generators: Tuple[SpatialPartition, ...]
    equations: Tuple[Tuple[IndexEquation, ...], ...]

    @property
    def clauses(self) -> List[str]:
        return [
            "u is unitary",
            f"u^b = F_sigma conj(u) F_sigma^-1 is unitary, sigma = {self.sigma.cycle_notation()}",
        ]

    def all_equations(self) -> List[IndexEquation]:
        return [eq for family in self.equations for eq in family]

    def render(self) -> str:
        lines = [f"# n = ({self.grading}), sigma = {self.sigma.cycle_notation()}"]
        lines += [f"# {clause}" for clause in self.clauses]
        for p, family in zip(self.generators, self.equations):
            lines.append(f"# {format_partition(p)}")
            lines += [str(eq) for eq in family] or ["# trivial"]
        return "\n".join(lines)

    def to_json(self) -> Dict:
        return {
            "n": list(self.grading.dims),
            "sigma": list(self.sigma.images),
            "unitary": True,
            "equations": [eq.to_json() for eq in self.all_equations()],
        }


def _duality_from(generators: Sequence[SpatialPartition]) -> Optional[DualityPair]:
    rs = [g for g in generators if (g.up, g.low) == ("", "wb")]
    ss = [g for g in generators if (g.up, g.low) == ("", "bw")]
    for r in sorted(rs):
        for s in sorted(ss):
            if check_conjugate_pair(r, s):
                return DualityPair(r, s)
    return None


def emit_presentation(
    generators: Sequence[SpatialPartition],
    m: int,
    n: Grading,
    bound: int = 4,
    duality: Optional[DualityPair] = None,
    verbose: bool = False,
) -> Presentation:
    """Unitarity clauses plus the intertwiner equations of every generator.

    The duality permutation comes from `duality` when given, else from a
    duality pair among the generators, else from a bounded closure search.
    """
    generators = list(generators)
    if not generators:
        raise NotRigidWithinBound("no generators, hence no duality pair")
    if n.m != m:
        raise LevelMismatch(f"grading {n} should have {m} entries")
    for g in generators:
        check_graded(g, n)

    if duality is not None and not check_conjugate_pair(*duality):
        raise NotDualityForm("the given pair does not solve the conjugate equations")
    duality = duality or _duality_from(generators)
    if duality is None:
        bound = max([bound] + [g.columns for g in generators])
        cat = closure(generators, m, bound, until=is_rigid, verbose=verbose)
        duality = find_duality_pair(cat)
    if duality is None:
        raise NotRigidWithinBound(f"no duality pair found within {bound} columns")

    sigma = extract_sigma(duality.r)
    if not sigma.is_graded(n):
        raise GradingError(f"duality permutation {sigma.cycle_notation()} is not graded by n")
    if verbose:
        click.secho(f"> duality permutation {sigma.cycle_notation()}", dim=True, err=True)

    equations = tuple(tuple(intertwiner_equations(g, n, sigma)) for g in generators)
    return Presentation(n, sigma, tuple(generators), equations)


#### Projective versions ####
PROJECTIVE = FlatSignature(1, "wb")


def _alternating(k: int) -> str:
    return "wb" * (k // 2)


def admissible_form(p: SpatialPartition, side: str = "upper-right") -> SpatialPartition:
    """Rotate until both rows have even length, then recolor them as (wb)^k."""
    if p.columns % 2:
        raise OddTotalColumns(f"partition with {p.columns} columns cannot be flattened")
    while len(p.up) % 2 or len(p.low) % 2:
        p = rotate(p, side)
    return with_colors(p, _alternating(len(p.up)), _alternating(len(p.low)))


def projective_generators(
    c0: Sequence[SpatialPartition], side: str = "upper-right"
) -> List[SpatialPartition]:
    """partIdBW^(2) followed by Flat^{-1}(C0') and Flat^{-1}(id (x) C0' (x) id)."""
    for p in c0:
        if p.m != 1:
            raise LevelMismatch("projective generators start from one-level partitions")
        if set(p.up + p.low) - {Color.WHITE.value}:
            raise NotAllWhite(f"{format_partition(p)} has black points")
    if any(p.columns % 2 for p in c0):
        # the category operations keep |x| + |y| even, so checking C0 decides it
        raise OddTotalColumns("a generator has an odd number of columns")

    rotated = [admissible_form(p, side) for p in c0]
    framed = [
        admissible_form(tensor(tensor(identity("w"), p), identity("w"))) for p in rotated
    ]
    flats = [flat_preimage(PROJECTIVE, q) for q in rotated]
    flats_ids = [flat_preimage(PROJECTIVE, q) for q in framed]
    return [part_id_bw(2)] + flats + flats_ids


def projective_duality() -> DualityPair:
    """The duality pair (12)_wb, (12)_bw of every projective category.

    The nested pair flattens back to (12)_ww; composing with the amplified
    partIdBW and its adjoint recolors it.
    """
    nested, _ = compose(
        admissible_form(tensor(tensor(identity("w"), pair()), identity("w"))), pair("wb")
    )
    twisted = flat_preimage(PROJECTIVE, with_colors(nested, "", "wbwb"), "", "ww")
    id_bw = part_id_bw(2)
    r, _ = compose(tensor(identity("w", 2), involution(id_bw)), twisted)
    s, _ = compose(tensor(involution(id_bw), identity("w", 2)), twisted)
    return DualityPair(r, s)


def projective_presentation(
    c0: Sequence[SpatialPartition], n: int, side: str = "upper-right", verbose: bool = False
) -> Presentation:
    d0 = projective_generators(c0, side)
    return emit_presentation(
        d0, 2, Grading.of([n, n]), duality=projective_duality(), verbose=verbose
    )


#### Numeric evaluation ####
UMatrix = Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int]


def evaluate_side(side: Sequence[Monomial], assignment: Dict[str, int], u: UMatrix) -> int:
    """Value of one side for real integer u, so starred entries equal plain ones."""
    total = 0
    for mono in side:
        names = [name for name, _ in mono.bound]
        for values in product(*(range(1, d + 1) for _, d in mono.bound)):
            env = dict(assignment)
            env.update(zip(names, values))
            if any(env[a] != env[b] for a, b in mono.deltas):
                continue
            term = mono.coefficient
            for e in mono.entries:
                term *= u[(tuple(env[s] for s in e.upper), tuple(env[s] for s in e.lower))]
            total += term
    return total


def _permuted(index: Tuple[int, ...], sigma: Permutation) -> Tuple[int, ...]:
    return tuple(index[sigma(t) - 1] for t in range(1, sigma.size + 1))


def u_tensor(u: UMatrix, word: str, sigma: Permutation, n: Grading) -> IntegerTensor:
    """u^word, with (u^b)^I_J = u^A_B on black letters, A_t = I_sigma(t)."""
    letters = []
    for letter in word:
        axis = Axis(letter, n)
        if letter == Color.BLACK.value:
            entries = {
                (i, j): u[(_permuted(i, sigma), _permuted(j, sigma))] for i, j in u
            }
        else:
            entries = dict(u)
        letters.append(IntegerTensor((axis,), (axis,), entries))
    return kron_all(letters)


def evaluation_agrees(
    p: SpatialPartition, n: Grading, sigma: Permutation, u: UMatrix
) -> bool:
    """Emitted equations of p against T_p u^x and u^y T_p computed as tensors."""
    t = realize(p, n)
    lhs = t @ u_tensor(u, p.up, sigma, n)
    rhs = u_tensor(u, p.low, sigma, n) @ t
    equations = intertwiner_equations(p, n, sigma)
    if not equations:
        return lhs == rhs
    eq = equations[0]
    names = eq.free
    rows = [f"i{k}" for k in range(1, len(p.low) * p.m + 1)]
    cols = [f"j{k}" for k in range(1, len(p.up) * p.m + 1)]
    for values in product(*(range(1, d + 1) for _, d in eq.dims)):
        assignment = dict(zip(names, values))
        row = tuple(assignment[s] for s in rows)
        col = tuple(assignment[s] for s in cols)
        if evaluate_side(eq.lhs, assignment, u) != lhs.get(row, col):
            return False
        if evaluate_side(eq.rhs, assignment, u) != rhs.get(row, col):
            return False
    return True


def flat_inverse_membership(
    cat: CategorySet, sig: FlatSignature, p: SpatialPartition
) -> Membership:
    return contains(cat, flat_apply(sig, p))


#### Text form of equations ####
_NAME = re.compile(r"[a-z][a-z0-9]*")


def _name(reader: _Reader) -> str:
    reader.skip()
    match = _NAME.match(reader.text, reader.pos)
    if not match:
        reader.fail("expected an index name")
    reader.pos = match.end()
    return match.group()


def _names(reader: _Reader) -> List[str]:
    names = [_name(reader)]
    while reader.peek() == ",":
        reader.expect(",")
        names.append(_name(reader))
    return names


def _parse_monomial(reader: _Reader, sign: int) -> Monomial:
    coefficient, deltas, bound, entries = sign, [], [], []
    constant = reader.peek().isdigit()
    if constant:
        coefficient *= reader.integer()
    while True:
        reader.skip()
        if reader.text.startswith("sum_", reader.pos):
            reader.expect("sum_")
            if reader.peek() == "{":
                reader.expect("{")
                bound += _names(reader)
                reader.expect("}")
            else:
                bound.append(_name(reader))
        elif reader.text.startswith("delta[", reader.pos):
            reader.expect("delta[")
            a = _name(reader)
            reader.expect(",")
            b = _name(reader)
            reader.expect("]")
            deltas.append((a, b))
        elif reader.text.startswith(("u[", "u*["), reader.pos):
            star = reader.text.startswith("u*[", reader.pos)
            reader.expect("u*[" if star else "u[")
            upper = _names(reader)
            reader.expect(";")
            lower = _names(reader)
            reader.expect("]")
            entries.append(Entry(tuple(upper), tuple(lower), star))
        else:
            break
    if not (constant or deltas or entries):
        reader.fail("expected a term")
    # dimensions of summed indices are filled in once all entries are known
    return Monomial(coefficient, tuple(deltas), tuple((b, 0) for b in bound), tuple(entries))


def _parse_side(reader: _Reader) -> List[Monomial]:
    monomials, sign = [_parse_monomial(reader, 1)], 1
    while reader.peek() in ("+", "-"):
        sign = 1 if reader.peek() == "+" else -1
        reader.pos += 1
        monomials.append(_parse_monomial(reader, sign))
    return monomials


def parse_equation(text: str, n: Grading) -> IndexEquation:
    """Parse 'lhs = rhs'; index ranges follow the level they occupy in u entries."""
    reader = _Reader(text)
    lhs = _parse_side(reader)
    reader.expect("=")
    rhs = _parse_side(reader)
    if not reader.at_end():
        reader.fail("unexpected text after equation")

    level_of: Dict[str, int] = {}
    for mono in lhs + rhs:
        for e in mono.entries:
            if len(e.upper) != n.m or len(e.lower) != n.m:
                raise PartitionSyntaxError(f"u entries need {n.m} indices per side", 1, 1)
            for t, s in enumerate(e.upper + e.lower):
                level_of.setdefault(s, t % n.m + 1)
    for mono in lhs + rhs:
        for a, b in mono.deltas:
            if a in level_of:
                level_of.setdefault(b, level_of[a])
            elif b in level_of:
                level_of.setdefault(a, level_of[b])

    def dim(s: str) -> int:
        if s not in level_of:
            raise PartitionSyntaxError(f"cannot infer the range of index '{s}'", 1, 1)
        return n.dim(level_of[s])

    def resolve(mono: Monomial) -> Monomial:
        return mono._replace(bound=tuple((s, dim(s)) for s, _ in mono.bound))

    lhs, rhs = [resolve(mono) for mono in lhs], [resolve(mono) for mono in rhs]
    bound_names = {s for mono in lhs + rhs for s, _ in mono.bound}
    free = sorted(
        {
            s
            for mono in lhs + rhs
            for s in [x for d in mono.deltas for x in d]
            + [x for e in mono.entries for x in e.upper + e.lower]
            if s not in bound_names
        },
        key=_symbol_key,
    )
    return IndexEquation(tuple(lhs), tuple(rhs), tuple((s, dim(s)) for s in free))


def equation_family(equations: Iterable[IndexEquation]) -> FrozenSet[Instance]:
    """The union of the instances of several equations."""
    found = set()
    for eq in equations:
        found |= eq.instances()
    return frozenset(found)
