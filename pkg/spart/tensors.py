"""Exact integer realizations T_p of graded spatial partitions.

T_p maps (C^n)^{(x)x} to (C^n)^{(x)y}. Rows are indexed by the labels of the
lower points and columns by the labels of the upper points, each index
flattened in (column, level) order. Labels start at 1.
"""
import csv
import io
from itertools import product
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from sympy import Matrix

from .functors import FlatSignature, flat_apply, flat_color, perm_apply
from .partition import (
    Color,
    ColorWord,
    GradingError,
    Grading,
    LevelMismatch,
    PartitionError,
    Permutation,
    Point,
    RangeError,
    ShapeError,
    SpatialPartition,
    check_graded,
    compose,
    involution,
    tensor,
)
from .unionfind import UnionFind

Index = Tuple[int, ...]


class Axis(NamedTuple):
    """One tensor factor: a letter and the grading of its m indices."""

    color: str
    grading: Grading

    @property
    def size(self) -> int:
        return self.grading.total


def word_axes(word: ColorWord, n: Grading) -> Tuple[Axis, ...]:
    return tuple(Axis(letter, n) for letter in word)


def _indices(axes: Sequence[Axis]) -> Iterable[Index]:
    ranges = [range(1, d + 1) for axis in axes for d in axis.grading.dims]
    return product(*ranges)


class IntegerTensor:
    """A sparse integer matrix between tensor products of graded spaces."""

    def __init__(
        self,
        row_axes: Sequence[Axis],
        col_axes: Sequence[Axis],
        entries: Optional[Mapping[Tuple[Index, Index], int]] = None,
    ):
        self.row_axes = tuple(row_axes)
        self.col_axes = tuple(col_axes)
        self.entries: Dict[Tuple[Index, Index], int] = {
            key: value for key, value in (entries or {}).items() if value
        }

    @classmethod
    def identity(cls, axes: Sequence[Axis]) -> "IntegerTensor":
        return cls(axes, axes, {(i, i): 1 for i in _indices(axes)})

    @property
    def shape(self) -> Tuple[int, int]:
        rows = cols = 1
        for axis in self.row_axes:
            rows *= axis.size
        for axis in self.col_axes:
            cols *= axis.size
        return rows, cols

    def get(self, row: Index, col: Index) -> int:
        return self.entries.get((tuple(row), tuple(col)), 0)

    def __matmul__(self, other: "IntegerTensor") -> "IntegerTensor":
        if self.col_axes != other.row_axes:
            raise ShapeError("inner axes of a matrix product do not match")
        by_row: Dict[Index, List[Tuple[Index, int]]] = {}
        for (k, c), value in other.entries.items():
            by_row.setdefault(k, []).append((c, value))
        entries: Dict[Tuple[Index, Index], int] = {}
        for (r, k), a in self.entries.items():
            for c, b in by_row.get(k, ()):
                entries[(r, c)] = entries.get((r, c), 0) + a * b
        return IntegerTensor(self.row_axes, other.col_axes, entries)

    def kron(self, other: "IntegerTensor") -> "IntegerTensor":
        entries = {
            (r1 + r2, c1 + c2): a * b
            for (r1, c1), a in self.entries.items()
            for (r2, c2), b in other.entries.items()
        }
        return IntegerTensor(
            self.row_axes + other.row_axes, self.col_axes + other.col_axes, entries
        )

    def adjoint(self) -> "IntegerTensor":
        # integer entries: conjugation is trivial
        return IntegerTensor(
            self.col_axes, self.row_axes, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def scale(self, k: int) -> "IntegerTensor":
        return IntegerTensor(
            self.row_axes, self.col_axes, {key: k * v for key, v in self.entries.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerTensor):
            return NotImplemented
        return (
            self.row_axes == other.row_axes
            and self.col_axes == other.col_axes
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"IntegerTensor(shape={self.shape}, nonzeros={len(self.entries)})"

    def to_json(self) -> Dict:
        return {
            "row_shape": [[a.color, list(a.grading.dims)] for a in self.row_axes],
            "col_shape": [[a.color, list(a.grading.dims)] for a in self.col_axes],
            "entries": [[list(r), list(c), v] for (r, c), v in sorted(self.entries.items())],
        }


def kron_all(tensors: Sequence[IntegerTensor]) -> IntegerTensor:
    result = IntegerTensor((), (), {((), ()): 1})
    for t in tensors:
        result = result.kron(t)
    return result


#### $ realization ####
def _slot(p: SpatialPartition, pt: Point) -> Tuple[bool, int]:
    """Whether pt is an upper point, and its position in the flattened index."""
    x = len(p.up)
    if pt.column <= x:
        return True, (pt.column - 1) * p.m + pt.level - 1
    return False, (pt.column - x - 1) * p.m + pt.level - 1


def delta_eval(p: SpatialPartition, labels: Mapping[Point, int], n: Grading) -> int:
    """1 iff the labels are constant on every block of p."""
    check_graded(p, n)
    for pt in p.points():
        label = labels[pt]
        if not 1 <= label <= n.dim(pt.level):
            raise RangeError(f"label {label} at {pt} is outside [1, {n.dim(pt.level)}]")
    return int(all(len({labels[pt] for pt in block}) == 1 for block in p.blocks))


def realize(p: SpatialPartition, n: Grading) -> IntegerTensor:
    check_graded(p, n)
    slots = [[_slot(p, pt) for pt in block] for block in p.blocks]
    ranges = [range(1, n.dim(block[0].level) + 1) for block in p.blocks]
    rows, cols = len(p.low) * p.m, len(p.up) * p.m

    entries = {}
    for labels in product(*ranges):
        row, col = [0] * rows, [0] * cols
        for label, block in zip(labels, slots):
            for upper, position in block:
                (col if upper else row)[position] = label
        entries[(tuple(row), tuple(col))] = 1
    return IntegerTensor(word_axes(p.low, n), word_axes(p.up, n), entries)


class LawReport(NamedTuple):
    tensor_law: bool
    involution_law: bool
    composition_law: Optional[bool]
    scalar: Optional[int]
    total_scalar: Optional[int]

    @property
    def ok(self) -> bool:
        return self.tensor_law and self.involution_law and self.composition_law is not False


def verify_ops_laws(p: SpatialPartition, q: SpatialPartition, n: Grading) -> LawReport:
    """Check T_{p(x)q} = T_p (x) T_q, T_{p*} = T_p* and T_p T_q = scalar T_{pq}.

    The composition law is only checked when q sits on top of p.
    """
    if p.m != n.m or q.m != n.m:
        raise ShapeError(f"grading {n} does not match the level counts {p.m}, {q.m}")
    tp, tq = realize(p, n), realize(q, n)
    tensor_law = realize(tensor(p, q), n) == tp.kron(tq)
    involution_law = realize(involution(p), n) == tp.adjoint()

    if q.low != p.up:
        return LawReport(tensor_law, involution_law, None, None, None)
    pq, loops = compose(p, q)
    scalar = loops.factor(n)
    composition_law = tp @ tq == realize(pq, n).scale(scalar)
    return LawReport(
        tensor_law, involution_law, composition_law, scalar, loops.total_scalar(n)
    )


#### $ permutations of levels ####
def F_sigma(sigma: Permutation, n: Grading) -> IntegerTensor:
    """The permutation matrix sending e_i to e_k with k_sigma(t) = i_t."""
    if not sigma.is_graded(n):
        raise GradingError(f"{sigma.cycle_notation()} is not graded by n=({n})")
    axes = (Axis(Color.WHITE.value, n),)
    entries = {}
    for i in _indices(axes):
        k = [0] * sigma.size
        for t, value in enumerate(i, start=1):
            k[sigma(t) - 1] = value
        entries[(tuple(k), i)] = 1
    return IntegerTensor(axes, axes, entries)


def _letter_tensor(letter: str, f: IntegerTensor) -> IntegerTensor:
    axis = Axis(letter, f.row_axes[0].grading)
    return IntegerTensor((axis,), (axis,), f.entries)


def letters_tensor(
    word: ColorWord, sigma: Permutation, tau: Permutation, n: Grading
) -> IntegerTensor:
    """Q^word: F_sigma on every white letter and F_tau on every black one."""
    f_white, f_black = F_sigma(sigma, n), F_sigma(tau, n)
    return kron_all(
        [
            _letter_tensor(letter, f_white if letter == Color.WHITE.value else f_black)
            for letter in word
        ]
    )


def verify_perm_conjugation(
    sigma: Permutation, tau: Permutation, p: SpatialPartition, n: Grading
) -> bool:
    """T_{Perm(p)} == Q^y T_p (Q^x)^{-1}."""
    check_graded(p, n)
    q_low = letters_tensor(p.low, sigma, tau, n)
    q_up_inverse = letters_tensor(p.up, sigma.inverse(), tau.inverse(), n)
    return realize(perm_apply(sigma, tau, p), n) == q_low @ realize(p, n) @ q_up_inverse


def verify_conjugacy(sigma: Permutation, tau: Permutation, n: Grading) -> bool:
    """F_tau F_sigma F_tau^T == F_{tau sigma tau^-1}."""
    f_tau = F_sigma(tau, n)
    conjugated = tau.compose(sigma).compose(tau.inverse())
    return f_tau @ F_sigma(sigma, n) @ f_tau.adjoint() == F_sigma(conjugated, n)


#### $ flattening ####
def flat_reindex(sig: FlatSignature, word: ColorWord, n: Grading) -> IntegerTensor:
    """Regroup each letter's m*d indices into d flattened letters of m indices.

    White letters keep the order of the d groups, black letters reverse it.
    """
    if n.m != sig.m:
        raise LevelMismatch(f"grading {n} should have {sig.m} entries")
    m, d = sig.m, sig.d
    source = n.repeat(d)
    letters = []
    for letter in word:
        axes = (Axis(letter, source),)
        flat_axes = word_axes(flat_color(sig, letter), n)
        entries = {}
        for i in _indices(axes):
            groups = [i[k * m : (k + 1) * m] for k in range(d)]
            if letter == Color.BLACK.value:
                groups.reverse()
            entries[(sum(groups, ()), i)] = 1
        letters.append(IntegerTensor(flat_axes, axes, entries))
    return kron_all(letters)


def verify_flat_conjugation(sig: FlatSignature, p: SpatialPartition, n: Grading) -> bool:
    """T_{Flat(p)} under n equals R^y T_p (R^x)^{-1} under (n ... n)."""
    if n.m != sig.m:
        raise LevelMismatch(f"grading {n} should have {sig.m} entries")
    check_graded(p, n.repeat(sig.d))
    r_low = flat_reindex(sig, p.low, n)
    r_up = flat_reindex(sig, p.up, n)
    lhs = realize(flat_apply(sig, p), n)
    return lhs == r_low @ realize(p, n.repeat(sig.d)) @ r_up.adjoint()


#### $ gram matrices ####
class GramMatrix(NamedTuple):
    partitions: Tuple[SpatialPartition, ...]
    entries: Tuple[Tuple[int, ...], ...]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerows(self.entries)
        return out.getvalue()


def _closed_diagram(a: SpatialPartition, b: SpatialPartition, n: Grading) -> int:
    uf = UnionFind(a.points())
    for block in a.blocks + b.blocks:
        uf.union_all(block)
    value = 1
    for group in uf.groups():
        value *= n.dim(group[0].level)
    return value


def _contraction(ta: IntegerTensor, tb: IntegerTensor) -> int:
    return sum(v * tb.entries.get(key, 0) for key, v in ta.entries.items())


def gram_rank(
    ps: Sequence[SpatialPartition], n: Grading, cross_check: bool = False
) -> Tuple[GramMatrix, int]:
    """Gram matrix of {T_p} under the trace pairing, and its exact rank."""
    ps = tuple(ps)
    if not ps:
        return GramMatrix((), ()), 0
    shapes = {(p.m, p.up, p.low) for p in ps}
    if len(shapes) != 1:
        raise ShapeError("Gram matrices need partitions with one common shape")
    for p in ps:
        check_graded(p, n)

    entries = tuple(tuple(_closed_diagram(a, b, n) for b in ps) for a in ps)
    if cross_check:
        tensors = [realize(p, n) for p in ps]
        direct = tuple(tuple(_contraction(a, b) for b in tensors) for a in tensors)
        if direct != entries:
            raise PartitionError("diagrammatic and tensor Gram entries disagree")
    return GramMatrix(ps, entries), Matrix(entries).rank()


def span_rank(tensors: Sequence[IntegerTensor]) -> int:
    """Dimension of the span of tensors sharing one shape."""
    if not tensors:
        return 0
    keys = sorted({key for t in tensors for key in t.entries})
    if not keys:
        return 0
    return Matrix([[t.entries.get(key, 0) for key in keys] for t in tensors]).rank()
