import pytest
from hypothesis import given, settings, strategies as st

from spart.category import enumerate_pair_partitions
from spart.functors import FlatSignature
from spart.partition import (
    Grading,
    GradingError,
    Permutation,
    Point,
    RangeError,
    ShapeError,
    compose,
    empty_partition,
    identity,
    involution,
    make_partition,
    pair,
    sigma_lower,
)
from spart.tensors import (
    F_sigma,
    IntegerTensor,
    delta_eval,
    flat_reindex,
    gram_rank,
    letters_tensor,
    realize,
    span_rank,
    verify_conjugacy,
    verify_flat_conjugation,
    verify_ops_laws,
    verify_perm_conjugation,
    word_axes,
)

from .util import P, composable_pairs, graded_partitions, graded_permutations, gradings

SWAP = Permutation.of([2, 1])
FLAT_SIGNATURES = [
    FlatSignature.of(1, "wb"),
    FlatSignature.of(1, "ww"),
    FlatSignature.of(1, "bw"),
    FlatSignature.of(1, "wwb"),
    FlatSignature.of(2, "wb"),
    FlatSignature.of(2, "ww"),
]


def test_realize_identity_and_empty():
    n = Grading.of([2, 3])
    assert realize(identity("wb", 2), n) == IntegerTensor.identity(word_axes("wb", n))
    t = realize(empty_partition(2), n)
    assert t.shape == (1, 1)
    assert t.entries == {((), ()): 1}


def test_realize_pair():
    n = Grading.of([3])
    t = realize(pair(), n)
    assert t.shape == (9, 1)
    assert t.entries == {((i, i), ()): 1 for i in range(1, 4)}


def test_twisted_loops_realize_to_their_factor():
    r = sigma_lower(SWAP, "w", "w")
    n = Grading.of([2, 2])
    _, loops = compose(involution(r), r)
    t = realize(involution(r), n) @ realize(r, n)
    assert t.entries == {((), ()): loops.factor(n)}
    assert t.get((), ()) == 4


def test_realize_needs_graded_partition():
    with pytest.raises(GradingError):
        realize(sigma_lower(SWAP, "w", "b"), Grading.of([2, 3]))


def test_delta_eval():
    n = Grading.of([2])
    cross = P('P{m=1; up="ww"; low="ww"; blocks=[[1.1,4.1],[2.1,3.1]]}')
    labels = {Point(1, 1): 1, Point(2, 1): 2, Point(3, 1): 2, Point(4, 1): 1}
    assert delta_eval(cross, labels, n) == 1
    labels[Point(4, 1)] = 2
    assert delta_eval(cross, labels, n) == 0
    labels[Point(4, 1)] = 3
    with pytest.raises(RangeError):
        delta_eval(cross, labels, n)


def test_delta_on_two_levels():
    n = Grading.of([3, 3])
    p = make_partition(2, "w", "wb", [[(1, 2), (2, 1)], [(1, 1), (2, 2)], [(3, 1), (3, 2)]])
    labels = {
        Point(1, 1): 1,
        Point(1, 2): 2,
        Point(2, 1): 2,
        Point(2, 2): 1,
        Point(3, 1): 3,
        Point(3, 2): 3,
    }
    assert delta_eval(p, labels, n) == 1
    labels[Point(3, 2)] = 1
    assert delta_eval(p, labels, n) == 0
    t = realize(p, n)
    assert t.shape == (81, 9)
    assert sum(t.entries.values()) == 27


def test_loop_scalar():
    cap = involution(pair())
    report = verify_ops_laws(cap, pair(), Grading.of([3]))
    assert report.ok
    assert report.scalar == 3

    cup = sigma_lower(Permutation.identity(2), "w", "b")
    report = verify_ops_laws(involution(cup), cup, Grading.of([2, 3]))
    assert report.scalar == 6
    assert report.total_scalar == 36

    # laws without a composable pair skip the composition check
    report = verify_ops_laws(pair(), pair(), Grading.of([2]))
    assert report.ok and report.composition_law is None


@settings(max_examples=200, deadline=None)
@given(composable_pairs())
def test_realization_respects_operations(case):
    n, p, q = case
    report = verify_ops_laws(p, q, n)
    assert report.tensor_law
    assert report.involution_law
    assert report.composition_law is True
    _, loops = compose(p, q)
    assert report.scalar == loops.factor(n)


@st.composite
def perm_cases(draw):
    m = draw(st.integers(1, 3))
    n = draw(gradings(m, 3))
    p = draw(graded_partitions(n, max_points=6))
    return n, p, draw(graded_permutations(n)), draw(graded_permutations(n))


@settings(max_examples=100, deadline=None)
@given(perm_cases())
def test_perm_conjugation(case):
    n, p, sigma, tau = case
    assert verify_perm_conjugation(sigma, tau, p, n)


@st.composite
def flat_cases(draw):
    sig = draw(st.sampled_from(FLAT_SIGNATURES))
    n = draw(gradings(sig.m, 2))
    p = draw(graded_partitions(n.repeat(sig.d), max_points=6))
    return sig, n, p


@settings(max_examples=100, deadline=None)
@given(flat_cases())
def test_flat_conjugation(case):
    sig, n, p = case
    assert verify_flat_conjugation(sig, p, n)


@st.composite
def conjugacy_cases(draw):
    n = draw(gradings(3, 3))
    return n, draw(graded_permutations(n)), draw(graded_permutations(n))


@settings(max_examples=100, deadline=None)
@given(conjugacy_cases())
def test_conjugacy(case):
    n, sigma, tau = case
    assert verify_conjugacy(sigma, tau, n)


def test_F_sigma():
    n = Grading.of([2, 2])
    f = F_sigma(SWAP, n)
    assert f.shape == (4, 4)
    assert f.get((2, 1), (1, 2)) == 1
    assert f.get((1, 2), (1, 2)) == 0
    assert f @ f == IntegerTensor.identity(f.row_axes)
    with pytest.raises(GradingError):
        F_sigma(SWAP, Grading.of([2, 3]))


def test_letters_tensor():
    n = Grading.of([2, 2])
    q = letters_tensor("wb", SWAP, Permutation.identity(2), n)
    assert q.shape == (16, 16)
    assert q.get((2, 1, 1, 2), (1, 2, 1, 2)) == 1


def test_flat_reindex_reverses_black_letters():
    sig = FlatSignature.of(1, "wb")
    n = Grading.of([2])
    white = flat_reindex(sig, "w", n)
    black = flat_reindex(sig, "b", n)
    assert white.get((1, 2), (1, 2)) == 1
    assert black.get((2, 1), (1, 2)) == 1


@pytest.mark.parametrize("k", [2, 3])
def test_gram_of_pair_partitions(k):
    ps = enumerate_pair_partitions(1, "", "wwww")
    gram, rank = gram_rank(ps, Grading.of([k]), cross_check=True)
    assert gram.entries == tuple(
        tuple(k * k if i == j else k for j in range(3)) for i in range(3)
    )
    assert rank == 3


def test_gram_csv_and_degenerate_rank():
    ps = enumerate_pair_partitions(1, "", "wwww")
    gram, _ = gram_rank(ps, Grading.of([2]))
    assert gram.to_csv() == "4,2,2\n2,4,2\n2,2,4\n"
    _, rank = gram_rank(ps, Grading.of([1]))
    assert rank == 1
    assert gram_rank([], Grading.of([2]))[1] == 0
    with pytest.raises(ShapeError):
        gram_rank([pair(), identity("w")], Grading.of([2]))


def test_span_rank():
    ps = enumerate_pair_partitions(1, "", "wwww")
    assert span_rank([realize(p, Grading.of([2])) for p in ps]) == 3
    assert span_rank([realize(p, Grading.of([1])) for p in ps]) == 1
    assert span_rank([]) == 0
