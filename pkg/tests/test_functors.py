import itertools

import pytest
from hypothesis import given, settings, strategies as st

from spart.category import closure, enumerate_pair_partitions, is_rigid
from spart.functors import (
    FlatSignature,
    factor_word,
    flat_apply,
    flat_color,
    flat_preimage,
    flat_preimage_category,
    perm_apply,
    perm_category,
    varphi,
    word_factorizations,
)
from spart.partition import (
    LevelMismatch,
    Permutation,
    Point,
    RangeError,
    amplify,
    compose,
    identity,
    involution,
    is_pair,
    make_partition,
    pair,
    part_id_bw,
    sigma_lower,
    tensor,
)
from spart.presets import load_preset

from .util import P, composable_pairs, partitions, permutations

WB = FlatSignature.of(1, "wb")
SIGNATURES = [
    FlatSignature.of(1, "wb"),
    FlatSignature.of(1, "ww"),
    FlatSignature.of(1, "bw"),
    FlatSignature.of(2, "wb"),
    FlatSignature.of(1, "wwb"),
    FlatSignature.of(1, "wbbw"),
]

flat_cases = st.sampled_from(SIGNATURES).flatmap(
    lambda sig: st.tuples(st.just(sig), partitions(sig.source_levels))
)


def test_flat_signature():
    assert WB.d == 2
    assert WB.source_levels == 2
    assert FlatSignature.of(1, "wwb").z_bar == "wbb"
    with pytest.raises(RangeError):
        FlatSignature.of(1, "")


def test_varphi_white_and_black_columns():
    assert varphi(WB, "w", "", Point(1, 1)) == Point(1, 1)
    assert varphi(WB, "w", "", Point(1, 2)) == Point(2, 1)
    assert varphi(WB, "b", "", Point(1, 1)) == Point(2, 1)
    assert varphi(WB, "b", "", Point(1, 2)) == Point(1, 1)

    sig = FlatSignature.of(2, "ww")
    # level j + k*m keeps level j in flattened column k + 1
    assert varphi(sig, "", "w", Point(1, 3)) == Point(2, 1)
    with pytest.raises(RangeError):
        varphi(WB, "w", "", Point(1, 3))


def test_flat_color():
    assert flat_color(WB, "") == ""
    assert flat_color(WB, "wb") == "wbwb"
    assert flat_color(FlatSignature.of(1, "wwb"), "b") == "wbb"


def test_factorization():
    ww = FlatSignature.of(1, "ww")
    assert factor_word(ww, "wwbb") == "wb"
    assert factor_word(ww, "wbwb") is None
    assert word_factorizations(ww, "wwbb") == ["wb"]
    # "wb" is its own conjugate, so every source word flattens alike
    assert factor_word(WB, "wbwb") == "ww"
    assert sorted(word_factorizations(WB, "wbwb")) == ["bb", "bw", "wb", "ww"]
    assert word_factorizations(WB, "wbw") == []


def test_flat_of_amplified_pair():
    # the one-column block on two levels flattens to the pair on "wb"
    p = P('P{m=2; up=""; low="w"; blocks=[[1.1,1.2]]}')
    assert flat_apply(WB, p) == pair("wb")
    assert flat_preimage(WB, pair("wb")) == p


def test_flat_of_all_white_four_levels():
    sig = FlatSignature.of(2, "ww")
    p = identity("w", 4)
    assert flat_apply(sig, p) == identity("ww", 2)
    with pytest.raises(LevelMismatch):
        flat_apply(sig, identity("w", 3))


def test_flat_preimage_rejects_unfactorable_colors():
    assert flat_preimage(WB, pair("ww")) is None
    with pytest.raises(LevelMismatch):
        flat_preimage(WB, identity("w", 2))


def test_flat_preimage_with_explicit_words():
    q = identity("wb")
    assert flat_preimage(WB, q) == identity("w", 2)
    p = flat_preimage(WB, q, "b", "b")
    assert p == identity("b", 2)
    assert flat_apply(WB, p) == q


@settings(max_examples=100, deadline=None)
@given(flat_cases)
def test_flat_roundtrip(case):
    sig, p = case
    q = flat_apply(sig, p)
    assert flat_preimage(sig, q, p.up, p.low) == p
    assert sorted(len(b) for b in q.blocks) == sorted(len(b) for b in p.blocks)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SIGNATURES), st.data())
def test_flat_functor_laws(sig, data):
    m = sig.source_levels
    p = data.draw(partitions(m))
    q = data.draw(partitions(m))
    assert flat_apply(sig, tensor(p, q)) == tensor(flat_apply(sig, p), flat_apply(sig, q))
    assert flat_apply(sig, involution(p)) == involution(flat_apply(sig, p))
    assert flat_apply(sig, identity(p.up, m)) == identity(flat_color(sig, p.up), sig.m)

    top = data.draw(partitions(m, low=p.up))
    pq, loops = compose(p, top)
    flat_pq, flat_loops = compose(flat_apply(sig, p), flat_apply(sig, top))
    assert flat_apply(sig, pq) == flat_pq
    assert len(loops) == len(flat_loops)


@settings(max_examples=100, deadline=None)
@given(composable_pairs(max_dim=1), st.data())
def test_perm_functor_laws(case, data):
    _, p, q = case
    sigma = data.draw(permutations(p.m))
    tau = data.draw(permutations(p.m))

    def perm(r):
        return perm_apply(sigma, tau, r)

    assert perm(tensor(p, q)) == tensor(perm(p), perm(q))
    assert perm(involution(p)) == involution(perm(p))
    assert perm(identity(p.low, p.m)) == identity(p.low, p.m)
    pq, loops = compose(p, q)
    perm_pq, perm_loops = compose(perm(p), perm(q))
    assert perm(pq) == perm_pq
    assert len(loops) == len(perm_loops)
    assert perm_apply(sigma.inverse(), tau.inverse(), perm(p)) == p


def test_perm_moves_only_white_levels():
    p = make_partition(
        2,
        "bw",
        "wwb",
        [[(1, 1), (3, 1)], [(1, 2), (3, 2)], [(2, 1), (4, 1)], [(2, 2), (4, 2), (5, 2)], [(5, 1)]],
    )
    moved = perm_apply(Permutation.of([2, 1]), Permutation.identity(2), p)
    assert moved == make_partition(
        2,
        "bw",
        "wwb",
        [[(1, 1), (3, 2)], [(1, 2), (3, 1)], [(2, 1), (4, 1), (5, 2)], [(2, 2), (4, 2)], [(5, 1)]],
    )


def test_varphi_on_four_levels():
    sig = FlatSignature.of(2, "wb")
    images = {
        (1, 1): (1, 1),
        (1, 2): (1, 2),
        (1, 3): (2, 1),
        (1, 4): (2, 2),
        (2, 1): (3, 1),
        (2, 2): (3, 2),
        (2, 3): (4, 1),
        (2, 4): (4, 2),
        (3, 1): (6, 1),
        (3, 2): (6, 2),
        (3, 3): (5, 1),
        (3, 4): (5, 2),
    }
    for source, target in images.items():
        assert varphi(sig, "w", "wb", Point(*source)) == Point(*target)
    # black columns are flattened in reverse order
    assert [varphi(sig, "w", "wb", Point(c, l)) for c, l in [(1, 1), (3, 1), (3, 3)]] == [
        Point(1, 1),
        Point(6, 1),
        Point(5, 1),
    ]


FOUR_LEVELS = make_partition(
    4,
    "w",
    "wb",
    [
        [(1, 1), (2, 1)],
        [(1, 2), (2, 2)],
        [(1, 4), (2, 3)],
        [(1, 3), (2, 4)],
        [(3, 1), (3, 2)],
        [(3, 3)],
        [(3, 4)],
    ],
)
FLATTENED_BLOCKS = [
    [(1, 1), (3, 1)],
    [(1, 2), (3, 2)],
    [(2, 2), (4, 1)],
    [(2, 1), (4, 2)],
    [(6, 1), (6, 2)],
    [(5, 1)],
    [(5, 2)],
]


@pytest.mark.parametrize("z, up, low", [("ww", "ww", "wwbb"), ("wb", "wb", "wbbw")])
def test_flat_on_two_levels(z, up, low):
    sig = FlatSignature.of(2, z)
    flattened = make_partition(2, up, low, FLATTENED_BLOCKS)
    assert flat_apply(sig, FOUR_LEVELS) == flattened
    assert flat_preimage(sig, flattened, "w", "wb") == FOUR_LEVELS


def test_flat_three_levels_onto_one():
    sig = FlatSignature.of(1, "wwb")
    p = make_partition(
        3,
        "b",
        "ww",
        [[(1, 1), (2, 1)], [(1, 3), (2, 2)], [(1, 2), (2, 3)], [(3, 1), (3, 2)], [(3, 3)]],
    )
    assert flat_apply(sig, p) == make_partition(
        1,
        "wbb",
        "wwbwwb",
        [[(1, 1), (5, 1)], [(2, 1), (6, 1)], [(3, 1), (4, 1)], [(7, 1), (8, 1)], [(9, 1)]],
    )


def test_perm_of_duality_partition():
    swap = Permutation.of([2, 1])
    ident = Permutation.identity(2)
    r = sigma_lower(ident, "w", "b")
    # only the black point levels move
    assert perm_apply(ident, swap, r) == sigma_lower(swap, "w", "b")
    with pytest.raises(LevelMismatch):
        perm_apply(Permutation.identity(3), swap, r)


def test_perm_category():
    swap = Permutation.of([2, 1])
    cat = closure([part_id_bw(2), amplify(pair(), 2)], 2, 2)
    image = perm_category(cat, swap, Permutation.identity(2))
    assert len(image) == len(cat)
    assert perm_apply(swap, Permutation.identity(2), amplify(pair(), 2)) in image
    assert image.closed == cat.closed


@pytest.mark.parametrize("z", ["wb", "ww", "wwb"])
def test_pair_partitions_flatten_to_pair_partitions(z):
    """Flat preimages of one-level pair partitions are exactly the pair partitions."""
    sig = FlatSignature.of(1, z)
    m = sig.source_levels
    for total in range(0, 6 // m + 1):
        for split in range(total + 1):
            for letters in itertools.product("wb", repeat=total):
                word = "".join(letters)
                x, y = word[:split], word[split:]
                expected = set(enumerate_pair_partitions(m, x, y))
                flat_x, flat_y = flat_color(sig, x), flat_color(sig, y)
                found = {
                    flat_preimage(sig, q, x, y)
                    for q in enumerate_pair_partitions(1, flat_x, flat_y)
                }
                assert found == expected


def test_flat_preimage_category_of_pair_partitions():
    on = closure(load_preset("On").with_identity(), 1, 4)
    image = flat_preimage_category(on, WB)
    assert image.m == 2 and image.bound == 2
    assert all(is_pair(p) for p in image)
    expected = set()
    for x, y in [("", ""), ("", "w"), ("w", "b"), ("", "wb"), ("", "bw"), ("w", "w")]:
        expected |= set(enumerate_pair_partitions(2, x, y))
    assert expected <= set(image)
    assert is_rigid(image)
