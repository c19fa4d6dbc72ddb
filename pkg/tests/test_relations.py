import random
from itertools import product

import pytest

from spart.category import Membership, closure
from spart.functors import flat_apply
from spart.notation import PartitionSyntaxError
from spart.partition import (
    Grading,
    LevelMismatch,
    Permutation,
    identity,
    make_partition,
    pair,
    part_id_bw,
    sigma_lower,
)
from spart.presets import all_presets, load_preset
from spart.relations import (
    PROJECTIVE,
    NotAllWhite,
    NotDualityForm,
    NotRigidWithinBound,
    OddTotalColumns,
    admissible_form,
    emit_presentation,
    equation_family,
    evaluation_agrees,
    extract_sigma,
    flat_inverse_membership,
    intertwiner_equations,
    parse_equation,
    projective_duality,
    projective_generators,
    projective_presentation,
)

from .util import P, golden_equations

SWAP = Permutation.of([2, 1])
N22 = Grading.of([2, 2])
SINGLE = P('P{m=1; up=""; low="w"; blocks=[[1.1]]}')


def random_u(n: Grading, rng: random.Random):
    indices = list(product(*(range(1, d + 1) for d in n.dims)))
    return {(i, j): rng.randint(-3, 3) for i in indices for j in indices}


@pytest.mark.parametrize(
    "alias, golden",
    [
        ("On", "o_n.txt"),
        ("On*", "o_n_star.txt"),
        ("On+", "o_n_plus.txt"),
        ("Hn+", "h_n_plus.txt"),
        ("Bn'+", "b_n_prime_plus.txt"),
        ("Bn#+", "b_n_sharp_plus.txt"),
    ],
)
def test_projective_relations_match_golden(alias, golden):
    presentation = projective_presentation(load_preset(alias).generators, 2)
    assert presentation.sigma == SWAP
    expected = {eq.normalize() for eq in golden_equations(golden, N22)}
    assert {eq.normalize() for eq in presentation.all_equations()} == expected


def test_twisted_orthogonal_relations_match_golden():
    gens = [sigma_lower(SWAP, "w", "b"), sigma_lower(SWAP, "b", "w"), part_id_bw(2)]
    presentation = emit_presentation(gens, 2, N22)
    assert presentation.sigma == SWAP
    expected = {eq.normalize() for eq in golden_equations("o_plus_f_sigma.txt", N22)}
    assert {eq.normalize() for eq in presentation.all_equations()} == expected


def test_presentation_render():
    presentation = projective_presentation(load_preset("On+").generators, 2)
    text = presentation.render()
    assert text.splitlines()[0] == "# n = (2,2), sigma = (12)"
    assert "# u is unitary" in text
    data = presentation.to_json()
    assert data["n"] == [2, 2] and data["sigma"] == [2, 1]
    assert len(data["equations"]) == len(presentation.all_equations())


def test_emitted_equations_parse_back():
    presentation = projective_presentation(load_preset("On").generators, 2)
    for eq in presentation.all_equations():
        assert parse_equation(str(eq), N22).instances() == eq.instances()
    assert equation_family(golden_equations("o_n.txt", N22)) == equation_family(
        presentation.all_equations()
    )


def test_normal_form_ignores_side_order():
    written = parse_equation("u*[i2,i1;j2,j1] = u[i1,i2;j1,j2]", N22)
    flipped = parse_equation("u[i1,i2;j1,j2] = u*[i2,i1;j2,j1]", N22)
    assert written.normalize() == flipped.normalize()
    assert str(flipped.normalize()) == "u*[i2,i1;j2,j1] = u[i1,i2;j1,j2]"
    assert written.normalize().normalize() == written.normalize()
    assert intertwiner_equations(part_id_bw(2), N22, SWAP) == [written.normalize()]


@pytest.mark.parametrize("alias, count", [("On", 4), ("On+", 2), ("Hn+", 4), ("On*", 4)])
def test_projective_generator_counts(alias, count):
    c0 = load_preset(alias).generators
    d0 = projective_generators(c0)
    assert d0[0] == part_id_bw(2)
    assert len(d0) - 1 == count
    assert all(p.m == 2 for p in d0)
    # flattening the preimages gives back the admissible forms
    for p, q in zip(c0, d0[1:]):
        assert flat_apply(PROJECTIVE, q) == admissible_form(p)


def test_admissible_form():
    cross = P('P{m=1; up="ww"; low="ww"; blocks=[[1.1,4.1],[2.1,3.1]]}')
    assert admissible_form(cross).up == "wb"
    assert admissible_form(cross).low == "wb"
    three = P('P{m=1; up="w"; low="www"; blocks=[[1.1,2.1],[3.1,4.1]]}')
    turned = admissible_form(three)
    assert len(turned.up) % 2 == 0 and len(turned.low) % 2 == 0
    with pytest.raises(OddTotalColumns):
        admissible_form(SINGLE)


def test_projective_duality():
    r, s = projective_duality()
    assert r == sigma_lower(SWAP, "w", "b")
    assert s == sigma_lower(SWAP, "b", "w")


def test_projective_errors():
    with pytest.raises(NotAllWhite):
        projective_generators([pair("wb")])
    with pytest.raises(LevelMismatch):
        projective_generators([identity("w", 2)])
    with pytest.raises(OddTotalColumns):
        projective_generators([SINGLE])


def test_presentation_errors():
    with pytest.raises(NotRigidWithinBound):
        emit_presentation([], 2, N22)
    with pytest.raises(NotRigidWithinBound):
        emit_presentation([part_id_bw(2)], 2, N22)
    with pytest.raises(LevelMismatch):
        emit_presentation([pair()], 1, N22)
    with pytest.raises(NotDualityForm):
        extract_sigma(pair())


def test_trivial_relations_are_dropped():
    assert intertwiner_equations(identity("wb", 2), N22) == []
    (eq,) = intertwiner_equations(pair(), Grading.of([3]))
    assert str(eq) == "delta[i1,i2] = sum_l u[i1;l] u[i2;l]"


@pytest.mark.parametrize("alias", sorted(all_presets()))
def test_relations_agree_with_tensors(alias):
    rng = random.Random(7)
    presentation = projective_presentation(load_preset(alias).generators, 2)
    for p in presentation.generators:
        for _ in range(10):
            assert evaluation_agrees(p, N22, presentation.sigma, random_u(N22, rng))


@pytest.mark.parametrize("alias", sorted(all_presets()))
def test_one_level_relations_agree_with_tensors(alias):
    rng = random.Random(11)
    n = Grading.of([2])
    for p in load_preset(alias).with_identity():
        for _ in range(50):
            assert evaluation_agrees(p, n, Permutation.identity(1), random_u(n, rng))


def test_parse_equation_errors():
    with pytest.raises(PartitionSyntaxError):
        parse_equation("u[i1;j1] =", Grading.of([2]))
    with pytest.raises(PartitionSyntaxError):
        parse_equation("u[i1;j1] = u[i1;j1]", N22)
    with pytest.raises(PartitionSyntaxError):
        parse_equation("delta[a,b] = 1", Grading.of([2]))


def test_flat_inverse_membership():
    cat = closure(load_preset("On+").with_identity(), 1, 4)
    p = projective_generators([pair()])[1]
    assert flat_inverse_membership(cat, PROJECTIVE, p) == Membership.YES
    singles = make_partition(2, "", "w", [[(1, 1)], [(1, 2)]])
    assert flat_inverse_membership(cat, PROJECTIVE, singles) == Membership.NO
