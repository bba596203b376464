from fractions import Fraction
from itertools import product
import random

import pytest

from opcoact.core import linalg
from opcoact.core.coact import (
    AbelianGroup,
    GroupMorphism,
    Grading,
    KPoint,
    bialgebra_structure,
    check_grading,
    conjugate,
    convolve,
    grading_support,
    grading_to_morphism,
    gradings_isomorphic,
    hom_check,
    invert_kpoint,
    is_kpoint,
    iter_basis_aligned,
    kpoint_violations,
    morphism_to_grading,
    verify_bialgebra,
    verify_group_morphism,
    zeta,
)
from opcoact.core.palgebra import StructureAlgebra
from opcoact.core.presets import preset
from opcoact.core.universal import universal_polynomials
from opcoact.utils.errors import InputError

from conftest import algebra

Z2 = AbelianGroup((2,))
Z3 = AbelianGroup((3,))


def presentation_of(name: str, operad: str, k: int | None = None):
    pres, alg = algebra(name, operad, k)
    return pres, alg, universal_polynomials(alg, alg, pres)


def diagonal_morphism(grading: Grading) -> GroupMorphism:
    """Projections of a basis-aligned grading."""
    n = len(grading.basis())
    label = {v.index(1): sigma for sigma, v in grading.basis()}
    projections = {
        sigma: linalg.as_matrix([[int(r == c and label[r] == sigma) for c in range(n)] for r in range(n)])
        for sigma in set(label.values())
    }
    return GroupMorphism(group=grading.group, projections=projections)


@pytest.mark.parametrize(
    "name, operad, k",
    [("l2", "lie", None), ("abelian2", "lie", None), ("kt2", "ass", None), ("leib2", "leib", None), ("tass1", "tass", 3)],
)
def test_bialgebra_laws(name: str, operad: str, k: int | None):
    _, _, presentation = presentation_of(name, operad, k)
    report = verify_bialgebra(presentation, bialgebra_structure(presentation))
    assert report.passed, report


def test_bialgebra_needs_a_square_presentation(l2):
    pres, alg = l2
    _, sl2 = algebra("sl2", "lie")
    with pytest.raises(InputError):
        bialgebra_structure(universal_polynomials(sl2, alg, pres))


def test_counit_and_coproduct(l2):
    pres, alg = l2
    bial = bialgebra_structure(universal_polynomials(alg, alg, pres))
    assert bial.epsilon[(1, 1)] == 1
    assert bial.epsilon[(1, 2)] == 0
    assert len(bial.delta[(1, 2)].terms) == 2


@pytest.mark.parametrize("a, b", [(1, 0), (2, 1), (-1, 3), (Fraction(1, 2), -2)])
def test_upper_triangular_family_is_automorphic(a, b):
    _, _, presentation = presentation_of("l2", "lie")
    c = KPoint.of([[a, b], [0, 1]])
    assert is_kpoint(presentation, c)
    inv = invert_kpoint(presentation, c)
    assert inv is not None
    assert convolve(c, inv) == KPoint.identity(2)


def test_lower_shear_is_not_a_point():
    _, _, presentation = presentation_of("l2", "lie")
    c = KPoint.of([[1, 0], [1, 1]])
    violations = kpoint_violations(presentation, c)
    assert violations
    assert {tag.a for tag, _ in violations} == {2}
    assert invert_kpoint(presentation, c) is None


def test_singular_point_has_no_inverse():
    _, _, presentation = presentation_of("l2", "lie")
    zero = KPoint.of([[0, 0], [0, 1]])
    assert is_kpoint(presentation, zero)
    assert invert_kpoint(presentation, zero) is None


@pytest.mark.parametrize("name, operad, values", [("l2", "lie", (-1, 0, 1, 2)), ("kt2", "ass", (-1, 0, 1))])
def test_points_are_endomorphisms(name: str, operad: str, values):
    pres, alg, presentation = presentation_of(name, operad)
    for entries in product(values, repeat=4):
        c = KPoint.of([entries[:2], entries[2:]])
        assert hom_check(presentation, c, alg, alg, pres).agree, entries


def test_convolution_is_a_monoid():
    _, _, presentation = presentation_of("l2", "lie")
    f, g, h = (KPoint.of(m) for m in ([[2, 1], [0, 1]], [[1, -3], [0, 1]], [[0, 5], [0, 1]]))
    one = KPoint.identity(2)
    assert convolve(one, f) == f == convolve(f, one)
    assert convolve(convolve(f, g), h) == convolve(f, convolve(g, h))
    assert is_kpoint(presentation, convolve(f, h))
    with pytest.raises(InputError):
        convolve(f, KPoint.identity(3))


def test_ternary_points():
    _, _, presentation = presentation_of("tass1", "tass", 3)
    points = [x for x in range(-2, 3) if is_kpoint(presentation, KPoint.of([[x]]))]
    assert points == [-1, 0, 1]
    units = [x for x in points if invert_kpoint(presentation, KPoint.of([[x]])) is not None]
    assert units == [-1, 1]


def test_point_shape_must_fit():
    _, _, presentation = presentation_of("l2", "lie")
    with pytest.raises(InputError):
        is_kpoint(presentation, KPoint.identity(3))


@pytest.mark.parametrize("group", [Z2, Z3])
def test_basis_aligned_gradings_of_l2(group: AbelianGroup):
    pres, alg, presentation = presentation_of("l2", "lie")
    seen = 0
    for grading in iter_basis_aligned(group, 2):
        valid = check_grading(alg, pres, grading)
        # [e1, e2] = e1 forces e2 into the neutral component
        assert valid == (grading.component(group.identity).count((0, 1)) == 1)
        assert verify_group_morphism(presentation, diagonal_morphism(grading)).passed == valid
        seen += valid
    assert seen == len(group.elements())


def test_every_decomposition_grades_the_abelian_algebra():
    pres, alg, presentation = presentation_of("abelian2", "lie")
    gradings = list(iter_basis_aligned(Z3, 2))
    assert len(gradings) == 9
    for grading in gradings:
        assert check_grading(alg, pres, grading)
        assert verify_group_morphism(presentation, grading_to_morphism(alg, pres, grading)).passed


def test_grading_round_trip():
    pres, alg, presentation = presentation_of("l2", "lie")
    grading = Grading(group=Z2, components={(1,): [(1, 0)], (0,): [(1, 1)]})
    m = grading_to_morphism(alg, pres, grading)
    assert verify_group_morphism(presentation, m).passed
    back = morphism_to_grading(presentation, m)
    for sigma in Z2.elements():
        assert linalg.same_span(back.component(sigma), grading.component(sigma), 2)
    assert grading_support(back) == [(0,), (1,)]


def test_invalid_decompositions():
    pres, alg, presentation = presentation_of("l2", "lie")
    with pytest.raises(InputError):
        grading_to_morphism(alg, pres, Grading(group=Z2, components={(0,): [(1, 0)], (1,): [(0, 1)]}))
    with pytest.raises(InputError):
        check_grading(alg, pres, Grading(group=Z2, components={(0,): [(1, 0)], (1,): [(2, 0)]}))
    overlapping = GroupMorphism(group=Z2, projections={(0,): linalg.identity(2), (1,): linalg.identity(2)})
    report = verify_group_morphism(presentation, overlapping)
    assert not report.sums_to_identity
    assert ((0,), (1,)) in report.orthogonal
    with pytest.raises(InputError):
        morphism_to_grading(presentation, overlapping)


def test_conjugation_is_an_action():
    pres, alg, presentation = presentation_of("l2", "lie")
    m = grading_to_morphism(alg, pres, Grading(group=Z2, components={(1,): [(1, 0)], (0,): [(0, 1)]}))
    g, h = KPoint.of([[2, 1], [0, 1]]), KPoint.of([[1, 3], [0, 1]])
    assert conjugate(presentation, conjugate(presentation, m, g), h) == conjugate(presentation, m, convolve(h, g))
    assert conjugate(presentation, m, KPoint.identity(2)) == m
    assert verify_group_morphism(presentation, conjugate(presentation, m, g)).passed
    with pytest.raises(InputError):
        conjugate(presentation, m, KPoint.of([[1, 0], [1, 1]]))


def test_hom_check_against_abelian_target(l2, abelian2):
    pres, alg = l2
    _, flat = abelian2
    presentation = universal_polynomials(alg, flat, pres)
    zero = hom_check(presentation, KPoint.of([[0, 0], [0, 0]]), alg, flat, pres)
    assert zero.kpoint and zero.morphism
    one = hom_check(presentation, KPoint.identity(2), alg, flat, pres)
    assert not one.kpoint and not one.morphism
    assert one.agree


def test_isomorphic_gradings():
    pres, alg, presentation = presentation_of("l2", "lie")
    first = Grading(group=Z2, components={(1,): [(1, 0)], (0,): [(0, 1)]})
    second = Grading(group=Z2, components={(1,): [(1, 0)], (0,): [(1, 1)]})
    report = gradings_isomorphic(alg, pres, presentation, first, second, KPoint.of([[2, 1], [0, 1]]))
    assert report.passed
    identity = gradings_isomorphic(alg, pres, presentation, first, second, KPoint.identity(2))
    assert identity.automorphism
    assert identity.components == [(0,)]
    assert not identity.passed


def test_isomorphism_needs_an_automorphism():
    pres, alg, presentation = presentation_of("l2", "lie")
    first = Grading(group=Z2, components={(1,): [(1, 0)], (0,): [(0, 1)]})
    report = gradings_isomorphic(alg, pres, presentation, first, first, KPoint.of([[1, 0], [1, 1]]))
    assert not report.automorphism
    with pytest.raises(InputError):
        gradings_isomorphic(alg, pres, presentation, first, Grading(group=Z3, components={(0,): [(1, 0), (0, 1)]}), KPoint.identity(2))


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-5, 5), rng.randint(1, 3))


def test_random_matrices_off_the_locus_fail():
    pres, alg, presentation = presentation_of("l2", "lie")
    rng = random.Random(2024)
    for _ in range(100):
        rows = [[random_rational(rng) for _ in range(2)] for _ in range(2)]
        rows[1][0] = Fraction(rng.choice([-3, -1, 1, 2]), rng.randint(1, 3))
        c = KPoint.of(rows)
        assert not is_kpoint(presentation, c)
        assert not hom_check(presentation, c, alg, alg, pres).morphism


@pytest.mark.parametrize("name, operad", [("l2", "lie"), ("kt2", "ass"), ("heisenberg", "lie")])
def test_random_points_agree_with_morphisms(name: str, operad: str):
    pres, alg, presentation = presentation_of(name, operad)
    rng = random.Random(7)
    n = alg.dim
    for _ in range(200):
        # a sparse matrix hits the locus often enough to exercise both outcomes
        c = KPoint.of([[random_rational(rng) if rng.random() < 0.5 else 0 for _ in range(n)] for _ in range(n)])
        assert hom_check(presentation, c, alg, alg, pres).agree
        d = KPoint.of([[random_rational(rng) for _ in range(n)] for _ in range(n)])
        assert convolve(c, d).matrix == linalg.matmul(zeta(c), zeta(d))


def test_conjugation_preserves_component_ranks():
    pres, alg, presentation = presentation_of("l2", "lie")
    m = grading_to_morphism(alg, pres, Grading(group=Z3, components={(2,): [(1, 0)], (0,): [(0, 1)]}))
    ranks = {sigma: linalg.rank(m.projection(sigma)) for sigma in Z3.elements()}
    for a, b in [(1, 1), (-1, 0), (2, -3), (Fraction(1, 3), 7), (-2, Fraction(1, 2))]:
        moved = conjugate(presentation, m, KPoint.of([[a, b], [0, 1]]))
        assert verify_group_morphism(presentation, moved).passed
        assert {sigma: linalg.rank(moved.projection(sigma)) for sigma in Z3.elements()} == ranks


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_abelian_algebras_have_every_invertible_point(n: int):
    pres = preset("lie")
    alg = StructureAlgebra(name=f"abelian{n}", dim=n)
    presentation = universal_polynomials(alg, alg, pres)
    assert presentation.jgens == []
    rng = random.Random(n)
    for _ in range(10):
        c = KPoint.of([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        assert is_kpoint(presentation, c)
        assert (invert_kpoint(presentation, c) is not None) == (linalg.inverse(c.matrix) is not None)
