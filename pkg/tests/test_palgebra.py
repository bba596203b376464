from fractions import Fraction
from itertools import combinations, product

import pytest

from opcoact.core import linalg
from opcoact.core.operad import partial_compose
from opcoact.core.palgebra import (
    StructureAlgebra,
    StructureTensor,
    check_axioms,
    check_morphism,
    complete_with,
    eval_tree,
    morphism_violations,
)
from opcoact.core.presets import preset
from opcoact.utils.data_importer import parse_algebra
from opcoact.utils.errors import InputError

from conftest import algebra

ALGEBRAS = [
    ("l2", "lie", None),
    ("sl2", "lie", None),
    ("heisenberg", "lie", None),
    ("abelian2", "lie", None),
    ("kt2", "ass", None),
    ("kt2", "com", None),
    ("kt2", "perm", None),
    ("kt2", "prelie", None),
    ("leib2", "leib", None),
    ("zinb2", "zinb", None),
    ("tass1", "tass", 3),
    ("pass2", "pass", 3),
    ("zero", "lie", None),
]


def bumped(alg: StructureAlgebra, gname: str, inputs: tuple[int, ...], out: int, by: int = 1) -> StructureAlgebra:
    """Copy of alg with one structure constant raised by `by`, no shorthand applied."""
    tensor = alg.tensors[gname]
    entries = {i: dict(v) for i, v in tensor.entries.items()}
    slot = entries.setdefault(inputs, {})
    slot[out] = slot.get(out, 0) + by
    return StructureAlgebra(name=f"{alg.name}+", dim=alg.dim, tensors={gname: StructureTensor.build(tensor.arity, entries)})


@pytest.mark.parametrize("name, operad, k", ALGEBRAS)
def test_test_algebras_satisfy_their_axioms(name: str, operad: str, k: int | None):
    pres, alg = algebra(name, operad, k)
    report = check_axioms(alg, pres)
    assert report.passed, report


@pytest.mark.parametrize("name", ["l2", "sl2", "heisenberg"])
def test_bumping_any_lie_constant_breaks_the_axioms(name: str):
    pres, alg = algebra(name, "lie")
    n = alg.dim
    for inputs in product(range(n), repeat=2):
        for out in range(n):
            report = check_axioms(bumped(alg, "c", inputs, out), pres)
            assert not report.passed, (inputs, out)
            assert report.actions[0][0] == "c"


# bracket changes [e_i, e_j] += e_o that keep the Jacobi identity
JACOBI_SURVIVORS = {
    "l2": [((0, 1), 0), ((0, 1), 1)],
    "sl2": [((0, 1), 2), ((0, 2), 1), ((1, 2), 0)],
    "heisenberg": [((0, 1), 0), ((0, 1), 1), ((0, 1), 2), ((0, 2), 1), ((0, 2), 2), ((1, 2), 0), ((1, 2), 2)],
}


@pytest.mark.parametrize("name", sorted(JACOBI_SURVIVORS))
def test_antisymmetric_bumps_reach_the_jacobi_identity(name: str):
    pres, alg = algebra(name, "lie")
    n = alg.dim
    survivors = []
    for i, j in combinations(range(n), 2):
        for out in range(n):
            report = check_axioms(bumped(bumped(alg, "c", (i, j), out), "c", (j, i), out, -1), pres)
            assert not report.actions
            if report.passed:
                survivors.append(((i, j), out))
            else:
                assert [index for index, _ in report.relations] == [0]
    assert survivors == JACOBI_SURVIVORS[name]


def test_bumping_leibniz_constants():
    pres, alg = algebra("leib2", "leib")
    survivors = [
        (inputs, out)
        for inputs in product(range(2), repeat=2)
        for out in range(2)
        if check_axioms(bumped(alg, "mu", inputs, out), pres).passed
    ]
    # e1e2 = e1 and a doubled e2e2 = 2e1 are still Leibniz
    assert survivors == [((0, 1), 0), ((1, 1), 0)]


def test_jacobi_failure_is_reported_by_relation():
    pres = preset("lie")
    broken_sl2 = parse_algebra(
        {
            "dim": 3,
            "shorthand": "antisymmetric",
            "operations": {
                "c": {
                    "entries": [
                        {"in": [1, 2], "out": {"3": 1, "1": 1}},
                        {"in": [3, 1], "out": {"1": 2}},
                        {"in": [3, 2], "out": {"2": -2}},
                    ]
                }
            },
        },
        pres,
    )
    report = check_axioms(broken_sl2, pres)
    assert not report.actions
    assert [index for index, _ in report.relations] == [0]


def test_eval_of_a_composite(l2):
    pres, alg = l2
    c = pres.element("c")
    full = complete_with(alg, pres)
    value = eval_tree(full, partial_compose(c, 1, c))
    # [[e1, e2], e2] = [e1, e2] = e1
    assert value.get((0, 1, 1)) == {0: 1}
    assert value.get((1, 1, 1)) == {}


def test_eval_is_linear(l2):
    pres, alg = l2
    c = pres.element("c")
    cc = partial_compose(c, 1, c)
    full = complete_with(alg, pres)
    assert eval_tree(full, cc - cc).is_zero()
    doubled = eval_tree(full, 2 * cc)
    for inputs, vec in eval_tree(full, cc).entries.items():
        assert doubled.get(inputs) == {s: 2 * x for s, x in vec.items()}


def test_antisymmetric_shorthand():
    pres = preset("lie")
    alg = parse_algebra({"dim": 2, "shorthand": "antisymmetric", "operations": {"c": {"entries": [{"in": [1, 2], "out": {"1": 1}}]}}}, pres)
    assert alg.tensors["c"].get((1, 0)) == {0: Fraction(-1)}
    with pytest.raises(InputError):
        parse_algebra(
            {
                "dim": 2,
                "shorthand": "antisymmetric",
                "operations": {"c": {"entries": [{"in": [1, 2], "out": {"1": 1}}, {"in": [2, 1], "out": {"1": 1}}]}},
            },
            pres,
        )


def test_regular_partner_is_derived():
    pres = preset("ass")
    alg = parse_algebra({"dim": 2, "operations": {"mu": {"entries": [{"in": [1, 2], "out": {"2": 1}}]}}}, pres)
    full = complete_with(alg, pres)
    swapped = full.tensors["mu^21"]
    assert swapped.get((1, 0)) == {1: 1}
    assert swapped.get((0, 1)) == {}


def test_every_ternary_partner_is_derived():
    pres, alg = algebra("tass1", "tass", 3)
    full = complete_with(alg, pres)
    assert len(full.tensors) == 6
    assert all(t.get((0, 0, 0)) == {0: 1} for t in full.tensors.values())


def test_unreachable_generator_is_zero():
    pres = preset("pois")
    alg = parse_algebra({"dim": 1, "operations": {"c": {"entries": []}}}, pres)
    assert complete_with(alg, pres).tensors["m"].is_zero()


def test_unknown_generator_is_rejected():
    alg = StructureAlgebra(name="odd", dim=1, tensors={"nope": StructureTensor(2)})
    with pytest.raises(InputError):
        complete_with(alg, preset("lie"))


def test_morphisms(l2, abelian2):
    pres, alg = l2
    _, flat = abelian2
    assert check_morphism(linalg.identity(2), alg, alg, pres)
    assert check_morphism(linalg.as_matrix([[1, 5], [0, 1]]), alg, alg, pres)
    assert check_morphism(linalg.zeros(2, 2), alg, flat, pres)
    assert morphism_violations(linalg.identity(2), alg, flat, pres) == [("c", (1, 2)), ("c", (2, 1))]
    with pytest.raises(InputError):
        check_morphism(linalg.zeros(3, 2), alg, alg, pres)


def test_graded_flags_must_agree(l2):
    _, alg = l2
    with pytest.raises(InputError):
        check_axioms(alg, preset("glie"))


def test_degrees_must_add_up():
    pres = preset("glie")
    alg = StructureAlgebra(
        name="skewed",
        dim=2,
        degrees=(0, 1),
        tensors={"c": StructureTensor.build(2, {(0, 1): {0: 1}, (1, 0): {0: -1}})},
    )
    with pytest.raises(InputError):
        check_axioms(alg, pres)


def test_graded_entry_outside_the_algebra():
    with pytest.raises(InputError):
        parse_algebra({"dims": [1, 1], "operations": {"c": {"entries": [{"in": [[1, 1], [1, 1]], "out": {"1": 1}}]}}}, preset("glie"))


def test_graded_algebra_components(graded_lie):
    pres, alg = graded_lie
    assert alg.dims() == [1, 1]
    assert alg.local_index(1) == (1, 1)
    assert check_axioms(alg, pres).passed
