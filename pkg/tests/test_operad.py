from itertools import product
import random

import pytest

from opcoact.core import permutations as perms
from opcoact.core.operad import (
    Node,
    OperadElement,
    composite_basis,
    format_element,
    partial_compose,
    symmetric_act,
)
from opcoact.core.presets import preset
from opcoact.utils.data_importer import load_operad
from opcoact.utils.errors import InputError


def random_element(gens, arity: int, rng: random.Random) -> OperadElement:
    """A random combination of the arity's generators, or of their two-fold composites."""
    basis = [OperadElement.generator(gens, g) for g in gens.peers(arity)] or composite_basis(gens, arity)
    total = OperadElement.zero(gens, arity)
    for elem in basis:
        total = total + rng.randint(-2, 2) * elem
    return total


def test_unit_laws():
    gens = preset("ass").gens
    unit = OperadElement.unit(gens)
    mu = OperadElement.generator(gens, "mu")
    assert partial_compose(unit, 1, mu) == mu
    assert partial_compose(mu, 1, unit) == mu
    assert partial_compose(mu, 2, unit) == mu


def test_sign_representation():
    c = OperadElement.generator(preset("lie").gens, "c")
    assert symmetric_act(c, (2, 1)) == -c
    assert symmetric_act(symmetric_act(c, (2, 1)), (2, 1)) == c


def test_regular_representation_moves_between_generators():
    gens = preset("ass").gens
    mu = OperadElement.generator(gens, "mu")
    swapped = OperadElement.generator(gens, "mu^21")
    assert symmetric_act(mu, (2, 1)) == swapped
    assert OperadElement.from_tree(gens, Node(0, (2, 1))) == swapped


@pytest.mark.parametrize("seed", range(4))
def test_action_composes(seed: int):
    rng = random.Random(seed)
    gens = preset("ass").gens
    t = random_element(gens, 3, rng)
    for sigma, tau in product(perms.all_permutations(3), repeat=2):
        assert symmetric_act(symmetric_act(t, sigma), tau) == symmetric_act(t, perms.then(sigma, tau))


@pytest.mark.parametrize("name", ["ass", "pois"])
def test_sequential_and_parallel_composition(name: str):
    rng = random.Random(11)
    gens = preset(name).gens
    f, g, h = (random_element(gens, 2, rng) for _ in range(3))
    # sequential: (f∘ᵢg)∘ⱼh = f∘ᵢ(g∘_{j−i+1}h) for i ≤ j < i + 2
    for i in (1, 2):
        for j in (i, i + 1):
            assert partial_compose(partial_compose(f, i, g), j, h) == partial_compose(f, i, partial_compose(g, j - i + 1, h))
    # parallel: (f∘₁g)∘₃h = (f∘₂h)∘₁g
    assert partial_compose(partial_compose(f, 1, g), 3, h) == partial_compose(partial_compose(f, 2, h), 1, g)


@pytest.mark.parametrize("name", ["ass", "lie", "pois"])
def test_equivariance(name: str):
    rng = random.Random(3)
    gens = preset(name).gens
    f, g = random_element(gens, 2, rng), random_element(gens, 2, rng)
    for sigma, tau in product(perms.all_permutations(2), repeat=2):
        for j in (1, 2):
            left = partial_compose(symmetric_act(f, sigma), sigma[j - 1], symmetric_act(g, tau))
            right = symmetric_act(partial_compose(f, j, g), perms.block(sigma, j, tau))
            assert left == right


def test_jacobiator_has_three_terms():
    jacobi = preset("lie").relations[0]
    assert jacobi.arity == 3
    assert len(jacobi.terms) == 3
    assert jacobi.max_nodes() == 2


def test_composite_basis_counts():
    lie = preset("lie").gens
    assert len(composite_basis(lie, 2)) == 1
    assert len(composite_basis(lie, 3)) == 3
    ass = preset("ass").gens
    # two generators in arity 2, twelve two-node trees in arity 3
    assert len(composite_basis(ass, 2)) == 2
    assert len(composite_basis(ass, 3)) == 12
    with pytest.raises(InputError):
        composite_basis(lie, 4, bound=3)


def test_composite_basis_with_unary_generator():
    bv = preset("bv").gens
    trees = composite_basis(bv, 1, max_nodes=2)
    assert {format_element(t) for t in trees} == {"1*Delta(1)", "1*Delta(Delta(1))"}


def test_slot_out_of_range():
    gens = preset("lie").gens
    c = OperadElement.generator(gens, "c")
    with pytest.raises(InputError):
        partial_compose(c, 3, c)


def test_custom_operad_file(data_dir):
    pres = load_operad(str(data_dir / "custom_com.json"))
    m = pres.element("m")
    assert pres.relations == [partial_compose(m, 1, m) - partial_compose(m, 2, m)]
    assert pres.name == "custom_com"


def test_action_must_be_a_representation(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": [{"name": "m", "arity": 2, "action": [[2]]}], "relations": []}')
    with pytest.raises(InputError):
        load_operad(str(bad))
