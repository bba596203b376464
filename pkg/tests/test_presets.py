from math import factorial

import pytest

from opcoact.core.presets import K_ARY, preset, preset_names
from opcoact.utils.errors import InputError


@pytest.mark.parametrize("name", [n for n in preset_names() if n not in K_ARY])
def test_every_preset_builds(name: str):
    pres = preset(name)
    assert pres.relations
    assert all(not r.is_zero() for r in pres.relations)


@pytest.mark.parametrize("name", K_ARY)
@pytest.mark.parametrize("k", [2, 3])
def test_k_ary_presets(name: str, k: int):
    pres = preset(name, k)
    assert pres.name == f"{name}{k}"
    assert all(r.arity == 2 * k - 1 for r in pres.relations)
    assert len(pres.gens) == (1 if name == "klie" else factorial(k))


def test_binary_presets_have_expected_shape():
    assert len(preset("lie").gens) == 1
    assert len(preset("ass").gens) == 2
    assert len(preset("pois").relations) == 3
    assert len(preset("perm").relations) == 3
    assert len(preset("tass", 3).relations) == 3
    assert preset("gerst").gens.specs[1].cdeg == 1
    assert preset("glie").graded and not preset("lie").graded


def test_bv_is_not_quadratic():
    bv = preset("bv")
    assert not bv.quadratic
    assert bv.gens.specs[bv.gens.index("Delta")].arity == 1


def test_preset_errors():
    with pytest.raises(InputError):
        preset("nope")
    with pytest.raises(InputError):
        preset("tass")
    with pytest.raises(InputError):
        preset("klie", 1)


def test_composite_bound():
    assert preset("lie").composite_bound() == 4
    assert preset("tass", 3).composite_bound() == 7
