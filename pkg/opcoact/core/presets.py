"""Catalog of operad presentations: binary quadratic, k-ary and graded."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from opcoact.core import permutations as perms
from opcoact.core.operad import (
    GeneratorSet,
    GeneratorSpec,
    OperadElement,
    OperadPresentation,
    partial_compose,
    symmetric_act,
)
from opcoact.utils.errors import InputError

K_ARY = ("tass", "pass", "klie", "kleib")


def _spec(name: str, arity: int, rows: Sequence[Sequence[int]], cdeg: int = 0) -> GeneratorSpec:
    return GeneratorSpec(
        name=name, arity=arity, cdeg=cdeg, action=tuple(tuple(Fraction(x) for x in row) for row in rows)
    )


def _one_dimensional(name: str, arity: int, character: int, cdeg: int = 0) -> GeneratorSpec:
    """A generator spanning its arity alone; every transposition acts by the given ±1."""
    return _spec(name, arity, [[character]] * (arity - 1), cdeg)


def regular_name(base: str, sigma: perms.Perm) -> str:
    """Name of the basis element μ^σ of K[S_k]; the identity keeps the bare name."""
    if sigma == perms.identity(len(sigma)):
        return base
    return base + "^" + "".join(str(s) for s in sigma)


def _regular(base: str, k: int) -> list[GeneratorSpec]:
    """K[S_k] with basis μ^σ = μ·σ, the identity first."""
    elements = list(perms.all_permutations(k))
    position = {sigma: p for p, sigma in enumerate(elements)}
    specs = []
    for sigma in elements:
        rows = []
        for t in range(1, k):
            row = [0] * len(elements)
            row[position[perms.then(sigma, perms.transposition(k, t))]] = 1
            rows.append(row)
        specs.append(_spec(regular_name(base, sigma), k, rows))
    return specs


def _cyc(n: int, *cycles: Sequence[int]) -> perms.Perm:
    return perms.from_cycles(n, *cycles)


def _jacobiator(c: OperadElement) -> OperadElement:
    cc = partial_compose(c, 1, c)
    return cc + symmetric_act(cc, _cyc(3, (1, 2, 3))) + symmetric_act(cc, _cyc(3, (1, 3, 2)))


def _associator(m: OperadElement) -> OperadElement:
    return partial_compose(m, 1, m) - partial_compose(m, 2, m)


def _binary(name: str, specs: list[GeneratorSpec], build: Callable[[GeneratorSet], list[OperadElement]], graded: bool = False) -> OperadPresentation:
    gens = GeneratorSet(specs)
    return OperadPresentation(name=name, gens=gens, relations=build(gens), graded=graded)


def _com(gens: GeneratorSet) -> list[OperadElement]:
    return [_associator(OperadElement.generator(gens, "mu"))]


def _leib(gens: GeneratorSet) -> list[OperadElement]:
    mu = OperadElement.generator(gens, "mu")
    left = partial_compose(mu, 1, mu)
    return [left - partial_compose(mu, 2, mu) - symmetric_act(left, _cyc(3, (2, 3)))]


def _lie(gens: GeneratorSet) -> list[OperadElement]:
    return [_jacobiator(OperadElement.generator(gens, "c"))]


def _zinb(gens: GeneratorSet) -> list[OperadElement]:
    mu = OperadElement.generator(gens, "mu")
    right = partial_compose(mu, 2, mu)
    return [partial_compose(mu, 1, mu) - right - symmetric_act(right, _cyc(3, (2, 3)))]


def _pois(gens: GeneratorSet) -> list[OperadElement]:
    c = OperadElement.generator(gens, "c")
    m = OperadElement.generator(gens, "m")
    leibniz_rule = (
        partial_compose(c, 1, m)
        - symmetric_act(partial_compose(m, 1, c), _cyc(3, (2, 3)))
        - partial_compose(m, 2, c)
    )
    return [_jacobiator(c), _associator(m), leibniz_rule]


def _prelie(gens: GeneratorSet) -> list[OperadElement]:
    mu = OperadElement.generator(gens, "mu")
    left, right = partial_compose(mu, 1, mu), partial_compose(mu, 2, mu)
    swap = _cyc(3, (2, 3))
    return [left - right - symmetric_act(left, swap) + symmetric_act(right, swap)]


def _perm(gens: GeneratorSet) -> list[OperadElement]:
    mu = OperadElement.generator(gens, "mu")
    left, right = partial_compose(mu, 1, mu), partial_compose(mu, 2, mu)
    swap = _cyc(3, (2, 3))
    return [left - right, left - symmetric_act(right, swap), right - symmetric_act(left, swap)]


def _gerst(gens: GeneratorSet) -> list[OperadElement]:
    m = OperadElement.generator(gens, "m")
    c = OperadElement.generator(gens, "c")
    compat = (
        partial_compose(c, 1, m)
        - partial_compose(m, 2, c)
        - symmetric_act(partial_compose(m, 1, c), _cyc(3, (2, 3)))
    )
    return [_jacobiator(c), compat, _associator(m)]


def _cyclic_sum(elem: OperadElement) -> OperadElement:
    """elem^{id + (123) + (132)}."""
    return elem + symmetric_act(elem, _cyc(3, (1, 2, 3))) + symmetric_act(elem, _cyc(3, (1, 3, 2)))


def _bv(gens: GeneratorSet) -> list[OperadElement]:
    m = OperadElement.generator(gens, "m")
    delta = OperadElement.generator(gens, "Delta")
    mm = partial_compose(m, 1, m)
    seven_term = (
        partial_compose(delta, 1, mm)
        - _cyclic_sum(partial_compose(m, 1, partial_compose(delta, 1, m)))
        + _cyclic_sum(partial_compose(mm, 1, delta))
    )
    return [_associator(m), partial_compose(delta, 1, delta), seven_term]


def _k_ary(name: str, k: int) -> OperadPresentation:
    if name == "klie":
        gens = GeneratorSet([_one_dimensional("mu", k, -1)])
    else:
        gens = GeneratorSet(_regular("mu", k))
    mu = OperadElement.generator(gens, "mu")
    composites = [partial_compose(mu, i, mu) for i in range(1, k + 1)]
    if name == "tass":
        relations = [composites[i] - composites[j] for i in range(k) for j in range(i + 1, k)]
    elif name == "pass":
        total = OperadElement.zero(gens, 2 * k - 1)
        for i, comp in enumerate(composites, start=1):
            total = total + (-1) ** ((i + 1) * (k - 1)) * comp
        relations = [total]
    else:
        total = composites[0]
        for i, comp in enumerate(composites, start=1):
            total = total - symmetric_act(comp, _filippov_shuffle(k, i))
        relations = [total]
    return OperadPresentation(name=f"{name}{k}", gens=gens, relations=relations)


def _filippov_shuffle(k: int, i: int) -> perms.Perm:
    """σᵢ = [1,…,i−1, i, k+1,…,2k−1, i+1,…,k] in S_{2k−1}."""
    return tuple(range(1, i)) + (i,) + tuple(range(k + 1, 2 * k)) + tuple(range(i + 1, k + 1))


PRESETS: dict[str, Callable[[], OperadPresentation]] = {
    "com": lambda: _binary("com", [_one_dimensional("mu", 2, 1)], _com),
    "ass": lambda: _binary("ass", _regular("mu", 2), _com),
    "leib": lambda: _binary("leib", _regular("mu", 2), _leib),
    "lie": lambda: _binary("lie", [_one_dimensional("c", 2, -1)], _lie),
    "zinb": lambda: _binary("zinb", _regular("mu", 2), _zinb),
    "pois": lambda: _binary("pois", [_spec("c", 2, [[-1, 0]]), _spec("m", 2, [[0, 1]])], _pois),
    "prelie": lambda: _binary("prelie", _regular("mu", 2), _prelie),
    "perm": lambda: _binary("perm", _regular("mu", 2), _perm),
    "gleib": lambda: _binary("gleib", _regular("mu", 2), _leib, graded=True),
    "glie": lambda: _binary("glie", [_one_dimensional("c", 2, -1)], _lie, graded=True),
    "gpois": lambda: _binary("gpois", [_spec("c", 2, [[-1, 0]]), _spec("m", 2, [[0, 1]])], _pois, graded=True),
    "gerst": lambda: _binary(
        "gerst", [_spec("m", 2, [[1, 0]]), _spec("c", 2, [[0, 1]], cdeg=1)], _gerst, graded=True
    ),
}


def preset(name: str, k: int | None = None) -> OperadPresentation:
    """Build a preset presentation.

    Args:
        name (str): One of the PRESETS keys, "bv", or a k-ary family (tass, pass, klie, kleib).
        k (int | None, optional): Arity of the k-ary families. Defaults to None.

    Raises:
        InputError: If the name is unknown or k is missing or below 2.

    Returns:
        OperadPresentation: The presentation.
    """
    key = name.lower()
    if key in K_ARY:
        if k is None:
            raise InputError(f"Preset {name} needs an arity k.")
        if k < 2:
            raise InputError(f"Preset {name} needs k >= 2, got {k}.")
        return _k_ary(key, k)
    if key == "bv":
        gens = GeneratorSet([_spec("m", 2, [[1]]), _spec("Delta", 1, [], cdeg=1)])
        return OperadPresentation(name="bv", gens=gens, relations=_bv(gens), graded=True, quadratic=False)
    if key not in PRESETS:
        raise InputError(f"Unknown preset {name!r}.")
    return PRESETS[key]()


def preset_names() -> list[str]:
    return sorted([*PRESETS, "bv", *K_ARY])
