"""
This module, palgebra.py, provides finite-dimensional algebras over an operad presentation given
by structure constants, together with evaluation of free-operad elements and axiom checks.

Classes:
    StructureTensor: A multilinear operation a^⊗k → a as a sparse map from input tuples to vectors.

    StructureAlgebra: Dimension, optional degrees and one tensor per generating operation.

    AxiomReport: Relation violations and action incompatibilities found by check_axioms.

Basis indices are 0-based here; files and reports use 1-based indices. A graded algebra keeps a
single global basis together with the degree of every basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence
import logging

from opcoact.core import linalg
from opcoact.core import permutations as perms
from opcoact.core.operad import GeneratorSet, OperadElement, OperadPresentation, Tree, leaves
from opcoact.utils.errors import InputError

log = logging.getLogger(__name__)

Vec = dict[int, Fraction]
Entries = dict[tuple[int, ...], Vec]


def _one_based(inputs: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(i + 1 for i in inputs)


def _accumulate(target: Vec, source: Vec, scale: Fraction) -> None:
    for s, c in source.items():
        v = target.get(s, 0) + scale * c
        if v:
            target[s] = v
        else:
            target.pop(s, None)


@dataclass(frozen=True)
class StructureTensor:
    """
    A k-linear operation given on basis tuples.

    Attributes:
        arity (int): Number of inputs k.
        entries (dict[tuple[int, ...], dict[int, Fraction]]): Nonzero outputs by 0-based input tuple.
    """

    arity: int
    entries: Entries = field(default_factory=dict)

    @classmethod
    def build(cls, arity: int, entries: dict[tuple[int, ...], Vec]) -> StructureTensor:
        """Drop zero coefficients and empty outputs."""
        clean = {}
        for inputs, out in entries.items():
            vec = {s: Fraction(c) for s, c in out.items() if c}
            if vec:
                clean[tuple(inputs)] = vec
        return cls(arity, clean)

    @classmethod
    def identity(cls, dim: int) -> StructureTensor:
        return cls(1, {(s,): {s: Fraction(1)} for s in range(dim)})

    def get(self, inputs: tuple[int, ...]) -> Vec:
        return self.entries.get(inputs, {})

    def is_zero(self) -> bool:
        return not self.entries

    def permuted(self, sigma: perms.Perm) -> StructureTensor:
        """The tensor of f·σ, that is (f·σ)(a_1, …, a_k) = f(a_σ(1), …, a_σ(k))."""
        out: Entries = {}
        for inputs, vec in self.entries.items():
            # f(b) with b = a∘σ, so a_σ(j) = b_j
            moved = [0] * self.arity
            for j, s in enumerate(sigma):
                moved[s - 1] = inputs[j]
            out[tuple(moved)] = dict(vec)
        return StructureTensor(self.arity, out)

    def apply(self, vectors: Sequence[Sequence[Fraction]]) -> list[Fraction]:
        """Evaluate on coordinate vectors (multilinear extension)."""
        dim = len(vectors[0]) if vectors else 0
        result = [Fraction(0)] * dim
        for inputs, vec in self.entries.items():
            weight = Fraction(1)
            for j, i in enumerate(inputs):
                weight *= vectors[j][i]
                if not weight:
                    break
            if weight:
                for s, c in vec.items():
                    result[s] += weight * c
        return result


@dataclass(kw_only=True)
class StructureAlgebra:
    """
    A finite-dimensional algebra over a presentation.

    Attributes:
        name (str): Label used in reports.
        dim (int): Dimension n.
        degrees (tuple[int, ...] | None): Degree of each basis vector; None for ungraded algebras.
        tensors (dict[str, StructureTensor]): One tensor per generator name.
        shorthand (str): "none", "antisymmetric" or "symmetric"; expanded on construction.
    """

    name: str
    dim: int
    degrees: tuple[int, ...] | None = None
    tensors: dict[str, StructureTensor] = field(default_factory=dict)
    shorthand: str = "none"

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise InputError(f"Algebra {self.name} has negative dimension.")
        if self.degrees is not None and len(self.degrees) != self.dim:
            raise InputError(f"Algebra {self.name} lists {len(self.degrees)} degrees for dimension {self.dim}.")
        if self.shorthand not in ("none", "antisymmetric", "symmetric"):
            raise InputError(f"Unknown shorthand {self.shorthand!r}.")
        for gname, tensor in self.tensors.items():
            for inputs, vec in tensor.entries.items():
                if len(inputs) != tensor.arity:
                    raise InputError(f"Entry {inputs} of {gname} does not have {tensor.arity} inputs.")
                if any(not 0 <= i < self.dim for i in inputs) or any(not 0 <= s < self.dim for s in vec):
                    raise InputError(f"Entry {inputs} of {gname} has an index out of range.")
        if self.shorthand != "none":
            self.tensors = {g: expand_shorthand(t, self.shorthand) for g, t in self.tensors.items()}
            self.shorthand = "none"

    @property
    def graded(self) -> bool:
        return self.degrees is not None

    def degree(self, i: int) -> int:
        return self.degrees[i] if self.degrees is not None else 0

    def dims(self) -> list[int]:
        """Dimension of each degree component d_0, d_1, …"""
        if not self.degrees:
            return [self.dim] if self.dim else []
        out = [0] * (max(self.degrees) + 1)
        for p in self.degrees:
            out[p] += 1
        return out

    def component(self, p: int) -> list[int]:
        """0-based global indices of the basis vectors of degree p."""
        return [i for i in range(self.dim) if self.degree(i) == p]

    def local_index(self, i: int) -> tuple[int, int]:
        """(degree, 1-based position inside its component) of a global 0-based index."""
        p = self.degree(i)
        return p, self.component(p).index(i) + 1

    def tensor(self, name: str) -> StructureTensor:
        if name not in self.tensors:
            raise InputError(f"Algebra {self.name} has no structure constants for {name!r}.")
        return self.tensors[name]


def expand_shorthand(tensor: StructureTensor, mode: str) -> StructureTensor:
    """Fill in the permuted entries of an (anti)symmetric operation from the ones given.

    Raises:
        InputError: If two given entries contradict the declared symmetry.
    """
    entries: Entries = {k: dict(v) for k, v in tensor.entries.items()}
    for inputs, vec in tensor.entries.items():
        for sigma in perms.all_permutations(tensor.arity):
            target = tuple(inputs[s - 1] for s in sigma)
            if target == inputs:
                continue
            factor = perms.sign(sigma) if mode == "antisymmetric" else 1
            image = {s: factor * c for s, c in vec.items()}
            if target not in entries:
                entries[target] = image
            elif entries[target] != image:
                raise InputError(
                    f"Entries {[i + 1 for i in inputs]} and {[i + 1 for i in target]} contradict the {mode} shorthand."
                )
    return StructureTensor.build(tensor.arity, entries)


def complete_with(alg: StructureAlgebra, pres: OperadPresentation) -> StructureAlgebra:
    """Add the tensors of generators the algebra leaves out.

    A missing generator h is derived from a known generator g whenever g·s_t is a single
    multiple c·h: then h(a) = g(a with positions t and t+1 swapped) / c. Generators that cannot
    be reached this way are taken to be zero.

    Raises:
        InputError: If a tensor is given for an unknown generator or with the wrong arity.
    """
    gens = pres.gens
    names = {s.name for s in gens.specs}
    for gname, tensor in alg.tensors.items():
        if gname not in names:
            raise InputError(f"Algebra {alg.name} gives constants for {gname!r}, which {pres.name} does not have.")
        spec = gens.specs[gens.index(gname)]
        if tensor.arity != spec.arity:
            raise InputError(f"Operation {gname} has arity {tensor.arity} in {alg.name} but {spec.arity} in {pres.name}.")
    tensors = dict(alg.tensors)
    progress = True
    while progress:
        progress = False
        for g, spec in enumerate(gens.specs):
            if spec.name not in tensors:
                continue
            peers = gens.peers(spec.arity)
            for t, row in enumerate(spec.action, start=1):
                support = [(peers[pos], x) for pos, x in enumerate(row) if x]
                if len(support) != 1:
                    continue
                h, c = support[0]
                target = gens.specs[h].name
                if target in tensors:
                    continue
                swap = perms.transposition(spec.arity, t)
                moved = tensors[spec.name].permuted(swap)
                tensors[target] = StructureTensor.build(
                    spec.arity, {i: {s: v / c for s, v in vec.items()} for i, vec in moved.entries.items()}
                )
                log.debug("Derived constants of %s from %s through s_%d", target, spec.name, t)
                progress = True
    for spec in gens.specs:
        if spec.name not in tensors:
            log.warning("No constants for %s in %s; taking it to be zero", spec.name, alg.name)
            tensors[spec.name] = StructureTensor(spec.arity)
    return StructureAlgebra(name=alg.name, dim=alg.dim, degrees=alg.degrees, tensors=tensors)


def check_degrees(alg: StructureAlgebra, pres: OperadPresentation) -> None:
    """Degree additivity: an entry (i_1..i_k) → s needs deg s = Σ deg i_j + |μ|.

    Raises:
        InputError: On the first violating entry.
    """
    if not alg.graded:
        return
    for spec in pres.gens.specs:
        tensor = alg.tensors.get(spec.name)
        if tensor is None:
            continue
        for inputs, vec in tensor.entries.items():
            theta = sum(alg.degree(i) for i in inputs) + spec.cdeg
            for s in vec:
                if alg.degree(s) != theta:
                    raise InputError(
                        f"Entry {[i + 1 for i in inputs]} of {spec.name} lands in degree {alg.degree(s)}, expected {theta}."
                    )


def _tensor_by_output(tensor: StructureTensor) -> dict[int, list[tuple[tuple[int, ...], Fraction]]]:
    out: dict[int, list[tuple[tuple[int, ...], Fraction]]] = {}
    for inputs, vec in tensor.entries.items():
        for s, c in vec.items():
            out.setdefault(s, []).append((inputs, c))
    return out


def _planar(alg: StructureAlgebra, gens: GeneratorSet, tree: Tree) -> StructureTensor:
    """Contract the tree along its internal edges, inputs taken in left-to-right leaf order."""
    if isinstance(tree, int):
        return StructureTensor.identity(alg.dim)
    spec = gens.specs[tree.gen]
    top = alg.tensor(spec.name)
    if top.arity != len(tree.children):
        raise InputError(f"Operation {spec.name} has arity {top.arity}, the tree uses {len(tree.children)}.")
    kids = [_tensor_by_output(_planar(alg, gens, child)) for child in tree.children]
    entries: Entries = {}
    for slots, vec in top.entries.items():
        choices = [kids[j].get(s, []) for j, s in enumerate(slots)]
        for pick in product(*choices):
            inputs: tuple[int, ...] = ()
            weight = Fraction(1)
            for block, c in pick:
                inputs += block
                weight *= c
            _accumulate(entries.setdefault(inputs, {}), vec, weight)
    arity = len(leaves(tree))
    return StructureTensor.build(arity, entries)


def eval_tree(alg: StructureAlgebra, elem: OperadElement) -> StructureTensor:
    """The tensor γ(elem) of a free-operad element in the algebra.

    Args:
        alg (StructureAlgebra): The algebra, with a tensor for every generator used.
        elem (OperadElement): The element.

    Raises:
        InputError: If a generator is unknown to the algebra or an arity disagrees.

    Returns:
        StructureTensor: The evaluated operation, linear in elem.
    """
    entries: Entries = {}
    for tree, coeff in elem.terms.items():
        planar = _planar(alg, elem.gens, tree)
        labels = leaves(tree)
        for positions, vec in planar.entries.items():
            # the leaf at position p receives input number labels[p]
            inputs = [0] * elem.arity
            for p, lab in enumerate(labels):
                inputs[lab - 1] = positions[p]
            _accumulate(entries.setdefault(tuple(inputs), {}), vec, coeff)
    return StructureTensor.build(elem.arity, entries)


@dataclass
class AxiomReport:
    """
    Outcome of check_axioms.

    Attributes:
        relations (list[tuple[int, dict[tuple[int, ...], Vec]]]): For each failing relation, its
            index and the 1-based input tuples (with 1-based outputs) where it does not vanish.
        actions (list[tuple[str, int, list[tuple[int, ...]]]]): Generators whose tensor is not
            compatible with s_t, with the offending 1-based tuples.
    """

    algebra: str
    operad: str
    relations: list[tuple[int, dict[tuple[int, ...], Vec]]] = field(default_factory=list)
    actions: list[tuple[str, int, list[tuple[int, ...]]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.relations and not self.actions


def check_axioms(alg: StructureAlgebra, pres: OperadPresentation) -> AxiomReport:
    """Check that the structure constants define an algebra over the presentation.

    Raises:
        InputError: If graded flags disagree, a tensor has the wrong arity or degrees are not additive.
    """
    if alg.graded != pres.graded:
        kind = "graded" if alg.graded else "ungraded"
        raise InputError(f"Algebra {alg.name} is {kind} but presentation {pres.name} is not.")
    full = complete_with(alg, pres)
    check_degrees(full, pres)
    report = AxiomReport(algebra=alg.name, operad=pres.name)
    for index, relation in enumerate(pres.relations):
        value = eval_tree(full, relation)
        if not value.is_zero():
            offending = {_one_based(i): {s + 1: c for s, c in vec.items()} for i, vec in sorted(value.entries.items())}
            report.relations.append((index, offending))
    gens = pres.gens
    for g, spec in enumerate(gens.specs):
        peers = gens.peers(spec.arity)
        own = full.tensors[spec.name]
        for t, row in enumerate(spec.action, start=1):
            acted: Entries = {}
            for pos, x in enumerate(row):
                if x:
                    for inputs, vec in full.tensors[gens.specs[peers[pos]].name].entries.items():
                        _accumulate(acted.setdefault(inputs, {}), vec, x)
            swapped = own.permuted(perms.transposition(spec.arity, t))
            bad = sorted(i for i in set(acted) | set(swapped.entries) if acted.get(i, {}) != swapped.get(i))
            if bad:
                report.actions.append((spec.name, t, [_one_based(i) for i in bad]))
    if report.passed:
        log.info("%s satisfies the axioms of %s", alg.name, pres.name)
    return report


def _all_tuples(dim: int, k: int) -> Iterable[tuple[int, ...]]:
    return product(range(dim), repeat=k)


def morphism_violations(
    f: linalg.Matrix, src: StructureAlgebra, dst: StructureAlgebra, pres: OperadPresentation
) -> list[tuple[str, tuple[int, ...]]]:
    """Generator and 1-based input tuple wherever f(μ(e_i…)) ≠ μ(f e_i, …).

    Raises:
        InputError: If f is not dim(dst) × dim(src).
    """
    rows, cols = linalg.shape(f)
    if rows != dst.dim or (rows and cols != src.dim):
        raise InputError(f"Matrix of shape {rows}x{cols} cannot map a {src.dim}-dim algebra to a {dst.dim}-dim one.")
    src_full, dst_full = complete_with(src, pres), complete_with(dst, pres)
    images = [tuple(f[r][i] for r in range(dst.dim)) for i in range(src.dim)]
    bad: list[tuple[str, tuple[int, ...]]] = []
    for spec in pres.gens.specs:
        mu_src, mu_dst = src_full.tensors[spec.name], dst_full.tensors[spec.name]
        for inputs in _all_tuples(src.dim, spec.arity):
            left = [Fraction(0)] * dst.dim
            for s, c in mu_src.get(inputs).items():
                for r in range(dst.dim):
                    left[r] += c * f[r][s]
            right = mu_dst.apply([images[i] for i in inputs])
            if left != right:
                bad.append((spec.name, _one_based(inputs)))
    return bad


def check_morphism(f: linalg.Matrix, src: StructureAlgebra, dst: StructureAlgebra, pres: OperadPresentation) -> bool:
    """Whether the linear map with matrix f (columns are images of src's basis) respects every generator."""
    return not morphism_violations(f, src, dst, pres)
