"""
This module, operad.py, provides presentations of (quadratic, k-ary, graded) operads and the
arithmetic of the free operad on their generators.

Classes:
    GeneratorSpec: A generating operation with its arity, degree and symmetric-group action.

    GeneratorSet: The generators of one presentation, with the action of arbitrary permutations.

    Node: An internal vertex of a rooted tree, labelled by a generator index.

    TreeTerm: A single tree monomial with its coefficient.

    OperadElement: A linear combination of tree monomials of one arity.

    OperadPresentation: Generators plus relations.

Trees are stored in canonical form: leaves carry their input labels, and the children of every
node are ordered by their smallest leaf label. Reordering children is paid for by acting on the
node's generator through the stored action rows, so equal elements have equal term maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, NamedTuple, Sequence, Union

import sympy

from opcoact.core import permutations as perms
from opcoact.core.permutations import Perm
from opcoact.utils.errors import InputError

Scalar = Union[int, Fraction]


class Node(NamedTuple):
    gen: int
    children: tuple


Tree = Union[int, Node]


def leaves(tree: Tree) -> tuple[int, ...]:
    """Leaf labels read left to right."""
    if isinstance(tree, int):
        return (tree,)
    out: tuple[int, ...] = ()
    for child in tree.children:
        out += leaves(child)
    return out


def min_leaf(tree: Tree) -> int:
    return min(leaves(tree))


def node_count(tree: Tree) -> int:
    if isinstance(tree, int):
        return 0
    return 1 + sum(node_count(c) for c in tree.children)


def relabel(tree: Tree, mapping: dict[int, int]) -> Tree:
    if isinstance(tree, int):
        return mapping[tree]
    return Node(tree.gen, tuple(relabel(c, mapping) for c in tree.children))


def tree_sort_key(tree: Tree) -> tuple:
    if isinstance(tree, int):
        return (0, tree)
    return (1, tree.gen, tuple(tree_sort_key(c) for c in tree.children))


@dataclass(frozen=True, kw_only=True)
class GeneratorSpec:
    """
    A generating operation of a presentation.

    Attributes:
        name (str): Identifier, unique within the presentation.
        arity (int): Number of inputs, at least 1.
        cdeg (int): Operation degree |μ|; 0 for ungraded presets.
        action (tuple[tuple[Fraction, ...], ...]): For each adjacent transposition s_t (t = 1..arity-1),
            the image of this generator under s_t as a vector over the generators of the same arity,
            in presentation order. The rows of all such generators form the action matrices.
    """

    name: str
    arity: int
    cdeg: int = 0
    action: tuple[tuple[Fraction, ...], ...] = ()


class GeneratorSet:
    """The generators of a presentation, indexed by position.

    Attributes:
        specs (tuple[GeneratorSpec, ...]): The generators.
    """

    def __init__(self, specs: Sequence[GeneratorSpec]) -> None:
        self.specs = tuple(specs)
        self._peers: dict[int, list[int]] = {}
        for g, spec in enumerate(self.specs):
            self._peers.setdefault(spec.arity, []).append(g)
        self._cache: dict[tuple[int, Perm], dict[int, Fraction]] = {}
        self.validate()

    def __len__(self) -> int:
        return len(self.specs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GeneratorSet) and self.specs == other.specs

    def __hash__(self) -> int:
        return hash(self.specs)

    def index(self, ref: int | str) -> int:
        """Position of a generator given by position or name.

        Raises:
            InputError: If no such generator exists.
        """
        if isinstance(ref, int) and not isinstance(ref, bool):
            if 0 <= ref < len(self.specs):
                return ref
            raise InputError(f"Generator index {ref} out of range.")
        for g, spec in enumerate(self.specs):
            if spec.name == ref:
                return g
        raise InputError(f"Generator {ref!r} not found.")

    def peers(self, arity: int) -> list[int]:
        """Generators of the given arity, in presentation order."""
        return list(self._peers.get(arity, []))

    def action_matrices(self, arity: int) -> list[sympy.Matrix]:
        """The matrices of s_1, …, s_{arity-1} on the arity's generator space (rows are images)."""
        peers = self._peers.get(arity, [])
        return [
            sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in self.specs[g].action[t]] for g in peers])
            for t in range(arity - 1)
        ]

    def validate(self) -> None:
        """Check action shapes and the Coxeter relations of S_k on every generator space.

        Raises:
            InputError: If a shape is wrong or a relation fails.
        """
        names = [s.name for s in self.specs]
        if len(set(names)) != len(names):
            raise InputError("Generator names must be unique.")
        for arity, peers in self._peers.items():
            if arity < 1:
                raise InputError(f"Generator arity must be at least 1, got {arity}.")
            for g in peers:
                spec = self.specs[g]
                if spec.cdeg < 0:
                    raise InputError(f"Generator {spec.name} has negative degree.")
                if len(spec.action) != arity - 1 or any(len(row) != len(peers) for row in spec.action):
                    raise InputError(
                        f"Generator {spec.name} needs {arity - 1} action rows of length {len(peers)}."
                    )
            mats = self.action_matrices(arity)
            eye = sympy.eye(len(peers))
            for t, a in enumerate(mats):
                if a * a != eye:
                    raise InputError(f"Action of s_{t + 1} on arity {arity} is not an involution.")
                if t + 1 < len(mats) and (a * mats[t + 1]) ** 3 != eye:
                    raise InputError(f"Braid relation fails for s_{t + 1}, s_{t + 2} on arity {arity}.")
                for u in range(t + 2, len(mats)):
                    if a * mats[u] != mats[u] * a:
                        raise InputError(f"s_{t + 1} and s_{u + 1} do not commute on arity {arity}.")

    def act(self, g: int, sigma: Perm) -> dict[int, Fraction]:
        """The generator g acted on by sigma, as a combination of generators."""
        key = (g, sigma)
        if key not in self._cache:
            peers = self._peers[self.specs[g].arity]
            vec: dict[int, Fraction] = {g: Fraction(1)}
            for t in perms.adjacent_word(sigma):
                nxt: dict[int, Fraction] = {}
                for h, c in vec.items():
                    for pos, x in enumerate(self.specs[h].action[t - 1]):
                        if x:
                            target = peers[pos]
                            nxt[target] = nxt.get(target, 0) + c * x
                vec = {h: c for h, c in nxt.items() if c}
            self._cache[key] = vec
        return self._cache[key]


def _normalize(gens: GeneratorSet, tree: Tree) -> dict[Tree, Fraction]:
    if isinstance(tree, int):
        return {tree: Fraction(1)}
    spec = gens.specs[tree.gen]
    if len(tree.children) != spec.arity:
        raise InputError(f"Node of {spec.name} has {len(tree.children)} children, expected {spec.arity}.")
    out: dict[Tree, Fraction] = {}
    for choice in product(*(_normalize(gens, c).items() for c in tree.children)):
        kids = tuple(t for t, _ in choice)
        coeff = Fraction(1)
        for _, c in choice:
            coeff *= c
        order = sorted(range(len(kids)), key=lambda p: min_leaf(kids[p]))
        pi = tuple(o + 1 for o in order)
        ordered = tuple(kids[o] for o in order)
        # g(C_1..C_k) = (g·π⁻¹)(C_π(1)..C_π(k))
        for h, c in gens.act(tree.gen, perms.inverse(pi)).items():
            node = Node(h, ordered)
            s = out.get(node, 0) + coeff * c
            if s:
                out[node] = s
            else:
                out.pop(node, None)
    return out


@dataclass(frozen=True)
class TreeTerm:
    """
    A tree monomial with coefficient.

    Attributes:
        tree (Tree): Canonical labelled tree.
        coeff (Fraction): Coefficient.
    """

    tree: Tree
    coeff: Fraction

    @property
    def leafperm(self) -> Perm:
        """The input label sitting at each leaf, left to right."""
        return leaves(self.tree)

    @property
    def shape(self) -> Tree:
        """The tree with leaves numbered 1..n left to right."""
        labels = self.leafperm
        return relabel(self.tree, {lab: pos for pos, lab in enumerate(labels, start=1)})


class OperadElement:
    """A formal linear combination of canonical tree monomials of a single arity.

    Attributes:
        gens (GeneratorSet): The generators the trees are labelled with.
        arity (int): Number of inputs.
        terms (dict[Tree, Fraction]): Nonzero coefficients by canonical tree.
    """

    __slots__ = ("gens", "arity", "terms")

    def __init__(self, gens: GeneratorSet, arity: int, terms: dict[Tree, Fraction] | None = None) -> None:
        self.gens = gens
        self.arity = arity
        self.terms = {t: c for t, c in (terms or {}).items() if c}

    @classmethod
    def from_tree(cls, gens: GeneratorSet, tree: Tree, coeff: Scalar = 1) -> OperadElement:
        """Normalize an arbitrary labelled tree.

        Raises:
            InputError: If the leaf labels are not 1..n or a node has the wrong number of children.
        """
        labels = leaves(tree)
        perms.validate(labels)
        coeff = Fraction(coeff)
        terms = {t: c * coeff for t, c in _normalize(gens, tree).items()}
        return cls(gens, len(labels), terms)

    @classmethod
    def unit(cls, gens: GeneratorSet) -> OperadElement:
        return cls(gens, 1, {1: Fraction(1)})

    @classmethod
    def generator(cls, gens: GeneratorSet, ref: int | str) -> OperadElement:
        g = gens.index(ref)
        k = gens.specs[g].arity
        return cls(gens, k, {Node(g, tuple(range(1, k + 1))): Fraction(1)})

    @classmethod
    def zero(cls, gens: GeneratorSet, arity: int) -> OperadElement:
        return cls(gens, arity)

    def tree_terms(self) -> list[TreeTerm]:
        """Terms in a deterministic order."""
        return [TreeTerm(t, self.terms[t]) for t in sorted(self.terms, key=tree_sort_key)]

    def is_zero(self) -> bool:
        return not self.terms

    def max_nodes(self) -> int:
        return max((node_count(t) for t in self.terms), default=0)

    def _check(self, other: OperadElement) -> None:
        if self.gens != other.gens:
            raise InputError("Operad elements over different generators cannot be combined.")
        if self.arity != other.arity:
            raise InputError(f"Arity mismatch: {self.arity} and {other.arity}.")

    def __add__(self, other: OperadElement) -> OperadElement:
        self._check(other)
        terms = dict(self.terms)
        for t, c in other.terms.items():
            terms[t] = terms.get(t, 0) + c
        return OperadElement(self.gens, self.arity, terms)

    def __neg__(self) -> OperadElement:
        return OperadElement(self.gens, self.arity, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other: OperadElement) -> OperadElement:
        return self + (-other)

    def __rmul__(self, c: Scalar) -> OperadElement:
        c = Fraction(c)
        return OperadElement(self.gens, self.arity, {t: c * a for t, a in self.terms.items()})

    __mul__ = __rmul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperadElement):
            return NotImplemented
        return self.gens == other.gens and self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"OperadElement({format_element(self)})"


def partial_compose(t1: OperadElement, i: int, t2: OperadElement) -> OperadElement:
    """Graft t2 into input slot i of t1, bilinearly.

    Raises:
        InputError: If the slot is out of range or the generators differ.
    """
    if not 1 <= i <= t1.arity:
        raise InputError(f"Slot {i} out of range for arity {t1.arity}.")
    if t1.gens != t2.gens:
        raise InputError("Operad elements over different generators cannot be composed.")
    m = t2.arity
    outer = {j: (j if j < i else j + m - 1) for j in range(1, t1.arity + 1)}
    inner = {j: j + i - 1 for j in range(1, m + 1)}
    terms: dict[Tree, Fraction] = {}
    for tree1, c1 in t1.terms.items():
        for tree2, c2 in t2.terms.items():
            grafted = _graft(tree1, i, relabel(tree2, inner), outer)
            for t, c in _normalize(t1.gens, grafted).items():
                s = terms.get(t, 0) + c1 * c2 * c
                if s:
                    terms[t] = s
                else:
                    terms.pop(t, None)
    return OperadElement(t1.gens, t1.arity + m - 1, terms)


def _graft(tree: Tree, slot: int, branch: Tree, outer: dict[int, int]) -> Tree:
    if isinstance(tree, int):
        return branch if tree == slot else outer[tree]
    return Node(tree.gen, tuple(_graft(c, slot, branch, outer) for c in tree.children))


def symmetric_act(t: OperadElement, sigma: Sequence[int]) -> OperadElement:
    """The right action t·σ: inputs are permuted so that (t·σ)(a) = t(a_σ(1), …, a_σ(n)).

    Raises:
        InputError: If sigma is not a permutation of the element's arity.
    """
    sigma = perms.validate(sigma, t.arity)
    mapping = {j: sigma[j - 1] for j in range(1, t.arity + 1)}
    terms: dict[Tree, Fraction] = {}
    for tree, c in t.terms.items():
        for nt, nc in _normalize(t.gens, relabel(tree, mapping)).items():
            s = terms.get(nt, 0) + c * nc
            if s:
                terms[nt] = s
            else:
                terms.pop(nt, None)
    return OperadElement(t.gens, t.arity, terms)


def _set_partitions(labels: tuple[int, ...], k: int) -> Iterator[list[tuple[int, ...]]]:
    """Partitions of sorted labels into k nonempty blocks, blocks ordered by their minima."""
    if k == 0:
        if not labels:
            yield []
        return
    if len(labels) < k:
        return
    first, rest = labels[0], labels[1:]
    # the block holding the smallest label comes first
    for size in range(0, len(rest) + 1):
        for chosen in _combinations(rest, size):
            remaining = tuple(x for x in rest if x not in chosen)
            for tail in _set_partitions(remaining, k - 1):
                yield [(first,) + chosen] + tail


def _combinations(items: tuple[int, ...], size: int) -> Iterator[tuple[int, ...]]:
    if size == 0:
        yield ()
        return
    for pos in range(len(items) - size + 1):
        for tail in _combinations(items[pos + 1 :], size - 1):
            yield (items[pos],) + tail


def _canonical_trees(gens: GeneratorSet, labels: tuple[int, ...], budget: int) -> Iterator[tuple[Tree, int]]:
    """Canonical tree monomials on the given labels using at most budget internal nodes."""
    if len(labels) == 1:
        yield labels[0], 0
    if budget == 0:
        return
    for g, spec in enumerate(gens.specs):
        for blocks in _set_partitions(labels, spec.arity):
            yield from _fill(gens, g, blocks, [], budget - 1)


def _fill(gens: GeneratorSet, g: int, blocks: list[tuple[int, ...]], done: list[Tree], budget: int) -> Iterator[tuple[Tree, int]]:
    if len(done) == len(blocks):
        yield Node(g, tuple(done)), 1 + sum(node_count(c) for c in done)
        return
    for sub, used in _canonical_trees(gens, blocks[len(done)], budget):
        yield from _fill(gens, g, blocks, done + [sub], budget - used)


def composite_basis(gens: GeneratorSet, arity: int, *, max_nodes: int = 3, bound: int | None = None) -> list[OperadElement]:
    """The tree monomials of the free operad in one arity, each with coefficient 1.

    Args:
        gens (GeneratorSet): Generators.
        arity (int): Target arity.
        max_nodes (int, optional): Largest number of internal nodes; needed once unary generators exist. Defaults to 3.
        bound (int | None, optional): Largest arity allowed. Defaults to None.

    Raises:
        InputError: If the arity exceeds the bound.

    Returns:
        list[OperadElement]: Distinct basis monomials in a deterministic order (the unit excluded).
    """
    if bound is not None and arity > bound:
        raise InputError(f"Arity {arity} exceeds the configured bound {bound}.")
    labels = tuple(range(1, arity + 1))
    found = {tree for tree, nodes in _canonical_trees(gens, labels, max_nodes) if nodes > 0}
    return [OperadElement(gens, arity, {t: Fraction(1)}) for t in sorted(found, key=tree_sort_key)]


@dataclass(kw_only=True)
class OperadPresentation:
    """
    Generators and relations of an operad.

    Attributes:
        name (str): Preset name or file stem.
        gens (GeneratorSet): Generating operations.
        relations (list[OperadElement]): Relations, each a combination of composites of generators.
        graded (bool): Whether algebras over it are graded.
        quadratic (bool): Whether every relation term is a two-node composite.
    """

    name: str
    gens: GeneratorSet
    relations: list[OperadElement] = field(default_factory=list)
    graded: bool = False
    quadratic: bool = True

    def __post_init__(self) -> None:
        for r in self.relations:
            if r.gens != self.gens:
                raise InputError(f"A relation of {self.name} uses foreign generators.")
            if self.quadratic and any(node_count(t) != 2 for t in r.terms):
                raise InputError(f"Presentation {self.name} is declared quadratic but has a non-quadratic relation.")
        if not self.graded and any(s.cdeg for s in self.gens.specs):
            raise InputError(f"Presentation {self.name} has graded generators but is not marked graded.")

    @property
    def generators(self) -> tuple[GeneratorSpec, ...]:
        return self.gens.specs

    def element(self, ref: int | str) -> OperadElement:
        return OperadElement.generator(self.gens, ref)

    def composite_bound(self) -> int:
        """Default largest arity for composite enumeration: relation arity + generator arity − 1."""
        rel = max((r.arity for r in self.relations), default=0)
        gen = max((s.arity for s in self.gens.specs), default=1)
        return max(rel, gen) + gen - 1


def format_tree(gens: GeneratorSet, tree: Tree) -> str:
    if isinstance(tree, int):
        return str(tree)
    return f"{gens.specs[tree.gen].name}(" + ",".join(format_tree(gens, c) for c in tree.children) + ")"


def format_element(elem: OperadElement) -> str:
    if not elem.terms:
        return "0"
    parts = []
    for term in elem.tree_terms():
        parts.append(f"{term.coeff}*{format_tree(elem.gens, term.tree)}")
    return " + ".join(parts)
