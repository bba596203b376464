"""
This module, coact.py, provides the bialgebra structure of C(a), its K-points (the automorphism
monoid of a under convolution) and finite abelian group gradings seen as bialgebra maps C(a) → K[G].

Classes:
    BialgebraStructure: Δ(x_st) = Σ x'_si x''_it and ε(x_st) = δ_st on generators.

    KPoint: A rational matrix c with c_si = Φ(x_si).

    AbelianGroup: Z/m_1 × ⋯ × Z/m_r with elements as tuples.

    GroupMorphism: A family of matrices P_σ with Φ(x_si) = Σ_σ (P_σ)_si σ.

    Grading: A decomposition of a into components spanned by column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence
import logging

from opcoact.core import linalg
from opcoact.core.groebner import Budget, normal_form
from opcoact.core.linalg import Matrix, Vector
from opcoact.core.operad import OperadPresentation
from opcoact.core.palgebra import StructureAlgebra, check_morphism, complete_with
from opcoact.core.polyring import Polynomial, VariableId, poly_eval, poly_substitute, var
from opcoact.core.universal import Tag, UniversalPresentation, eta
from opcoact.utils.errors import InputError, RingModeError

log = logging.getLogger(__name__)


def _require_plain(presentation: UniversalPresentation) -> None:
    if presentation.graded:
        raise RingModeError("This operation needs a plain presentation.")


@dataclass
class BialgebraStructure:
    """
    Coproduct and counit of C(a) on generators.

    Attributes:
        n (int): Dimension of a.
        delta (dict[tuple[int, int], Polynomial]): Δ(x_st) in blocks 1 and 2.
        epsilon (dict[tuple[int, int], Fraction]): ε(x_st).
    """

    n: int
    delta: dict[tuple[int, int], Polynomial]
    epsilon: dict[tuple[int, int], Fraction]


def _delta(n: int, s: int, t: int, left: int, right: int) -> Polynomial:
    out = Polynomial()
    for i in range(1, n + 1):
        out = out + Polynomial.product(1, [var(s, i, block=left), var(i, t, block=right)])
    return out


def bialgebra_structure(presentation: UniversalPresentation) -> BialgebraStructure:
    """The coproduct and counit of C(a).

    Raises:
        RingModeError: For graded presentations.
        InputError: For the rectangular presentation of C(a, b).
    """
    _require_plain(presentation)
    if not presentation.square:
        raise InputError("Only C(a) carries a bialgebra structure; the presentation is rectangular.")
    n = presentation.src_dim
    cells = [(s, t) for s in range(1, n + 1) for t in range(1, n + 1)]
    return BialgebraStructure(
        n=n,
        delta={(s, t): _delta(n, s, t, 1, 2) for s, t in cells},
        epsilon={(s, t): Fraction(int(s == t)) for s, t in cells},
    )


@dataclass
class BialgebraReport:
    """
    Outcome of verify_bialgebra, one list of failures per law.

    Attributes:
        coalgebra (list[str]): Generators x_st where coassociativity or a counit law fails.
        counit (list[Tag]): jgens with ε(jgen) ≠ 0.
        coproduct (list[Tag]): jgens whose Δ-image leaves the doubled ideal.
        comodule (list[int]): Target indices where (η⊗id)η ≠ (id⊗Δ)η.
    """

    coalgebra: list[str] = field(default_factory=list)
    counit: list[Tag] = field(default_factory=list)
    coproduct: list[Tag] = field(default_factory=list)
    comodule: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.coalgebra or self.counit or self.coproduct or self.comodule)


def _grid(n: int, block: int) -> list[VariableId]:
    return [var(s, t, block=block) for s in range(1, n + 1) for t in range(1, n + 1)]


def verify_bialgebra(
    presentation: UniversalPresentation, bial: BialgebraStructure, budget: Budget | None = None
) -> BialgebraReport:
    """Check the coalgebra laws, that ε and Δ are well defined on C(a), and the comodule identity.

    Raises:
        RingModeError: For graded presentations.
        BudgetExceeded: If a Gröbner computation hits a cap.
    """
    _require_plain(presentation)
    n = bial.n
    report = BialgebraReport()

    # coassociativity in blocks 1, 2, 3 and both counit laws
    left_split = {v: _delta(n, v.row, v.col, 1, 2) for v in _grid(n, 1)}
    left_split.update({v: Polynomial.variable(v._replace(block=3)) for v in _grid(n, 2)})
    right_split = {v: Polynomial.variable(v) for v in _grid(n, 1)}
    right_split.update({v: _delta(n, v.row, v.col, 2, 3) for v in _grid(n, 2)})
    kill_left = {v: Polynomial.constant(bial.epsilon[(v.row, v.col)]) for v in _grid(n, 1)}
    kill_left.update({v: Polynomial.variable(v._replace(block=0)) for v in _grid(n, 2)})
    kill_right = {v: Polynomial.variable(v._replace(block=0)) for v in _grid(n, 1)}
    kill_right.update({v: Polynomial.constant(bial.epsilon[(v.row, v.col)]) for v in _grid(n, 2)})
    for (s, t), image in sorted(bial.delta.items()):
        x = Polynomial.variable(var(s, t))
        if poly_substitute(image, left_split) != poly_substitute(image, right_split):
            report.coalgebra.append(f"coassociativity at x[{s}][{t}]")
        if poly_substitute(image, kill_left) != x or poly_substitute(image, kill_right) != x:
            report.coalgebra.append(f"counit at x[{s}][{t}]")

    # ε and Δ pass to the quotient
    unit_point = {v: bial.epsilon[(v.row, v.col)] for v in _grid(n, 0)}
    doubled = None
    if presentation.jgens:
        gb = presentation.groebner_basis(budget)
        doubled = gb.rename_block(1).union(gb.rename_block(2))
    delta_images = {var(s, t): image for (s, t), image in bial.delta.items()}
    for tagged in presentation.jgens:
        if poly_eval(tagged.poly, unit_point):
            report.counit.append(tagged.tag)
        if doubled is not None and normal_form(poly_substitute(tagged.poly, delta_images), doubled, budget):
            report.coproduct.append(tagged.tag)

    # (η⊗id)η = (id⊗Δ)η, component by component
    eta_map = eta(presentation)
    for i, row in eta_map.entries.items():
        twice: dict[int, Polynomial] = {}
        for s, x_si in row.items():
            for r, x_rs in eta_map.entries[s].items():
                twice[r] = twice.get(r, Polynomial()) + x_rs.rename_block(1) * x_si.rename_block(2)
        pushed = {r: poly_substitute(x_ri, delta_images) for r, x_ri in row.items()}
        if {r: p for r, p in twice.items() if p} != {r: p for r, p in pushed.items() if p}:
            report.comodule.append(i)
    log.info("Bialgebra laws %s", "hold" if report.passed else "fail")
    return report


@dataclass(frozen=True)
class KPoint:
    """
    An algebra map C(a) → K given by its values on generators.

    Attributes:
        matrix (Matrix): c_si = Φ(x_si).
    """

    matrix: Matrix

    @classmethod
    def of(cls, rows: Sequence[Sequence[Fraction | int]]) -> KPoint:
        return cls(linalg.as_matrix(rows))

    @classmethod
    def identity(cls, n: int) -> KPoint:
        return cls(linalg.identity(n))

    @property
    def shape(self) -> tuple[int, int]:
        return linalg.shape(self.matrix)


def _assignment(presentation: UniversalPresentation, c: KPoint) -> dict[VariableId, Fraction]:
    rows, cols = c.shape
    if rows != presentation.src_dim or (rows and cols != presentation.tgt_dim):
        raise InputError(
            f"A {rows}x{cols} matrix is not a point of a {presentation.src_dim}x{presentation.tgt_dim} presentation."
        )
    return {var(s, i): c.matrix[s - 1][i - 1] for s in range(1, rows + 1) for i in range(1, cols + 1)}


def kpoint_violations(presentation: UniversalPresentation, c: KPoint) -> list[tuple[Tag, Fraction]]:
    """The jgens that do not vanish at c, with their values.

    Raises:
        RingModeError: For graded presentations.
        InputError: If the matrix does not fit the variable grid.
    """
    _require_plain(presentation)
    point = _assignment(presentation, c)
    out = []
    for tagged in presentation.jgens:
        value = poly_eval(tagged.poly, point)
        if value:
            out.append((tagged.tag, value))
    return out


def is_kpoint(presentation: UniversalPresentation, c: KPoint) -> bool:
    """Whether every generator of J vanishes at c."""
    return not kpoint_violations(presentation, c)


def convolve(c1: KPoint, c2: KPoint) -> KPoint:
    """Φ₁⋆Φ₂(x_ij) = Σ_s Φ₁(x_is)Φ₂(x_sj), the matrix product.

    Raises:
        InputError: If the sizes differ.
    """
    if c1.shape != c2.shape:
        raise InputError(f"Cannot convolve points of shapes {c1.shape} and {c2.shape}.")
    return KPoint(linalg.matmul(c1.matrix, c2.matrix))


def invert_kpoint(presentation: UniversalPresentation, c: KPoint) -> KPoint | None:
    """The convolution inverse of c, or None when c is not an invertible K-point."""
    if c.shape[0] != c.shape[1] or not is_kpoint(presentation, c):
        return None
    inv = linalg.inverse(c.matrix)
    if inv is None:
        return None
    candidate = KPoint(inv)
    return candidate if is_kpoint(presentation, candidate) else None


def zeta(c: KPoint) -> Matrix:
    """ζ(Φ)(a_i) = Σ_j Φ(x_ji) a_j; column i of the result holds the coordinates of ζ(Φ)(a_i)."""
    return c.matrix


@dataclass(frozen=True)
class AbelianGroup:
    """
    The finite abelian group Z/m_1 × ⋯ × Z/m_r.

    Attributes:
        factors (tuple[int, ...]): The cyclic orders m_j.
    """

    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(m < 1 for m in self.factors):
            raise InputError(f"Cyclic factors must be positive, got {list(self.factors)}.")

    def elements(self) -> list[tuple[int, ...]]:
        return list(product(*(range(m) for m in self.factors)))

    @property
    def identity(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.factors)

    def add(self, *items: tuple[int, ...]) -> tuple[int, ...]:
        total = list(self.identity)
        for item in items:
            total = [(x + y) % m for x, y, m in zip(total, item, self.factors)]
        return tuple(total)

    def check(self, element: Sequence[int]) -> tuple[int, ...]:
        element = tuple(int(x) for x in element)
        if len(element) != len(self.factors) or any(not 0 <= x < m for x, m in zip(element, self.factors)):
            raise InputError(f"{list(element)} is not an element of Z/{' x Z/'.join(map(str, self.factors))}.")
        return element


@dataclass
class GroupMorphism:
    """
    A bialgebra map C(a) → K[G] given by matrices.

    Attributes:
        group (AbelianGroup): G.
        projections (dict[tuple[int, ...], Matrix]): P_σ; elements left out are zero.
    """

    group: AbelianGroup
    projections: dict[tuple[int, ...], Matrix]

    def __post_init__(self) -> None:
        self.projections = {self.group.check(sigma): m for sigma, m in self.projections.items()}
        if len({linalg.shape(m) for m in self.projections.values()}) > 1:
            raise InputError("Projection matrices have different shapes.")

    @property
    def n(self) -> int:
        return next((len(m) for m in self.projections.values()), 0)

    def projection(self, sigma: tuple[int, ...]) -> Matrix:
        return self.projections.get(sigma, linalg.zeros(self.n, self.n))


@dataclass
class Grading:
    """
    A decomposition a = ⊕_σ a_σ.

    Attributes:
        group (AbelianGroup): G.
        components (dict[tuple[int, ...], list[Vector]]): Spanning column vectors of each a_σ.
    """

    group: AbelianGroup
    components: dict[tuple[int, ...], list[Vector]]

    def __post_init__(self) -> None:
        self.components = {self.group.check(sigma): [tuple(v) for v in vs] for sigma, vs in self.components.items()}

    def component(self, sigma: tuple[int, ...]) -> list[Vector]:
        return self.components.get(sigma, [])

    def basis(self) -> list[tuple[tuple[int, ...], Vector]]:
        return [(sigma, v) for sigma in self.group.elements() for v in self.component(sigma)]


def _check_direct_sum(grading: Grading, n: int) -> None:
    vectors = [v for _, v in grading.basis()]
    if any(len(v) != n for v in vectors):
        raise InputError(f"Grading vectors must have length {n}.")
    if len(vectors) != n or linalg.rank(linalg.columns(vectors, n)) != n:
        raise InputError("Grading components do not form a direct-sum decomposition.")


def grading_violations(
    alg: StructureAlgebra, pres: OperadPresentation, grading: Grading
) -> list[tuple[str, tuple[tuple[int, ...], ...]]]:
    """Generator and component tuple wherever μ(a_σ1, …, a_σk) leaves a_(σ1+⋯+σk).

    Raises:
        InputError: If the components do not decompose the algebra.
    """
    _check_direct_sum(grading, alg.dim)
    full = complete_with(alg, pres)
    group = grading.group
    bad = []
    for spec in pres.gens.specs:
        tensor = full.tensors[spec.name]
        support = [sigma for sigma in group.elements() if grading.component(sigma)]
        for sigmas in product(support, repeat=spec.arity):
            target = grading.component(group.add(*sigmas))
            for vectors in product(*(grading.component(s) for s in sigmas)):
                value = tuple(tensor.apply(list(vectors)))
                if not linalg.in_span(value, target):
                    bad.append((spec.name, sigmas))
                    break
    return bad


def check_grading(alg: StructureAlgebra, pres: OperadPresentation, grading: Grading) -> bool:
    """Whether every generator is multiplicative in group degree."""
    return not grading_violations(alg, pres, grading)


def grading_to_morphism(alg: StructureAlgebra, pres: OperadPresentation, grading: Grading) -> GroupMorphism:
    """The projections P_σ onto a_σ along the other components.

    Raises:
        InputError: If the grading is not a decomposition or not multiplicative.
    """
    if not check_grading(alg, pres, grading):
        raise InputError("The decomposition is not a grading of the algebra.")
    n = alg.dim
    labelled = grading.basis()
    change = linalg.columns([v for _, v in labelled], n)
    back = linalg.inverse(change) if n else ()
    projections = {}
    for sigma in grading.group.elements():
        keep = linalg.as_matrix(
            [[Fraction(int(r == c and labelled[r][0] == sigma)) for c in range(n)] for r in range(n)]
        )
        if n and not linalg.is_zero(keep):
            projections[sigma] = linalg.matmul(linalg.matmul(change, keep), back)
    if not n:
        projections[grading.group.identity] = ()
    return GroupMorphism(group=grading.group, projections=projections)


@dataclass
class GroupMorphismReport:
    """
    Outcome of verify_group_morphism.

    Attributes:
        sums_to_identity (bool): Σ_σ P_σ = I.
        orthogonal (list[tuple[tuple[int, ...], tuple[int, ...]]]): Pairs with P_σ P_τ ≠ δ_στ P_σ.
        algebra (list[tuple[Tag, tuple[int, ...]]]): jgens with a nonzero σ-coefficient in K[G].
    """

    sums_to_identity: bool = True
    orthogonal: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    algebra: list[tuple[Tag, tuple[int, ...]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.sums_to_identity and not self.orthogonal and not self.algebra


GroupAlgebraElement = dict[tuple[int, ...], Fraction]


def _group_product(group: AbelianGroup, x: GroupAlgebraElement, y: GroupAlgebraElement) -> GroupAlgebraElement:
    out: GroupAlgebraElement = {}
    for s, a in x.items():
        for t, b in y.items():
            key = group.add(s, t)
            out[key] = out.get(key, 0) + a * b
    return {k: v for k, v in out.items() if v}


def _evaluate_in_group_algebra(
    poly: Polynomial, images: dict[VariableId, GroupAlgebraElement], group: AbelianGroup
) -> GroupAlgebraElement:
    total: GroupAlgebraElement = {}
    for mono, c in poly.terms.items():
        value: GroupAlgebraElement = {group.identity: c}
        for v, e in mono:
            for _ in range(e):
                value = _group_product(group, value, images[v])
        for k, x in value.items():
            total[k] = total.get(k, 0) + x
    return {k: v for k, v in total.items() if v}


def verify_group_morphism(presentation: UniversalPresentation, m: GroupMorphism) -> GroupMorphismReport:
    """Check that Φ(x_si) = Σ_σ (P_σ)_si σ is a bialgebra map C(a) → K[G].

    Raises:
        RingModeError: For graded presentations.
        InputError: If the matrices do not match the presentation.
    """
    _require_plain(presentation)
    n = presentation.src_dim
    if not presentation.square or (m.projections and m.n != n):
        raise InputError(f"Projections of size {m.n} do not fit a {presentation.src_dim}x{presentation.tgt_dim} presentation.")
    report = GroupMorphismReport()
    elements = m.group.elements()
    total = linalg.zeros(n, n)
    for sigma in elements:
        total = linalg.add(total, m.projection(sigma))
    report.sums_to_identity = total == linalg.identity(n)
    for sigma in elements:
        for tau in elements:
            prod = linalg.matmul(m.projection(sigma), m.projection(tau))
            expected = m.projection(sigma) if sigma == tau else linalg.zeros(n, n)
            if prod != expected:
                report.orthogonal.append((sigma, tau))
    images: dict[VariableId, GroupAlgebraElement] = {}
    for s in range(1, n + 1):
        for i in range(1, n + 1):
            coeffs = {sigma: m.projection(sigma)[s - 1][i - 1] for sigma in elements}
            images[var(s, i)] = {sigma: x for sigma, x in coeffs.items() if x}
    for tagged in presentation.jgens:
        value = _evaluate_in_group_algebra(tagged.poly, images, m.group)
        for sigma in sorted(value):
            report.algebra.append((tagged.tag, sigma))
    return report


def morphism_to_grading(presentation: UniversalPresentation, m: GroupMorphism) -> Grading:
    """The components a_σ = image of P_σ.

    Raises:
        InputError: If m fails verify_group_morphism.
    """
    if not verify_group_morphism(presentation, m).passed:
        raise InputError("The matrices do not define a bialgebra map to the group algebra.")
    components = {}
    for sigma in m.group.elements():
        basis = linalg.column_space(m.projection(sigma))
        if basis:
            components[sigma] = basis
    return Grading(group=m.group, components=components)


def conjugate(presentation: UniversalPresentation, m: GroupMorphism, g: KPoint) -> GroupMorphism:
    """g⋆Φ⋆g⁻¹, that is P_σ ↦ U P_σ U⁻¹ with U the matrix of g.

    Raises:
        InputError: If g is not an invertible K-point of the presentation.
    """
    inv = invert_kpoint(presentation, g)
    if inv is None:
        raise InputError("Conjugation needs an invertible K-point.")
    projections = {
        sigma: linalg.matmul(linalg.matmul(g.matrix, p), inv.matrix) for sigma, p in m.projections.items()
    }
    return GroupMorphism(group=m.group, projections=projections)


@dataclass
class HomReport:
    """
    Outcome of hom_check.

    Attributes:
        kpoint (bool): c annihilates every generator of J for C(a, b).
        morphism (bool): The matrix c maps b to a respecting every operation.
    """

    kpoint: bool
    morphism: bool

    @property
    def agree(self) -> bool:
        return self.kpoint == self.morphism

    @property
    def passed(self) -> bool:
        return self.agree


def hom_check(
    presentation: UniversalPresentation,
    c: KPoint,
    alg_a: StructureAlgebra,
    alg_b: StructureAlgebra,
    pres: OperadPresentation,
) -> HomReport:
    """Compare the K-point test on C(a, b) with a direct morphism check of b → a."""
    return HomReport(kpoint=is_kpoint(presentation, c), morphism=check_morphism(c.matrix, alg_b, alg_a, pres))


@dataclass
class GradingIsoReport:
    """
    Outcome of gradings_isomorphic.

    Attributes:
        automorphism (bool): φ is an invertible morphism of the algebra.
        components (list[tuple[int, ...]]): Elements σ with φ(a_σ) ≠ a'_σ.
        conjugate (bool): Conjugating the first morphism by φ gives the second.
    """

    automorphism: bool
    components: list[tuple[int, ...]] = field(default_factory=list)
    conjugate: bool = False

    @property
    def passed(self) -> bool:
        return self.automorphism and not self.components and self.conjugate


def gradings_isomorphic(
    alg: StructureAlgebra,
    pres: OperadPresentation,
    presentation: UniversalPresentation,
    first: Grading,
    second: Grading,
    phi: KPoint,
) -> GradingIsoReport:
    """Whether φ is an isomorphism of G-gradings from first to second.

    Raises:
        InputError: If the gradings use different groups or are not gradings.
    """
    if first.group != second.group:
        raise InputError("Gradings over different groups cannot be isomorphic.")
    n = alg.dim
    inv = linalg.inverse(phi.matrix) if phi.shape == (n, n) else None
    report = GradingIsoReport(automorphism=inv is not None and check_morphism(phi.matrix, alg, alg, pres))
    if not report.automorphism:
        return report
    for sigma in first.group.elements():
        moved = [linalg.apply(phi.matrix, v) for v in first.component(sigma)]
        if not linalg.same_span(moved, second.component(sigma), n):
            report.components.append(sigma)
    m1 = grading_to_morphism(alg, pres, first)
    m2 = grading_to_morphism(alg, pres, second)
    conj = conjugate(presentation, m1, phi)
    report.conjugate = all(conj.projection(s) == m2.projection(s) for s in first.group.elements())
    return report


def grading_support(grading: Grading) -> list[tuple[int, ...]]:
    """Group elements with a nonzero component, in element order."""
    return [sigma for sigma in grading.group.elements() if any(any(v) for v in grading.component(sigma))]


def iter_basis_aligned(group: AbelianGroup, n: int) -> Iterator[Grading]:
    """Every grading that puts each standard basis vector into a single component."""
    elements = group.elements()
    for choice in product(elements, repeat=n):
        components: dict[tuple[int, ...], list[Vector]] = {}
        for i, sigma in enumerate(choice):
            unit = tuple(Fraction(int(r == i)) for r in range(n))
            components.setdefault(sigma, []).append(unit)
        yield Grading(group=group, components=components)
