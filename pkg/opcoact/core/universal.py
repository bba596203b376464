"""
This module, universal.py, generates the universal polynomials that present C(a, b) and C(a),
the coaction η, and machine checks of the two facts the construction rests on: η is a morphism
of algebras over the presentation, and generator-arity polynomials already generate every
composite one.

Classes:
    Tag: Where a universal polynomial comes from (generator, output index, inputs, ω).

    TaggedPolynomial: A universal polynomial with its tag.

    UniversalPresentation: The variable grid, the generators of J, and a cached Gröbner basis.

    EtaMap: The coaction b_i ↦ Σ a_s ⊗ x_si as a map from target index to components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple
import logging

from opcoact.core.groebner import Budget, GroebnerBasis, Ideal, buchberger, normal_form
from opcoact.core.operad import OperadElement, OperadPresentation, composite_basis, format_element
from opcoact.core.palgebra import (
    StructureAlgebra,
    StructureTensor,
    check_axioms,
    complete_with,
    eval_tree,
)
from opcoact.core.polyring import MonomialOrder, Polynomial, VariableId, var
from opcoact.utils.errors import AxiomError, InputError, RingModeError

log = logging.getLogger(__name__)


class Tag(NamedTuple):
    """
    Origin of a universal polynomial. Indices are 1-based and global.

    Attributes:
        gen (str): Generator name.
        a (int): Output row index.
        inputs (tuple[int, ...]): Input tuple over the target basis.
        omega (int): Cohomological degree ω; 0 for plain presentations.
        degenerate (bool): Graded polynomial with θ − ω < |μ|, whose quadratic part is empty.
    """

    gen: str
    a: int
    inputs: tuple[int, ...]
    omega: int = 0
    degenerate: bool = False


class TaggedPolynomial(NamedTuple):
    tag: Tag
    poly: Polynomial


@dataclass(kw_only=True)
class UniversalPresentation:
    """
    Generators of the ideal J of C(a, b) = K[X_si]/J.

    Attributes:
        src_dim (int): n, the number of rows s.
        tgt_dim (int): m, the number of columns i.
        jgens (list[TaggedPolynomial]): Nonzero universal polynomials in canonical order.
        order (MonomialOrder): Monomial order for Gröbner work.
        graded (bool): Graded-commutative ring K[X^(π)_si].
        degrees (tuple[int, ...] | None): Degree of every basis index, graded only.
        operad (str): Name of the presentation used.
        dropped (int): Zero polynomials left out.
        duplicates (int): Polynomials equal to one already emitted.
    """

    src_dim: int
    tgt_dim: int
    jgens: list[TaggedPolynomial] = field(default_factory=list)
    order: MonomialOrder = MonomialOrder.DEGREVLEX
    graded: bool = False
    degrees: tuple[int, ...] | None = None
    operad: str = ""
    dropped: int = 0
    duplicates: int = 0
    _gb: GroebnerBasis | None = field(default=None, init=False, repr=False)

    @property
    def polynomials(self) -> list[Polynomial]:
        return [t.poly for t in self.jgens]

    @property
    def square(self) -> bool:
        return self.src_dim == self.tgt_dim

    def variables(self) -> list[VariableId]:
        """Every distinct indeterminate of the grid, in first-use order.

        Graded grids share X^(π)_si between degree blocks: s and i are positions inside their
        components, so X^(0)_11 serves both the degree 0 and the degree 1 diagonal.
        """
        found = (self.grid_variable(s, i) for s in range(1, self.src_dim + 1) for i in range(1, self.tgt_dim + 1))
        return list(dict.fromkeys(v for v in found if v is not None))

    def local_index(self, index: int) -> int:
        """1-based position of a 1-based global basis index inside its degree component."""
        if not self.graded or self.degrees is None:
            return index
        p = self.degrees[index - 1]
        return sum(1 for d in self.degrees[:index] if d == p)

    def grid_variable(self, s: int, i: int) -> VariableId | None:
        """The indeterminate x_si of η for 1-based global indices, or None below the diagonal of a graded grid."""
        pi = self.cdeg(s, i)
        if pi is None:
            return None
        return var(self.local_index(s), self.local_index(i), cdeg=pi)

    def cdeg(self, s: int, i: int) -> int | None:
        """Cohomological degree of X_si, or None when the graded grid has no such variable."""
        if not self.graded or self.degrees is None:
            return 0
        pi = self.degrees[i - 1] - self.degrees[s - 1]
        return pi if pi >= 0 else None

    def groebner_basis(self, budget: Budget | None = None) -> GroebnerBasis:
        """The reduced Gröbner basis of J, computed once.

        Raises:
            RingModeError: For graded presentations.
            BudgetExceeded: If the computation hits a cap.
        """
        if self.graded:
            raise RingModeError("Gröbner bases are only available for plain presentations.")
        if self._gb is None:
            self._gb = buchberger(Ideal(generators=self.polynomials, order=self.order), budget)
            log.info("Gröbner basis of J has %d elements", len(self._gb.basis))
        return self._gb


def _linear(vec: dict[int, Fraction], a: int) -> Polynomial:
    """Σ_u vec[u] X_(a+1)(u+1)."""
    return Polynomial({((var(a + 1, u + 1), 1),): c for u, c in vec.items()})


def _finish(
    candidates: list[TaggedPolynomial], presentation: UniversalPresentation, pres: OperadPresentation
) -> UniversalPresentation:
    rank = {spec.name: g for g, spec in enumerate(pres.gens.specs)}
    seen: set[Polynomial] = set()
    # canonical order: generator position, then a, inputs and ω
    for tagged in sorted(candidates, key=lambda t: (rank[t.tag.gen], *t.tag[1:4])):
        if not tagged.poly:
            presentation.dropped += 1
            continue
        if tagged.poly in seen:
            presentation.duplicates += 1
            continue
        seen.add(tagged.poly)
        presentation.jgens.append(tagged)
    log.info(
        "Emitted %d universal polynomials (%d zero dropped, %d duplicates, %d degenerate)",
        len(presentation.jgens),
        presentation.dropped,
        presentation.duplicates,
        sum(t.tag.degenerate for t in presentation.jgens),
    )
    return presentation


def _require_axioms(alg: StructureAlgebra, pres: OperadPresentation) -> StructureAlgebra:
    report = check_axioms(alg, pres)
    if not report.passed:
        raise AxiomError(f"{alg.name} is not an algebra over {pres.name}.", report)
    return complete_with(alg, pres)


def universal_polynomials(
    alg_a: StructureAlgebra,
    alg_b: StructureAlgebra,
    pres: OperadPresentation,
    order: MonomialOrder = MonomialOrder.DEGREVLEX,
) -> UniversalPresentation:
    """The generators of J for C(a, b), one family per generator, output index and input tuple.

    P = Σ_u β^u_{μ,i} X_au − Σ_s α^a_{μ,s} X_{s1 i1}⋯X_{sk ik}, with β the constants of b and α those of a.

    Raises:
        AxiomError: If either algebra fails check_axioms.
        RingModeError: If the algebras are graded and not the same algebra.

    Returns:
        UniversalPresentation: Zero polynomials dropped, duplicates kept once.
    """
    if alg_a.graded or alg_b.graded:
        if alg_a is alg_b:
            return graded_universal_polynomials(alg_a, pres, order)
        raise RingModeError("Graded algebras only have the presentation of C(a); use graded_universal_polynomials.")
    full_a = _require_axioms(alg_a, pres)
    full_b = full_a if alg_b is alg_a else _require_axioms(alg_b, pres)
    n, m = full_a.dim, full_b.dim
    candidates: list[TaggedPolynomial] = []
    for spec in pres.gens.specs:
        alpha, beta = full_a.tensors[spec.name], full_b.tensors[spec.name]
        for inputs in product(range(m), repeat=spec.arity):
            linear_part = beta.get(inputs)
            for a in range(n):
                poly = _linear(linear_part, a)
                for outs, vec in alpha.entries.items():
                    c = vec.get(a)
                    if c:
                        factors = [var(s + 1, i + 1) for s, i in zip(outs, inputs)]
                        poly = poly - Polynomial.product(c, factors)
                tag = Tag(spec.name, a + 1, tuple(i + 1 for i in inputs))
                candidates.append(TaggedPolynomial(tag, poly))
    presentation = UniversalPresentation(src_dim=n, tgt_dim=m, order=order, operad=pres.name)
    return _finish(candidates, presentation, pres)


def koszul_exponent(p: tuple[int, ...], eps: tuple[int, ...]) -> int:
    """ϱ = Σ_{j<l} ε_l (p_j − ε_j)."""
    return sum(eps[l] * (p[j] - eps[j]) for j in range(len(p)) for l in range(j + 1, len(p)))


def graded_universal_polynomials(
    alg: StructureAlgebra, pres: OperadPresentation, order: MonomialOrder = MonomialOrder.DEGREVLEX
) -> UniversalPresentation:
    """The graded universal polynomials of C(A), homogeneous of cohomological degree ω.

    For a generator μ, an input tuple i of degrees p, θ = Σp + |μ|, 0 ≤ ω ≤ θ and a of degree θ − ω:
    P = Σ_u α^u_{μ,i} X^(ω)_au − Σ_s (−1)^ϱ α^a_{μ,s} X^(p1−ε1)_{s1 i1}⋯X^(pk−εk)_{sk ik},
    where s runs over tuples with deg s_j = ε_j ≤ p_j.
    Row and column indices of X^(π) count inside the degree components, as grid_variable gives them.

    Raises:
        AxiomError: If the algebra fails check_axioms.
        InputError: If the algebra is not graded or its degrees are not additive.

    Returns:
        UniversalPresentation: Graded, with polynomials of θ − ω < |μ| flagged degenerate.
    """
    if not alg.graded:
        raise InputError(f"Algebra {alg.name} is not graded.")
    full = _require_axioms(alg, pres)
    n = full.dim
    degrees = full.degrees or ()
    presentation = UniversalPresentation(
        src_dim=n, tgt_dim=n, order=order, graded=True, degrees=tuple(degrees), operad=pres.name
    )
    x = presentation.grid_variable
    candidates: list[TaggedPolynomial] = []
    for spec in pres.gens.specs:
        alpha = full.tensors[spec.name]
        for inputs in product(range(n), repeat=spec.arity):
            p = tuple(degrees[i] for i in inputs)
            theta = sum(p) + spec.cdeg
            linear_part = alpha.get(inputs)
            for omega in range(theta + 1):
                for a in full.component(theta - omega):
                    poly = Polynomial(
                        {((x(a + 1, u + 1), 1),): c for u, c in linear_part.items()},
                        graded=True,
                    )
                    for outs, vec in alpha.entries.items():
                        c = vec.get(a)
                        eps = tuple(degrees[s] for s in outs)
                        if not c or any(e > q for e, q in zip(eps, p)):
                            continue
                        sign = -1 if koszul_exponent(p, eps) % 2 else 1
                        factors = [x(s + 1, i + 1) for s, i in zip(outs, inputs)]
                        poly = poly - Polynomial.product(sign * c, factors, graded=True)
                    tag = Tag(
                        spec.name, a + 1, tuple(i + 1 for i in inputs), omega, degenerate=theta - omega < spec.cdeg
                    )
                    candidates.append(TaggedPolynomial(tag, poly))
    return _finish(candidates, presentation, pres)


@dataclass
class EtaMap:
    """
    The coaction η(b_i) = Σ_s a_s ⊗ x_si.

    Attributes:
        entries (dict[int, dict[int, Polynomial]]): For each 1-based target index i, the
            coefficient polynomial of every source basis vector a_s.
    """

    entries: dict[int, dict[int, Polynomial]]
    graded: bool = False


def eta(presentation: UniversalPresentation) -> EtaMap:
    """The literal coaction formula, one entry per target basis index."""
    entries: dict[int, dict[int, Polynomial]] = {}
    for i in range(1, presentation.tgt_dim + 1):
        row: dict[int, Polynomial] = {}
        for s in range(1, presentation.src_dim + 1):
            v = presentation.grid_variable(s, i)
            if v is not None:
                row[s] = Polynomial.variable(v, graded=presentation.graded)
        entries[i] = row
    return EtaMap(entries=entries, graded=presentation.graded)


@dataclass
class EtaReport:
    """
    Outcome of verify_eta_morphism.

    Attributes:
        failures (list[tuple[str, tuple[int, ...], int, Polynomial]]): Generator, 1-based inputs,
            component r and the residue that did not vanish.
        checked (int): Number of component identities examined.
    """

    failures: list[tuple[str, tuple[int, ...], int, Polynomial]] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


def _apply_generator(
    tensor: StructureTensor, eta_map: EtaMap, inputs: tuple[int, ...], degrees: tuple[int, ...] | None
) -> dict[int, Polynomial]:
    """γ̄(μ)(η(b_i1), …, η(b_ik)) in a ⊗ C, component by component.

    Moving x^(π_j) past a later a_(s_l) of degree ε_l costs (−1)^(π_j ε_l).
    """
    graded = eta_map.graded
    out: dict[int, Polynomial] = {}
    columns = [eta_map.entries[i + 1] for i in inputs]
    for outs, vec in tensor.entries.items():
        if any(s + 1 not in col for s, col in zip(outs, columns)):
            continue
        sign = 1
        if graded and degrees is not None:
            pis = [degrees[i] - degrees[s] for s, i in zip(outs, inputs)]
            for j in range(len(outs)):
                for l in range(j + 1, len(outs)):
                    if pis[j] * degrees[outs[l]] % 2:
                        sign = -sign
        term = Polynomial.constant(sign, graded=graded)
        for s, col in zip(outs, columns):
            term = term * col[s + 1]
        for r, c in vec.items():
            out[r + 1] = out.get(r + 1, Polynomial(graded=graded)) + term * c
    return out


def verify_eta_morphism(
    alg_a: StructureAlgebra,
    alg_b: StructureAlgebra,
    pres: OperadPresentation,
    presentation: UniversalPresentation,
    budget: Budget | None = None,
) -> EtaReport:
    """Check η(γ_b(μ)(b_i…)) = γ̄_a(μ)(η(b_i)…) in a ⊗ C(a, b) for every generator and input tuple.

    Plain presentations compare modulo J through Gröbner normal forms; graded ones require each
    component difference to vanish or to be one of the generators of J.

    Raises:
        InputError: If the presentation does not match the algebras.
    """
    if (presentation.src_dim, presentation.tgt_dim) != (alg_a.dim, alg_b.dim):
        raise InputError(
            f"Presentation is {presentation.src_dim}x{presentation.tgt_dim}, algebras have dimensions {alg_a.dim} and {alg_b.dim}."
        )
    if presentation.graded != alg_a.graded:
        raise InputError("Presentation and algebra disagree on grading.")
    full_a, full_b = complete_with(alg_a, pres), complete_with(alg_b, pres)
    eta_map = eta(presentation)
    graded = presentation.graded
    members = set(presentation.polynomials)
    gb = None if graded else presentation.groebner_basis(budget)
    report = EtaReport()
    for spec in pres.gens.specs:
        alpha, beta = full_a.tensors[spec.name], full_b.tensors[spec.name]
        for inputs in product(range(full_b.dim), repeat=spec.arity):
            left: dict[int, Polynomial] = {}
            for u, c in beta.get(inputs).items():
                for r, x in eta_map.entries[u + 1].items():
                    left[r] = left.get(r, Polynomial(graded=graded)) + x * c
            right = _apply_generator(alpha, eta_map, inputs, full_a.degrees)
            for r in range(1, full_a.dim + 1):
                diff = left.get(r, Polynomial(graded=graded)) - right.get(r, Polynomial(graded=graded))
                report.checked += 1
                if graded:
                    ok = not diff or diff in members
                else:
                    ok = not normal_form(diff, gb, budget)
                if not ok:
                    report.failures.append((spec.name, tuple(i + 1 for i in inputs), r, diff))
    log.info("Checked %d components of η, %d failures", report.checked, len(report.failures))
    return report


def composite_polynomials(alg: StructureAlgebra, pres: OperadPresentation, elem: OperadElement) -> list[Polynomial]:
    """Universal polynomials of a composite operation, built from its evaluated constants.

    Zero polynomials are left out; the rest come in (output index, input tuple) order.
    """
    full = complete_with(alg, pres)
    tensor = eval_tree(full, elem)
    out: list[Polynomial] = []
    for inputs in product(range(full.dim), repeat=elem.arity):
        linear_part = tensor.get(inputs)
        for a in range(full.dim):
            poly = _linear(linear_part, a)
            for outs, vec in tensor.entries.items():
                c = vec.get(a)
                if c:
                    poly = poly - Polynomial.product(c, [var(s + 1, i + 1) for s, i in zip(outs, inputs)])
            if poly:
                out.append(poly)
    return out


@dataclass
class GenerationReport:
    """
    Outcome of verify_generation.

    Attributes:
        max_arity (int): Largest arity examined.
        composites (int): Composite tree monomials examined.
        polynomials (int): Composite universal polynomials reduced.
        non_members (list[tuple[str, Polynomial]]): Composite and a polynomial outside J.
    """

    max_arity: int
    composites: int = 0
    polynomials: int = 0
    non_members: list[tuple[str, Polynomial]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.non_members


def verify_generation(
    alg: StructureAlgebra,
    pres: OperadPresentation,
    presentation: UniversalPresentation,
    max_arity: int,
    *,
    max_nodes: int = 3,
    budget: Budget | None = None,
) -> GenerationReport:
    """Certify that the generator-arity polynomials generate the composite ones up to max_arity.

    Raises:
        RingModeError: For graded presentations.
        InputError: If max_arity is below the largest generator arity.
        BudgetExceeded: If the Gröbner computation hits a cap.
    """
    if presentation.graded:
        raise RingModeError("Generation is certified for plain presentations only.")
    top = max((s.arity for s in pres.gens.specs), default=1)
    if max_arity < top:
        raise InputError(f"max_arity {max_arity} is below the generator arity {top}.")
    gb = presentation.groebner_basis(budget)
    report = GenerationReport(max_arity=max_arity)
    for arity in range(1, max_arity + 1):
        for elem in composite_basis(pres.gens, arity, max_nodes=max_nodes, bound=max_arity):
            if elem.max_nodes() < 2:
                continue
            report.composites += 1
            for poly in composite_polynomials(alg, pres, elem):
                report.polynomials += 1
                if normal_form(poly, gb, budget):
                    report.non_members.append((format_element(elem), poly))
    log.info(
        "Reduced %d polynomials of %d composites, %d outside J",
        report.polynomials,
        report.composites,
        len(report.non_members),
    )
    return report
