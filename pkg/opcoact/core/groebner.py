"""
This module, groebner.py, computes reduced Gröbner bases with Buchberger's algorithm and decides
ideal membership by complete multivariate division.

Only the plain commutative ring is supported. Pair selection follows the normal strategy
(smallest lcm degree first, ties broken by the lex order on the lcm, then by pair indices) and
division always uses the basis element with the smallest leading monomial, so every result is
reproducible. The Buchberger coprime and chain criteria skip useless pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence
import logging

from opcoact.core.polyring import (
    ONE,
    Monomial,
    MonomialOrder,
    Polynomial,
    monomial_degree,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
    monomial_quotient,
    monomials_coprime,
)
from opcoact.utils.errors import BudgetExceeded, RingModeError

log = logging.getLogger(__name__)


@dataclass(kw_only=True)
class Budget:
    """
    Resource caps for a Gröbner computation.

    Attributes:
        max_basis_size (int): Largest basis allowed while completing.
        max_reduction_steps (int): Total single-term reduction steps allowed.
        steps (int): Steps consumed so far.
    """

    max_basis_size: int = 2000
    max_reduction_steps: int = 500000
    steps: int = 0

    @classmethod
    def from_config(cls, config: dict[str, Any]) -> Budget:
        caps = config.get("budget", {})
        return cls(
            max_basis_size=int(caps.get("max_basis_size", 2000)),
            max_reduction_steps=int(caps.get("max_reduction_steps", 500000)),
        )

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.max_reduction_steps:
            raise BudgetExceeded(f"Reduction step cap of {self.max_reduction_steps} exceeded.")

    def check_size(self, size: int) -> None:
        if size > self.max_basis_size:
            raise BudgetExceeded(f"Basis size cap of {self.max_basis_size} exceeded.")


@dataclass(kw_only=True)
class Ideal:
    """
    An ideal of the plain polynomial ring given by generators.

    Attributes:
        generators (list[Polynomial]): Nonzero plain generators.
        order (MonomialOrder): Monomial order used for Gröbner computations.
    """

    generators: list[Polynomial]
    order: MonomialOrder = MonomialOrder.DEGREVLEX

    def __post_init__(self) -> None:
        for g in self.generators:
            if g.graded:
                raise RingModeError("Gröbner computations need plain polynomials.")
        self.generators = [g for g in self.generators if g]


@dataclass(kw_only=True)
class GroebnerBasis:
    """
    A Gröbner basis, sorted by increasing leading monomial.

    Attributes:
        basis (list[Polynomial]): Basis elements.
        order (MonomialOrder): The monomial order.
        reduced (bool): Monic and inter-reduced.
    """

    basis: list[Polynomial]
    order: MonomialOrder = MonomialOrder.DEGREVLEX
    reduced: bool = True
    _leads: list[Monomial] = field(default_factory=list, init=False, repr=False)

    def __post_init__(self) -> None:
        self._leads = [g.leading(self.order)[0] for g in self.basis]

    @property
    def leading_monomials(self) -> list[Monomial]:
        return list(self._leads)

    def rename_block(self, block: int) -> GroebnerBasis:
        return GroebnerBasis(basis=[g.rename_block(block) for g in self.basis], order=self.order, reduced=self.reduced)

    def union(self, other: GroebnerBasis) -> GroebnerBasis:
        """Join two bases whose variables are disjoint; the result is again a Gröbner basis."""
        merged = sorted(self.basis + other.basis, key=lambda g: self.order.key(g.leading(self.order)[0]))
        return GroebnerBasis(basis=merged, order=self.order, reduced=self.reduced and other.reduced)


def _term_times(p: Polynomial, mono: Monomial, coeff: Fraction) -> dict[Monomial, Fraction]:
    out: dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        _, prod = monomial_mul(m, mono, False)
        out[prod] = c * coeff
    return out


def _reduce(
    p: Polynomial,
    basis: Sequence[Polynomial],
    leads: Sequence[Monomial],
    order: MonomialOrder,
    budget: Budget,
) -> Polynomial:
    """Complete division of p by the basis; divisors are tried in the given sequence order."""
    work = dict(p.terms)
    remainder: dict[Monomial, Fraction] = {}
    while work:
        lm = max(work, key=order.key)
        lc = work[lm]
        for g, glm in zip(basis, leads):
            if monomial_divides(glm, lm):
                budget.tick()
                factor = lc / g.terms[glm]
                for m, c in _term_times(g, monomial_quotient(lm, glm), factor).items():
                    s = work.get(m, 0) - c
                    if s:
                        work[m] = s
                    else:
                        work.pop(m, None)
                break
        else:
            remainder[lm] = lc
            del work[lm]
    out = Polynomial()
    out.terms = remainder
    return out


def _division_order(basis: Sequence[Polynomial], order: MonomialOrder) -> tuple[list[Polynomial], list[Monomial]]:
    leads = [g.leading(order)[0] for g in basis]
    idx = sorted(range(len(basis)), key=lambda k: (order.key(leads[k]), k))
    return [basis[k] for k in idx], [leads[k] for k in idx]


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    fm, fc = f.leading(order)
    gm, gc = g.leading(order)
    lcm = monomial_lcm(fm, gm)
    left = Polynomial(_term_times(f, monomial_quotient(lcm, fm), 1 / fc))
    right = Polynomial(_term_times(g, monomial_quotient(lcm, gm), 1 / gc))
    return left - right


def buchberger(ideal: Ideal, budget: Budget | None = None) -> GroebnerBasis:
    """Compute the reduced Gröbner basis of an ideal.

    Args:
        ideal (Ideal): The ideal.
        budget (Budget | None, optional): Resource caps. Defaults to the standard caps.

    Raises:
        BudgetExceeded: If a cap is hit.

    Returns:
        GroebnerBasis: The reduced basis, sorted by increasing leading monomial.
    """
    budget = budget or Budget()
    order = ideal.order
    basis: list[Polynomial] = []
    leads: list[Monomial] = []
    # seed with inter-reduced generators, in a deterministic order
    seeds = sorted(
        (g.monic(order) for g in ideal.generators),
        key=lambda g: (order.key(g.leading(order)[0]), _sort_signature(g, order)),
    )
    for g in seeds:
        div_basis, div_leads = _division_order(basis, order)
        r = _reduce(g, div_basis, div_leads, order, budget)
        if r:
            basis.append(r.monic(order))
            leads.append(basis[-1].leading(order)[0])
    if any(m == ONE for m in leads):
        return GroebnerBasis(basis=[Polynomial.constant(1)], order=order)

    pairs: set[tuple[int, int]] = {(i, j) for j in range(len(basis)) for i in range(j)}
    while pairs:
        i, j = min(pairs, key=lambda ij: _pair_key(ij, leads, order))
        pairs.discard((i, j))
        if monomials_coprime(leads[i], leads[j]):
            continue
        if _chain_criterion(i, j, leads, pairs):
            continue
        div_basis, div_leads = _division_order(basis, order)
        r = _reduce(s_polynomial(basis[i], basis[j], order), div_basis, div_leads, order, budget)
        if not r:
            continue
        r = r.monic(order)
        basis.append(r)
        leads.append(r.leading(order)[0])
        budget.check_size(len(basis))
        log.debug("Basis grew to %d elements (lead degree %d)", len(basis), monomial_degree(leads[-1]))
        if leads[-1] == ONE:
            return GroebnerBasis(basis=[Polynomial.constant(1)], order=order)
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))
    return GroebnerBasis(basis=_interreduce(basis, order, budget), order=order)


def _sort_signature(p: Polynomial, order: MonomialOrder) -> tuple:
    return tuple((order.key(m), c) for m, c in p.sorted_terms(order))


def _pair_key(ij: tuple[int, int], leads: Sequence[Monomial], order: MonomialOrder) -> tuple:
    lcm = monomial_lcm(leads[ij[0]], leads[ij[1]])
    return (monomial_degree(lcm), tuple(MonomialOrder.LEX.key(lcm)), ij)


def _chain_criterion(i: int, j: int, leads: Sequence[Monomial], pending: set[tuple[int, int]]) -> bool:
    lcm = monomial_lcm(leads[i], leads[j])
    for k in range(len(leads)):
        if k in (i, j) or not monomial_divides(leads[k], lcm):
            continue
        if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
            return True
    return False


def _interreduce(basis: list[Polynomial], order: MonomialOrder, budget: Budget) -> list[Polynomial]:
    leads = [g.leading(order)[0] for g in basis]
    keep: list[int] = []
    for k, lm in enumerate(leads):
        dominated = any(
            monomial_divides(leads[o], lm) and (leads[o] != lm or o < k) for o in range(len(basis)) if o != k
        )
        if not dominated:
            keep.append(k)
    minimal = [basis[k] for k in keep]
    reduced: list[Polynomial] = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1 :]
        div_basis, div_leads = _division_order(others, order)
        lm, lc = g.leading(order)
        tail = Polynomial({m: c for m, c in g.terms.items() if m != lm})
        tail = _reduce(tail, div_basis, div_leads, order, budget)
        head = Polynomial({lm: lc})
        reduced.append((head + tail).monic(order))
    return sorted(reduced, key=lambda g: order.key(g.leading(order)[0]))


def normal_form(p: Polynomial, gb: GroebnerBasis, budget: Budget | None = None) -> Polynomial:
    """Remainder of p on complete division by a Gröbner basis.

    Raises:
        RingModeError: If p is graded.
    """
    if p.graded:
        raise RingModeError("Normal forms need plain polynomials.")
    return _reduce(p, gb.basis, gb.leading_monomials, gb.order, budget or Budget())


def ideal_contains(p: Polynomial, ideal: Ideal | GroebnerBasis, budget: Budget | None = None) -> bool:
    """Whether p lies in the ideal; a precomputed basis may be passed instead of the ideal."""
    gb = ideal if isinstance(ideal, GroebnerBasis) else buchberger(ideal, budget)
    return not normal_form(p, gb, budget)


def is_groebner(polys: Iterable[Polynomial], order: MonomialOrder, budget: Budget | None = None) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    budget = budget or Budget()
    basis = [g for g in polys if g]
    div_basis, div_leads = _division_order(basis, order)
    for j in range(len(basis)):
        for i in range(j):
            if _reduce(s_polynomial(basis[i], basis[j], order), div_basis, div_leads, order, budget):
                return False
    return True
