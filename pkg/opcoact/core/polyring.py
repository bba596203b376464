"""
This module, polyring.py, provides exact sparse multivariate polynomials over the rationals.

Two ring modes share one representation:

    plain: the ordinary commutative polynomial ring K[X_si].

    graded: the graded-commutative ring K[X^(π)_si]. Variables of odd cohomological degree π
    anticommute and square to zero; even variables are central.

Coefficients are fractions.Fraction. A monomial is a tuple of (VariableId, exponent) pairs sorted
by the variable order, so equal polynomials always have equal term maps.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Union

from opcoact.utils.errors import InputError, RingModeError

Scalar = Union[int, Fraction]


class VariableId(NamedTuple):
    """
    An indeterminate X^(π)_si of a given block.

    Field order gives the total order on variables: lexicographic on (block, π, s, i).

    Attributes:
        block (int): 0 for X, 1 and 2 (and 3) for the tensor-factor copies X', X'' (X''').
        cdeg (int): The cohomological degree π, 0 in the ungraded case.
        row (int): The 1-based row index s.
        col (int): The 1-based column index i.
    """

    block: int
    cdeg: int
    row: int
    col: int

    @property
    def odd(self) -> bool:
        return self.cdeg % 2 == 1


def var(row: int, col: int, *, block: int = 0, cdeg: int = 0) -> VariableId:
    """Build a VariableId from its user-facing coordinates."""
    return VariableId(block, cdeg, row, col)


Monomial = tuple[tuple[VariableId, int], ...]
ONE: Monomial = ()


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_cdeg(m: Monomial) -> int:
    """Cohomological degree of a monomial: the sum of π times the exponent."""
    return sum(v.cdeg * e for v, e in m)


def monomial_mul(m1: Monomial, m2: Monomial, graded: bool) -> tuple[int, Monomial]:
    """Multiply two canonical monomials.

    Args:
        m1 (Monomial): Left factor.
        m2 (Monomial): Right factor.
        graded (bool): Apply the graded-commutative sign rules.

    Returns:
        tuple[int, Monomial]: The sign (0 when an odd square appears) and the canonical product.
    """
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    sign = 1
    if graded:
        odd_left = [v for v, _ in m1 if v.odd]
        if odd_left:
            for v, _ in m2:
                if not v.odd:
                    continue
                # v moves left past every odd factor of m1 that sorts after it
                passed = 0
                for u in odd_left:
                    if u == v:
                        return 0, ONE
                    if u > v:
                        passed += 1
                if passed % 2:
                    sign = -sign
    exponents: dict[VariableId, int] = dict(m1)
    for v, e in m2:
        exponents[v] = exponents.get(v, 0) + e
    return sign, tuple(sorted(exponents.items()))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """Whether a divides b."""
    if len(a) > len(b):
        return False
    exps = dict(b)
    for v, e in a:
        if exps.get(v, 0) < e:
            return False
    return True


def monomial_quotient(b: Monomial, a: Monomial) -> Monomial:
    """b / a for a dividing b (plain mode)."""
    exps = dict(b)
    for v, e in a:
        left = exps[v] - e
        if left:
            exps[v] = left
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for v, e in b:
        if exps.get(v, 0) < e:
            exps[v] = e
    return tuple(sorted(exps.items()))


def monomials_coprime(a: Monomial, b: Monomial) -> bool:
    left = {v for v, _ in a}
    return not any(v in left for v, _ in b)


class MonomialOrder(str, Enum):
    """Admissible monomial orders. The smallest VariableId is the largest variable."""

    DEGREVLEX = "degrevlex"
    LEX = "lex"

    def key(self, m: Monomial) -> tuple:
        """Sort key: a larger key means a larger monomial."""
        return _order_key(self.value, m)


@lru_cache(maxsize=1 << 16)
def _order_key(kind: str, m: Monomial) -> tuple:
    if kind == "lex":
        return tuple((-v.block, -v.cdeg, -v.row, -v.col, e) for v, e in m)
    # degrevlex: at equal degree the monomial with the smaller exponent in the last differing variable wins
    return (
        monomial_degree(m),
        tuple((-v.block, -v.cdeg, -v.row, -v.col, -e) for v, e in reversed(m)),
    )


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise InputError(f"Coefficient {c!r} is not an exact rational.")


class Polynomial:
    """A sparse polynomial over Q in plain or graded mode.

    Attributes:
        terms (dict[Monomial, Fraction]): Nonzero coefficients keyed by canonical monomials.
        graded (bool): Ring mode.
    """

    __slots__ = ("terms", "graded")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None, *, graded: bool = False) -> None:
        self.graded = graded
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                # odd squares vanish
                if c and not (graded and any(v.odd and e > 1 for v, e in m)):
                    self.terms[m] = _as_fraction(c)

    @classmethod
    def constant(cls, c: Scalar, *, graded: bool = False) -> Polynomial:
        return cls({ONE: c}, graded=graded)

    @classmethod
    def variable(cls, v: VariableId, *, graded: bool = False) -> Polynomial:
        return cls({((v, 1),): 1}, graded=graded)

    @classmethod
    def product(cls, coeff: Scalar, factors: Iterable[VariableId], *, graded: bool = False) -> Polynomial:
        """coeff times the factors multiplied in the written order (signs apply in graded mode)."""
        sign, mono = 1, ONE
        for v in factors:
            s, mono = monomial_mul(mono, ((v, 1),), graded)
            sign *= s
            if not sign:
                return cls(graded=graded)
        return cls({mono: sign * _as_fraction(coeff)}, graded=graded)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.graded == other.graded and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.graded, frozenset(self.terms.items())))

    def _check_mode(self, other: Polynomial) -> None:
        if self.graded != other.graded:
            raise RingModeError("Cannot combine plain and graded polynomials.")

    def _coerce(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check_mode(other)
            return other
        return Polynomial.constant(other, graded=self.graded)

    def __add__(self, other: Polynomial | Scalar) -> Polynomial:
        return poly_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self.terms.items()}, graded=self.graded)

    def __sub__(self, other: Polynomial | Scalar) -> Polynomial:
        return poly_add(self, -self._coerce(other))

    def __rsub__(self, other: Scalar) -> Polynomial:
        return poly_add(-self, self._coerce(other))

    def __mul__(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: Scalar) -> Polynomial:
        return self.scale(other)

    def __pow__(self, exponent: int) -> Polynomial:
        result = Polynomial.constant(1, graded=self.graded)
        for _ in range(exponent):
            result = poly_mul(result, self)
        return result

    def scale(self, c: Scalar) -> Polynomial:
        c = _as_fraction(c)
        if not c:
            return Polynomial(graded=self.graded)
        return Polynomial({m: c * a for m, a in self.terms.items()}, graded=self.graded)

    def total_degree(self) -> int:
        return max((monomial_degree(m) for m in self.terms), default=0)

    def variables(self) -> set[VariableId]:
        return {v for m in self.terms for v, _ in m}

    def cdegrees(self) -> set[int]:
        """The cohomological degrees of the monomials present."""
        return {monomial_cdeg(m) for m in self.terms}

    def is_homogeneous(self, omega: int) -> bool:
        return all(monomial_cdeg(m) == omega for m in self.terms)

    def leading(self, order: MonomialOrder) -> tuple[Monomial, Fraction]:
        """Leading monomial and coefficient.

        Raises:
            ValueError: If the polynomial is zero.
        """
        if not self.terms:
            raise ValueError("The zero polynomial has no leading term.")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def sorted_terms(self, order: MonomialOrder) -> list[tuple[Monomial, Fraction]]:
        """Terms from the largest monomial down."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monic(self, order: MonomialOrder) -> Polynomial:
        _, lc = self.leading(order)
        return self.scale(1 / lc)

    def rename_block(self, block: int) -> Polynomial:
        """Move every variable to the given block, keeping rows, columns and degrees."""
        return Polynomial(
            {tuple((v._replace(block=block), e) for v, e in m): c for m, c in self.terms.items()},
            graded=self.graded,
        )

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    """Termwise sum with zero pruning.

    Raises:
        RingModeError: If the ring modes differ.
    """
    p._check_mode(q)
    terms = dict(p.terms)
    for m, c in q.terms.items():
        s = terms.get(m, 0) + c
        if s:
            terms[m] = s
        else:
            terms.pop(m, None)
    out = Polynomial(graded=p.graded)
    out.terms = terms
    return out


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Distributive product, with Koszul signs and vanishing odd squares in graded mode.

    Raises:
        RingModeError: If the ring modes differ.
    """
    p._check_mode(q)
    terms: dict[Monomial, Fraction] = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            sign, m = monomial_mul(m1, m2, p.graded)
            if not sign:
                continue
            s = terms.get(m, 0) + sign * c1 * c2
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
    out = Polynomial(graded=p.graded)
    out.terms = terms
    return out


def poly_eval(p: Polynomial, assignment: Mapping[VariableId, Scalar]) -> Fraction:
    """Evaluate a plain polynomial at a rational point.

    Raises:
        RingModeError: If p is graded.
        InputError: If a variable of p has no value.
    """
    if p.graded:
        raise RingModeError("Graded polynomials cannot be evaluated at rational points.")
    total = Fraction(0)
    for m, c in p.terms.items():
        value = c
        for v, e in m:
            if v not in assignment:
                raise InputError(f"No value assigned to {format_variable(v)}.")
            value *= _as_fraction(assignment[v]) ** e
            if not value:
                break
        total += value
    return total


def poly_substitute(
    p: Polynomial, images: Mapping[VariableId, Polynomial], *, graded: bool | None = None
) -> Polynomial:
    """Apply the ring morphism sending each variable to its image.

    Args:
        p (Polynomial): Source polynomial.
        images (Mapping[VariableId, Polynomial]): Image of every variable occurring in p.
        graded (bool | None, optional): Target ring mode; taken from the images when omitted.

    Raises:
        InputError: If a variable of p has no image.
        RingModeError: If the images disagree on the ring mode.

    Returns:
        Polynomial: The substituted polynomial.
    """
    if graded is None:
        modes = {img.graded for img in images.values()}
        if len(modes) > 1:
            raise RingModeError("Substitution images mix plain and graded polynomials.")
        graded = modes.pop() if modes else p.graded
    result = Polynomial(graded=graded)
    powers: dict[tuple[VariableId, int], Polynomial] = {}
    for m, c in p.terms.items():
        term = Polynomial.constant(c, graded=graded)
        for v, e in m:
            if v not in images:
                raise InputError(f"No image given for {format_variable(v)}.")
            key = (v, e)
            if key not in powers:
                powers[key] = images[v] ** e
            term = poly_mul(term, powers[key])
            if not term:
                break
        result = poly_add(result, term)
    return result


def format_variable(v: VariableId, graded: bool = False) -> str:
    primes = "'" * v.block
    degree = f"({v.cdeg})" if graded or v.cdeg else ""
    return f"X{primes}{degree}[{v.row}][{v.col}]"


def format_polynomial(p: Polynomial, order: MonomialOrder = MonomialOrder.DEGREVLEX) -> str:
    """Render as text, e.g. ``X[1][1] - X[1][1]*X[2][2] + X[1][2]*X[2][1]``."""
    if not p.terms:
        return "0"
    pieces: list[str] = []
    for m, c in p.sorted_terms(order):
        factors = []
        for v, e in m:
            name = format_variable(v, p.graded)
            factors.append(name if e == 1 else f"{name}^{e}")
        magnitude = abs(c)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = f"{magnitude}*" + "*".join(factors)
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)
