"""Exact arithmetic layer: rationals and sparse multivariate polynomials.

Coefficients are arbitrary-precision rationals (``fractions.Fraction``), so
every computation in the package is bit-exact; there is no floating-point
code path anywhere. A monomial is an exponent tuple whose length equals the
ambient dimension, ordered graded-lexicographically wherever a canonical
order is observable (rendering, division).
"""

from __future__ import annotations

import itertools
import operator
import random
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionMismatch, NotDivisible

# Scalars of the coefficient field. Fraction already maintains the needed
# invariants: lowest terms, positive denominator, zero stored as 0/1.
Rational = Fraction

# Internal coefficient type: gmpy2 rationals when available (identical
# exact semantics and text form, several times faster), else Fraction.
try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _Q = Fraction

# Types accepted wherever a scalar can stand in for a constant polynomial.
SCALAR_TYPES = (int, Fraction) if _Q is Fraction else (int, Fraction, type(_Q(0)))
_SCALARS = SCALAR_TYPES

# Exponent tuple, length == ambient dimension.
Monomial = tuple[int, ...]

Scalar = int | Fraction


def grlex_key(monomial: Monomial) -> tuple[int, Monomial]:
    """Sort key realizing the graded lexicographic order (degree, then lex)."""
    return (sum(monomial), monomial)


def monomials_up_to_degree(dim: int, max_degree: int) -> list[Monomial]:
    """All exponent tuples with total degree <= max_degree, graded-lex ascending."""
    if dim == 0:
        return [()]
    out = [
        exps
        for exps in itertools.product(range(max_degree + 1), repeat=dim)
        if sum(exps) <= max_degree
    ]
    out.sort(key=grlex_key)
    return out


class Polynomial:
    """Sparse multivariate polynomial over the rationals.

    Instances are immutable by convention: all arithmetic returns new
    objects and nothing mutates ``terms`` after construction. Zero
    coefficients are never stored, so structural equality is semantic
    equality.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Monomial, Scalar] | None = None):
        if dim < 1:
            raise ValueError(f"ambient dimension must be >= 1, got {dim}")
        clean: dict[Monomial, object] = {}
        for monomial, coeff in (terms or {}).items():
            monomial = tuple(monomial)
            if len(monomial) != dim:
                raise DimensionMismatch(
                    f"monomial {monomial} has {len(monomial)} exponents, expected {dim}"
                )
            if any(e < 0 for e in monomial):
                raise ValueError(f"negative exponent in monomial {monomial}")
            coeff = _Q(coeff)
            if coeff:
                clean[monomial] = coeff
        self.dim = dim
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim)

    @classmethod
    def one(cls, dim: int) -> "Polynomial":
        return cls.constant(dim, 1)

    @classmethod
    def constant(cls, dim: int, value: Scalar) -> "Polynomial":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def coordinate(cls, dim: int, index: int) -> "Polynomial":
        """The coordinate function x_index (0-based index)."""
        if not 0 <= index < dim:
            raise IndexError(f"coordinate index {index} out of range for dimension {dim}")
        exps = [0] * dim
        exps[index] = 1
        return cls(dim, {tuple(exps): 1})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self) -> Rational:
        """The coefficient of the constant monomial (0 if absent)."""
        return Fraction(self.terms.get((0,) * self.dim, 0))

    def total_degree(self) -> int:
        """Largest total degree among stored terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, Rational]]:
        """Terms in descending graded-lex order (the canonical iteration order)."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            if other.dim != self.dim:
                raise DimensionMismatch(
                    f"cannot combine polynomials of dimension {self.dim} and {other.dim}"
                )
            return other
        if isinstance(other, _SCALARS):
            return Polynomial.constant(self.dim, other)
        return None

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        merged = dict(self.terms)
        get = merged.get
        for monomial, coeff in other.terms.items():
            total = get(monomial)
            if total is None:
                merged[monomial] = coeff
                continue
            total = total + coeff
            if total:
                merged[monomial] = total
            else:
                del merged[monomial]
        out = Polynomial.__new__(Polynomial)
        out.dim = self.dim
        out.terms = merged
        return out

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        out = Polynomial.__new__(Polynomial)
        out.dim = self.dim
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        product: dict[Monomial, object] = {}
        get = product.get
        add = operator.add
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = tuple(map(add, m1, m2))
                total = get(key)
                if total is None:
                    product[key] = c1 * c2
                    continue
                total = total + c1 * c2
                if total:
                    product[key] = total
                else:
                    del product[key]
        out = Polynomial.__new__(Polynomial)
        out.dim = self.dim
        out.terms = product
        return out

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"polynomial exponent must be a non-negative integer, got {exponent}")
        result = Polynomial.one(self.dim)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def partial(self, index: int) -> "Polynomial":
        """Exact partial derivative in coordinate ``index`` (0-based)."""
        if not 0 <= index < self.dim:
            raise IndexError(f"coordinate index {index} out of range for dimension {self.dim}")
        terms: dict[Monomial, object] = {}
        for monomial, coeff in self.terms.items():
            e = monomial[index]
            if e == 0:
                continue
            lowered = monomial[:index] + (e - 1,) + monomial[index + 1 :]
            terms[lowered] = coeff * e
        out = Polynomial.__new__(Polynomial)
        out.dim = self.dim
        out.terms = terms
        return out

    # -- equality and rendering ------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, _SCALARS):
            other = Polynomial.constant(self.dim, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    __hash__ = None  # mutable container inside; equality is by value

    def render(self, names: Sequence[str]) -> str:
        """Canonical text form using the given coordinate names.

        Terms appear in descending graded-lex order with explicit ``*`` and
        ``^``; rational coefficients print as ``a/b``. The output re-parses
        to an equal polynomial.
        """
        if len(names) != self.dim:
            raise DimensionMismatch(
                f"{len(names)} coordinate names for dimension {self.dim}"
            )
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for monomial, coeff in self.sorted_terms():
            factors = []
            for name, exp in zip(names, monomial):
                if exp == 1:
                    factors.append(name)
                elif exp > 1:
                    factors.append(f"{name}^{exp}")
            if not factors:
                text = str(coeff)
            elif coeff == 1:
                text = "*".join(factors)
            elif coeff == -1:
                text = "-" + "*".join(factors)
            else:
                text = str(coeff) + "*" + "*".join(factors)
            chunks.append(text)
        out = chunks[0]
        for chunk in chunks[1:]:
            if chunk.startswith("-"):
                out += " - " + chunk[1:]
            else:
                out += " + " + chunk
        return out

    def __str__(self) -> str:
        return self.render([f"x{i + 1}" for i in range(self.dim)])

    def __repr__(self) -> str:
        return f"Polynomial({self.dim}, {self})"


def exact_div(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact quotient r with r*q == p, or raise ``NotDivisible``.

    Single-divisor multivariate division in graded-lex order: since the
    order is multiplicative, a failing leading-term division at any step
    proves there is no polynomial quotient.
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"cannot divide dimension {p.dim} by dimension {q.dim}")
    if q.is_zero():
        raise ZeroDivisionError("exact division by the zero polynomial")
    if p.is_zero():
        return Polynomial.zero(p.dim)
    q_lead = max(q.terms, key=grlex_key)
    q_lead_coeff = q.terms[q_lead]
    remainder = dict(p.terms)
    quotient: dict[Monomial, object] = {}
    while remainder:
        p_lead = max(remainder, key=grlex_key)
        shift = tuple(a - b for a, b in zip(p_lead, q_lead))
        if any(e < 0 for e in shift):
            raise NotDivisible(f"no polynomial quotient: {p} is not divisible by {q}")
        coeff = remainder[p_lead] / q_lead_coeff
        quotient[shift] = coeff
        for monomial, qc in q.terms.items():
            key = tuple(a + b for a, b in zip(monomial, shift))
            total = remainder.get(key, 0) - coeff * qc
            if total:
                remainder[key] = total
            else:
                remainder.pop(key, None)
    return Polynomial(p.dim, quotient)


def sample_polynomial(
    rng: random.Random, dim: int, max_degree: int, max_abs_coeff: int
) -> Polynomial:
    """Seeded random polynomial: total degree <= max_degree, integer
    coefficients in [-max_abs_coeff, max_abs_coeff].

    Coefficients are drawn per monomial in graded-lex order, so the result
    is a pure function of the generator state.
    """
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    if max_abs_coeff < 1:
        raise ValueError(f"max_abs_coeff must be >= 1, got {max_abs_coeff}")
    terms: dict[Monomial, int] = {}
    for monomial in monomials_up_to_degree(dim, max_degree):
        coeff = rng.randint(-max_abs_coeff, max_abs_coeff)
        if coeff:
            terms[monomial] = coeff
    return Polynomial(dim, terms)
