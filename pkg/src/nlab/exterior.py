"""Graded alternating algebra over a single global coordinate chart.

Differential forms and multivector fields share one representation: a
mapping from strictly increasing index tuples to polynomial coefficients.
All antisymmetry bookkeeping happens at construction time through
permutation parity, so equality of canonical representations is semantic
equality.

Conventions (fixed here, used consistently everywhere):

* pairing of basis elements is the plain Kronecker delta on increasing
  multi-indices, with no factorial weights;
* contracting a form into a multivector inserts the form on the left:
  ``<contract(b, P), c> == <P, b ^ c>`` for every test form ``c``.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ChartMismatch, DegreeMismatch, DimensionMismatch
from .ring import SCALAR_TYPES, Polynomial, Scalar, sample_polynomial


class Chart:
    """A global coordinate chart: a dimension and distinct coordinate names."""

    __slots__ = ("names",)

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if not names:
            raise ValueError("chart needs at least one coordinate")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        for name in names:
            if not name or not name.isidentifier():
                raise ValueError(f"coordinate name {name!r} is not an identifier")
        self.names = names

    @property
    def dim(self) -> int:
        return len(self.names)

    @classmethod
    def standard(cls, dim: int) -> "Chart":
        return cls(tuple(f"x{i + 1}" for i in range(dim)))

    def __eq__(self, other) -> bool:
        return isinstance(other, Chart) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Chart({', '.join(self.names)})"


# Strictly increasing tuple of coordinate indices.
MultiIndex = tuple[int, ...]


def sort_with_sign(indices: Sequence[int]) -> tuple[int, MultiIndex] | None:
    """Sort an index sequence, returning (permutation sign, sorted tuple).

    Returns None when an index repeats (the alternating component is zero).
    """
    indices = list(indices)
    sign = 1
    # insertion sort; inversion count gives the parity
    for i in range(1, len(indices)):
        j = i
        while j > 0 and indices[j - 1] > indices[j]:
            indices[j - 1], indices[j] = indices[j], indices[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(indices, indices[1:]):
        if a == b:
            return None
    return sign, tuple(indices)


def merge_with_sign(left: MultiIndex, right: MultiIndex) -> tuple[int, MultiIndex] | None:
    """Concatenate two increasing multi-indices and normalize.

    Returns None when they overlap.
    """
    # linear merge of two sorted runs; inversion count gives the parity
    merged: list[int] = []
    inversions = 0
    i, j = 0, 0
    len_left, len_right = len(left), len(right)
    while i < len_left and j < len_right:
        a, b = left[i], right[j]
        if a == b:
            return None
        if a < b:
            merged.append(a)
            i += 1
        else:
            merged.append(b)
            j += 1
            inversions += len_left - i
    merged.extend(left[i:])
    merged.extend(right[j:])
    return (-1 if inversions % 2 else 1), tuple(merged)


def increasing_indices(dim: int, degree: int) -> Iterable[MultiIndex]:
    """All strictly increasing multi-indices of the given length, lex order."""
    return itertools.combinations(range(dim), degree)


class AlternatingTensor:
    """Shared storage for forms and multivector fields.

    Components live only on strictly increasing multi-indices of length
    ``degree``. A degree above the chart dimension is representable only
    for the identically zero tensor (it can fall out of a wedge product);
    every nonzero tensor satisfies ``0 <= degree <= dim``.
    """

    basis_prefix = ""  # overridden: "dx" for forms, "e" for multivectors

    __slots__ = ("chart", "degree", "components")

    def __init__(
        self,
        chart: Chart,
        degree: int,
        components: Mapping[MultiIndex, Polynomial] | None = None,
    ):
        if degree < 0:
            raise DegreeMismatch(f"degree must be >= 0, got {degree}")
        clean: dict[MultiIndex, Polynomial] = {}
        for index, coeff in (components or {}).items():
            index = tuple(index)
            if len(index) != degree:
                raise DegreeMismatch(
                    f"multi-index {index} has length {len(index)}, expected {degree}"
                )
            if any(not 0 <= i < chart.dim for i in index):
                raise ValueError(f"multi-index {index} out of range for {chart!r}")
            if any(a >= b for a, b in zip(index, index[1:])):
                raise ValueError(f"multi-index {index} is not strictly increasing")
            if not isinstance(coeff, Polynomial):
                raise TypeError(f"component at {index} is not a Polynomial")
            if coeff.dim != chart.dim:
                raise DimensionMismatch(
                    f"component at {index} has dimension {coeff.dim}, chart has {chart.dim}"
                )
            if not coeff.is_zero():
                clean[index] = coeff
        if degree > chart.dim and clean:
            raise DegreeMismatch(
                f"nonzero tensor of degree {degree} on a {chart.dim}-dimensional chart"
            )
        self.chart = chart
        self.degree = degree
        self.components = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def _make(cls, chart: Chart, degree: int, components: dict):
        """Internal fast path: trusts that components are already canonical
        (increasing indices of the right length, no zero polynomials)."""
        out = cls.__new__(cls)
        out.chart = chart
        out.degree = degree
        out.components = components
        return out

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls(chart, degree)

    @classmethod
    def basis(cls, chart: Chart, index: Sequence[int]):
        """Unit basis tensor on the given (strictly increasing) multi-index."""
        index = tuple(index)
        return cls(chart, len(index), {index: Polynomial.one(chart.dim)})

    @classmethod
    def from_scalar(cls, chart: Chart, value: Polynomial):
        """Degree-0 wrapper around a polynomial."""
        return cls(chart, 0, {(): value})

    # -- queries -----------------------------------------------------------

    def component(self, index: Sequence[int]) -> Polynomial:
        return self.components.get(tuple(index), Polynomial.zero(self.chart.dim))

    def is_zero(self) -> bool:
        return not self.components

    def sorted_components(self) -> list[tuple[MultiIndex, Polynomial]]:
        return sorted(self.components.items())

    # -- linear structure ----------------------------------------------------

    def _check_compatible(self, other: "AlternatingTensor"):
        if type(self) is not type(other):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.chart != other.chart:
            raise ChartMismatch(f"charts differ: {self.chart!r} vs {other.chart!r}")
        if self.degree != other.degree:
            raise DegreeMismatch(f"degrees differ: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check_compatible(other)
        merged = dict(self.components)
        for index, coeff in other.components.items():
            total = merged.get(index)
            total = coeff if total is None else total + coeff
            if total.is_zero():
                merged.pop(index, None)
            else:
                merged[index] = total
        return type(self)._make(self.chart, self.degree, merged)

    def __neg__(self):
        return type(self)._make(
            self.chart, self.degree, {i: -c for i, c in self.components.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        """Scalar multiplication by a polynomial or a rational constant."""
        if isinstance(scalar, SCALAR_TYPES):
            scalar = Polynomial.constant(self.chart.dim, scalar)
        if not isinstance(scalar, Polynomial):
            return NotImplemented
        out = {}
        for index, coeff in self.components.items():
            product = coeff * scalar
            if not product.is_zero():
                out[index] = product
        return type(self)._make(self.chart, self.degree, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlternatingTensor):
            return NotImplemented
        return (
            type(self) is type(other)
            and self.chart == other.chart
            and self.degree == other.degree
            and self.components == other.components
        )

    __hash__ = None

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Canonical text form; re-parses to an equal value.

        Components appear in multi-index lex order as ``(coeff)*b1^b2``.
        The zero tensor renders with an explicit zero coefficient on the
        first basis element so its degree survives a round trip (a
        degenerate zero above top degree falls back to ``(0)``).
        """
        names = self.chart.names
        if not self.components:
            if self.degree == 0 or self.degree > self.chart.dim:
                return "(0)"
            basis = "^".join(
                f"{self.basis_prefix}{i + 1}" for i in range(self.degree)
            )
            return f"(0)*{basis}"
        chunks = []
        for index, coeff in self.sorted_components():
            text = f"({coeff.render(names)})"
            if index:
                basis = "^".join(f"{self.basis_prefix}{i + 1}" for i in index)
                text += f"*{basis}"
            chunks.append(text)
        return " + ".join(chunks)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


class DifferentialForm(AlternatingTensor):
    """Alternating covariant tensor; basis token ``dx<k>``."""

    basis_prefix = "dx"


class MultivectorField(AlternatingTensor):
    """Alternating contravariant tensor; basis token ``e<k>``. Degree-1
    values are the vector fields of the calculus layer."""

    basis_prefix = "e"


def _wedge(left: AlternatingTensor, right: AlternatingTensor) -> AlternatingTensor:
    if type(left) is not type(right):
        raise TypeError(
            f"cannot wedge {type(left).__name__} with {type(right).__name__}"
        )
    if left.chart != right.chart:
        raise ChartMismatch(f"charts differ: {left.chart!r} vs {right.chart!r}")
    degree = left.degree + right.degree
    out: dict[MultiIndex, Polynomial] = {}
    for i1, c1 in left.components.items():
        for i2, c2 in right.components.items():
            merged = merge_with_sign(i1, i2)
            if merged is None:
                continue
            sign, key = merged
            term = c1 * c2
            if sign < 0:
                term = -term
            total = out.get(key)
            total = term if total is None else total + term
            if total.is_zero():
                out.pop(key, None)
            else:
                out[key] = total
    return type(left)._make(left.chart, degree, out)


def wedge_form(omega: DifferentialForm, eta: DifferentialForm) -> DifferentialForm:
    """Alternating product of forms; degrees add.

    Degrees summing past the chart dimension yield the degree-labelled zero
    tensor (every term has a repeated index).
    """
    return _wedge(omega, eta)


def wedge_multivector(p: MultivectorField, q: MultivectorField) -> MultivectorField:
    """Alternating product of multivector fields; degrees add."""
    return _wedge(p, q)


def pairing(p: MultivectorField, omega: DifferentialForm) -> Polynomial:
    """Full contraction of equal-degree tensors: sum of componentwise
    products over matching multi-indices (<e_I, dx^J> = delta_IJ)."""
    if not isinstance(p, MultivectorField) or not isinstance(omega, DifferentialForm):
        raise TypeError("pairing takes a multivector field and a differential form")
    if p.chart != omega.chart:
        raise ChartMismatch(f"charts differ: {p.chart!r} vs {omega.chart!r}")
    if p.degree != omega.degree:
        raise DegreeMismatch(f"degrees differ: {p.degree} vs {omega.degree}")
    total = Polynomial.zero(p.chart.dim)
    small, large = (
        (p.components, omega.components)
        if len(p.components) <= len(omega.components)
        else (omega.components, p.components)
    )
    for index, coeff in small.items():
        other = large.get(index)
        if other is not None:
            total = total + coeff * other
    return total


def contract_form_into_multivector(
    beta: DifferentialForm, p: MultivectorField
) -> MultivectorField:
    """Left insertion of a form into a multivector.

    The result is the unique multivector satisfying
    ``pairing(result, gamma) == pairing(p, wedge_form(beta, gamma))`` for
    every form ``gamma`` of the complementary degree.
    """
    if not isinstance(beta, DifferentialForm) or not isinstance(p, MultivectorField):
        raise TypeError("contraction takes a differential form and a multivector field")
    if beta.chart != p.chart:
        raise ChartMismatch(f"charts differ: {beta.chart!r} vs {p.chart!r}")
    if beta.degree > p.degree:
        raise DegreeMismatch(
            f"cannot contract a degree-{beta.degree} form into a degree-{p.degree} multivector"
        )
    out_degree = p.degree - beta.degree
    out: dict[MultiIndex, Polynomial] = {}
    for rest in increasing_indices(p.chart.dim, out_degree):
        acc = Polynomial.zero(p.chart.dim)
        for index, coeff in beta.components.items():
            merged = merge_with_sign(index, rest)
            if merged is None:
                continue
            sign, key = merged
            target = p.components.get(key)
            if target is None:
                continue
            term = coeff * target
            acc = acc - term if sign < 0 else acc + term
        if not acc.is_zero():
            out[rest] = acc
    return MultivectorField._make(p.chart, out_degree, out)


def interior_product(x: MultivectorField, omega: DifferentialForm) -> DifferentialForm:
    """Contraction of a vector field into a form (an antiderivation)."""
    if not isinstance(x, MultivectorField) or not isinstance(omega, DifferentialForm):
        raise TypeError("interior product takes a vector field and a differential form")
    if x.chart != omega.chart:
        raise ChartMismatch(f"charts differ: {x.chart!r} vs {omega.chart!r}")
    if x.degree != 1:
        raise DegreeMismatch(f"interior product needs a degree-1 field, got {x.degree}")
    if omega.degree == 0:
        raise DegreeMismatch("interior product is undefined on degree-0 forms")
    out: dict[MultiIndex, Polynomial] = {}
    for index, coeff in omega.components.items():
        for position, i in enumerate(index):
            x_i = x.components.get((i,))
            if x_i is None:
                continue
            term = x_i * coeff
            if position % 2:
                term = -term
            key = index[:position] + index[position + 1 :]
            total = out.get(key)
            total = term if total is None else total + term
            if total.is_zero():
                out.pop(key, None)
            else:
                out[key] = total
    return DifferentialForm._make(omega.chart, omega.degree - 1, out)


def sample_form(
    rng: random.Random,
    chart: Chart,
    degree: int,
    max_degree: int,
    max_abs_coeff: int,
) -> DifferentialForm:
    """Seeded random form: every component sampled independently."""
    return DifferentialForm(chart, degree, _sample_components(rng, chart, degree, max_degree, max_abs_coeff))


def sample_multivector(
    rng: random.Random,
    chart: Chart,
    degree: int,
    max_degree: int,
    max_abs_coeff: int,
) -> MultivectorField:
    """Seeded random multivector field: every component sampled independently."""
    return MultivectorField(chart, degree, _sample_components(rng, chart, degree, max_degree, max_abs_coeff))


def _sample_components(rng, chart, degree, max_degree, max_abs_coeff):
    return {
        index: sample_polynomial(rng, chart.dim, max_degree, max_abs_coeff)
        for index in increasing_indices(chart.dim, degree)
    }
