"""Differential operators and the multivector-structure layer.

Exterior derivative, Lie derivatives (forms and multivectors), the vector
field commutator, the induced p-ary bracket on functions, and the sampled
validator for its fundamental identity.

The Lie derivative on forms is *defined* through the Cartan formula; the
classical product and commutator identities are checked against it in the
test suite rather than used as alternative definitions.
"""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from .errors import (
    ArityMismatch,
    ChartMismatch,
    DegreeMismatch,
    DegreeOverflow,
    DimensionMismatch,
)
from .exterior import (
    Chart,
    DifferentialForm,
    MultivectorField,
    contract_form_into_multivector,
    interior_product,
    merge_with_sign,
    pairing,
    sort_with_sign,
    wedge_form,
)
from .report import VerificationReport, Violation
from .ring import Polynomial, sample_polynomial


class NambuStructure:
    """A chart together with an order-p alternating multivector field.

    The structure is only a candidate until ``validate_nambu`` has looked
    at it; nothing here assumes the fundamental identity holds.
    """

    __slots__ = ("chart", "order", "lam")

    def __init__(self, chart: Chart, order: int, lam: MultivectorField):
        if not 2 <= order <= chart.dim:
            raise ValueError(
                f"order must satisfy 2 <= order <= {chart.dim}, got {order}"
            )
        if not isinstance(lam, MultivectorField):
            raise TypeError("structure tensor must be a MultivectorField")
        if lam.chart != chart:
            raise ChartMismatch("structure tensor lives on a different chart")
        if lam.degree != order:
            raise DegreeMismatch(
                f"structure tensor has degree {lam.degree}, expected {order}"
            )
        self.chart = chart
        self.order = order
        self.lam = lam

    def describe(self) -> str:
        return (
            f"dim={self.chart.dim} coords={','.join(self.chart.names)} "
            f"order={self.order} tensor={self.lam.render()}"
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NambuStructure)
            and self.chart == other.chart
            and self.order == other.order
            and self.lam == other.lam
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"NambuStructure({self.describe()})"


def exterior_derivative(omega: DifferentialForm) -> DifferentialForm:
    """d(f dx^I) = sum_i (d_i f) dx^i ^ dx^I, normalized; degree goes up by 1."""
    if not isinstance(omega, DifferentialForm):
        raise TypeError("exterior derivative takes a differential form")
    n = omega.chart.dim
    if omega.degree >= n:
        raise DegreeOverflow(
            f"exterior derivative of a degree-{omega.degree} form on a "
            f"{n}-dimensional chart"
        )
    out: dict[tuple[int, ...], Polynomial] = {}
    for index, coeff in omega.components.items():
        for i in range(n):
            if i in index:
                continue
            g = coeff.partial(i)
            if g.is_zero():
                continue
            sign, key = merge_with_sign((i,), index)
            if sign < 0:
                g = -g
            total = out.get(key)
            total = g if total is None else total + g
            if total.is_zero():
                out.pop(key, None)
            else:
                out[key] = total
    return DifferentialForm._make(omega.chart, omega.degree + 1, out)


def differential(chart: Chart, f: Polynomial) -> DifferentialForm:
    """The 1-form df of a function."""
    return exterior_derivative(DifferentialForm.from_scalar(chart, f))


def apply_vector_field(x: MultivectorField, f: Polynomial) -> Polynomial:
    """Directional derivative: sum_i x^i d_i f."""
    if x.degree != 1:
        raise DegreeMismatch(f"expected a degree-1 field, got degree {x.degree}")
    total = Polynomial.zero(x.chart.dim)
    for (i,), coeff in x.components.items():
        total = total + coeff * f.partial(i)
    return total


def lie_derivative_form(x: MultivectorField, omega: DifferentialForm) -> DifferentialForm:
    """Lie derivative along a vector field via the Cartan formula.

    For a degree-0 form this is the directional derivative; at top degree
    the d(omega) half drops (it is identically zero there).
    """
    if x.chart != omega.chart:
        raise ChartMismatch(f"charts differ: {x.chart!r} vs {omega.chart!r}")
    if x.degree != 1:
        raise DegreeMismatch(f"Lie derivative needs a degree-1 field, got {x.degree}")
    if omega.degree == 0:
        value = apply_vector_field(x, omega.component(()))
        return DifferentialForm(omega.chart, 0, {(): value})
    result = exterior_derivative(interior_product(x, omega))
    if omega.degree < omega.chart.dim:
        result = result + interior_product(x, exterior_derivative(omega))
    return result


def vf_commutator(x: MultivectorField, y: MultivectorField) -> MultivectorField:
    """[x, y]^j = sum_i (x^i d_i y^j - y^i d_i x^j)."""
    if x.chart != y.chart:
        raise ChartMismatch(f"charts differ: {x.chart!r} vs {y.chart!r}")
    if x.degree != 1 or y.degree != 1:
        raise DegreeMismatch(
            f"commutator needs degree-1 fields, got {x.degree} and {y.degree}"
        )
    n = x.chart.dim
    out: dict[tuple[int, ...], Polynomial] = {}
    for j in range(n):
        acc = Polynomial.zero(n)
        yj = y.components.get((j,))
        xj = x.components.get((j,))
        for (i,), xi in x.components.items():
            if yj is not None:
                acc = acc + xi * yj.partial(i)
        for (i,), yi in y.components.items():
            if xj is not None:
                acc = acc - yi * xj.partial(i)
        if not acc.is_zero():
            out[(j,)] = acc
    return MultivectorField._make(x.chart, 1, out)


def lie_derivative_multivector(x: MultivectorField, p: MultivectorField) -> MultivectorField:
    """Degree-0 derivation of the wedge algebra extending the commutator.

    L_x(f e_I) = (x f) e_I + f sum_j e_{i_1} ^ ... ^ [x, e_{i_j}] ^ ... with
    each replaced slot renormalized; restricted to degree 1 this is exactly
    ``vf_commutator``.
    """
    if x.chart != p.chart:
        raise ChartMismatch(f"charts differ: {x.chart!r} vs {p.chart!r}")
    if x.degree != 1:
        raise DegreeMismatch(f"Lie derivative needs a degree-1 field, got {x.degree}")
    chart = p.chart
    if p.degree == 0:
        return MultivectorField(chart, 0, {(): apply_vector_field(x, p.component(()))})
    out: dict[tuple[int, ...], Polynomial] = {}

    def add(key, poly):
        total = out.get(key)
        total = poly if total is None else total + poly
        if total.is_zero():
            out.pop(key, None)
        else:
            out[key] = total

    for index, coeff in p.components.items():
        lead = apply_vector_field(x, coeff)
        if not lead.is_zero():
            add(index, lead)
        # [x, e_i] = -sum_m (d_i x^m) e_m, slotted back in place
        for position, i in enumerate(index):
            for (m,), xm in x.components.items():
                rate = xm.partial(i)
                if rate.is_zero():
                    continue
                replaced = index[:position] + (m,) + index[position + 1 :]
                normalized = sort_with_sign(replaced)
                if normalized is None:
                    continue
                sign, key = normalized
                term = coeff * rate
                if sign > 0:
                    term = -term  # overall factor is -f * rate * sign
                add(key, term)
    return MultivectorField._make(chart, p.degree, out)


_SIGNED_PERMS: dict[int, list[tuple[int, tuple[int, ...]]]] = {}


def _signed_permutations(p: int) -> list[tuple[int, tuple[int, ...]]]:
    cached = _SIGNED_PERMS.get(p)
    if cached is None:
        cached = []
        for perm in itertools.permutations(range(p)):
            sign, _ = sort_with_sign(perm)
            cached.append((sign, perm))
        _SIGNED_PERMS[p] = cached
    return cached


def nambu_bracket(structure: NambuStructure, functions: Sequence[Polynomial]) -> Polynomial:
    """p-ary bracket on functions: full contraction of the structure tensor
    with df_1 ^ ... ^ df_p.

    Computed per tensor component as the Jacobian minor det[d f_k / d x_i]
    over the component's indices, which is the same contraction without
    materializing the full wedge (a test cross-checks the two routes).
    """
    p = structure.order
    if len(functions) != p:
        raise ArityMismatch(f"bracket takes {p} functions, got {len(functions)}")
    n = structure.chart.dim
    for f in functions:
        if not isinstance(f, Polynomial):
            raise TypeError("bracket arguments must be polynomials")
        if f.dim != n:
            raise DimensionMismatch(f"argument has dimension {f.dim}, chart has {n}")
    partials: dict[tuple[int, int], Polynomial] = {}

    def partial(k: int, i: int) -> Polynomial:
        value = partials.get((k, i))
        if value is None:
            value = functions[k].partial(i)
            partials[(k, i)] = value
        return value

    total = Polynomial.zero(n)
    for index, lam in structure.lam.components.items():
        minor = None
        for sign, perm in _signed_permutations(p):
            product = None
            for k in range(p):
                g = partial(k, index[perm[k]])
                if g.is_zero():
                    product = None
                    break
                product = g if product is None else product * g
            if product is None:
                continue
            if sign < 0:
                product = -product
            minor = product if minor is None else minor + product
        if minor is not None and not minor.is_zero():
            total = total + lam * minor
    return total


def hamiltonian_field(
    structure: NambuStructure, functions: Sequence[Polynomial]
) -> MultivectorField:
    """Vector field induced by p-1 functions: contraction of their wedged
    differentials into the structure tensor."""
    if len(functions) != structure.order - 1:
        raise ArityMismatch(
            f"expected {structure.order - 1} functions, got {len(functions)}"
        )
    beta = differential(structure.chart, functions[0])
    for f in functions[1:]:
        beta = wedge_form(beta, differential(structure.chart, f))
    return contract_form_into_multivector(beta, structure.lam)


def check_fundamental_identity(
    structure: NambuStructure,
    outer: Sequence[Polynomial],
    inner: Sequence[Polynomial],
) -> Polynomial:
    """Defect of the fundamental identity on one tuple.

    Returns {f_1..f_{p-1}, {g_1..g_p}} - sum_i {g_1, .., {f_1..f_{p-1}, g_i}, .., g_p};
    identically zero over all tuples exactly when the structure is genuine.
    """
    p = structure.order
    if len(outer) != p - 1:
        raise ArityMismatch(f"expected {p - 1} outer functions, got {len(outer)}")
    if len(inner) != p:
        raise ArityMismatch(f"expected {p} inner functions, got {len(inner)}")
    outer = list(outer)
    inner = list(inner)
    defect = nambu_bracket(structure, outer + [nambu_bracket(structure, inner)])
    for i in range(p):
        nested = nambu_bracket(structure, outer + [inner[i]])
        defect = defect - nambu_bracket(structure, inner[:i] + [nested] + inner[i + 1 :])
    return defect


STRUCTURED_TUPLE_CAP = 50


def _coordinate_family(chart: Chart) -> list[Polynomial]:
    """Coordinates and pairwise coordinate products, in a fixed order."""
    n = chart.dim
    family = [Polynomial.coordinate(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            family.append(
                Polynomial.coordinate(n, i) * Polynomial.coordinate(n, j)
            )
    return family


def validate_nambu(
    structure: NambuStructure,
    trials: int,
    seed: int,
    max_degree: int = 2,
    max_abs_coeff: int = 3,
    structured_cap: int = STRUCTURED_TUPLE_CAP,
    label: str | None = None,
) -> VerificationReport:
    """Sampled fundamental-identity check (sound but incomplete).

    The identity quantifies over all smooth functions; this runs it over
    (a) ``structured_cap`` tuples drawn from the coordinates and their
    pairwise products, plus an invariance check of the structure tensor
    along each induced field from that set, and (b) ``trials`` seeded
    random polynomial tuples. Exact arithmetic means a reported violation
    is never a false positive. Violations are report content, not errors.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    p = structure.order
    names = structure.chart.names
    family = _coordinate_family(structure.chart)
    violations: list[Violation] = []

    def record(trial, kind, outer, inner, defect_text):
        inputs = {"check": kind}
        inputs.update({f"f{k + 1}": f.render(names) for k, f in enumerate(outer)})
        inputs.update({f"g{k + 1}": g.render(names) for k, g in enumerate(inner)})
        violations.append(Violation(trial, inputs, defect_text))

    rng_structured = random.Random(seed)
    trial = 0
    for _ in range(structured_cap):
        outer = [rng_structured.choice(family) for _ in range(p - 1)]
        inner = [rng_structured.choice(family) for _ in range(p)]
        defect = check_fundamental_identity(structure, outer, inner)
        if not defect.is_zero():
            record(trial, "fundamental-identity", outer, inner, defect.render(names))
        drift = lie_derivative_multivector(hamiltonian_field(structure, outer), structure.lam)
        if not drift.is_zero():
            record(trial, "tensor-invariance", outer, [], drift.render())
        trial += 1
    for t in range(trials):
        rng = random.Random(seed + 1 + t)
        outer = [
            sample_polynomial(rng, structure.chart.dim, max_degree, max_abs_coeff)
            for _ in range(p - 1)
        ]
        inner = [
            sample_polynomial(rng, structure.chart.dim, max_degree, max_abs_coeff)
            for _ in range(p)
        ]
        defect = check_fundamental_identity(structure, outer, inner)
        if not defect.is_zero():
            record(trial, "fundamental-identity", outer, inner, defect.render(names))
        trial += 1

    return VerificationReport(
        suite="fundamental-identity",
        structure=label or structure.describe(),
        variant="none",
        trials=trial,
        seed=seed,
        violations=tuple(violations),
        observations={
            "note": "sampled check over a structured family plus random polynomials; "
            "sound for violations, not a proof of validity",
            "structured_tuples": str(structured_cap),
            "random_tuples": str(trials),
        },
    )
