"""Differential operators, the function bracket, and the structure validator."""

import random

import pytest

from nlab import (
    ArityMismatch,
    Chart,
    DegreeOverflow,
    DifferentialForm,
    MultivectorField,
    NambuStructure,
    check_fundamental_identity,
    differential,
    exterior_derivative,
    hamiltonian_field,
    interior_product,
    lie_derivative_form,
    lie_derivative_multivector,
    nambu_bracket,
    pairing,
    sample_form,
    sample_multivector,
    validate_nambu,
    vf_commutator,
    wedge_form,
)
from nlab.ring import Polynomial, sample_polynomial

from conftest import make_structure


@pytest.fixture(scope="module")
def chart():
    return Chart(("x", "y", "z"))


def coords(chart):
    return [Polynomial.coordinate(chart.dim, i) for i in range(chart.dim)]


class TestExteriorDerivative:
    def test_one_term(self, chart):
        x, y, z = coords(chart)
        xdy = DifferentialForm(chart, 1, {(1,): x})
        assert exterior_derivative(xdy) == DifferentialForm.basis(chart, (0, 1))

    def test_two_form(self, chart):
        x, _, _ = coords(chart)
        w = DifferentialForm(chart, 2, {(1, 2): x})
        assert exterior_derivative(w) == DifferentialForm.basis(chart, (0, 1, 2))

    def test_d_squared_zero_on_samples(self, chart):
        rng = random.Random(31)
        for _ in range(25):
            f = sample_polynomial(rng, 3, 3, 4)
            assert exterior_derivative(differential(chart, f)).is_zero()
            w = sample_form(rng, chart, 1, 3, 4)
            assert exterior_derivative(exterior_derivative(w)).is_zero()

    def test_top_degree_overflows(self, chart):
        with pytest.raises(DegreeOverflow):
            exterior_derivative(DifferentialForm.basis(chart, (0, 1, 2)))


class TestLieDerivativeForm:
    def test_radial_field_fixes_dx(self, chart):
        x, _, _ = coords(chart)
        radial = MultivectorField(chart, 1, {(0,): x})
        dx = DifferentialForm.basis(chart, (0,))
        assert lie_derivative_form(radial, dx) == dx

    def test_translation_strips_coefficient(self, chart):
        x, _, _ = coords(chart)
        field = MultivectorField.basis(chart, (0,))
        w = DifferentialForm(chart, 2, {(1, 2): x})
        assert lie_derivative_form(field, w) == DifferentialForm.basis(chart, (1, 2))

    def test_constant_data_is_static(self, chart):
        field = MultivectorField.basis(chart, (1,))
        w = DifferentialForm.basis(chart, (0, 2))
        assert lie_derivative_form(field, w).is_zero()

    def test_degree_zero_is_directional_derivative(self, chart):
        x, y, _ = coords(chart)
        field = MultivectorField(chart, 1, {(0,): y})
        f = DifferentialForm.from_scalar(chart, x * x)
        assert lie_derivative_form(field, f) == DifferentialForm.from_scalar(chart, 2 * x * y)

    def test_top_degree_supported(self, chart):
        x, _, _ = coords(chart)
        field = MultivectorField(chart, 1, {(0,): x})
        top = DifferentialForm.basis(chart, (0, 1, 2))
        assert lie_derivative_form(field, top) == top


class TestCommutator:
    def test_radial_with_translation(self, chart):
        x, _, _ = coords(chart)
        radial = MultivectorField(chart, 1, {(0,): x})
        ex = MultivectorField.basis(chart, (0,))
        assert vf_commutator(radial, ex) == -ex

    def test_self_commutator_vanishes(self, chart):
        rng = random.Random(33)
        for _ in range(10):
            x = sample_multivector(rng, chart, 1, 2, 3)
            assert vf_commutator(x, x).is_zero()

    def test_constant_fields_commute(self, chart):
        ex = MultivectorField.basis(chart, (0,))
        ey = MultivectorField.basis(chart, (1,))
        assert vf_commutator(ex, ey).is_zero()


class TestLieDerivativeMultivector:
    def test_translation_strips_coefficient(self, chart):
        x, _, _ = coords(chart)
        field = MultivectorField.basis(chart, (0,))
        p = MultivectorField(chart, 2, {(1, 2): x})
        assert lie_derivative_multivector(field, p) == MultivectorField.basis(chart, (1, 2))

    def test_self_derivative_vanishes(self, chart):
        rng = random.Random(34)
        for _ in range(10):
            x = sample_multivector(rng, chart, 1, 2, 3)
            assert lie_derivative_multivector(x, x).is_zero()

    def test_degree_one_is_commutator(self, chart):
        rng = random.Random(35)
        for _ in range(15):
            x = sample_multivector(rng, chart, 1, 2, 3)
            y = sample_multivector(rng, chart, 1, 2, 3)
            assert lie_derivative_multivector(x, y) == vf_commutator(x, y)

    def test_radial_case(self, chart):
        x, _, _ = coords(chart)
        radial = MultivectorField(chart, 1, {(0,): x})
        ex = MultivectorField.basis(chart, (0,))
        assert lie_derivative_multivector(radial, ex) == -ex

    def test_wedge_derivation_on_samples(self, chart):
        rng = random.Random(36)
        from nlab import wedge_multivector

        for _ in range(15):
            x = sample_multivector(rng, chart, 1, 2, 3)
            p = sample_multivector(rng, chart, 1, 2, 3)
            q = sample_multivector(rng, chart, rng.randint(1, 2), 2, 3)
            lhs = lie_derivative_multivector(x, wedge_multivector(p, q))
            rhs = wedge_multivector(lie_derivative_multivector(x, p), q) + wedge_multivector(
                p, lie_derivative_multivector(x, q)
            )
            assert lhs == rhs


class TestOperatorIdentities:
    """Classical commutation identities: the independent cross-checks for
    the Cartan-formula implementation."""

    def test_lie_is_wedge_derivation(self, chart):
        rng = random.Random(41)
        for _ in range(15):
            x = sample_multivector(rng, chart, 1, 2, 3)
            a = sample_form(rng, chart, rng.randint(0, 2), 2, 3)
            b = sample_form(rng, chart, rng.randint(0, 1), 2, 3)
            lhs = lie_derivative_form(x, wedge_form(a, b))
            rhs = wedge_form(lie_derivative_form(x, a), b) + wedge_form(
                a, lie_derivative_form(x, b)
            )
            assert lhs == rhs

    def test_lie_lie_commutator(self, chart):
        rng = random.Random(42)
        for _ in range(12):
            x = sample_multivector(rng, chart, 1, 2, 3)
            y = sample_multivector(rng, chart, 1, 2, 3)
            w = sample_form(rng, chart, rng.randint(0, 2), 2, 3)
            lhs = lie_derivative_form(x, lie_derivative_form(y, w)) - lie_derivative_form(
                y, lie_derivative_form(x, w)
            )
            assert lhs == lie_derivative_form(vf_commutator(x, y), w)

    def test_lie_interior_commutator(self, chart):
        rng = random.Random(43)
        for _ in range(12):
            x = sample_multivector(rng, chart, 1, 2, 3)
            y = sample_multivector(rng, chart, 1, 2, 3)
            w = sample_form(rng, chart, rng.randint(1, 3), 2, 3)
            lhs = lie_derivative_form(x, interior_product(y, w)) - interior_product(
                y, lie_derivative_form(x, w)
            )
            assert lhs == interior_product(vf_commutator(x, y), w)

    def test_lie_commutes_with_d(self, chart):
        rng = random.Random(44)
        for _ in range(12):
            x = sample_multivector(rng, chart, 1, 2, 3)
            w = sample_form(rng, chart, rng.randint(0, 2), 2, 3)
            assert exterior_derivative(lie_derivative_form(x, w)) == lie_derivative_form(
                x, exterior_derivative(w)
            )


class TestNambuBracket:
    def test_dual_basis(self, chart):
        s = make_structure(3, 3, {(0, 1, 2): 1})
        x, y, z = coords(chart)
        assert nambu_bracket(s, [x, y, z]) == Polynomial.one(3)

    def test_repeated_argument_vanishes(self):
        s = make_structure(3, 3, {(0, 1, 2): 1})
        x, _, z = coords(Chart.standard(3))
        assert nambu_bracket(s, [x, x, z]).is_zero()

    def test_order_two(self):
        s = make_structure(2, 2, {(0, 1): 1})
        x, y = [Polynomial.coordinate(2, i) for i in range(2)]
        assert nambu_bracket(s, [x, y]) == Polynomial.one(2)

    def test_arity_checked(self):
        s = make_structure(3, 3, {(0, 1, 2): 1})
        with pytest.raises(ArityMismatch):
            nambu_bracket(s, coords(Chart.standard(3))[:2])

    def test_alternating_and_multilinear_on_samples(self):
        s = make_structure(3, 3, {(0, 1, 2): 1})
        rng = random.Random(51)
        for _ in range(15):
            f = sample_polynomial(rng, 3, 2, 3)
            g = sample_polynomial(rng, 3, 2, 3)
            h = sample_polynomial(rng, 3, 2, 3)
            assert nambu_bracket(s, [f, g, h]) == -nambu_bracket(s, [g, f, h])
            assert nambu_bracket(s, [f, f, h]).is_zero()
            assert nambu_bracket(s, [f + 2 * g, g, h]) == nambu_bracket(
                s, [f, g, h]
            ) + 2 * nambu_bracket(s, [g, g, h])

    def test_minor_expansion_matches_wedge_route(self, s_bad):
        # dual route: the production bracket expands Jacobian minors; the
        # oracle pairs the tensor with the full wedge of differentials
        rng = random.Random(52)
        chart6 = s_bad.chart
        for _ in range(10):
            fs = [sample_polynomial(rng, 6, 2, 3) for _ in range(3)]
            omega = differential(chart6, fs[0])
            for f in fs[1:]:
                omega = wedge_form(omega, differential(chart6, f))
            assert nambu_bracket(s_bad, fs) == pairing(s_bad.lam, omega)


class TestHamiltonianField:
    def test_canonical_fields(self):
        s = make_structure(3, 3, {(0, 1, 2): 1})
        x, y, z = coords(s.chart)
        assert hamiltonian_field(s, [x, y]) == MultivectorField.basis(s.chart, (2,))
        assert hamiltonian_field(s, [y, z]) == MultivectorField.basis(s.chart, (0,))

    def test_directional_derivative_matches_bracket(self, chart):
        s = make_structure(3, 3, {(0, 1, 2): 1})
        rng = random.Random(53)
        from nlab import apply_vector_field

        for _ in range(10):
            f = sample_polynomial(rng, 3, 2, 3)
            g = sample_polynomial(rng, 3, 2, 3)
            h = sample_polynomial(rng, 3, 2, 3)
            field = hamiltonian_field(s, [f, g])
            assert apply_vector_field(field, h) == nambu_bracket(s, [f, g, h])


class TestFundamentalIdentity:
    def test_constant_structure_on_coordinates(self, chart):
        s = make_structure(3, 3, {(0, 1, 2): 1})
        x, y, z = coords(chart)
        assert check_fundamental_identity(s, [x, y], [x, y, z]).is_zero()

    def test_worked_quadratic_tuple(self, chart):
        s = make_structure(3, 3, {(0, 1, 2): 1})
        x, y, z = coords(chart)
        assert check_fundamental_identity(s, [x * x, y], [x, y, z]).is_zero()

    def test_bad_structure_has_witness(self, s_bad):
        rng = random.Random(54)
        found = None
        for _ in range(40):
            outer = [sample_polynomial(rng, 6, 2, 3) for _ in range(2)]
            inner = [sample_polynomial(rng, 6, 2, 3) for _ in range(3)]
            defect = check_fundamental_identity(s_bad, outer, inner)
            if not defect.is_zero():
                found = (outer, inner, defect)
                break
        assert found is not None, "search oracle found no violating tuple"

    def test_arity_checked(self, s_bad):
        with pytest.raises(ArityMismatch):
            check_fundamental_identity(s_bad, [Polynomial.one(6)], [Polynomial.one(6)] * 3)


class TestValidateNambu:
    def test_canonical_r3_clean(self, s_r3):
        report = validate_nambu(s_r3, trials=20, seed=7)
        assert report.passed
        assert report.suite == "fundamental-identity"

    def test_coordinate_factor_structure_clean(self, s_r4_p3):
        report = validate_nambu(s_r4_p3, trials=20, seed=7)
        assert report.passed

    def test_bad_structure_flagged_with_witness(self, s_bad):
        report = validate_nambu(s_bad, trials=20, seed=42)
        assert not report.passed
        kinds = {v.inputs["check"] for v in report.violations}
        assert "fundamental-identity" in kinds or "tensor-invariance" in kinds

    def test_deterministic(self, s_r3):
        a = validate_nambu(s_r3, trials=10, seed=3)
        b = validate_nambu(s_r3, trials=10, seed=3)
        assert a == b

    def test_trials_validated(self, s_r3):
        with pytest.raises(ValueError):
            validate_nambu(s_r3, trials=0, seed=1)


class TestStructureValidation:
    def test_order_bounds(self, chart):
        with pytest.raises(ValueError):
            NambuStructure(chart, 1, MultivectorField.basis(chart, (0,)))
        with pytest.raises(ValueError):
            NambuStructure(chart, 4, MultivectorField.basis(chart, (0, 1, 2)))

    def test_degree_must_match_order(self, chart):
        from nlab import DegreeMismatch

        with pytest.raises(DegreeMismatch):
            NambuStructure(chart, 3, MultivectorField.basis(chart, (0, 1)))
