"""nlab: exact symbolic checks for Leibniz brackets attached to
Nambu-type multivector structures.

Everything is computed over sparse multivariate polynomials with rational
coefficients, so every verified identity is bit-exact: a zero defect is a
proof on that input, and a nonzero defect is a reproducible counterexample.
"""

from .algebroid import (
    HAGIWARA,
    IBANEZ_DIMENSION,
    IBANEZ_ORDER,
    SUITES,
    AntisymmetryDefects,
    BracketVariant,
    ExtractedAnchor,
    Section,
    VariantComparison,
    anchor_pi,
    bracket,
    check_anchor_homomorphism,
    check_antisymmetry_defects,
    check_derivation_property,
    check_leibniz_identity,
    check_leibniz_rule,
    compare_variants,
    derive_anchor,
    run_suite,
    sample_section,
    scalar_action,
)
from .calculus import (
    NambuStructure,
    apply_vector_field,
    check_fundamental_identity,
    differential,
    exterior_derivative,
    hamiltonian_field,
    lie_derivative_form,
    lie_derivative_multivector,
    nambu_bracket,
    validate_nambu,
    vf_commutator,
)
from .dsl import Scene, parse_expression, parse_scene, render
from .errors import (
    ArityMismatch,
    ChartMismatch,
    DegreeMismatch,
    DegreeOverflow,
    DimensionMismatch,
    ExtractionFailure,
    NlabError,
    NotDivisible,
    ParseError,
)
from .exterior import (
    Chart,
    DifferentialForm,
    MultivectorField,
    contract_form_into_multivector,
    interior_product,
    pairing,
    sample_form,
    sample_multivector,
    wedge_form,
    wedge_multivector,
)
from .report import VerificationReport, Violation
from .ring import Monomial, Polynomial, Rational, exact_div, sample_polynomial

__version__ = "0.1.0"
