"""Brackets on degree-(p-1) forms, the anchor, and the verification suites.

Two bracket variants are implemented over a structure of order p:

* ``ibanez``:   [[a, b]] = L_{A(a)} b + sigma * <tensor, da> * b, with the
  configurable sign sigma = (-1)^dimension or (-1)^order. The scalar factor
  is the full contraction of the structure tensor with the (degree-p) form
  da. The two exponents agree at top order; for order < dimension the
  verification suites report which one satisfies the Leibniz identity.
* ``hagiwara``: [[a, b]] = L_{A(a)} b - i_{A(b)} da.

Here A is the anchor: left insertion of a section into the structure
tensor. ``derive_anchor`` recovers the same action *without ever using A*,
purely from the bracket residual [[a, f*Y]] - f*[[a, b]]; the suites then
confirm that this derived action already preserves brackets.

Checkers return defects as values; only anchor extraction can raise
(``ExtractionFailure``), and the suite runner records that as a violation
instead of propagating it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .calculus import (
    NambuStructure,
    apply_vector_field,
    exterior_derivative,
    lie_derivative_form,
    vf_commutator,
)
from .errors import ChartMismatch, DegreeMismatch, ExtractionFailure, NotDivisible
from .exterior import (
    DifferentialForm,
    MultivectorField,
    contract_form_into_multivector,
    increasing_indices,
    interior_product,
    pairing,
    sample_form,
)
from .report import VerificationReport, Violation
from .ring import Polynomial, exact_div, sample_polynomial

# A section of the bundle the bracket lives on: a form of degree order-1.
Section = DifferentialForm

BracketFn = Callable[
    [NambuStructure, "BracketVariant", DifferentialForm, DifferentialForm],
    DifferentialForm,
]


@dataclass(frozen=True)
class BracketVariant:
    """Selector for the bracket formula plus the sign convention used by
    the ``ibanez`` variant (``hagiwara`` ignores it)."""

    kind: str
    sign_exponent: str = "dimension"

    def __post_init__(self):
        if self.kind not in ("ibanez", "hagiwara"):
            raise ValueError(f"unknown bracket kind {self.kind!r}")
        if self.sign_exponent not in ("dimension", "order"):
            raise ValueError(f"unknown sign exponent {self.sign_exponent!r}")

    def describe(self) -> str:
        if self.kind == "ibanez":
            return f"ibanez({self.sign_exponent})"
        return "hagiwara"


IBANEZ_DIMENSION = BracketVariant("ibanez", "dimension")
IBANEZ_ORDER = BracketVariant("ibanez", "order")
HAGIWARA = BracketVariant("hagiwara")


def _check_section(structure: NambuStructure, section: DifferentialForm, name: str):
    if not isinstance(section, DifferentialForm):
        raise TypeError(f"{name} must be a DifferentialForm")
    if section.chart != structure.chart:
        raise ChartMismatch(f"{name} lives on a different chart")
    if section.degree != structure.order - 1:
        raise DegreeMismatch(
            f"{name} has degree {section.degree}, expected {structure.order - 1}"
        )


def anchor_pi(structure: NambuStructure, alpha: DifferentialForm) -> MultivectorField:
    """Anchor map: left insertion of a section into the structure tensor."""
    _check_section(structure, alpha, "section")
    return contract_form_into_multivector(alpha, structure.lam)


def bracket(
    structure: NambuStructure,
    variant: BracketVariant,
    alpha: DifferentialForm,
    beta: DifferentialForm,
) -> DifferentialForm:
    """The chosen Leibniz bracket of two sections."""
    _check_section(structure, alpha, "alpha")
    _check_section(structure, beta, "beta")
    lead = lie_derivative_form(anchor_pi(structure, alpha), beta)
    d_alpha = exterior_derivative(alpha)
    if variant.kind == "ibanez":
        exponent = (
            structure.chart.dim if variant.sign_exponent == "dimension" else structure.order
        )
        scalar = pairing(structure.lam, d_alpha)
        if exponent % 2:
            scalar = -scalar
        return lead + beta * scalar
    return lead - interior_product(anchor_pi(structure, beta), d_alpha)


@dataclass(frozen=True)
class ExtractedAnchor:
    """Anchor action read off the bracket alone.

    ``action`` maps each coordinate index to the scalar the bracket
    multiplies probe sections by; packaged as a vector field it must match
    the insertion anchor, and that agreement is what the suites verify.
    """

    source: DifferentialForm
    action: dict[int, Polynomial]

    def as_vector_field(self) -> MultivectorField:
        chart = self.source.chart
        return MultivectorField(
            chart,
            1,
            {(i,): g for i, g in self.action.items() if not g.is_zero()},
        )

    def apply(self, f: Polynomial) -> Polynomial:
        """Derivation determined by the coordinate actions: sum_i g_i d_i f."""
        total = Polynomial.zero(self.source.chart.dim)
        for i, g in self.action.items():
            total = total + g * f.partial(i)
        return total


def scalar_action(
    structure: NambuStructure,
    variant: BracketVariant,
    alpha: DifferentialForm,
    f: Polynomial,
    bracket_fn: BracketFn | None = None,
) -> Polynomial:
    """Extract the scalar g with [[alpha, f*Y]] - f*[[alpha, Y]] == g*Y.

    Probes Y run over the full section basis; the quotient must be one and
    the same polynomial across every probe and every component, otherwise
    ``ExtractionFailure`` is raised with a witness. Divisions go through
    ``exact_div`` so a non-polynomial quotient is caught, not crashed on.
    """
    br = bracket_fn or bracket
    chart = structure.chart
    names = chart.names
    degree = structure.order - 1
    common: Polynomial | None = None
    for index in increasing_indices(chart.dim, degree):
        probe = DifferentialForm.basis(chart, index)
        residual = br(structure, variant, alpha, probe * f) - (
            br(structure, variant, alpha, probe) * f
        )
        probe_text = probe.render()
        try:
            candidate = exact_div(residual.component(index), probe.component(index))
        except NotDivisible as exc:
            raise ExtractionFailure(f.render(names), probe_text, index, str(exc)) from exc
        if residual != probe * candidate:
            extra = residual - probe * candidate
            bad = min(extra.components)
            raise ExtractionFailure(
                f.render(names),
                probe_text,
                bad,
                "residual is not a scalar multiple of the probe: leftover "
                f"{extra.render()}",
            )
        if common is None:
            common = candidate
        elif common != candidate:
            raise ExtractionFailure(
                f.render(names),
                probe_text,
                index,
                f"quotient {candidate.render(names)} disagrees with "
                f"{common.render(names)} from earlier probes",
            )
    assert common is not None  # every chart has at least one basis section
    return common


def derive_anchor(
    structure: NambuStructure,
    variant: BracketVariant,
    alpha: DifferentialForm,
    bracket_fn: BracketFn | None = None,
) -> ExtractedAnchor:
    """Recover the anchor action of a section from the bracket alone.

    Probes the defining residual with every coordinate function against the
    full basis of sections. A derivation of the polynomial ring is pinned
    down by its values on coordinates, so the extracted per-coordinate
    scalars determine the whole action.
    """
    _check_section(structure, alpha, "section")
    action: dict[int, Polynomial] = {}
    for i in range(structure.chart.dim):
        coordinate = Polynomial.coordinate(structure.chart.dim, i)
        action[i] = scalar_action(structure, variant, alpha, coordinate, bracket_fn)
    return ExtractedAnchor(alpha, action)


def check_leibniz_identity(
    structure: NambuStructure,
    variant: BracketVariant,
    alpha: DifferentialForm,
    beta: DifferentialForm,
    gamma: DifferentialForm,
    bracket_fn: BracketFn | None = None,
) -> DifferentialForm:
    """Defect of the left Leibniz identity:
    [[a,[[b,c]]]] - [[[[a,b]],c]] - [[b,[[a,c]]]]."""
    br = bracket_fn or bracket
    return (
        br(structure, variant, alpha, br(structure, variant, beta, gamma))
        - br(structure, variant, br(structure, variant, alpha, beta), gamma)
        - br(structure, variant, beta, br(structure, variant, alpha, gamma))
    )


def check_anchor_homomorphism(
    structure: NambuStructure,
    variant: BracketVariant,
    alpha: DifferentialForm,
    beta: DifferentialForm,
    use_derived: bool = False,
    bracket_fn: BracketFn | None = None,
) -> MultivectorField:
    """Defect of anchor([[a,b]]) - [anchor(a), anchor(b)].

    With ``use_derived`` the anchor comes exclusively from the bracket
    residual (never from tensor insertion), which is the redundancy claim
    this package exists to exercise. Extraction failures propagate.
    """
    br = bracket_fn or bracket
    if use_derived:
        def anchor_of(section):
            return derive_anchor(structure, variant, section, bracket_fn).as_vector_field()
    else:
        def anchor_of(section):
            return anchor_pi(structure, section)
    combined = br(structure, variant, alpha, beta)
    return anchor_of(combined) - vf_commutator(anchor_of(alpha), anchor_of(beta))


def check_leibniz_rule(
    structure: NambuStructure,
    variant: BracketVariant,
    alpha: DifferentialForm,
    beta: DifferentialForm,
    f: Polynomial,
    bracket_fn: BracketFn | None = None,
) -> DifferentialForm:
    """Defect of [[a, f*b]] - f*[[a,b]] - (anchor(a) f)*b."""
    br = bracket_fn or bracket
    rate = apply_vector_field(anchor_pi(structure, alpha), f)
    return (
        br(structure, variant, alpha, beta * f)
        - br(structure, variant, alpha, beta) * f
        - beta * rate
    )


def check_derivation_property(
    structure: NambuStructure,
    variant: BracketVariant,
    alpha: DifferentialForm,
    f: Polynomial,
    g: Polynomial,
    bracket_fn: BracketFn | None = None,
) -> Polynomial:
    """Defect of a(f*g) - f*a(g) - g*a(f) for the derived anchor action a."""
    anchor = derive_anchor(structure, variant, alpha, bracket_fn)
    return anchor.apply(f * g) - f * anchor.apply(g) - g * anchor.apply(f)


@dataclass(frozen=True)
class AntisymmetryDefects:
    """Raw bracket symmetrization and its anchored image.

    The raw part may legitimately be nonzero (these are Leibniz brackets,
    not Lie brackets); the anchored part must always vanish on structures
    whose anchor preserves brackets.
    """

    bracket_defect: DifferentialForm
    anchored_defect: MultivectorField


def check_antisymmetry_defects(
    structure: NambuStructure,
    variant: BracketVariant,
    alpha: DifferentialForm,
    beta: DifferentialForm,
    bracket_fn: BracketFn | None = None,
) -> AntisymmetryDefects:
    """[[a,b]] + [[b,a]], raw and pushed through the anchor."""
    br = bracket_fn or bracket
    raw = br(structure, variant, alpha, beta) + br(structure, variant, beta, alpha)
    return AntisymmetryDefects(raw, anchor_pi(structure, raw))


@dataclass(frozen=True)
class VariantComparison:
    """Pointwise difference of the two bracket variants on one input pair."""

    raw_difference: DifferentialForm
    anchored_difference: MultivectorField


def compare_variants(
    structure: NambuStructure,
    alpha: DifferentialForm,
    beta: DifferentialForm,
    sign_exponent: str = "dimension",
) -> VariantComparison:
    """Difference of the two variants; the anchored difference must vanish
    whenever each variant separately passes the homomorphism check."""
    left = bracket(structure, BracketVariant("ibanez", sign_exponent), alpha, beta)
    right = bracket(structure, HAGIWARA, alpha, beta)
    raw = left - right
    return VariantComparison(raw, anchor_pi(structure, raw))


SUITES = (
    "leibniz-id",
    "leibniz-rule",
    "anchor-hom",
    "anchor-hom-derived",
    "derivation",
    "antisym-anchored",
    "variant-compare",
)


def sample_section(
    rng: random.Random,
    structure: NambuStructure,
    max_degree: int,
    max_abs_coeff: int,
) -> DifferentialForm:
    """Seeded random section (degree order-1 form)."""
    return sample_form(
        rng, structure.chart, structure.order - 1, max_degree, max_abs_coeff
    )


def run_suite(
    structure: NambuStructure,
    variant: BracketVariant,
    suite: str,
    trials: int,
    seed: int,
    max_degree: int = 2,
    max_abs_coeff: int = 3,
    label: str | None = None,
    bracket_fn: BracketFn | None = None,
) -> VerificationReport:
    """Run one checker over seeded random inputs.

    Trial t draws from ``random.Random(seed + t)``, so trials are
    independent and the report is a pure function of (structure, variant,
    suite, trials, seed, sampling bounds). Sections are sampled first, in
    argument order, then any scalar arguments.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    names = structure.chart.names
    violations: list[Violation] = []
    raw_nonzero = 0

    for trial in range(trials):
        rng = random.Random(seed + trial)
        alpha = sample_section(rng, structure, max_degree, max_abs_coeff)
        inputs = {"alpha": alpha.render()}
        defect_text = None

        try:
            if suite == "leibniz-id":
                beta = sample_section(rng, structure, max_degree, max_abs_coeff)
                gamma = sample_section(rng, structure, max_degree, max_abs_coeff)
                inputs["beta"] = beta.render()
                inputs["gamma"] = gamma.render()
                defect = check_leibniz_identity(
                    structure, variant, alpha, beta, gamma, bracket_fn
                )
                if not defect.is_zero():
                    defect_text = defect.render()
            elif suite == "leibniz-rule":
                beta = sample_section(rng, structure, max_degree, max_abs_coeff)
                f = sample_polynomial(rng, structure.chart.dim, max_degree, max_abs_coeff)
                inputs["beta"] = beta.render()
                inputs["f"] = f.render(names)
                defect = check_leibniz_rule(structure, variant, alpha, beta, f, bracket_fn)
                if not defect.is_zero():
                    defect_text = defect.render()
            elif suite in ("anchor-hom", "anchor-hom-derived"):
                beta = sample_section(rng, structure, max_degree, max_abs_coeff)
                inputs["beta"] = beta.render()
                defect = check_anchor_homomorphism(
                    structure,
                    variant,
                    alpha,
                    beta,
                    use_derived=(suite == "anchor-hom-derived"),
                    bracket_fn=bracket_fn,
                )
                if not defect.is_zero():
                    defect_text = defect.render()
            elif suite == "derivation":
                f = sample_polynomial(rng, structure.chart.dim, max_degree, max_abs_coeff)
                g = sample_polynomial(rng, structure.chart.dim, max_degree, max_abs_coeff)
                inputs["f"] = f.render(names)
                inputs["g"] = g.render(names)
                defect = check_derivation_property(
                    structure, variant, alpha, f, g, bracket_fn
                )
                if not defect.is_zero():
                    defect_text = defect.render(names)
            elif suite == "antisym-anchored":
                beta = sample_section(rng, structure, max_degree, max_abs_coeff)
                inputs["beta"] = beta.render()
                defects = check_antisymmetry_defects(
                    structure, variant, alpha, beta, bracket_fn
                )
                if not defects.bracket_defect.is_zero():
                    raw_nonzero += 1
                if not defects.anchored_defect.is_zero():
                    defect_text = defects.anchored_defect.render()
            elif suite == "variant-compare":
                beta = sample_section(rng, structure, max_degree, max_abs_coeff)
                inputs["beta"] = beta.render()
                comparison = compare_variants(
                    structure, alpha, beta, variant.sign_exponent
                )
                if not comparison.raw_difference.is_zero():
                    raw_nonzero += 1
                if not comparison.anchored_difference.is_zero():
                    defect_text = comparison.anchored_difference.render()
        except ExtractionFailure as failure:
            defect_text = f"extraction failure: {failure}"

        if defect_text is not None:
            violations.append(Violation(trial, inputs, defect_text))

    observations: dict[str, str] = {}
    if suite == "antisym-anchored":
        observations["raw_defect_nonzero_trials"] = str(raw_nonzero)
    elif suite == "variant-compare":
        observations["raw_difference_nonzero_trials"] = str(raw_nonzero)

    return VerificationReport(
        suite=suite,
        structure=label or structure.describe(),
        variant=variant.describe(),
        trials=trials,
        seed=seed,
        violations=tuple(violations),
        observations=observations,
    )
