"""Shared fixtures: reference structures, scene paths, broken-bracket fixtures."""

from __future__ import annotations

from pathlib import Path

import pytest

from nlab import (
    Chart,
    DifferentialForm,
    MultivectorField,
    NambuStructure,
    anchor_pi,
    exterior_derivative,
    interior_product,
    lie_derivative_form,
    pairing,
)
from nlab.algebroid import bracket as real_bracket
from nlab.ring import Polynomial

SCENES = Path(__file__).resolve().parent.parent / "scenes"


def scene_text(name: str) -> str:
    return (SCENES / name).read_text(encoding="utf-8")


def make_structure(dim: int, order: int, components) -> NambuStructure:
    """components: mapping multi-index -> int constant or Polynomial."""
    chart = Chart.standard(dim)
    lifted = {
        index: coeff if isinstance(coeff, Polynomial) else Polynomial.constant(dim, coeff)
        for index, coeff in components.items()
    }
    return NambuStructure(chart, order, MultivectorField(chart, order, lifted))


@pytest.fixture(scope="session")
def r3():
    return Chart(("x", "y", "z"))


@pytest.fixture(scope="session")
def s_r3(r3):
    return NambuStructure(r3, 3, MultivectorField.basis(r3, (0, 1, 2)))


@pytest.fixture(scope="session")
def s_r2():
    return make_structure(2, 2, {(0, 1): 1})


@pytest.fixture(scope="session")
def s_r4_p2():
    return make_structure(4, 2, {(0, 1): 1})


@pytest.fixture(scope="session")
def s_r4_p3():
    return make_structure(4, 3, {(0, 1, 2): Polynomial.coordinate(4, 0)})


@pytest.fixture(scope="session")
def s_bad():
    return make_structure(6, 3, {(0, 1, 2): 1, (3, 4, 5): 1})


@pytest.fixture(scope="session")
def s_symplectic():
    return make_structure(4, 2, {(0, 1): 1, (2, 3): 1})


def wrong_sign_bracket(structure, variant, alpha, beta):
    """ibanez-style bracket with the scalar term's sign flipped: the
    negative control for the derived-anchor homomorphism suite."""
    lead = lie_derivative_form(anchor_pi(structure, alpha), beta)
    scalar = pairing(structure.lam, exterior_derivative(alpha))
    exponent = (
        structure.chart.dim if variant.sign_exponent == "dimension" else structure.order
    )
    if exponent % 2 == 0:  # flipped: negate exactly when the true bracket would not
        scalar = -scalar
    return lead + beta * scalar


def warped_bracket(structure, variant, alpha, beta):
    """Bracket with an extra term proportional to the *first* argument:
    breaks the module shape of the residual, forcing ExtractionFailure."""
    base = real_bracket(structure, variant, alpha, beta)
    scalar = pairing(structure.lam, exterior_derivative(beta))
    return base + alpha * scalar
