"""Shared exception types.

Everything that can go wrong for a *caller* is a subclass of ``NlabError``;
plain programming errors (bad types, negative exponents) stay ordinary
``ValueError``/``TypeError``. ``ZeroDivisionError`` is reused as-is for
division by the zero polynomial.
"""

from __future__ import annotations


class NlabError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(NlabError, ValueError):
    """Polynomials of different ambient dimensions were combined."""


class ChartMismatch(NlabError, ValueError):
    """Tensors over different charts were combined."""


class DegreeMismatch(NlabError, ValueError):
    """An operation received a tensor of the wrong degree."""


class DegreeOverflow(NlabError, ValueError):
    """The exterior derivative was applied to a top-degree form."""


class ArityMismatch(NlabError, ValueError):
    """A multi-argument bracket received the wrong number of functions."""


class NotDivisible(NlabError, ArithmeticError):
    """Exact polynomial division has no polynomial quotient.

    This is a first-class signal, not a crash: anchor extraction treats it
    as a counterexample witness (the bracket residual is not a scalar
    multiple of the probe section).
    """


class ExtractionFailure(NlabError):
    """The anchor action could not be read off the bracket.

    Carries enough context to reproduce the failure: which scalar argument
    was being probed, which probe section, and which component broke.
    """

    def __init__(self, argument: str, probe: str, component: tuple | None, reason: str):
        self.argument = argument
        self.probe = probe
        self.component = component
        self.reason = reason
        where = f" at component {component}" if component is not None else ""
        super().__init__(
            f"anchor extraction failed for argument {argument!r}, probe {probe!r}{where}: {reason}"
        )


class ParseError(NlabError):
    """Syntax or validation error in DSL input, with a 1-based position."""

    def __init__(self, line: int, column: int, message: str, token: str = ""):
        self.line = line
        self.column = column
        self.message = message
        self.token = token
        near = f" (near {token!r})" if token else ""
        super().__init__(f"line {line}, column {column}: {message}{near}")
