"""Exact asymptotic expansions of factorially divergent power series.

Series with coefficients growing like ``alpha^n Gamma(n + beta)`` form a
ring closed under multiplication, composition and inversion.  The package
carries each such series together with the exact generating function of its
asymptotic expansion through those operations.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .alien import (
    CANONICAL,
    AlienElement,
    AlienError,
    IncompatiblePrefactorError,
    ParameterMismatchError,
    Prefactor,
    compose,
    derivative,
    double_factorial_element,
    factorial_element,
    from_analytic,
    identity,
    invert,
    ode_residual,
    solve_outer_asy,
)
from .applications import (
    RouteDisagreementError,
    SequenceTable,
    compute_table,
    connected_chords,
    connectivity_probability,
    monolithic_chords,
    simple_permutations,
)
from .numeric import FitReport, LogScaled, fit_asymptotics, gamma_scale, log_scale, remainder_order_check
from .records import ParseError, format_rational, parse_rational, parse_sequence_text
from .series import Series, SeriesError, comp_inverse, lagrange_coefficient

__all__ = [
    "__version__",
    "Series",
    "SeriesError",
    "comp_inverse",
    "lagrange_coefficient",
    "AlienElement",
    "AlienError",
    "ParameterMismatchError",
    "IncompatiblePrefactorError",
    "Prefactor",
    "CANONICAL",
    "from_analytic",
    "identity",
    "factorial_element",
    "double_factorial_element",
    "compose",
    "invert",
    "derivative",
    "solve_outer_asy",
    "ode_residual",
    "SequenceTable",
    "RouteDisagreementError",
    "compute_table",
    "connected_chords",
    "monolithic_chords",
    "simple_permutations",
    "connectivity_probability",
    "LogScaled",
    "FitReport",
    "log_scale",
    "gamma_scale",
    "fit_asymptotics",
    "remainder_order_check",
    "ParseError",
    "format_rational",
    "parse_rational",
    "parse_sequence_text",
]
