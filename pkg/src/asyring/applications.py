"""Enumeration series and full asymptotic expansions for three combinatorial classes.

Each class is computed along two independent routes:

* ``chain-rule``: the functional equation is pushed through the ring
  operations (composition, inversion, solving for the outer asymptotics);
* ``closed-form``: a closed expression for the asymptotic generating
  function in terms of the series itself is evaluated directly.

The routes must agree coefficient by coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import alien
from .alien import AlienElement, Prefactor
from .numeric import gamma_scale, log_scale
from .records import format_rational
from .series import Series

__all__ = [
    "SequenceTable",
    "RouteDisagreementError",
    "ROUTES",
    "APPLICATIONS",
    "connected_chords",
    "monolithic_chords",
    "simple_permutations",
    "compute_table",
    "clear_caches",
    "check_routes",
    "connectivity_probability",
    "OEIS_VIEWS",
    "oeis_terms",
    "compare_with_oeis",
]

CHAIN = "chain-rule"
CLOSED = "closed-form"
ROUTES = (CHAIN, CLOSED)
HALF = Fraction(1, 2)
# margin between the series order and the number of asy coefficients
ORDER_MARGIN = 4


class RouteDisagreementError(ArithmeticError):
    """The two routes produced different asymptotic expansions."""


@dataclass(frozen=True)
class SequenceTable:
    """Exact series and normalized asymptotic coefficients of one class.

    ``asy`` holds ``A f / asy_prefactor``; it is ``None`` when no asymptotic
    coefficients were requested.  ``checked_against`` names the other route
    when both were computed and agreed.
    """

    name: str
    alpha: Fraction
    beta: Fraction
    series: Series
    asy_prefactor: Prefactor
    asy: Series | None
    provenance: str
    checked_against: str | None = None

    @property
    def asy_terms(self) -> int:
        return 0 if self.asy is None else len(self.asy)

    def element(self) -> AlienElement:
        if self.asy is None:
            raise ValueError("table carries no asymptotic coefficients")
        return AlienElement(self.alpha, self.beta, self.series, self.asy, self.asy_prefactor)

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "alpha": format_rational(self.alpha),
            "beta": format_rational(self.beta),
            "series_order": self.series.order,
            "series": [format_rational(c) for c in self.series],
            "asy_terms": self.asy_terms,
            "asy_prefactor": self.asy_prefactor.to_record(),
            "asy": [] if self.asy is None else [format_rational(c) for c in self.asy],
            "provenance": self.provenance,
            "checked_against": self.checked_against,
        }


def check_routes(a: SequenceTable, b: SequenceTable) -> None:
    """Raise unless both tables carry the same series, prefactor and asy coefficients."""
    if not a.series.agrees_with(b.series):
        raise RouteDisagreementError(f"{a.name}: series differ between {a.provenance} and {b.provenance}")
    if a.asy is None or b.asy is None:
        if (a.asy is None) != (b.asy is None):
            raise RouteDisagreementError(f"{a.name}: only one route produced asymptotics")
        return
    if a.asy_prefactor != b.asy_prefactor:
        raise RouteDisagreementError(
            f"{a.name}: prefactor {a.asy_prefactor} ({a.provenance}) vs {b.asy_prefactor} ({b.provenance})"
        )
    n = min(len(a.asy), len(b.asy))
    for k in range(n):
        if a.asy[k] != b.asy[k]:
            raise RouteDisagreementError(
                f"{a.name}: asy coefficient {k} is {a.asy[k]} ({a.provenance}) vs {b.asy[k]} ({b.provenance})"
            )


def _exp_with_constant(e: Series) -> tuple[Fraction, Series]:
    q = e[0]
    return q, (e - q).exp()


# -- connected chord diagrams ------------------------------------------------


@lru_cache(maxsize=16)
def _chords_series(N: int) -> Series:
    # I = 1 + C(x I^2)  =>  C = (I - 1) o (x I^2)^{-1}
    I = alien.double_factorial_element(N).series
    x = Series.x(N)
    return (I - 1).compose((x * I * I).comp_inverse())


@lru_cache(maxsize=16)
def _monolithic_series(N: int) -> Series:
    return _chords_series(N).compose(_monolithic_inner(N))


@lru_cache(maxsize=16)
def _simple_series(N: int) -> Series:
    return _simple_analytic_part(N) - _permutations_element(N).series.comp_inverse()


@lru_cache(maxsize=16)
def _chords_chain(N: int) -> AlienElement:
    I = alien.double_factorial_element(N)
    g = alien.identity(N, 2, HALF) * I * I
    h = I - 1
    pref, asy = alien.solve_outer_asy(h, g, _chords_series(N))
    return AlienElement(2, HALF, _chords_series(N), asy, pref)


@lru_cache(maxsize=16)
def _chords_closed(N: int) -> AlienElement:
    # (x/C) exp(-(2C + C^2)/(2x)) / sqrt(2 pi)
    C = _chords_series(N)
    q, e = _exp_with_constant(-(2 * C + C * C).div_x(1) / 2)
    asy = C.div_x(1).reciprocal() * e
    return AlienElement(2, HALF, C, asy, Prefactor(q, -1))


# -- monolithic chord diagrams -----------------------------------------------


def _monolithic_inner(N: int) -> Series:
    x = Series.x(N)
    return x / ((1 - x) ** 2)


@lru_cache(maxsize=16)
def _monolithic_chain(N: int) -> AlienElement:
    g = alien.from_analytic(_monolithic_inner(N), 2, HALF)
    return alien.compose(_chords_chain(N), g)


@lru_cache(maxsize=16)
def _monolithic_closed(N: int) -> AlienElement:
    # (1/(1-x)) (x/M) exp(1 - x/2 - (1-x)^2 (2M + M^2)/(2x)) / sqrt(2 pi)
    M = _monolithic_series(N)
    x = Series.x(N)
    one_minus = 1 - x
    expo = 1 - x / 2 - one_minus * one_minus * (2 * M + M * M).div_x(1) / 2
    q, e = _exp_with_constant(expo)
    asy = one_minus.reciprocal() * M.div_x(1).reciprocal() * e
    return AlienElement(2, HALF, M, asy, Prefactor(q, -1))


# -- simple permutations -----------------------------------------------------


def _permutations_element(N: int) -> AlienElement:
    # F = sum_{n>=1} n! x^n
    return alien.factorial_element(N) - 1


def _simple_analytic_part(N: int) -> Series:
    x = Series.x(N)
    return (x - x * x) / (1 + x)


@lru_cache(maxsize=16)
def _simple_chain(N: int) -> AlienElement:
    # (F - F^2)/(1 + F) = x + S(F)  =>  S = (x - x^2)/(1 + x) - F^{-1}
    Finv = alien.invert(_permutations_element(N))
    return alien.from_analytic(_simple_analytic_part(N), 1, 1) - Finv


@lru_cache(maxsize=16)
def _simple_closed(N: int) -> AlienElement:
    # u = (1 + x) S / x:
    # (1/(1+x)) (1 - x - u) / (1 + u/x) * exp(-(2 + u/x) / (1 - x - u))
    S = _simple_series(N)
    x = Series.x(N)
    u = ((1 + x) * S).div_x(1)
    u_x = u.div_x(1)
    num = 1 - x - u
    q, e = _exp_with_constant(-(2 + u_x) * num.truncate(u_x.order).reciprocal())
    asy = (1 + x).reciprocal() * num * (1 + u_x).reciprocal() * e
    return AlienElement(1, 1, S, asy, Prefactor(q, 0))


# -- public API --------------------------------------------------------------

_BUILDERS = {
    "chords": ("connected_chords", _chords_series, _chords_chain, _chords_closed),
    "monolithic": ("monolithic_chords", _monolithic_series, _monolithic_chain, _monolithic_closed),
    "simple-perms": ("simple_permutations", _simple_series, _simple_chain, _simple_closed),
}
APPLICATIONS = tuple(_BUILDERS)
_MIN_ORDER = {"chords": 1, "monolithic": 1, "simple-perms": 4}


def clear_caches() -> None:
    """Drop memoized series and expansions (used for cold timings)."""
    for fn in (_chords_series, _monolithic_series, _simple_series, _chords_chain, _chords_closed,
               _monolithic_chain, _monolithic_closed, _simple_chain, _simple_closed):
        fn.cache_clear()


def _table(name: str, series: Series, el: AlienElement, asy_terms: int, route: str) -> SequenceTable:
    if not el.series.agrees_with(series):
        raise RouteDisagreementError(f"{name}: the {route} route reproduces a different series")
    asy = el.asy.truncate(asy_terms - 1) if asy_terms > 0 else None
    return SequenceTable(name, el.alpha, el.beta, series, el.prefactor, asy, route)


def compute_table(app: str, order: int, asy_terms: int | None = None, route: str = CHAIN,
                  cross_check: bool = True) -> SequenceTable:
    """Series to ``order`` and the first ``asy_terms`` normalized asy coefficients of ``app``.

    The asymptotic routes run at order ``asy_terms + 4`` independently of
    ``order``.  With ``cross_check`` the other route is evaluated as well and
    any disagreement raises :class:`RouteDisagreementError`.
    """
    if app not in _BUILDERS:
        raise ValueError(f"unknown application {app!r}; choose from {', '.join(APPLICATIONS)}")
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}")
    if order < _MIN_ORDER[app]:
        raise ValueError(f"{app} needs order >= {_MIN_ORDER[app]}")
    if asy_terms is None:
        asy_terms = max(order - ORDER_MARGIN, 1)
    if asy_terms < 0:
        raise ValueError("asy_terms must be nonnegative")
    name, series_fn, chain, closed = _BUILDERS[app]
    series = series_fn(order)
    internal = max(asy_terms + ORDER_MARGIN, _MIN_ORDER[app] + ORDER_MARGIN)
    first, second = (chain, closed) if route == CHAIN else (closed, chain)
    table = _table(name, series, first(internal), asy_terms, route)
    if not cross_check:
        return table
    other_route = CLOSED if route == CHAIN else CHAIN
    other = _table(name, series, second(internal), asy_terms, other_route)
    check_routes(table, other)
    return SequenceTable(table.name, table.alpha, table.beta, table.series, table.asy_prefactor,
                         table.asy, table.provenance, other_route)


def connected_chords(N: int, asy_terms: int | None = None, route: str = CHAIN,
                     cross_check: bool = True) -> SequenceTable:
    """``C(x)``, counting connected chord diagrams, with ``alpha = 2, beta = 1/2``."""
    return compute_table("chords", N, asy_terms, route, cross_check)


def monolithic_chords(N: int, asy_terms: int | None = None, route: str = CHAIN,
                      cross_check: bool = True) -> SequenceTable:
    """``M(x) = C(x/(1-x)^2)``, counting monolithic chord diagrams."""
    return compute_table("monolithic", N, asy_terms, route, cross_check)


def simple_permutations(N: int, asy_terms: int | None = None, route: str = CHAIN,
                        cross_check: bool = True) -> SequenceTable:
    """``S(x)``, counting simple permutations, with ``alpha = beta = 1``."""
    return compute_table("simple-perms", N, asy_terms, route, cross_check)


def connectivity_probability(n: int, R: int) -> float:
    """Probability that a uniform chord diagram with ``n`` chords is connected.

    Uses the first ``R`` terms of the asymptotic expansion of ``C_n`` divided
    by ``(2n-1)!!``, all in log-scaled floating point.
    """
    if n < 1 or R < 1:
        raise ValueError("need n >= 1 and R >= 1")
    if R > n:
        raise ValueError(f"R={R} exceeds n={n}: Gamma(n + 1/2 - k) changes sign for k > n")
    table = connected_chords(R + ORDER_MARGIN, asy_terms=R, cross_check=False)
    if table.asy_terms < R:
        raise ValueError(f"only {table.asy_terms} asymptotic coefficients available, R={R}")
    denom = log_scale(math.prod(range(1, 2 * n, 2)))
    pref = table.asy_prefactor.value()
    total = 0.0
    for k in range(R):
        c = table.asy[k]
        if c:
            scale = gamma_scale(n - k, table.alpha, table.beta) / denom
            total += float(c) * pref * float(scale)
    return total


# -- OEIS comparison layer -----------------------------------------------------
#
# The series stay in their own convention; each view maps an OEIS index to
# the value that entry should carry.  ``None`` means "not determined by the
# table" (conventional initial terms).


def _a000699(table: SequenceTable, n: int):
    return table.series[n] if n >= 1 else None


def _a111111(table: SequenceTable, n: int):
    # A111111(n) = [x^(n-1)] (1 + 2x + S(x)/x)
    if n < 1:
        return None
    return {1: Fraction(1), 2: Fraction(2), 3: Fraction(0)}.get(n, table.series[n] if n >= 4 else None)


OEIS_VIEWS = {
    "A000699": ("connected_chords", _a000699),
    "A111111": ("simple_permutations", _a111111),
}


def oeis_terms(table: SequenceTable, anumber: str) -> dict[int, Fraction]:
    """The OEIS entry ``anumber`` as predicted by ``table``, keyed by OEIS index."""
    try:
        expected_name, view = OEIS_VIEWS[anumber]
    except KeyError:
        raise ValueError(f"no comparison view for {anumber}") from None
    if table.name != expected_name:
        raise ValueError(f"{anumber} describes {expected_name}, not {table.name}")
    out = {}
    for n in range(table.series.order + 2):
        try:
            v = view(table, n)
        except IndexError:
            continue
        if v is not None:
            out[n] = v
    return out


def compare_with_oeis(table: SequenceTable, anumber: str, data: dict[int, Fraction]) -> list[tuple[int, Fraction, Fraction]]:
    """Mismatches ``(index, table value, file value)`` on indices known to both."""
    expected = oeis_terms(table, anumber)
    return [(n, expected[n], data[n]) for n in sorted(expected.keys() & data.keys()) if expected[n] != data[n]]
