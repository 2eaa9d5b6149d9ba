"""Self-checks run by ``asyring verify``.

Every check yields a :class:`CheckResult`; randomized checks record the seed
of the failing instance so it can be replayed with ``--seed``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import alien
from .alien import AlienElement, Prefactor
from .applications import APPLICATIONS, compute_table
from .numeric import fit_asymptotics, remainder_order_check
from .series import Series, lagrange_coefficient

__all__ = [
    "CheckResult",
    "SUITES",
    "EXPECTED_ASY",
    "EXPECTED_SERIES",
    "random_series",
    "random_diff",
    "random_element",
    "identities",
    "applications",
    "remainders",
    "run_suite",
]

EXPECTED_ASY = {
    "chords": (
        Prefactor(-1, -1),
        ["1", "-5/2", "-43/8", "-579/16", "-44477/128", "-5326191/1280", "-180306541/3072",
         "-203331297947/215040", "-58726239094693/3440640"],
    ),
    "monolithic": (
        Prefactor(0, -1),
        ["1", "-4", "-6", "-154/3", "-1610/3", "-34588/5", "-4666292/45", "-553625626/315",
         "-1158735422/35"],
    ),
    "simple-perms": (
        Prefactor(-2, 0),
        ["1", "-4", "2", "-40/3", "-182/3", "-7624/15", "-202652/45", "-14115088/315",
         "-30800534/63", "-16435427656/2835"],
    ),
}

EXPECTED_SERIES = {
    "chords": (1, [1, 1, 4, 27, 248]),
    "simple-perms": (4, [2, 6, 46, 338, 2926]),
}

_ALPHAS = (Fraction(1), Fraction(2), Fraction(3, 2))
_BETAS = (Fraction(1, 2), Fraction(1), Fraction(2))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seed: int | None = None
    instances: int = 1

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" seed={self.seed}" if self.seed is not None else ""
        detail = f" {self.detail}" if self.detail else ""
        return f"{status} {self.name} instances={self.instances}{extra}{detail}"


# -- random instances ------------------------------------------------------


def _rational(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def random_series(rng: random.Random, order: int, start: int = 0) -> Series:
    return Series([0] * start + [_rational(rng) for _ in range(order + 1 - start)])


def random_diff(rng: random.Random, order: int) -> Series:
    """Random series with ``g_0 = 0``, ``g_1 = 1``."""
    return Series([0, 1] + [_rational(rng) for _ in range(order - 1)])


def random_element(rng: random.Random, order: int, alpha, beta, diff: bool = False,
                   prefactor: Prefactor = alien.CANONICAL) -> AlienElement:
    series = random_diff(rng, order) if diff else random_series(rng, order)
    return AlienElement(alpha, beta, series, random_series(rng, order), prefactor)


def _elements_equal(a: AlienElement, b: AlienElement) -> bool:
    if (a.alpha, a.beta) != (b.alpha, b.beta) or not a.series.agrees_with(b.series):
        return False
    if a.asy.truncate(min(a.asy_order, b.asy_order)).is_zero() and b.asy.truncate(
            min(a.asy_order, b.asy_order)).is_zero():
        return True
    return a.prefactor == b.prefactor and a.asy.agrees_with(b.asy)


def _embed(a: AlienElement, m: int) -> AlienElement:
    # same series viewed in the ring with beta + m
    return AlienElement(a.alpha, a.beta + m, a.series, a.asy.mul_x(m), a.prefactor)


# -- identity laws -----------------------------------------------------------


def _law_series_ring(rng, order):
    f, g, h = (random_series(rng, order) for _ in range(3))
    return (f * g) * h == f * (g * h) and f * (g + h) == f * g + f * h and f * g == g * f


def _law_series_composition(rng, order):
    f = random_series(rng, order)
    g, h = random_diff(rng, order), random_diff(rng, order)
    return f.compose(g).compose(h) == f.compose(g.compose(h))


def _law_series_inverse(rng, order):
    g = random_diff(rng, order)
    gi = g.comp_inverse()
    x = Series.x(order)
    return gi.comp_inverse() == g and g.compose(gi) == x and gi.compose(g) == x


def _law_lagrange(rng, order):
    f = random_series(rng, order, start=1)
    g = random_diff(rng, order)
    direct = f.compose(g.comp_inverse())
    return all(lagrange_coefficient(f, g, n) == direct[n] for n in range(1, order + 1))


def _ring(rng):
    return rng.choice(_ALPHAS), rng.choice(_BETAS)


def _law_leibniz(rng, order):
    # analytic-outer chain rule and the Leibniz rule agree on f^2 and f/(1-f)
    alpha, beta = _ring(rng)
    f = random_element(rng, order, alpha, beta)
    f = AlienElement(alpha, beta, f.series.mul_x(1).truncate(order), f.asy, f.prefactor)
    x = Series.x(order)
    square = alien.compose_with_analytic_outer(alien.from_analytic(x * x, alpha, beta), f)
    if not _elements_equal(square, f * f):
        return False
    geo = alien.compose_with_analytic_outer(alien.from_analytic(x / (1 - x), alpha, beta), f)
    return _elements_equal(geo * (1 - f), f)


def _law_derivative(rng, order):
    alpha, beta = _ring(rng)
    f = random_element(rng, order, alpha, beta)
    g = random_element(rng, order, alpha, beta)
    lhs = alien.derivative(f * g)
    rhs = alien.derivative(f) * _embed(g, 2) + _embed(f, 2) * alien.derivative(g)
    return _elements_equal(lhs, rhs)


def _law_alien_inverse(rng, order):
    alpha, beta = _ring(rng)
    g = random_element(rng, order, alpha, beta, diff=True)
    gi = alien.invert(g)
    twice = alien.invert(gi)
    ident = alien.compose(g, gi)
    return (_elements_equal(twice, g) and ident.series.agrees_with(Series.x(order))
            and ident.asy.is_zero())


def _law_alien_associative(rng, order):
    alpha, beta = _ring(rng)
    h = random_element(rng, order, alpha, beta, diff=True)
    qh = h.series[2] / alpha
    g = random_element(rng, order, alpha, beta, diff=True, prefactor=Prefactor(-qh, 0))
    qg = g.series[2] / alpha
    f = random_element(rng, order, alpha, beta, prefactor=Prefactor(-qg - qh, 0))
    return _elements_equal(alien.compose(alien.compose(f, g), h), alien.compose(f, alien.compose(g, h)))


def _law_conjugation(rng, order):
    # A(f o g) recovered from h = f o g by solving for the outer expansion
    alpha, beta = _ring(rng)
    g = random_element(rng, order, alpha, beta, diff=True)
    f = random_element(rng, order, alpha, beta, prefactor=Prefactor(-g.series[2] / alpha, 0))
    h = alien.compose(f, g)
    pref, asy = alien.solve_outer_asy(h, g, f.series)
    return pref == f.prefactor and asy.agrees_with(f.asy)


IDENTITY_LAWS = {
    "series.ring_laws": _law_series_ring,
    "series.composition_associative": _law_series_composition,
    "series.inverse_involution": _law_series_inverse,
    "series.lagrange_matches_inverse": _law_lagrange,
    "alien.leibniz_vs_analytic_chain": _law_leibniz,
    "alien.derivative_leibniz": _law_derivative,
    "alien.inverse_involution": _law_alien_inverse,
    "alien.composition_associative": _law_alien_associative,
    "alien.solve_outer_recovers_f": _law_conjugation,
}


def identities(seed: int = 0, instances: int = 25, orders=(10, 11, 12)) -> list[CheckResult]:
    """Each law on ``instances`` random inputs; instance ``i`` uses seed ``seed + i``."""
    out = []
    for name, law in IDENTITY_LAWS.items():
        failed = None
        for i in range(instances):
            s = seed + i
            rng = random.Random(f"{name}:{s}")
            if not law(rng, orders[i % len(orders)]):
                failed = s
                break
        out.append(CheckResult(name, failed is None, seed=seed if failed is None else failed,
                               instances=instances))
    return out


# -- applications ------------------------------------------------------------


def applications(asy_terms: int = 10) -> list[CheckResult]:
    out = []
    for app in APPLICATIONS:
        pref, expected = EXPECTED_ASY[app]
        try:
            t = compute_table(app, len(expected) + 4, len(expected))
        except ArithmeticError as exc:
            out.append(CheckResult(f"{app}.routes_agree", False, str(exc)))
            continue
        out.append(CheckResult(f"{app}.routes_agree", True, f"{t.provenance} = {t.checked_against}"))
        got = [str(c) for c in t.asy]
        ok = got == expected and t.asy_prefactor == pref
        detail = "" if ok else f"got prefactor {t.asy_prefactor}, coefficients {got}"
        out.append(CheckResult(f"{app}.asy_table", ok, detail))
        if app in EXPECTED_SERIES:
            start, values = EXPECTED_SERIES[app]
            got_s = [t.series[start + i] for i in range(len(values))]
            out.append(CheckResult(f"{app}.series_prefix", got_s == values,
                                   "" if got_s == values else f"got {got_s}"))
    return out


# -- remainders --------------------------------------------------------------


def remainders(N: int = 200, R: int = 5) -> list[CheckResult]:
    out = []
    for app in APPLICATIONS:
        t = compute_table(app, N, R + 2)
        rep = remainder_order_check(list(t.series), t.element(), R)
        out.append(CheckResult(f"{app}.remainder_R{R}", rep.passed,
                               f"max rho {rep.lower_max:.4g} -> {rep.upper_max:.4g}"))
        fit = fit_asymptotics(list(t.series), t.alpha, t.beta, 3)
        fitted = AlienElement(t.alpha, t.beta, t.series, Series([Fraction(c) for c in fit.estimates]))
        rep = remainder_order_check(list(t.series), fitted, 3)
        out.append(CheckResult(f"{app}.fitted_remainder_R3", rep.passed,
                               f"max rho {rep.lower_max:.4g} -> {rep.upper_max:.4g}"))
    return out


SUITES = {
    "identities": identities,
    "applications": applications,
    "remainders": remainders,
}


def run_suite(name: str, seed: int = 0, instances: int = 25) -> tuple[list[CheckResult], float]:
    start = time.perf_counter()
    if name == "identities":
        results = identities(seed, instances)
    else:
        results = SUITES[name]()
    return results, time.perf_counter() - start
