"""The ring of factorially divergent series and its asymptotic derivation.

An :class:`AlienElement` pairs a series ``f`` in the ring with scale
``(alpha, beta)`` with the generating series of its asymptotic expansion,

    f_n = sum_{k<R} alpha^(n+beta-k) Gamma(n+beta-k) [x^k](A f) + O(alpha^n Gamma(n+beta-R)).

``A f`` is stored as ``prefactor * asy`` where ``asy`` has exact rational
coefficients and the prefactor ``e^q (2 pi)^(p/2)`` carries the
transcendental constant.

Truncation orders: an identically vanishing ``asy`` is treated as exact (it
never limits the order of a result).  Every other term follows the
min-of-operands rule; chain-rule terms lose two orders because the
exponential correction divides by ``x^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .records import format_rational, parse_rational
from .series import Series, SeriesError, to_fraction

__all__ = [
    "Prefactor",
    "CANONICAL",
    "AlienElement",
    "AlienError",
    "ParameterMismatchError",
    "IncompatiblePrefactorError",
    "from_analytic",
    "identity",
    "factorial_element",
    "double_factorial_element",
    "add",
    "mul",
    "beta_shift_up",
    "beta_shift_down",
    "derivative",
    "compose_with_analytic_outer",
    "compose",
    "invert",
    "solve_outer_asy",
    "ode_residual",
    "asy_operator",
    "chain_correction",
]


class AlienError(ValueError):
    pass


class ParameterMismatchError(AlienError):
    """Operands live in rings with different ``(alpha, beta)``."""


class IncompatiblePrefactorError(AlienError):
    """Two nonzero asymptotic terms carry different transcendental prefactors."""


@dataclass(frozen=True)
class Prefactor:
    """The constant ``e^exp_arg * (2 pi)^(sqrt_two_pi_pow / 2)``."""

    exp_arg: Fraction = Fraction(0)
    sqrt_two_pi_pow: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exp_arg", to_fraction(self.exp_arg))
        if int(self.sqrt_two_pi_pow) != self.sqrt_two_pi_pow:
            raise AlienError("the power of sqrt(2 pi) must be an integer")
        object.__setattr__(self, "sqrt_two_pi_pow", int(self.sqrt_two_pi_pow))

    def __mul__(self, other: Prefactor) -> Prefactor:
        return Prefactor(self.exp_arg + other.exp_arg, self.sqrt_two_pi_pow + other.sqrt_two_pi_pow)

    def inverse(self) -> Prefactor:
        return Prefactor(-self.exp_arg, -self.sqrt_two_pi_pow)

    def times_exp(self, q) -> Prefactor:
        return Prefactor(self.exp_arg + to_fraction(q), self.sqrt_two_pi_pow)

    @property
    def is_one(self) -> bool:
        return self.exp_arg == 0 and self.sqrt_two_pi_pow == 0

    def value(self) -> float:
        return math.exp(self.exp_arg) * (2 * math.pi) ** (self.sqrt_two_pi_pow / 2)

    def to_record(self) -> dict:
        return {"exp_arg": format_rational(self.exp_arg), "sqrt_two_pi_pow": self.sqrt_two_pi_pow}

    @classmethod
    def from_record(cls, rec: dict) -> Prefactor:
        return cls(parse_rational(rec["exp_arg"]), int(rec["sqrt_two_pi_pow"]))

    def __str__(self):
        parts = []
        if self.exp_arg:
            parts.append(f"e^({self.exp_arg})")
        if self.sqrt_two_pi_pow:
            parts.append(f"(2*pi)^({Fraction(self.sqrt_two_pi_pow, 2)})")
        return " * ".join(parts) or "1"


CANONICAL = Prefactor()


@dataclass(frozen=True)
class AlienElement:
    alpha: Fraction
    beta: Fraction
    series: Series
    asy: Series
    prefactor: Prefactor = field(default=CANONICAL)

    def __post_init__(self):
        alpha, beta = to_fraction(self.alpha), to_fraction(self.beta)
        if alpha <= 0 or beta <= 0:
            raise AlienError(f"alpha and beta must be positive, got alpha={alpha}, beta={beta}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        if self.asy.is_zero() and not self.prefactor.is_one:
            object.__setattr__(self, "prefactor", CANONICAL)

    @property
    def order(self) -> int:
        return self.series.order

    @property
    def asy_order(self) -> int:
        return self.asy.order

    @property
    def is_analytic(self) -> bool:
        """True when the asymptotic expansion vanishes identically."""
        return self.asy.is_zero()

    def asy_value(self, k: int) -> float:
        """k-th coefficient of ``A f`` as a float, prefactor included."""
        return float(self.asy[k]) * self.prefactor.value()

    # -- operators --------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, AlienElement):
            return other
        if isinstance(other, Series):
            return from_analytic(other, self.alpha, self.beta)
        try:
            c = to_fraction(other)
        except TypeError:
            return None
        return from_analytic(Series.constant(c, self.order), self.alpha, self.beta)

    def __add__(self, other):
        other = self._lift(other)
        return NotImplemented if other is None else add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._lift(other)
        return NotImplemented if other is None else add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (AlienElement, Series)):
            return mul(self, self._lift(other))
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def scale(self, c) -> AlienElement:
        c = to_fraction(c)
        return AlienElement(self.alpha, self.beta, self.series.scale(c), self.asy.scale(c), self.prefactor)

    # -- serialization ----------------------------------------------------

    def to_record(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "beta": format_rational(self.beta),
            "series": [format_rational(c) for c in self.series],
            "asy_prefactor": self.prefactor.to_record(),
            "asy": [format_rational(c) for c in self.asy],
        }

    @classmethod
    def from_record(cls, rec: dict) -> AlienElement:
        return cls(
            parse_rational(rec["alpha"]),
            parse_rational(rec["beta"]),
            Series([parse_rational(c) for c in rec["series"]]),
            Series([parse_rational(c) for c in rec["asy"]]),
            Prefactor.from_record(rec["asy_prefactor"]),
        )


# -- helpers ---------------------------------------------------------------


def _same_ring(*elements: AlienElement):
    a = elements[0]
    for b in elements[1:]:
        if (a.alpha, a.beta) != (b.alpha, b.beta):
            raise ParameterMismatchError(
                f"(alpha, beta) mismatch: ({a.alpha}, {a.beta}) vs ({b.alpha}, {b.beta})"
            )


def _combine(terms, zero_order: int) -> tuple[Prefactor, Series]:
    """Sum ``(prefactor, series)`` pairs; vanishing series are dropped."""
    live = [(p, s) for p, s in terms if s is not None and not s.is_zero()]
    if not live:
        return CANONICAL, Series.zero(zero_order)
    pref = live[0][0]
    total = live[0][1]
    for p, s in live[1:]:
        if p != pref:
            raise IncompatiblePrefactorError(
                f"cannot add asymptotic terms with prefactors {pref} and {p} exactly"
            )
        total = total + s
    return pref, total


def _require_diff_id(g: Series):
    if g.order < 1 or g[0] != 0 or g[1] != 1:
        raise AlienError("inner series must be tangent to the identity (g_0 = 0, g_1 = 1)")


def chain_correction(g: Series, alpha, beta) -> tuple[Fraction, Series]:
    """Split ``(x/g)^beta * exp((g - x)/(alpha x g))`` into ``e^q`` and a series with constant 1.

    ``q = g_2 / alpha``.  The series is known to order ``order(g) - 2``.
    """
    _require_diff_id(g)
    if g.order < 2:
        raise AlienError("the correction factor needs g known to order >= 2")
    u = g.div_x(1)
    exponent = (u - 1).div_x(1) * u.truncate(g.order - 2).reciprocal() / to_fraction(alpha)
    q = exponent[0]
    corr = u.truncate(g.order - 2).pow_rational(-to_fraction(beta)) * (exponent - q).exp()
    return q, corr


def asy_operator(s: Series, alpha, beta) -> Series:
    """``(1/alpha - beta x + x^2 d/dx) s`` to the order of ``s``."""
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    c = s.coeffs
    out = [c[0] / alpha]
    for k in range(1, len(c)):
        out.append(c[k] / alpha + (k - 1 - beta) * c[k - 1])
    return Series(out)


# -- constructors ----------------------------------------------------------


def from_analytic(f: Series, alpha, beta) -> AlienElement:
    """Element with vanishing asymptotic expansion (exponentially bounded coefficients)."""
    return AlienElement(alpha, beta, f, Series.zero(f.order))


def identity(order: int, alpha, beta) -> AlienElement:
    return from_analytic(Series.x(order), alpha, beta)


def factorial_element(order: int, asy_order: int | None = None) -> AlienElement:
    """``sum n! x^n`` in the ring with ``alpha = beta = 1``; ``A f = 1``."""
    f = Series.from_function(math.factorial, order)
    return AlienElement(1, 1, f, Series.one(order if asy_order is None else asy_order))


def _double_factorial(n: int) -> int:
    out = 1
    for k in range(1, 2 * n, 2):
        out *= k
    return out


def double_factorial_element(order: int, asy_order: int | None = None) -> AlienElement:
    """``I(x) = sum (2n-1)!! x^n`` with ``alpha = 2, beta = 1/2``; ``A I = 1/sqrt(2 pi)``."""
    f = Series.from_function(_double_factorial, order)
    asy = Series.one(order if asy_order is None else asy_order)
    return AlienElement(2, Fraction(1, 2), f, asy, Prefactor(0, -1))


# -- linear structure and Leibniz rule --------------------------------------


def add(a: AlienElement, b: AlienElement) -> AlienElement:
    _same_ring(a, b)
    series = a.series + b.series
    pref, asy = _combine([(a.prefactor, a.asy), (b.prefactor, b.asy)], series.order)
    return AlienElement(a.alpha, a.beta, series, asy, pref)


def mul(a: AlienElement, b: AlienElement) -> AlienElement:
    """Product; ``A(fg) = f A(g) + g A(f)``."""
    _same_ring(a, b)
    series = a.series * b.series
    terms = []
    if not b.is_analytic:
        terms.append((b.prefactor, a.series * b.asy))
    if not a.is_analytic:
        terms.append((a.prefactor, b.series * a.asy))
    pref, asy = _combine(terms, series.order)
    return AlienElement(a.alpha, a.beta, series, asy, pref)


# -- shifts and derivatives -------------------------------------------------


def beta_shift_up(a: AlienElement, m: int) -> AlienElement:
    """``f / x^m`` viewed in the ring with ``beta + m``; the expansion is unchanged."""
    if m < 0:
        raise AlienError("shift must be nonnegative")
    try:
        series = a.series.div_x(m)
    except SeriesError as exc:
        raise AlienError(str(exc)) from None
    return AlienElement(a.alpha, a.beta + m, series, a.asy, a.prefactor)


def beta_shift_down(a: AlienElement, m: int) -> AlienElement:
    """``x^m f`` viewed in the ring with ``beta - m`` (requires ``beta > m``)."""
    if m < 0:
        raise AlienError("shift must be nonnegative")
    if not a.beta > m:
        raise AlienError(f"beta={a.beta} must exceed the shift m={m}")
    return AlienElement(a.alpha, a.beta - m, a.series.mul_x(m), a.asy, a.prefactor)


def derivative(a: AlienElement) -> AlienElement:
    """``f'`` in the ring with ``beta + 2``.

    ``A_{beta+2} f' = A_beta (x^2 f') = (1/alpha - beta x + x^2 d/dx) A_beta f``.
    """
    if a.order < 1:
        raise AlienError("derivative needs a series of order >= 1")
    asy = asy_operator(a.asy, a.alpha, a.beta)
    return AlienElement(a.alpha, a.beta + 2, a.series.derivative(), asy, a.prefactor)


# -- composition -----------------------------------------------------------


def compose_with_analytic_outer(f: AlienElement, g: AlienElement) -> AlienElement:
    """``f(g(x))`` for analytic ``f``: ``A(f o g) = f'(g) A g``."""
    _same_ring(f, g)
    if not f.is_analytic:
        raise AlienError("outer series must have a vanishing asymptotic expansion; use compose")
    if g.series[0] != 0:
        raise AlienError("inner series must have zero constant term")
    series = f.series.compose(g.series)
    terms = []
    if not g.is_analytic:
        terms.append((g.prefactor, f.series.derivative().compose(g.series) * g.asy))
    pref, asy = _combine(terms, series.order)
    return AlienElement(f.alpha, f.beta, series, asy, pref)


def compose(f: AlienElement, g: AlienElement) -> AlienElement:
    """``f(g(x))`` for ``g`` tangent to the identity.

    ``A(f o g) = f'(g) A g + (x/g)^beta e^((g-x)/(alpha x g)) (A f)(g)``.
    """
    _same_ring(f, g)
    _require_diff_id(g.series)
    series = f.series.compose(g.series)
    terms = []
    if not g.is_analytic:
        terms.append((g.prefactor, f.series.derivative().compose(g.series) * g.asy))
    if not f.is_analytic:
        q, corr = chain_correction(g.series, f.alpha, f.beta)
        terms.append((f.prefactor.times_exp(q), corr * f.asy.compose(g.series)))
    pref, asy = _combine(terms, series.order)
    return AlienElement(f.alpha, f.beta, series, asy, pref)


def invert(g: AlienElement) -> AlienElement:
    """Compositional inverse ``h = g^{-1}``.

    ``A h = -h' (x/h)^beta e^((h-x)/(alpha x h)) (A g)(h)``.
    """
    _require_diff_id(g.series)
    h = g.series.comp_inverse()
    if g.is_analytic:
        return from_analytic(h, g.alpha, g.beta)
    q, corr = chain_correction(h, g.alpha, g.beta)
    asy = -(h.derivative() * corr * g.asy.compose(h))
    return AlienElement(g.alpha, g.beta, h, asy, g.prefactor.times_exp(q))


def solve_outer_asy(h: AlienElement, g: AlienElement, f_series: Series) -> tuple[Prefactor, Series]:
    """Asymptotic expansion of ``f`` from ``h = f o g`` and the expansions of ``h`` and ``g``.

    Rearranges the chain rule:
    ``A f = [(A h - f'(g) A g) (g/x)^beta e^(-(g-x)/(alpha x g))] o g^{-1}``.
    """
    _same_ring(h, g)
    _require_diff_id(g.series)
    check = f_series.compose(g.series)
    if not check.agrees_with(h.series):
        raise AlienError("f_series o g does not reproduce h on the shared order")
    terms = [(h.prefactor, h.asy)]
    if not g.is_analytic:
        terms.append((g.prefactor, -(f_series.derivative().compose(g.series) * g.asy)))
    pref, rest = _combine(terms, f_series.order)
    if rest.is_zero():
        return CANONICAL, rest
    q, corr = chain_correction(g.series, g.alpha, g.beta)
    ginv = g.series.comp_inverse()
    asy = (rest * corr.reciprocal()).compose(ginv)
    return pref.times_exp(-q), asy


def ode_residual(a: AlienElement, partials: list[Series]) -> Series:
    """``sum_l x^(2L-2l) partials[l] (1/alpha - beta x + x^2 d/dx)^l (A f)``.

    ``partials[l]`` is ``dF/dy_l`` evaluated along ``(x, f, f', ..., f^(L))``.
    The result is in units of ``a.prefactor`` and vanishes when ``f`` solves
    ``F = 0``.
    """
    if not partials:
        raise AlienError("need at least one partial derivative")
    L = len(partials) - 1
    powers = [a.asy]
    for _ in range(L):
        powers.append(asy_operator(powers[-1], a.alpha, a.beta))
    total = None
    for l, p in enumerate(partials):
        term = (p * powers[l]).mul_x(2 * L - 2 * l)
        total = term if total is None else total + term
    return total
