"""Truncated formal power series with exact rational coefficients.

A :class:`Series` stores ``f_0, ..., f_N`` and stands for ``f mod x^(N+1)``.
Binary operations return the smaller of the two truncation orders so that no
emitted coefficient depends on the unknown tail of an operand.
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Series",
    "SeriesError",
    "add",
    "mul",
    "derivative",
    "reciprocal",
    "compose",
    "comp_inverse",
    "pow_rational",
    "exp_series",
    "log_series",
    "lagrange_coefficient",
    "to_fraction",
]


class SeriesError(ValueError):
    """Raised when an operation is undefined for the given series."""


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {value!r} as an exact rational coefficient")


def _common_denominator(coeffs):
    den = 1
    for c in coeffs:
        if c.denominator != 1:
            den = math.lcm(den, c.denominator)
    if den == 1:
        return [c.numerator for c in coeffs], 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def _int_convolve(a, b, n):
    """First ``n + 1`` coefficients of the product of two integer lists."""
    la, lb = min(len(a), n + 1), min(len(b), n + 1)
    a = a[:la]
    br = b[:lb][::-1]
    out = []
    for k in range(n + 1):
        lo = max(0, k - lb + 1)
        hi = min(k, la - 1)
        if lo > hi:
            out.append(0)
            continue
        # a[i] * b[k - i] for i in lo..hi
        out.append(sum(map(operator.mul, a[lo:hi + 1], br[lb - 1 - k + lo:lb - k + hi])))
    return out


def _mul_lists(a, b, n):
    ia, da = _common_denominator(a[:n + 1])
    ib, db = _common_denominator(b[:n + 1])
    prod = _int_convolve(ia, ib, n)
    den = da * db
    if den == 1:
        return [Fraction(c) for c in prod]
    return [Fraction(c, den) for c in prod]


class Series:
    """Power series ``sum f_n x^n`` known modulo ``x^(order+1)``.

    Instances are immutable; every operation returns a new series.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs, order: int | None = None):
        c = [to_fraction(v) for v in coeffs]
        if order is not None:
            if order < 0:
                raise SeriesError("truncation order must be nonnegative")
            c = c[:order + 1] + [Fraction(0)] * (order + 1 - len(c))
        if not c:
            raise SeriesError("a series needs at least one coefficient")
        self._c = tuple(c)

    @classmethod
    def _raw(cls, coeffs) -> Series:
        s = object.__new__(cls)
        s._c = tuple(coeffs)
        return s

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> Series:
        return cls._raw([Fraction(0)] * (order + 1))

    @classmethod
    def one(cls, order: int) -> Series:
        return cls.constant(1, order)

    @classmethod
    def constant(cls, value, order: int) -> Series:
        return cls([value], order)

    @classmethod
    def x(cls, order: int) -> Series:
        return cls.monomial(1, order)

    @classmethod
    def monomial(cls, k: int, order: int, coeff=1) -> Series:
        c = [Fraction(0)] * (order + 1)
        if k <= order:
            c[k] = to_fraction(coeff)
        return cls._raw(c)

    @classmethod
    def from_function(cls, fn, order: int) -> Series:
        """Series with coefficients ``fn(0), ..., fn(order)``."""
        return cls([fn(n) for n in range(order + 1)])

    # -- basic protocol ---------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    def __len__(self):
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self._c[n]
        if n < 0:
            raise IndexError("negative coefficient index")
        if n > self.order:
            raise IndexError(f"coefficient {n} is beyond truncation order {self.order}")
        return self._c[n]

    def __eq__(self, other):
        if isinstance(other, Series):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        body = ""
        for n, c in enumerate(self._c):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if n == 0 else ("x" if n == 1 else f"x^{n}")
            if not mono:
                term = str(a)
            elif a == 1:
                term = mono
            else:
                term = f"{a}*{mono}"
            body += f" {sign} {term}" if body else ("-" + term if c < 0 else term)
        return f"Series({body or '0'} + O(x^{self.order + 1}))"

    def is_zero(self) -> bool:
        return not any(self._c)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, ``None`` for the zero series."""
        for n, c in enumerate(self._c):
            if c:
                return n
        return None

    def truncate(self, order: int) -> Series:
        if order > self.order:
            raise SeriesError(f"cannot extend a series of order {self.order} to {order}")
        return Series._raw(self._c[:order + 1])

    def agrees_with(self, other: Series, order: int | None = None) -> bool:
        """Compare coefficients up to ``order`` (default: the shared order)."""
        m = min(self.order, other.order) if order is None else order
        if m > min(self.order, other.order):
            return False
        return self._c[:m + 1] == other._c[:m + 1]

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> Series | None:
        if isinstance(other, Series):
            return other
        try:
            return Series.constant(to_fraction(other), self.order)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = min(self.order, other.order)
        return Series._raw([a + b for a, b in zip(self._c[:n + 1], other._c[:n + 1])])

    __radd__ = __add__

    def __neg__(self):
        return Series._raw([-a for a in self._c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Series:
        c = to_fraction(c)
        return Series._raw([c * a for a in self._c])

    def __mul__(self, other):
        if isinstance(other, Series):
            n = min(self.order, other.order)
            return Series._raw(_mul_lists(self._c, other._c, n))
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.reciprocal()
        return self.scale(1 / to_fraction(other))

    def __rtruediv__(self, other):
        return self.reciprocal().scale(to_fraction(other))

    def __pow__(self, exponent):
        if isinstance(exponent, int) and exponent >= 0:
            result = Series.one(self.order)
            base = self
            e = exponent
            while e:
                if e & 1:
                    result = result * base
                e >>= 1
                if e:
                    base = base * base
            return result
        if isinstance(exponent, int):
            return self.reciprocal() ** (-exponent)
        return self.pow_rational(exponent)

    def mul_x(self, m: int = 1) -> Series:
        """``x^m f``; the known order grows by ``m``."""
        if m < 0:
            raise SeriesError("use div_x for negative shifts")
        return Series._raw((Fraction(0),) * m + self._c)

    def div_x(self, m: int = 1) -> Series:
        """``f / x^m``; requires the first ``m`` coefficients to vanish."""
        if m < 0:
            raise SeriesError("use mul_x for negative shifts")
        if m > self.order:
            raise SeriesError("not enough known coefficients to divide by x^%d" % m)
        if any(self._c[:m]):
            raise SeriesError(f"first {m} coefficients must vanish to divide by x^{m}")
        return Series._raw(self._c[m:])

    # -- analytic operations ----------------------------------------------

    def derivative(self) -> Series:
        if self.order < 1:
            raise SeriesError("derivative of an order-0 series carries no information")
        return Series._raw([n * self._c[n] for n in range(1, len(self._c))])

    def reciprocal(self) -> Series:
        f0 = self._c[0]
        if f0 == 0:
            raise SeriesError("reciprocal needs a nonzero constant term")
        n = self.order
        ints, den = _common_denominator(self._c)
        c = ints[0]
        # 1/F with F integral: g_k = G_k / c^(k+1), G_k = -sum_{j>=1} F_j c^(j-1) G_{k-j}
        scaled = [0] + [ints[j] * c ** (j - 1) for j in range(1, n + 1)]
        G = [1]
        for k in range(1, n + 1):
            G.append(-sum(map(operator.mul, scaled[1:k + 1], reversed(G))))
        return Series._raw([Fraction(den * G[k], c ** (k + 1)) for k in range(n + 1)])

    def compose(self, g: Series) -> Series:
        """``f(g(x))`` for ``g_0 = 0``, to order ``min(order(f), order(g))``."""
        if g._c[0] != 0:
            raise SeriesError("inner series of a composition must have zero constant term")
        n = min(self.order, g.order)
        f = self._c[:n + 1]
        if n == 0:
            return Series._raw(f)
        gc = list(g._c[:n + 1])
        # baby-step giant-step: f = sum_j B_j(g) * (g^m)^j with deg B_j < m
        m = max(1, math.isqrt(n + 1))
        powers = [[Fraction(1)] + [Fraction(0)] * n, gc]
        while len(powers) <= m:
            powers.append(_mul_lists(powers[-1], gc, n))
        giant = powers[m]
        blocks = (n + m) // m
        acc = [Fraction(0)] * (n + 1)
        for j in reversed(range(blocks)):
            if any(acc):
                acc = _mul_lists(acc, giant, n)
            for i in range(m):
                k = j * m + i
                if k > n:
                    break
                fk = f[k]
                if fk:
                    p = powers[i]
                    # g^i vanishes below x^i
                    for t in range(i, n + 1):
                        if p[t]:
                            acc[t] += fk * p[t]
        return Series._raw(acc)

    __call__ = compose

    def comp_inverse(self) -> Series:
        """Compositional inverse of ``g`` with ``g_0 = 0, g_1 = 1`` (Newton iteration)."""
        if self._c[0] != 0 or self.order < 1 or self._c[1] != 1:
            raise SeriesError("compositional inverse is defined here for g_0 = 0, g_1 = 1 only")
        n = self.order
        dg = self.derivative()
        h = Series.x(1)
        known = 1
        while known < n:
            target = min(2 * known, n)
            hp = Series(h._c, order=target)
            err = self.truncate(target).compose(hp) - Series.x(target)
            # err vanishes through x^known; correction = err / g'(h)
            e = err.div_x(known + 1)
            denom = dg.truncate(target - known - 1).compose(hp.truncate(target - known - 1))
            corr = (e * denom.reciprocal()).mul_x(known + 1)
            h = hp - corr
            known = target
        return h

    def pow_rational(self, r) -> Series:
        """``f^r`` for ``f_0 = 1`` via the binomial series (J.C.P. Miller recurrence)."""
        r = to_fraction(r)
        if self._c[0] != 1:
            raise SeriesError("rational powers need constant term 1")
        f = self._c
        h = [Fraction(1)]
        for n in range(1, len(f)):
            s = Fraction(0)
            for k in range(1, n + 1):
                if f[k]:
                    s += ((r + 1) * k - n) * f[k] * h[n - k]
            h.append(s / n)
        return Series._raw(h)

    def exp(self) -> Series:
        if self._c[0] != 0:
            raise SeriesError("exp_series needs zero constant term; factor e^c out separately")
        f = self._c
        h = [Fraction(1)]
        for n in range(1, len(f)):
            s = Fraction(0)
            for k in range(1, n + 1):
                if f[k]:
                    s += k * f[k] * h[n - k]
            h.append(s / n)
        return Series._raw(h)

    def log(self) -> Series:
        if self._c[0] != 1:
            raise SeriesError("log_series needs constant term 1")
        if self.order == 0:
            return Series.zero(0)
        q = self.derivative() * self.truncate(self.order - 1).reciprocal()
        return Series._raw([Fraction(0)] + [q._c[k] / (k + 1) for k in range(len(q._c))])


# functional spellings


def add(a: Series, b: Series) -> Series:
    return a + b


def mul(a: Series, b: Series) -> Series:
    return a * b


def derivative(f: Series) -> Series:
    return f.derivative()


def reciprocal(f: Series) -> Series:
    return f.reciprocal()


def compose(f: Series, g: Series) -> Series:
    return f.compose(g)


def comp_inverse(g: Series) -> Series:
    return g.comp_inverse()


def pow_rational(f: Series, r) -> Series:
    return f.pow_rational(r)


def exp_series(f: Series) -> Series:
    return f.exp()


def log_series(f: Series) -> Series:
    return f.log()


def lagrange_coefficient(f: Series, g: Series, n: int) -> Fraction:
    """``[x^n] f(g^{-1}(x))`` as ``(1/n) [x^(n-1)] f'(x) (x/g(x))^n``.

    Never forms ``g^{-1}``; serves as an independent check on
    :meth:`Series.comp_inverse`.
    """
    if g[0] != 0 or g.order < 1 or g[1] != 1:
        raise SeriesError("g must satisfy g_0 = 0 and g_1 = 1")
    if n < 1:
        raise SeriesError("n must be >= 1; the constant term of f(g^-1) is f_0")
    if n > min(f.order, g.order):
        raise SeriesError(f"n={n} exceeds the known order of f or g")
    m = n - 1
    ratio = g.div_x(1).truncate(m).reciprocal()
    t = f.derivative().truncate(m) * ratio ** n
    return t[m] / n
