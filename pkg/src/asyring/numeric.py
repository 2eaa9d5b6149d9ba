"""Numerical evidence for asymptotic expansions of exact sequences.

Nothing here proves membership in the ring; it estimates the coefficients
``c_k`` of ``f_n ~ sum_k c_k alpha^(n+beta-k) Gamma(n+beta-k)`` from data
and checks that a claimed expansion leaves a remainder of the right order.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .alien import AlienElement
from .series import to_fraction

__all__ = [
    "LogScaled",
    "FitReport",
    "RemainderReport",
    "log_scale",
    "gamma_scale",
    "scaled_ratio",
    "richardson",
    "fit_asymptotics",
    "remainder_order_check",
    "InsufficientDataError",
]

log = logging.getLogger(__name__)

_LN2 = math.log(2)


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class LogScaled:
    """``sign * exp(log_magnitude)``; ``sign == 0`` means exactly zero."""

    sign: int
    log_magnitude: float = 0.0

    def __mul__(self, other: LogScaled) -> LogScaled:
        if not self.sign or not other.sign:
            return ZERO
        return LogScaled(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: LogScaled) -> LogScaled:
        if not other.sign:
            raise ZeroDivisionError("division by an exact zero")
        if not self.sign:
            return ZERO
        return LogScaled(self.sign * other.sign, self.log_magnitude - other.log_magnitude)

    def __float__(self) -> float:
        if not self.sign:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)


ZERO = LogScaled(0, 0.0)


def _log_int(n: int) -> float:
    b = n.bit_length()
    shift = max(0, b - 64)
    return math.log(n >> shift) + shift * _LN2


def log_scale(r) -> LogScaled:
    r = to_fraction(r)
    if r == 0:
        return ZERO
    sign = 1 if r > 0 else -1
    return LogScaled(sign, _log_int(abs(r.numerator)) - _log_int(r.denominator))


@lru_cache(maxsize=4096)
def _gamma_rational(x: Fraction) -> tuple[Fraction, int] | None:
    """``Gamma(x) = Q * sqrt(pi)^e`` with exact ``Q`` when ``x`` is a positive (half-)integer."""
    if x <= 0:
        return None
    if x.denominator == 1:
        return Fraction(math.factorial(int(x) - 1)), 0
    if x.denominator == 2:
        m = int(x - Fraction(1, 2))
        return Fraction(math.factorial(2 * m), 4**m * math.factorial(m)), 1
    return None


def gamma_scale(n: int, alpha, beta) -> LogScaled:
    """``log(alpha^(n+beta) Gamma(n+beta))``."""
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    x = n + beta
    if x <= 0:
        raise ValueError(f"Gamma scale needs n + beta > 0, got {x}")
    exact = _gamma_rational(x)
    if exact is not None:
        q, e = exact
        lg = log_scale(q).log_magnitude + e * 0.5 * math.log(math.pi)
    else:
        lg = math.lgamma(float(x))
    return LogScaled(1, float(x) * math.log(alpha) + lg)


def scaled_ratio(value, n: int, alpha, beta, k: int = 0) -> float:
    """``value / (alpha^(n+beta-k) Gamma(n+beta-k))`` as a float.

    Exact rational division where the scale factors as rational times a
    constant; log-scaled arithmetic otherwise.
    """
    alpha, beta, value = to_fraction(alpha), to_fraction(beta), to_fraction(value)
    x = n + beta - k
    exact = _gamma_rational(x)
    if exact is not None and beta.denominator <= 2:
        q, e = exact
        whole = math.floor(x)
        frac = x - whole
        rational = q * alpha**whole
        kappa = math.pi ** (0.5 * e) * float(alpha) ** float(frac)
        return float(value / rational) / kappa
    return float(log_scale(value) / gamma_scale(n - k, alpha, beta))


def _scale_quotient(n: int, alpha: Fraction, beta: Fraction, j: int, k: int) -> float:
    """``S_j(n) / S_k(n)`` for ``j < k`` where ``S_j(n) = alpha^(n+beta-j) Gamma(n+beta-j)``."""
    out = float(alpha) ** (k - j)
    base = float(n + beta - k)
    for i in range(k - j):
        out *= base + i
    return out


def _exact_scale_quotient(ref: int, n: int, alpha: Fraction, beta: Fraction, k: int) -> Fraction:
    """``S_0(ref) / S_k(n)`` as an exact rational (requires ``ref >= n - k``)."""
    m = n - k
    out = alpha ** (ref - m)
    for i in range(m, ref):
        out *= i + beta
    return out


def richardson(ns, values, growth: int = 0) -> tuple[float, float]:
    """Extrapolate ``values`` at nodes ``ns`` to ``n -> infinity``.

    The model is a polynomial of degree ``len(ns) - 1 - growth`` in ``1/n``
    plus ``growth`` terms ``n, ..., n^growth`` that soak up error terms which
    grow with ``n``.  Returns the constant term and the spread of the last
    extrapolation column: the largest deviation from the two fits of one
    order lower on the first and last ``len(ns) - 1`` nodes.
    """
    est = _fit_constant(ns, values, growth)
    if len(ns) - growth < 2:
        return est, math.inf
    lower = _fit_constant(ns[:-1], values[:-1], growth)
    upper = _fit_constant(ns[1:], values[1:], growth)
    return est, max(abs(est - lower), abs(est - upper))


def _fit_constant(ns, values, growth):
    scale = max(ns)
    t = np.array([scale / n for n in ns], dtype=float)
    inv_degree = len(ns) - 1 - growth
    cols = [t**-i for i in range(growth, 0, -1)] + [t**i for i in range(inv_degree + 1)]
    A = np.column_stack(cols)
    sol = np.linalg.solve(A, np.asarray(values, dtype=float))
    return float(sol[growth])


@dataclass
class FitReport:
    estimates: list[float]
    errors: list[float]
    n_range: tuple[int, int]
    nodes: list[int]
    extrap_order: int
    converged: list[bool]
    alpha: str = ""
    beta: str = ""

    @property
    def all_converged(self) -> bool:
        return all(self.converged)

    def to_json(self) -> str:
        d = asdict(self)
        d["n_range"] = list(self.n_range)
        return json.dumps(d, indent=2, sort_keys=True)


def _nodes(lo: int, hi: int, count: int) -> list[int]:
    if count == 1:
        return [hi]
    pts = sorted({round(lo + (hi - lo) * i / (count - 1)) for i in range(count)})
    if len(pts) < count:
        raise InsufficientDataError("window too small for the requested extrapolation order")
    return pts


def fit_asymptotics(seq, alpha, beta, R: int, extrap_order: int = 4, rtol: float = 1e-5) -> FitReport:
    """Estimate ``c_0, ..., c_{R-1}`` from ``seq[n] = f_n``.

    Coefficient ``k`` is the ``n -> infinity`` limit of
    ``(f_n - sum_{j<k} c_j S_j(n)) / S_k(n)``, extrapolated in ``1/n`` to
    order ``extrap_order`` from nodes spread over ``[N/2, N]``.  A coefficient is
    flagged unconverged when the spread exceeds ``rtol * max(1, |c_k|)``.
    """
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if R < 1:
        raise ValueError("R must be >= 1")
    seq = [to_fraction(v) for v in seq]
    if len(seq) < 4 * (R + extrap_order):
        raise InsufficientDataError(
            f"need at least {4 * (R + extrap_order)} terms for R={R}, order {extrap_order}; got {len(seq)}"
        )
    N = len(seq) - 1
    lo = N // 2
    while lo + beta - R <= 0:
        lo += 1
    estimates, errors, converged = [], [], []
    nodes = []
    # work in units of f_ref / S_0(ref): the normalized data f_n / f_ref is
    # exact, so the fit is scale-equivariant up to one final rounding
    ref = next((n for n in range(N, lo - 1, -1) if seq[n] != 0), None)
    if ref is None:
        return FitReport([0.0] * R, [0.0] * R, (lo, N), _nodes(lo, N, extrap_order + R), extrap_order,
                         [True] * R, str(alpha), str(beta))
    unit = scaled_ratio(seq[ref], ref, alpha, beta, 0)
    normalized = []
    for k in range(R):
        # k extra nodes absorb the (alpha n)^(k-j) growth of errors in earlier c_j
        nodes = _nodes(lo, N, extrap_order + 1 + k)
        vals = []
        for n in nodes:
            r = float(seq[n] / seq[ref] * _exact_scale_quotient(ref, n, alpha, beta, k))
            for j, cj in enumerate(normalized):
                r -= cj * _scale_quotient(n, alpha, beta, j, k)
            vals.append(r)
        est, err = richardson(nodes, vals, growth=k)
        normalized.append(est)
        est, err = est * unit, err * abs(unit)
        ok = math.isfinite(est) and err <= rtol * max(1.0, abs(est))
        estimates.append(est)
        errors.append(err)
        converged.append(ok)
        log.info("fit c_%d = %.12g +- %.3g (%s)", k, est, err, "converged" if ok else "NOT converged")
    return FitReport(estimates, errors, (lo, N), nodes, extrap_order, converged, str(alpha), str(beta))


@dataclass
class RemainderReport:
    passed: bool
    R: int
    lower_window: tuple[int, int]
    upper_window: tuple[int, int]
    lower_max: float
    upper_max: float
    ratios: dict[int, float] = field(repr=False, default_factory=dict)

    def __bool__(self):
        return self.passed


def remainder_order_check(seq, element: AlienElement, R: int, dps: int | None = None) -> RemainderReport:
    """Check ``f_n - sum_{k<R} c_k S_k(n) = O(alpha^n Gamma(n+beta-R))`` on the data.

    ``rho_n = |remainder| / (alpha^n Gamma(n+beta-R))`` is evaluated in
    multiprecision over the windows ``[N/4, N/2)`` and ``[N/2, N]``; the check
    passes when the upper-window maximum is at most twice the lower one.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    if element.asy_order < R - 1:
        raise ValueError(f"element expansion known to order {element.asy_order}, need {R - 1}")
    seq = [to_fraction(v) for v in seq]
    N = len(seq) - 1
    alpha, beta = element.alpha, element.beta
    start = N // 4
    while start + beta - R <= 0:
        start += 1
    mid = max(N // 2, start + 1)
    if N - mid < 1 or mid - start < 1:
        raise InsufficientDataError("sequence too short for two dyadic windows")
    # the remainder is smaller than f_n by roughly (alpha n)^R
    digits = int(R * math.log10(float(alpha) * N + 1)) + 40
    prec = dps if dps is not None else digits
    ratios: dict[int, float] = {}
    with mpmath.workdps(prec):
        a = mpmath.mpf(alpha.numerator) / alpha.denominator
        b = mpmath.mpf(beta.numerator) / beta.denominator
        pre = mpmath.exp(mpmath.mpf(element.prefactor.exp_arg.numerator) / element.prefactor.exp_arg.denominator)
        pre *= mpmath.sqrt(2 * mpmath.pi) ** element.prefactor.sqrt_two_pi_pow
        cs = [pre * mpmath.mpf(c.numerator) / c.denominator for c in element.asy.coeffs[:R]]
        floor = mpmath.mpf(10) ** (-(prec - 15))
        for n in range(start, N + 1):
            fn = mpmath.mpf(seq[n].numerator) / seq[n].denominator
            total = mpmath.mpf(0)
            for k, c in enumerate(cs):
                if c:
                    total += c * a ** (n + b - k) * mpmath.gamma(n + b - k)
            rem = abs(fn - total)
            if rem <= floor * (abs(fn) + abs(total)):
                rem = mpmath.mpf(0)
            ratios[n] = float(rem / (a**n * mpmath.gamma(n + b - R)))
    lower = max(ratios[n] for n in range(start, mid))
    upper = max(ratios[n] for n in range(mid, N + 1))
    passed = math.isfinite(lower) and math.isfinite(upper) and upper <= 2 * lower
    log.info("remainder R=%d: max rho %.6g on [%d,%d), %.6g on [%d,%d] -> %s",
             R, lower, start, mid, upper, mid, N, "pass" if passed else "FAIL")
    return RemainderReport(passed, R, (start, mid), (mid, N), lower, upper, ratios)
