from __future__ import annotations

import math
from fractions import Fraction

import pytest

from asyring import alien
from asyring.applications import (
    APPLICATIONS,
    RouteDisagreementError,
    SequenceTable,
    check_routes,
    compare_with_oeis,
    compute_table,
    connected_chords,
    connectivity_probability,
    monolithic_chords,
    oeis_terms,
    simple_permutations,
)
from asyring.numeric import fit_asymptotics, remainder_order_check
from asyring.records import parse_sequence_text
from asyring.series import Series
from oracles import count_connected, count_monolithic, count_simple, double_factorial

F = Fraction
HALF = F(1, 2)
E1 = math.exp(-1)


def fr(*vals):
    return [F(v) for v in vals]


# -- exact tables --------------------------------------------------------------


def test_connected_chords_table():
    t = connected_chords(14, asy_terms=9)
    assert t.series.coeffs[:6] == tuple(fr(0, 1, 1, 4, 27, 248))
    assert t.asy_prefactor == alien.Prefactor(-1, -1)
    assert list(t.asy) == fr("1", "-5/2", "-43/8", "-579/16", "-44477/128", "-5326191/1280", "-180306541/3072",
                             "-203331297947/215040", "-58726239094693/3440640")
    assert t.checked_against == "closed-form"


def test_monolithic_table():
    t = monolithic_chords(14, asy_terms=9)
    assert t.asy_prefactor == alien.Prefactor(0, -1)
    assert list(t.asy) == fr("1", "-4", "-6", "-154/3", "-1610/3", "-34588/5", "-4666292/45", "-553625626/315",
                             "-1158735422/35")
    assert t.series[1] == 1


def test_simple_permutations_table():
    t = simple_permutations(14, asy_terms=10)
    assert t.series.coeffs[:9] == tuple(fr(0, 0, 0, 0, 2, 6, 46, 338, 2926))
    assert t.asy_prefactor == alien.Prefactor(-2, 0)
    assert list(t.asy) == fr("1", "-4", "2", "-40/3", "-182/3", "-7624/15", "-202652/45", "-14115088/315",
                             "-30800534/63", "-16435427656/2835")


@pytest.mark.parametrize("app", APPLICATIONS)
@pytest.mark.parametrize("route", ["chain-rule", "closed-form"])
def test_each_route_alone(app, route):
    t = compute_table(app, 16, 12, route=route, cross_check=False)
    both = compute_table(app, 16, 12)
    assert t.provenance == route and t.checked_against is None
    assert t.asy == both.asy and t.asy_prefactor == both.asy_prefactor


@pytest.mark.parametrize("app", APPLICATIONS)
def test_routes_agree_at_high_order(app):
    t = compute_table(app, 40, 30)
    assert t.asy_terms == 30


def test_zero_asy_terms():
    t = connected_chords(12, asy_terms=0)
    assert t.asy is None and t.asy_terms == 0
    assert t.to_record()["asy"] == []


def test_preconditions():
    with pytest.raises(ValueError):
        connected_chords(0)
    with pytest.raises(ValueError):
        simple_permutations(3)
    with pytest.raises(ValueError):
        compute_table("nope", 10)
    with pytest.raises(ValueError):
        compute_table("chords", 10, route="guess")


def test_route_disagreement_is_detected():
    t = connected_chords(12, asy_terms=6)
    asy = list(t.asy)
    asy[3] += 1
    tampered = SequenceTable(t.name, t.alpha, t.beta, t.series, t.asy_prefactor, Series(asy), "closed-form")
    with pytest.raises(RouteDisagreementError, match="coefficient 3"):
        check_routes(t, tampered)
    other_pref = SequenceTable(t.name, t.alpha, t.beta, t.series, alien.Prefactor(0, -1), t.asy, "closed-form")
    with pytest.raises(RouteDisagreementError, match="prefactor"):
        check_routes(t, other_pref)


def test_table_record_is_exact_strings():
    rec = simple_permutations(10, asy_terms=4).to_record()
    assert rec["series"][4] == "2/1"
    assert rec["asy"] == ["1/1", "-4/1", "2/1", "-40/3"]
    assert rec["asy_prefactor"] == {"exp_arg": "-2/1", "sqrt_two_pi_pow": 0}


# -- brute-force oracles -----------------------------------------------------------


def test_connected_chords_brute_force():
    t = connected_chords(5, asy_terms=0)
    assert [t.series[n] for n in range(1, 6)] == [count_connected(n) for n in range(1, 6)]


def test_monolithic_brute_force():
    t = monolithic_chords(5, asy_terms=0)
    assert t.series[1] == 1
    assert [t.series[n] for n in range(1, 6)] == [count_monolithic(n) for n in range(1, 6)]


def test_simple_permutations_brute_force():
    t = simple_permutations(8, asy_terms=0)
    assert [t.series[n] for n in range(4, 8)] == [count_simple(n) for n in range(4, 8)]
    assert [count_simple(n) for n in (1, 2, 3)] == [1, 2, 0]


def test_functional_equations():
    N = 20
    C = connected_chords(N, asy_terms=0).series
    I = Series.from_function(double_factorial, N)
    x = Series.x(N)
    assert I == 1 + C.compose(x * I * I)
    S = simple_permutations(N, asy_terms=0).series
    Fs = Series.from_function(math.factorial, N) - 1
    assert (Fs - Fs * Fs) / (1 + Fs) == x + S.compose(Fs)


def test_simple_outer_solve_cross_check():
    # third route: solve h = S o F for A S with h = (F - F^2)/(1+F) - x
    N = 14
    Fe = alien.factorial_element(N) - 1
    # quotient rule: A(u/(1+F)) = A(u)/(1+F) - u A(F)/(1+F)^2
    u = Fe - Fe * Fe
    inv = (1 + Fe.series).reciprocal()
    h_asy = u.asy * inv - u.series * Fe.asy * inv * inv
    h = alien.AlienElement(1, 1, u.series * inv - Series.x(N), h_asy)
    S = simple_permutations(N, asy_terms=0).series
    pref, asy = alien.solve_outer_asy(h, Fe, S)
    t = simple_permutations(N, asy_terms=8)
    assert pref == t.asy_prefactor
    assert asy.coeffs[:8] == t.asy.coeffs


# -- numbers ------------------------------------------------------------------------


def test_connectivity_probability_examples():
    t = connected_chords(201, asy_terms=0)
    exact50 = float(F(t.series[50], double_factorial(50)))
    # two terms leave the k = 2 term, about 2e-4 at n = 50
    k2 = E1 * 43 / 8 / (4 * 49.5 * 48.5)
    assert abs(connectivity_probability(50, 2) - exact50) == pytest.approx(k2, rel=0.1)
    assert abs(connectivity_probability(50, 3) - exact50) < 1e-4
    assert connectivity_probability(5000, 1) == pytest.approx(E1, rel=1e-14)
    p = connectivity_probability(200, 4)
    assert 200 * (p / E1 - 1) == pytest.approx(-5 / 4, rel=0.02)
    with pytest.raises(ValueError):
        connectivity_probability(3, 5)
    with pytest.raises(ValueError):
        connectivity_probability(0, 1)


def test_non_monolithic_probability():
    n = 100
    t = monolithic_chords(n, asy_terms=0)
    p = 1 - float(F(t.series[n], double_factorial(n)))
    assert p == pytest.approx(2 / n, rel=0.1)


def test_leading_constants_fit():
    c = connected_chords(200, asy_terms=0)
    rep = fit_asymptotics(list(c.series), 2, HALF, 1)
    assert rep.estimates[0] == pytest.approx(E1 / math.sqrt(2 * math.pi), rel=1e-6)
    s = simple_permutations(200, asy_terms=0)
    rep = fit_asymptotics(list(s.series), 1, 1, 1)
    assert rep.estimates[0] == pytest.approx(math.exp(-2), rel=1e-6)


@pytest.mark.parametrize("app", APPLICATIONS)
def test_partial_sums_converge(app):
    # relative error of the R = 5 partial sum decreases in n on [30, 60]
    t = compute_table(app, 60, 5)
    el = t.element()
    pref = t.asy_prefactor.value()
    errs = []
    for n in range(30, 61):
        total = sum(float(c) * pref * float(t.alpha) ** (n + float(t.beta) - k) * math.gamma(n + float(t.beta) - k)
                    for k, c in enumerate(el.asy))
        errs.append(abs(total / float(t.series[n]) - 1))
    drops = sum(b > a for a, b in zip(errs, errs[1:]))
    assert drops <= 1


@pytest.mark.parametrize("app", APPLICATIONS)
def test_fitted_remainder(app):
    t = compute_table(app, 200, 3)
    rep = fit_asymptotics(list(t.series), t.alpha, t.beta, 3)
    el = alien.AlienElement(t.alpha, t.beta, t.series, Series([F(c) for c in rep.estimates]))
    assert remainder_order_check(list(t.series), el, 3).passed


def test_ode_residual_chords():
    N = 14
    t = connected_chords(N, asy_terms=N - 3)
    el = t.element()
    C = t.series
    x = Series.x(N)
    # F(x, y0, y1) = 2 x y0 y1 - y0 (1 + y0) + x
    d0 = 2 * x * C.derivative() - 1 - 2 * C
    d1 = 2 * x * C
    res = alien.ode_residual(el, [d0, d1])
    assert res.order >= 8 and res.truncate(8).is_zero()


# -- OEIS comparison layer ----------------------------------------------------------


A000699_B = """# A000699 (excerpt)
0 1
1 1
2 1
3 4
4 27
5 248
6 2830
"""

A111111_B = """# A111111 (excerpt)
1 1
2 2
3 0
4 2
5 6
6 46
7 338
8 2926
"""


def test_oeis_chords():
    t = connected_chords(10, asy_terms=0)
    data = parse_sequence_text(A000699_B)
    assert compare_with_oeis(t, "A000699", data) == []
    data[5] = F(249)
    assert compare_with_oeis(t, "A000699", data) == [(5, 248, 249)]


def test_oeis_simple_permutations_convention():
    t = simple_permutations(10, asy_terms=0)
    data = parse_sequence_text(A111111_B)
    assert compare_with_oeis(t, "A111111", data) == []
    terms = oeis_terms(t, "A111111")
    # file index n carries [x^(n-1)] (1 + 2x + S(x)/x)
    assert [terms[n] for n in (1, 2, 3)] == [1, 2, 0]
    assert all(terms[n] == t.series[n] for n in range(4, 11))


def test_oeis_rejects_wrong_pairing():
    with pytest.raises(ValueError):
        oeis_terms(connected_chords(6, asy_terms=0), "A111111")
    with pytest.raises(ValueError):
        oeis_terms(connected_chords(6, asy_terms=0), "A999999")
