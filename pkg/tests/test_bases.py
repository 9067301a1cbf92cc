import decimal
import random
from decimal import Decimal
from fractions import Fraction

import mpmath
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from tpbasis import numerics
from tpbasis.bases import (DP, Bernstein, BSpline, CosineEven, DomainError, RationalBasis,
                           SaidBall, TrigPoly, basis_from_json, bspline_basis, evaluate,
                           rationalize)
from tpbasis.numerics import PrecisionConfig

from oracles import T, dp_oracle, said_ball_oracle, substitute

fractions01 = st.fractions(min_value=0, max_value=1, max_denominator=1000)


def test_bernstein_half():
    assert evaluate(Bernstein(2), Fraction(1, 2)) == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]


@pytest.mark.parametrize("n", [1, 3, 6])
def test_bernstein_left_endpoint(n):
    b = Bernstein(n, Fraction(-2), Fraction(5))
    assert evaluate(b, Fraction(-2)) == [1] + [0] * n
    assert evaluate(b, Fraction(5)) == [0] * n + [1]


def test_bernstein_interval_matches_affine_map():
    b = Bernstein(4, Fraction(1), Fraction(3))
    for t in (Fraction(1), Fraction(3, 2), Fraction(7, 3)):
        assert evaluate(b, t) == evaluate(Bernstein(4), (t - 1) / 2)


def test_said_ball_three_at_half():
    assert evaluate(SaidBall(3), Fraction(1, 2)) == [Fraction(1, 4)] * 4


def test_dp_two_at_half():
    assert evaluate(DP(2), Fraction(1, 2)) == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]


@pytest.mark.parametrize("n", range(1, 9))
def test_said_ball_matches_symbolic(n):
    polys = said_ball_oracle(n)
    for t in (Fraction(0), Fraction(1, 7), Fraction(2, 5), Fraction(1, 2), Fraction(9, 10), Fraction(1)):
        assert evaluate(SaidBall(n), t) == substitute(polys, t)


@pytest.mark.parametrize("n", range(2, 9))
def test_dp_matches_symbolic(n):
    polys = dp_oracle(n)
    assert sp.expand(sum(polys)) == 1
    for t in (Fraction(0), Fraction(1, 7), Fraction(2, 5), Fraction(1, 2), Fraction(9, 10), Fraction(1)):
        assert evaluate(DP(n), t) == substitute(polys, t)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_alternative_middle_exponent_breaks_unity(n):
    # one power higher in the odd-degree bracket leaves 1 + t(1-t) (n=3) etc.
    polys = dp_oracle(n, middle_exponent=(n + 1) // 2 + 1)
    assert sp.expand(sum(polys)) != 1


def test_dp_degree_one():
    assert evaluate(DP(1), Fraction(1, 3)) == [Fraction(2, 3), Fraction(1, 3)]


@pytest.mark.parametrize("n", range(1, 4))
def test_low_degree_coincidences(n):
    # for n <= 3 Said-Ball and DP span the same space as Bernstein with simple relations
    for t in (Fraction(1, 3), Fraction(3, 4)):
        assert sum(evaluate(DP(n), t)) == 1
        assert sum(evaluate(SaidBall(n), t)) == 1
    if n <= 2:
        assert evaluate(SaidBall(n), Fraction(1, 3)) == evaluate(Bernstein(n), Fraction(1, 3))


@given(fractions01, st.integers(0, 8))
def test_polynomial_bases_partition_and_sign(t, n):
    for basis in (Bernstein(n), SaidBall(n)) + ((DP(n),) if n >= 1 else ()):
        values = evaluate(basis, t)
        assert len(values) == n + 1
        assert sum(values) == 1
        assert all(v >= 0 for v in values)


@pytest.mark.parametrize("cls", [Bernstein, SaidBall, DP])
@pytest.mark.parametrize("n", range(1, 9))
def test_endpoint_interpolation(cls, n):
    assert evaluate(cls(n), Fraction(0))[0] == 1
    assert evaluate(cls(n), Fraction(1))[n] == 1


def test_rational_bernstein_unit_weights():
    r = rationalize(Bernstein(5), [1] * 6)
    for t in (Fraction(0), Fraction(1, 3), Fraction(4, 5)):
        assert evaluate(r, t) == evaluate(Bernstein(5), t)


def test_rational_said_ball_unit_weights():
    assert evaluate(rationalize(SaidBall(3), [1, 1, 1, 1]), Fraction(1, 2)) == [Fraction(1, 4)] * 4


def test_rational_dp_weighted():
    assert evaluate(rationalize(DP(2), [1, 2, 1]), Fraction(1, 2)) == [Fraction(1, 6), Fraction(2, 3), Fraction(1, 6)]


def test_rational_formula_pointwise(rng):
    for _ in range(30):
        n = rng.randint(1, 8)
        base = rng.choice([Bernstein(n), SaidBall(n), DP(n)])
        w = [Fraction(rng.randint(1, 1000)) for _ in range(n + 1)]
        t = Fraction(rng.randint(0, 97), 97)
        u = evaluate(base, t)
        total = sum(wi * ui for wi, ui in zip(w, u))
        assert evaluate(rationalize(base, w), t) == [wi * ui / total for wi, ui in zip(w, u)]


@pytest.mark.parametrize("weights", [[1, 0, 1], [1, -1, 2], [1, 1]])
def test_rationalize_rejects_bad_weights(weights):
    with pytest.raises(ValueError):
        rationalize(Bernstein(2), weights)


def test_domain_errors():
    with pytest.raises(DomainError):
        evaluate(Bernstein(2), Fraction(3, 2))
    with pytest.raises(DomainError):
        evaluate(SaidBall(2), Fraction(-1, 10))


def test_bspline_indicator():
    assert bspline_basis(0, [0, 1], Fraction(1, 2)) == [1]


def test_bspline_linear_bezier():
    assert bspline_basis(1, [0, 0, 1, 1], Fraction(1, 2)) == [Fraction(1, 2), Fraction(1, 2)]


@given(fractions01)
def test_bspline_quadratic_bezier(t):
    assert bspline_basis(2, [0, 0, 0, 1, 1, 1], t) == evaluate(Bernstein(2), t)


def test_bspline_uniform_cubic_midspan():
    # uniform cubic B-spline pieces at the centre of a span: 1/48, 23/48, 23/48, 1/48
    vals = bspline_basis(3, list(range(8)), Fraction(7, 2))
    assert vals == [Fraction(1, 48), Fraction(23, 48), Fraction(23, 48), Fraction(1, 48)]


@given(st.lists(st.fractions(min_value=0, max_value=10, max_denominator=8), min_size=2, max_size=7),
       st.integers(0, 3), st.fractions(min_value=0, max_value=1, max_denominator=50))
def test_bspline_partition_of_unity(inner, d, u):
    knots = [Fraction(0)] * (d + 1) + sorted(inner) + [Fraction(11)] * (d + 1)
    b = BSpline(d, knots)
    lo, hi = b.domain()
    t = lo + u * (hi - lo)
    values = evaluate(b, t)
    assert sum(values) == 1
    assert all(v >= 0 for v in values)


def test_bspline_right_endpoint_closed():
    b = BSpline(2, [0, 0, 0, 1, 2, 2, 2])
    assert evaluate(b, Fraction(2))[-1] == 1


def test_nurbs_partition(rng):
    b = BSpline(2, [0, 0, 0, 1, 2, 3, 3, 3])
    r = rationalize(b, [Fraction(rng.randint(1, 9)) for _ in range(b.dimension)])
    assert r.kind == "nurbs"
    for k in range(31):
        assert sum(evaluate(r, Fraction(k, 10))) == 1


def test_bspline_outside_span():
    with pytest.raises(DomainError):
        evaluate(BSpline(1, [0, 0, 1, 2, 2]), Fraction(5, 2))


def test_cosine_basis_against_mpmath(cfg):
    c = CosineEven(4)
    with mpmath.workdps(120):
        for frac in (Fraction(1, 7), Fraction(1, 2), Fraction(5, 6)):
            t = mpmath.pi * frac.numerator / frac.denominator
            ref = [mpmath.binomial(4, i) * mpmath.cos(t / 2) ** (2 * (4 - i)) * mpmath.sin(t / 2) ** (2 * i)
                   for i in range(5)]
            with decimal.localcontext(cfg.context):
                x = numerics.pi(cfg) * frac.numerator / frac.denominator
            got = evaluate(c, x, cfg)
            for g, r in zip(got, ref):
                assert abs(mpmath.mpf(str(g)) - r) < mpmath.mpf("1e-98")


def test_trig_coefficients_against_mpmath(cfg):
    n, a = 3, Fraction(1, 2)
    d = TrigPoly(n, a).coefficients(cfg)
    with mpmath.workdps(120):
        two_cos = 2 * mpmath.cos(mpmath.mpf(1) / 2)
        for i, di in enumerate(d):
            ref = sum(mpmath.binomial(n, i - k) * mpmath.binomial(i - k, k) * two_cos ** (i - 2 * k)
                      for k in range(i // 2 + 1))
            assert abs(mpmath.mpf(str(di)) - ref) < mpmath.mpf("1e-95") * ref


@pytest.mark.parametrize("n,a", [(1, Fraction(1, 3)), (2, Fraction(3, 4)), (4, Fraction(3, 2))])
def test_trig_partition_of_unity(n, a, cfg):
    b = TrigPoly(n, a)
    r = random.Random(n)
    for _ in range(20):
        t = to_point(a, r, cfg)
        values = evaluate(b, t, cfg)
        assert len(values) == 2 * n + 1
        with decimal.localcontext(cfg.context):
            assert abs(sum(values) - 1) <= Decimal("1e-90")
        assert all(v >= 0 for v in values)


def to_point(a, r, cfg):
    return numerics.to_decimal(a * Fraction(r.randint(-1000, 1000), 1000), cfg)


def test_trig_half_width_limits():
    with pytest.raises(ValueError):
        TrigPoly(2, Fraction(16, 10))
    with pytest.raises(ValueError):
        TrigPoly(2, Fraction(0))


def test_trig_evaluates_in_decimal(cfg):
    values = evaluate(TrigPoly(1, Fraction(1, 2)), Fraction(0), cfg)
    assert all(isinstance(v, Decimal) for v in values)


@pytest.mark.parametrize("basis", [
    Bernstein(3, Fraction(-1), Fraction(2)), SaidBall(5), DP(4), CosineEven(3),
    TrigPoly(2, Fraction(1, 4)), BSpline(2, [0, 0, 0, 1, 2, 2, 2]),
    RationalBasis(DP(3), (1, 2, 3, 4)), RationalBasis(BSpline(1, [0, 0, 1, 1]), (2, 5)),
])
def test_json_roundtrip(basis):
    assert basis_from_json(basis.to_json()) == basis
