import decimal
from decimal import Decimal
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from tpbasis import numerics
from tpbasis.numerics import (PrecisionConfig, format_decimal, format_rational, parse_scalar,
                              rational_to_decimal, to_decimal)


def long_division(p, q, places):
    """Truncated decimal expansion of p/q, digit by digit."""
    whole, rem = divmod(p, q)
    out = [str(whole), "."]
    for _ in range(places):
        rem *= 10
        d, rem = divmod(rem, q)
        out.append(str(d))
    return "".join(out)


def test_config_defaults():
    cfg = PrecisionConfig()
    assert cfg.digits == 100
    assert cfg.working_digits >= 110
    assert cfg.tolerance == Decimal("1e-90")


def test_config_rejects_low_precision():
    with pytest.raises(ValueError):
        PrecisionConfig(15)


def test_env_override(monkeypatch):
    monkeypatch.setenv("TPBASIS_DIGITS", "40")
    assert numerics.default_config().digits == 40


def test_half_at_100_digits():
    assert rational_to_decimal(Fraction(1, 2), PrecisionConfig(100)) == Decimal("0.5")


def test_third_at_20_digits():
    assert str(rational_to_decimal(Fraction(1, 3), PrecisionConfig(20))) == "0." + "3" * 20


def test_355_over_113_matches_long_division():
    got = rational_to_decimal(Fraction(355, 113), PrecisionConfig(30))
    ref = long_division(355, 113, 40)
    assert abs(Fraction(got) - Fraction(Decimal(ref))) <= Fraction(1, 10**30)
    assert str(got)[:31] == ref[:31]


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rational_roundtrip_within_bound(p, q):
    cfg = PrecisionConfig(50)
    x = Fraction(p, q)
    d = rational_to_decimal(x, cfg)
    assert abs(Fraction(parse_scalar(format_decimal(d))) - x) <= Fraction(1, 10**48)


def test_trig_zero(cfg):
    assert numerics.cos(Decimal(0), cfg) == 1
    assert numerics.sin(Decimal(0), cfg) == 0


def test_cos_pi_over_3(cfg):
    with decimal.localcontext(cfg.context):
        x = numerics.pi(cfg) / 3
    assert abs(numerics.cos(x, cfg) - Decimal("0.5")) < Decimal("1e-100")


def test_pi_against_mpmath(cfg):
    with mpmath.workdps(130):
        ref = Decimal(mpmath.nstr(mpmath.pi, 125, strip_zeros=False))
    assert abs(numerics.pi(cfg) - ref) < Decimal("1e-105")


@given(st.fractions(min_value=-50, max_value=50, max_denominator=10**4))
def test_sin_cos_against_mpmath(x):
    cfg = PrecisionConfig(60)
    with mpmath.workdps(90):
        s = Decimal(mpmath.nstr(mpmath.sin(mpmath.mpf(x.numerator) / x.denominator), 80, strip_zeros=False))
        c = Decimal(mpmath.nstr(mpmath.cos(mpmath.mpf(x.numerator) / x.denominator), 80, strip_zeros=False))
    d = to_decimal(x, cfg)
    assert abs(numerics.sin(d, cfg) - s) < Decimal("1e-60")
    assert abs(numerics.cos(d, cfg) - c) < Decimal("1e-60")


def test_pythagoras_on_random_points(cfg, rng):
    pi = numerics.pi(cfg)
    for _ in range(100):
        with decimal.localcontext(cfg.context):
            x = pi * Decimal(rng.random())
            one = numerics.sin(x, cfg) ** 2 + numerics.cos(x, cfg) ** 2
        assert abs(one - 1) <= cfg.tolerance


def test_sqrt(cfg):
    r = numerics.sqrt(Decimal(2), cfg)
    with decimal.localcontext(cfg.context):
        assert abs(r * r - 2) < Decimal("1e-105")


def test_rational_arithmetic_laws(rng):
    from conftest import rand_fraction
    for _ in range(200):
        a, b, c = (rand_fraction(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c


def test_scalar_serialization():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(2) == "2/1"
    assert parse_scalar("-1/2") == Fraction(-1, 2)
    assert format_decimal(Decimal("0.25")) == "+0.25"
    assert format_decimal(Decimal("-1.5")) == "-1.5"
    assert parse_scalar("+0.25") == Decimal("0.25")


def test_format_decimal_rounds_to_digits():
    cfg = PrecisionConfig(20)
    text = format_decimal(to_decimal(Fraction(2, 3), PrecisionConfig(40)), cfg)
    assert text == "+0.66666666666666666667"
