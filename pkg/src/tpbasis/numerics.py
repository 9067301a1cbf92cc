"""Scalar backends: exact rationals and fixed-digit decimals.

Rationals are :class:`fractions.Fraction`; high-precision reals are
:class:`decimal.Decimal` values produced under the context carried by a
:class:`PrecisionConfig`.  The transcendental functions here (pi, sin, cos)
are computed from series with guard digits, so the decimal backend has no
dependency beyond the standard library.
"""

from __future__ import annotations

import decimal
import os
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Union

Scalar = Union[Fraction, Decimal]

GUARD_DIGITS = 10
DEFAULT_DIGITS = 100
DIGITS_ENV = "TPBASIS_DIGITS"


@dataclass(frozen=True)
class PrecisionConfig:
    """Working precision for the decimal backend.

    ``digits`` is the contract; arithmetic runs with ``digits + guard``
    significant digits and comparisons use ``10**(-digits + 10)``.
    """

    digits: int = DEFAULT_DIGITS
    guard: int = GUARD_DIGITS

    def __post_init__(self):
        if self.digits < 16:
            raise ValueError(f"digits must be >= 16, got {self.digits}")
        if self.guard < GUARD_DIGITS:
            raise ValueError(f"guard must be >= {GUARD_DIGITS}, got {self.guard}")

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard

    @property
    def context(self) -> decimal.Context:
        return _context(self.working_digits)

    @property
    def tolerance(self) -> Decimal:
        return Decimal(1).scaleb(-self.digits + 10)

    def scaled_tolerance(self, shift: int) -> Decimal:
        """``10**(-digits + shift)``; e.g. ``shift=15`` for harness inequalities."""
        return Decimal(1).scaleb(-self.digits + shift)


@lru_cache(maxsize=None)
def _context(prec: int) -> decimal.Context:
    return decimal.Context(prec=prec, rounding=decimal.ROUND_HALF_EVEN,
                           Emax=decimal.MAX_EMAX, Emin=decimal.MIN_EMIN)


def default_config() -> PrecisionConfig:
    """Config honouring the ``TPBASIS_DIGITS`` environment variable."""
    raw = os.environ.get(DIGITS_ENV)
    return PrecisionConfig(int(raw)) if raw else PrecisionConfig()


def is_rational(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and finite Decimals exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Decimal)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_decimal(x, cfg: PrecisionConfig) -> Decimal:
    """Round ``x`` to the working precision of ``cfg``."""
    ctx = cfg.context
    if isinstance(x, Decimal):
        return ctx.plus(x)
    if isinstance(x, int):
        return ctx.create_decimal(x)
    if isinstance(x, Fraction):
        return ctx.divide(Decimal(x.numerator), Decimal(x.denominator))
    if isinstance(x, str):
        return to_decimal(Fraction(x) if "/" in x else Decimal(x), cfg)
    raise TypeError(f"cannot convert {type(x).__name__} to Decimal")


def rational_to_decimal(x, cfg: PrecisionConfig) -> Decimal:
    """Round ``x`` half-even to ``cfg.digits`` places after the decimal point.

    The result is within ``10**-digits`` of ``x`` whatever its magnitude.
    """
    x = as_fraction(x)
    scaled = round(x * 10**cfg.digits)
    return Decimal(f"{scaled}e{-cfg.digits}")


# -- serialization ---------------------------------------------------------

def format_rational(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Decimal, cfg: PrecisionConfig | None = None) -> str:
    """Signed decimal string; with ``cfg`` the value is rounded to ``cfg.digits`` significant digits."""
    if cfg is not None:
        x = _context(cfg.digits).plus(x)
    text = format(x, "e") if x and (x.adjusted() < -6 or x.adjusted() > 30) else format(x, "f")
    return text if text.startswith("-") else "+" + text


def format_scalar(x, cfg: PrecisionConfig | None = None) -> str:
    if is_rational(x):
        return format_rational(x)
    return format_decimal(x, cfg)


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`: ``"p/q"`` gives a Fraction, anything else a Decimal."""
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    if any(c in text for c in ".eE"):
        return Decimal(text)
    return Fraction(int(text))


# -- transcendental functions ----------------------------------------------

def _arctan_inverse(m: int, scale: int) -> int:
    """Fixed-point ``arctan(1/m) * scale`` by its alternating series."""
    total = 0
    power = scale // m
    m2 = m * m
    k = 0
    while power:
        term = power // (2 * k + 1)
        total += -term if k % 2 else term
        power //= m2
        k += 1
    return total


@lru_cache(maxsize=32)
def _pi_digits(prec: int) -> Decimal:
    extra = 10
    scale = 10 ** (prec + extra)
    fixed = 4 * (4 * _arctan_inverse(5, scale) - _arctan_inverse(239, scale))
    return _context(prec).divide(Decimal(fixed), Decimal(scale))


def pi(cfg: PrecisionConfig) -> Decimal:
    """pi at working precision (Machin's formula, cached per precision)."""
    return _pi_digits(cfg.working_digits)


def _taylor(x: Decimal, start: Decimal, first_k: int, ctx: decimal.Context) -> Decimal:
    # sum_{j>=0} (-1)^j x^(2j+first_k) / (2j+first_k)!
    x2 = ctx.multiply(x, x)
    term = start
    total = start
    k = first_k
    eps = Decimal(1).scaleb(-ctx.prec - 2)
    while True:
        term = ctx.divide(ctx.multiply(ctx.minus(term), x2), Decimal((k + 1) * (k + 2)))
        k += 2
        if abs(term) < eps:
            return total
        total = ctx.add(total, term)


def trig(f: str, x, cfg: PrecisionConfig) -> Decimal:
    """``sin`` or ``cos`` of ``x`` to ``cfg.digits`` significant digits.

    The argument is reduced modulo pi/2 using pi carried to extra digits in
    proportion to ``|x|``, then a Taylor series runs on ``[-pi/4, pi/4]``.
    """
    if f not in ("sin", "cos"):
        raise ValueError(f"unknown trigonometric function {f!r}")
    x = x if isinstance(x, Decimal) else to_decimal(x, cfg)
    if not x:
        return Decimal(0) if f == "sin" else Decimal(1)
    work = cfg.working_digits + 10 + max(0, x.adjusted())
    ctx = _context(work)
    half_pi = ctx.divide(_pi_digits(work), 2)
    quadrant = int(ctx.divide(x, half_pi).to_integral_value(decimal.ROUND_HALF_EVEN))
    r = ctx.subtract(x, ctx.multiply(Decimal(quadrant), half_pi))
    # sin(r + q*pi/2) and cos(r + q*pi/2) cycle through (+-)sin r, (+-)cos r
    shift = quadrant + (1 if f == "cos" else 0)
    use_cos = shift % 2 == 1
    negate = shift % 4 >= 2
    value = _taylor(r, Decimal(1), 0, ctx) if use_cos else _taylor(r, r, 1, ctx)
    return cfg.context.minus(value) if negate else cfg.context.plus(value)


def sin(x, cfg: PrecisionConfig) -> Decimal:
    return trig("sin", x, cfg)


def cos(x, cfg: PrecisionConfig) -> Decimal:
    return trig("cos", x, cfg)


def sqrt(x, cfg: PrecisionConfig) -> Decimal:
    x = x if isinstance(x, Decimal) else to_decimal(x, cfg)
    return cfg.context.sqrt(x)
