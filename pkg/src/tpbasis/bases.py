"""Normalized totally positive function systems and their evaluation.

Polynomial and spline systems evaluate exactly at rational points and at
working precision at Decimal points.  The trigonometric systems always
evaluate in Decimal.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import comb
from typing import ClassVar, Sequence

from . import numerics
from .numerics import PrecisionConfig, as_fraction, format_rational, to_decimal


class DomainError(ValueError):
    """A point lies outside the domain of a basis."""


class BasisSystem:
    """Common interface of every function family."""

    kind: ClassVar[str] = ""
    polynomial: ClassVar[bool] = True

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    def domain(self, cfg: PrecisionConfig | None = None) -> tuple:
        raise NotImplementedError

    def _values(self, t, cfg: PrecisionConfig) -> list:
        raise NotImplementedError

    def _params(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"kind": self.kind, **self._params()}


def _check_n(n: int, least: int = 0) -> int:
    if not isinstance(n, int) or n < least:
        raise ValueError(f"degree must be an integer >= {least}, got {n!r}")
    return n


@dataclass(frozen=True)
class Bernstein(BasisSystem):
    n: int
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(1)
    kind: ClassVar[str] = "bernstein"

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if not self.b > self.a:
            raise ValueError("Bernstein interval needs b > a")

    @property
    def dimension(self) -> int:
        return self.n + 1

    def domain(self, cfg=None):
        return self.a, self.b

    def _values(self, t, cfg):
        a, b = _like(self.a, t, cfg), _like(self.b, t, cfg)
        n = self.n
        u, v = (t - a) / (b - a), (b - t) / (b - a)
        return [comb(n, i) * u**i * v ** (n - i) for i in range(n + 1)]

    def _params(self):
        return {"n": self.n, "a": format_rational(self.a), "b": format_rational(self.b)}


@dataclass(frozen=True)
class SaidBall(BasisSystem):
    n: int
    kind: ClassVar[str] = "said-ball"

    def __post_init__(self):
        _check_n(self.n)

    @property
    def dimension(self) -> int:
        return self.n + 1

    def domain(self, cfg=None):
        return Fraction(0), Fraction(1)

    def _values(self, t, cfg):
        n, h = self.n, self.n // 2
        s = 1 - t
        out = [None] * (n + 1)
        for i in range((n - 1) // 2 + 1):
            out[i] = comb(h + i, i) * t**i * s ** (h + 1)
        for i in range(h + 1, n + 1):
            out[i] = comb(h + n - i, n - i) * t ** (h + 1) * s ** (n - i)
        if n % 2 == 0:
            out[h] = comb(n, h) * t**h * s**h
        return out

    def _params(self):
        return {"n": self.n}


@dataclass(frozen=True)
class DP(BasisSystem):
    """The DP basis of degree ``n`` on [0, 1].

    For odd ``n`` the shared half-bracket of the two middle functions uses
    the power ``(n+1)/2``, the value at which the system sums to one.
    For ``n = 1`` the middle functions would overwrite the end ones, and the
    system is taken to be ``(1 - t, t)``.
    """

    n: int
    kind: ClassVar[str] = "dp"

    def __post_init__(self):
        _check_n(self.n, 1)

    @property
    def dimension(self) -> int:
        return self.n + 1

    def domain(self, cfg=None):
        return Fraction(0), Fraction(1)

    def _values(self, t, cfg):
        n = self.n
        s = 1 - t
        if n == 1:
            return [s, t]
        out = [None] * (n + 1)
        out[0] = s**n
        out[n] = t**n
        for i in range(1, n // 2):
            out[i] = t * s ** (n - i)
        for i in range((n + 1) // 2 + 1, n):
            out[i] = t**i * s
        if n % 2 == 0:
            k = n // 2 + 1
            out[n // 2] = 1 - t**k - s**k
        else:
            k = (n + 1) // 2
            bracket = (1 - t**k - s**k) / 2
            out[(n - 1) // 2] = t * s**k + bracket
            out[(n + 1) // 2] = bracket + t**k * s
        return out

    def _params(self):
        return {"n": self.n}


@dataclass(frozen=True)
class BSpline(BasisSystem):
    """B-splines of ``degree`` on ``knots``; ``len(knots) - degree - 1`` functions."""

    degree: int
    knots: tuple
    kind: ClassVar[str] = "bspline"

    def __post_init__(self):
        _check_n(self.degree)
        knots = tuple(as_fraction(k) for k in self.knots)
        object.__setattr__(self, "knots", knots)
        if len(knots) < self.degree + 2:
            raise ValueError("need at least degree + 2 knots")
        if any(x > y for x, y in zip(knots, knots[1:])):
            raise ValueError("knots must be nondecreasing")
        lo, hi = self.domain()
        if not lo < hi:
            raise ValueError("empty evaluation span [t_d, t_{n+1}]")

    @property
    def dimension(self) -> int:
        return len(self.knots) - self.degree - 1

    def domain(self, cfg=None):
        return self.knots[self.degree], self.knots[self.dimension]

    def _values(self, t, cfg):
        knots = [_like(k, t, cfg) for k in self.knots]
        return _cox_de_boor(self.degree, knots, t, self.dimension)

    def _params(self):
        return {"degree": self.degree, "knots": [format_rational(k) for k in self.knots]}


def _cox_de_boor(d: int, knots: Sequence, t, count: int) -> list:
    last = count  # index of the right end knot t_{n+1}
    span = None
    for j in range(d, last):
        if knots[j] <= t < knots[j + 1]:
            span = j
            break
    if span is None:
        # right end: close the last nonempty interval by its left limit
        span = max(j for j in range(d, last) if knots[j] < knots[last])
    zero = t - t
    row = [zero + 1 if i == span else zero for i in range(len(knots) - 1)]
    for k in range(1, d + 1):
        nxt = []
        for i in range(len(knots) - 1 - k):
            left = knots[i + k] - knots[i]
            right = knots[i + k + 1] - knots[i + 1]
            value = zero
            if left:  # 0/0 := 0
                value += (t - knots[i]) / left * row[i]
            if right:
                value += (knots[i + k + 1] - t) / right * row[i + 1]
            nxt.append(value)
        row = nxt
    return row[:count]


def bspline_basis(degree: int, knots: Sequence, t, cfg: PrecisionConfig | None = None) -> list:
    """Values ``N_{0,d}(t), ..., N_{n,d}(t)`` by the Cox-de Boor recursion."""
    return evaluate(BSpline(degree, tuple(knots)), t, cfg)


@dataclass(frozen=True)
class CosineEven(BasisSystem):
    """``C(n,i) cos^{2(n-i)}(t/2) sin^{2i}(t/2)`` on [0, pi]."""

    n: int
    kind: ClassVar[str] = "cosine-even"
    polynomial: ClassVar[bool] = False

    def __post_init__(self):
        _check_n(self.n)

    @property
    def dimension(self) -> int:
        return self.n + 1

    def domain(self, cfg=None):
        cfg = cfg or numerics.default_config()
        return Decimal(0), numerics.pi(cfg)

    def _values(self, t, cfg):
        half = t / 2
        c2 = numerics.cos(half, cfg) ** 2
        s2 = numerics.sin(half, cfg) ** 2
        n = self.n
        return [comb(n, i) * c2 ** (n - i) * s2**i for i in range(n + 1)]

    def _params(self):
        return {"n": self.n}


@dataclass(frozen=True)
class TrigPoly(BasisSystem):
    """Normalized B-basis of trigonometric polynomials of order ``n`` on [-A, A].

    The system has ``2n + 1`` functions; ``half_width`` is ``A`` with
    ``0 < A < pi/2``.
    """

    n: int
    half_width: Fraction
    kind: ClassVar[str] = "trig-poly"
    polynomial: ClassVar[bool] = False

    def __post_init__(self):
        _check_n(self.n, 1)
        a = as_fraction(self.half_width)
        object.__setattr__(self, "half_width", a)
        if not 0 < a < Fraction(3141592653589793, 2 * 10**15):
            raise ValueError("half_width must satisfy 0 < A < pi/2")

    @property
    def dimension(self) -> int:
        return 2 * self.n + 1

    def domain(self, cfg=None):
        return -self.half_width, self.half_width

    def coefficients(self, cfg: PrecisionConfig) -> list[Decimal]:
        """The normalizing constants ``d_0, ..., d_m``."""
        return trig_coefficients(self.n, self.half_width, cfg)

    def _values(self, t, cfg):
        a = to_decimal(self.half_width, cfg)
        m = 2 * self.n
        sin_a = numerics.sin(a, cfg)
        p = numerics.sin((a + t) / 2, cfg) / sin_a
        q = numerics.sin((a - t) / 2, cfg) / sin_a
        d = self.coefficients(cfg)
        return [d[i] * p**i * q ** (m - i) for i in range(m + 1)]

    def _params(self):
        return {"n": self.n, "half_width": format_rational(self.half_width)}


def trig_coefficients(n: int, half_width, cfg: PrecisionConfig) -> list[Decimal]:
    m = 2 * n
    with decimal.localcontext(cfg.context):
        two_cos = 2 * numerics.cos(to_decimal(as_fraction(half_width), cfg), cfg)
        return [
            sum(comb(n, i - k) * comb(i - k, k) * two_cos ** (i - 2 * k) for k in range(i // 2 + 1))
            for i in range(m + 1)
        ]


_RATIONAL_KINDS = {
    "bernstein": "rational-bernstein",
    "said-ball": "rational-said-ball",
    "dp": "rational-dp",
    "bspline": "nurbs",
}


@dataclass(frozen=True)
class RationalBasis(BasisSystem):
    """``w_i u_i / sum_j w_j u_j`` for a base system ``u`` and positive weights."""

    base: BasisSystem
    weights: tuple

    def __post_init__(self):
        if self.base.kind not in _RATIONAL_KINDS:
            raise ValueError(f"no rational variant of {self.base.kind!r}")
        weights = tuple(as_fraction(w) for w in self.weights)
        if len(weights) != self.base.dimension:
            raise ValueError(f"expected {self.base.dimension} weights, got {len(weights)}")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be strictly positive")
        object.__setattr__(self, "weights", weights)

    @property
    def kind(self) -> str:  # type: ignore[override]
        return _RATIONAL_KINDS[self.base.kind]

    @property
    def dimension(self) -> int:
        return self.base.dimension

    def domain(self, cfg=None):
        return self.base.domain(cfg)

    def _values(self, t, cfg):
        u = self.base._values(t, cfg)
        terms = [_like(w, t, cfg) * v for w, v in zip(self.weights, u)]
        total = sum(terms)
        if not total:
            raise ArithmeticError("rational basis denominator vanished")
        return [x / total for x in terms]

    def _params(self):
        return {**self.base._params(), "weights": [format_rational(w) for w in self.weights]}


def rationalize(base: BasisSystem, weights: Sequence) -> RationalBasis:
    return RationalBasis(base, tuple(weights))


# -- evaluation --------------------------------------------------------------

def _like(x, t, cfg):
    """Bring a rational parameter to the backend of the evaluation point."""
    return to_decimal(x, cfg) if isinstance(t, Decimal) else x


def _point(basis: BasisSystem, t, cfg: PrecisionConfig):
    if isinstance(t, bool):
        raise TypeError("bad evaluation point")
    if isinstance(t, (int, str)):
        t = numerics.parse_scalar(t) if isinstance(t, str) else Fraction(t)
    polynomial = basis.polynomial if not isinstance(basis, RationalBasis) else basis.base.polynomial
    if not polynomial and not isinstance(t, Decimal):
        t = to_decimal(t, cfg)
    lo, hi = basis.domain(cfg)
    if isinstance(t, Decimal):
        tol = cfg.tolerance
        lo, hi = to_decimal(lo, cfg), to_decimal(hi, cfg)
        if t < lo - tol or t > hi + tol:
            raise DomainError(f"t={t} outside [{lo}, {hi}]")
        t = min(max(t, lo), hi)
    elif not lo <= t <= hi:
        raise DomainError(f"t={t} outside [{lo}, {hi}]")
    return t


def evaluate(basis: BasisSystem, t, cfg: PrecisionConfig | None = None) -> list:
    """Values ``(u_0(t), ..., u_n(t))`` of ``basis`` at ``t``.

    Rational ``t`` on a polynomial or spline system gives exact Fractions;
    otherwise the values are Decimals at the working precision of ``cfg``.
    """
    cfg = cfg or numerics.default_config()
    t = _point(basis, t, cfg)
    if isinstance(t, Decimal):
        with decimal.localcontext(cfg.context):
            return [+v for v in basis._values(t, cfg)]
    return [Fraction(v) for v in basis._values(t, cfg)]


# -- serialization -------------------------------------------------------------

def basis_from_json(obj: dict) -> BasisSystem:
    kind = obj["kind"]
    inverse = {v: k for k, v in _RATIONAL_KINDS.items()}
    if kind in inverse:
        base = basis_from_json({**{k: v for k, v in obj.items() if k != "weights"}, "kind": inverse[kind]})
        return RationalBasis(base, tuple(Fraction(w) for w in obj["weights"]))
    if kind == "bernstein":
        return Bernstein(obj["n"], Fraction(obj.get("a", "0")), Fraction(obj.get("b", "1")))
    if kind == "said-ball":
        return SaidBall(obj["n"])
    if kind == "dp":
        return DP(obj["n"])
    if kind == "bspline":
        return BSpline(obj["degree"], tuple(Fraction(k) for k in obj["knots"]))
    if kind == "cosine-even":
        return CosineEven(obj["n"])
    if kind == "trig-poly":
        return TrigPoly(obj["n"], Fraction(obj["half_width"]))
    raise ValueError(f"unknown basis kind {kind!r}")
