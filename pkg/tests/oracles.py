"""Symbolic reference definitions of the polynomial bases."""

from fractions import Fraction

import sympy as sp

T = sp.Symbol("t")


def said_ball_oracle(n):
    h = n // 2
    out = []
    for i in range(n + 1):
        if i <= (n - 1) // 2:
            out.append(sp.binomial(h + i, i) * T**i * (1 - T) ** (h + 1))
        elif i >= h + 1:
            out.append(sp.binomial(h + n - i, n - i) * T ** (h + 1) * (1 - T) ** (n - i))
        else:
            out.append(sp.binomial(n, h) * T**h * (1 - T) ** h)
    return out


def dp_oracle(n, middle_exponent=None):
    """DP polynomials; ``middle_exponent`` overrides the bracket power for odd n."""
    out = [None] * (n + 1)
    out[0], out[n] = (1 - T) ** n, T**n
    for i in range(1, n // 2):
        out[i] = T * (1 - T) ** (n - i)
    for i in range((n + 1) // 2 + 1, n):
        out[i] = T**i * (1 - T)
    if n % 2 == 0:
        k = n // 2
        out[k] = 1 - T ** (k + 1) - (1 - T) ** (k + 1)
    else:
        h = (n + 1) // 2
        e = h if middle_exponent is None else middle_exponent
        bracket = sp.Rational(1, 2) * (1 - T**e - (1 - T) ** e)
        out[h - 1] = T * (1 - T) ** h + bracket
        out[h] = bracket + T**h * (1 - T)
    return out


def substitute(polys, t):
    return [Fraction(str(sp.nsimplify(p.subs(T, sp.Rational(t.numerator, t.denominator))))) for p in polys]


def bernstein_oracle(n):
    return [sp.binomial(n, i) * T**i * (1 - T) ** (n - i) for i in range(n + 1)]


ORACLES = {"bernstein": bernstein_oracle, "said-ball": said_ball_oracle, "dp": dp_oracle}
