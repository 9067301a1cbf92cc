"""Change of weights between Bernstein, Said-Ball and DP representations.

Given ``w``, :func:`convert_weights` finds the ``v`` with
``sum_j w_j b_j(t) == sum_j v_j u_j(t)`` identically, where ``b`` is the
Bernstein basis and ``u`` the target basis, both of degree ``n`` on [0, 1].
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .bases import DP, BasisSystem, Bernstein, SaidBall, evaluate
from .collocation import collocation_matrix
from .matrix import Matrix
from .numerics import as_fraction
from .tpcore import integerize, solve

MAX_WEIGHT_DRAWS = 50_000_000

BASES = {
    "bernstein": Bernstein,
    "said-ball": SaidBall,
    "dp": DP,
}


def polynomial_basis(name: str, n: int) -> BasisSystem:
    try:
        return BASES[name](n)
    except KeyError:
        raise ValueError(f"unknown basis {name!r}; choose from {sorted(BASES)}") from None


def conversion_nodes(n: int) -> tuple[Fraction, ...]:
    if n == 0:
        return (Fraction(1, 2),)
    return tuple(Fraction(j, n) for j in range(n + 1))


def convert_weights(target: str, w: Sequence, n: int, source: str = "bernstein") -> tuple[Fraction, ...]:
    """Coefficients in ``target`` of the polynomial with coefficients ``w`` in ``source``.

    Both bases are collocated at ``j/n`` and the resulting square system
    is solved exactly.
    """
    w = tuple(as_fraction(x) for x in w)
    if len(w) != n + 1:
        raise ValueError(f"expected {n + 1} weights, got {len(w)}")
    nodes = conversion_nodes(n)
    src = collocation_matrix(polynomial_basis(source, n), nodes)
    dst = collocation_matrix(polynomial_basis(target, n), nodes)
    values = src @ Matrix(tuple((x,) for x in w))
    return tuple(r[0] for r in solve(dst, values).rows)


def all_positive(w: Sequence) -> bool:
    return all(as_fraction(x) > 0 for x in w)


def combination(basis: BasisSystem, coefficients: Sequence, t) -> Fraction:
    """``sum_j c_j u_j(t)`` evaluated exactly."""
    return sum((c * u for c, u in zip(coefficients, evaluate(basis, t))), Fraction(0))


def identity_holds(w: Sequence, v: Sequence, n: int, target: str, source: str = "bernstein") -> bool:
    """Check ``sum w_j src_j == sum v_j dst_j`` exactly at ``n + 2`` rational points.

    Two degree-``n`` polynomials agreeing at ``n + 2`` points are equal.
    """
    src, dst = polynomial_basis(source, n), polynomial_basis(target, n)
    points = [Fraction(k, n + 1) for k in range(n + 2)]
    return all(combination(src, w, t) == combination(dst, v, t) for t in points)


class WeightRejection(RuntimeError):
    """No acceptable weight vector was found within the draw budget."""


@lru_cache(maxsize=None)
def conversion_matrix(target: str, n: int, source: str = "bernstein") -> Matrix:
    """Exact matrix ``T`` with ``convert_weights(target, w, n) == T @ w``."""
    columns = [convert_weights(target, [int(i == j) for i in range(n + 1)], n, source)
               for j in range(n + 1)]
    return Matrix(tuple(zip(*columns)))


def _integer_filter(n: int) -> np.ndarray:
    """Stacked integer multiples of the Said-Ball and DP conversion matrices."""
    rows = []
    for target in ("said-ball", "dp"):
        d, b = integerize(conversion_matrix(target, n))
        rows += b
    return np.array(rows, dtype=object)


def draw_convertible_weights(n: int, rng: np.random.Generator, low: int = 1, high: int = 1000,
                             max_draws: int = MAX_WEIGHT_DRAWS,
                             batch: int = 65_536) -> tuple[tuple, tuple, tuple, int]:
    """Draw i.i.d. integer Bernstein weights in ``[low, high]`` until both conversions are positive.

    Candidates are screened in batches with exact integer arithmetic; the
    first acceptable vector in draw order is returned together with the
    number of vectors drawn up to and including it.  Returns
    ``(w, w_said_ball, w_dp, draws)``.

    Raises:
        WeightRejection: when ``max_draws`` vectors are drawn without success.
    """
    filt = _integer_filter(n)
    bound = int(max(sum(abs(int(x)) for x in row) for row in filt)) * high
    dtype = np.int64 if bound < 2**62 else object
    filt = filt.astype(dtype)
    drawn = 0
    while drawn < max_draws:
        size = min(batch, max_draws - drawn)
        block = rng.integers(low, high + 1, size=(size, n + 1), dtype=np.int64)
        ok = ((block.astype(dtype) @ filt.T) > 0).all(axis=1)
        hits = np.flatnonzero(ok)
        if hits.size:
            k = int(hits[0])
            w = tuple(Fraction(int(x)) for x in block[k])
            ws = convert_weights("said-ball", w, n)
            wd = convert_weights("dp", w, n)
            if not (all_positive(ws) and all_positive(wd)):
                raise ArithmeticError("integer screen disagrees with exact conversion")
            return w, ws, wd, drawn + k + 1
        drawn += size
    raise WeightRejection(f"no positive conversion for n={n} in {max_draws} draws")
