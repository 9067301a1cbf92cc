"""Total positivity, corner-cutting factorizations and exact inverses.

A nonsingular stochastic TP matrix of order ``n`` is a product of
``n(n-1)`` elementary corner cuttings ``L_k(a)`` and ``U_k(a)`` with
``0 <= a < 1``.  :func:`compose` multiplies them out and :func:`factorize`
peels them off again by adjacent-row and adjacent-column elimination.

Indices of factors and of the ``alphas`` map are 1-based, as in the usual
matrix notation; Python lists are 0-based internally.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterator

from . import numerics
from .matrix import Matrix
from .numerics import PrecisionConfig, as_fraction, format_rational


class NotStochasticTP(ValueError):
    """Raised when elimination shows a matrix is not nonsingular stochastic TP."""


class SingularMatrix(ArithmeticError):
    pass


# -- elementary factors ------------------------------------------------------

@dataclass(frozen=True)
class ElementaryFactor:
    """``U_i(lam)`` (side ``"U"``) or ``L_i(lam)`` (side ``"L"``).

    ``U_i`` differs from the identity in row ``i-1``: ``1-lam`` on the
    diagonal and ``lam`` at column ``i``.  ``L_i`` differs in row ``i``:
    ``lam`` at column ``i-1`` and ``1-lam`` on the diagonal.
    """

    side: str
    i: int
    lam: Fraction

    def __post_init__(self):
        if self.side not in ("L", "U"):
            raise ValueError(f"side must be 'L' or 'U', got {self.side!r}")
        lam = as_fraction(self.lam)
        if not 0 <= lam < 1:
            raise ValueError(f"lambda must lie in [0, 1), got {lam}")
        if self.i < 2:
            raise ValueError(f"factor index must be >= 2, got {self.i}")
        object.__setattr__(self, "lam", lam)

    def to_json(self) -> dict:
        return {"side": self.side, "i": self.i, "lambda": format_rational(self.lam)}

    @classmethod
    def from_json(cls, obj: dict) -> "ElementaryFactor":
        return cls(obj["side"], int(obj["i"]), Fraction(obj["lambda"]))


def _check_index(f: ElementaryFactor, n: int) -> None:
    if not 2 <= f.i <= n:
        raise ValueError(f"factor index {f.i} out of range for order {n}")


def elementary_matrix(f: ElementaryFactor, n: int) -> Matrix:
    _check_index(f, n)
    rows = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    k = f.i - 1  # 0-based position of row/column i
    if f.side == "U":
        rows[k - 1][k - 1] = 1 - f.lam
        rows[k - 1][k] = f.lam
    else:
        rows[k][k - 1] = f.lam
        rows[k][k] = 1 - f.lam
    return Matrix.from_rows(rows, note=f"{f.side}_{f.i}({f.lam})")


def elementary_inverse_checkerboard(f: ElementaryFactor, n: int) -> Matrix:
    """``J E^{-1} J`` written down directly from ``lam``."""
    _check_index(f, n)
    rows = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    k = f.i - 1
    big = 1 / (1 - f.lam)
    off = f.lam / (1 - f.lam)
    if f.side == "U":
        rows[k - 1][k - 1] = big
        rows[k - 1][k] = off
    else:
        rows[k][k - 1] = off
        rows[k][k] = big
    return Matrix.from_rows(rows)


# -- factorization -------------------------------------------------------------

def factor_slots(n: int) -> list[tuple[str, int, tuple[int, int]]]:
    """``(side, i, (r, c))`` for every factor, in left-to-right product order.

    The product is ``F_{n-1} ... F_1 G_1 ... G_{n-1}`` with
    ``F_i = L_{i+1}(a_{i+1,1}) ... L_n(a_{n,n-i})`` and
    ``G_i = U_n(a_{n-i,n}) ... U_{i+1}(a_{1,i+1})``.
    """
    slots = []
    for i in range(n - 1, 0, -1):
        for k in range(i + 1, n + 1):
            slots.append(("L", k, (k, k - i)))
    for i in range(1, n):
        for k in range(n, i, -1):
            slots.append(("U", k, (k - i, k)))
    return slots


@dataclass(frozen=True)
class BidiagonalFactorization:
    """The parameters ``a_{r,c}`` (``r != c``) of a stochastic TP matrix of order ``n``.

    Entries with ``r > c`` belong to the lower factors, ``r < c`` to the upper.
    Missing keys are zero.
    """

    n: int
    alphas: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("order must be >= 1")
        valid = {rc for _, _, rc in factor_slots(self.n)}
        clean = {}
        for key, value in self.alphas.items():
            key = tuple(key)
            if key not in valid:
                raise ValueError(f"no factor parameter {key} for order {self.n}")
            value = as_fraction(value)
            if not 0 <= value < 1:
                raise ValueError(f"alpha{key} = {value} outside [0, 1)")
            clean[key] = value
        object.__setattr__(self, "alphas", clean)

    def alpha(self, r: int, c: int) -> Fraction:
        return self.alphas.get((r, c), Fraction(0))

    def factors(self) -> list[ElementaryFactor]:
        return [ElementaryFactor(side, k, self.alpha(*rc)) for side, k, rc in factor_slots(self.n)]

    def __eq__(self, other):
        if not isinstance(other, BidiagonalFactorization):
            return NotImplemented
        keys = set(self.alphas) | set(other.alphas)
        return self.n == other.n and all(self.alpha(*k) == other.alpha(*k) for k in keys)

    def __hash__(self):
        return hash((self.n, frozenset((k, v) for k, v in self.alphas.items() if v)))

    def to_json(self) -> dict:
        return {"n": self.n, "factors": [f.to_json() for f in self.factors()]}

    @classmethod
    def from_json(cls, obj: dict) -> "BidiagonalFactorization":
        n = int(obj["n"])
        slots = factor_slots(n)
        factors = [ElementaryFactor.from_json(f) for f in obj["factors"]]
        if len(factors) != len(slots):
            raise ValueError(f"expected {len(slots)} factors for order {n}, got {len(factors)}")
        alphas = {}
        for f, (side, k, rc) in zip(factors, slots):
            if (f.side, f.i) != (side, k):
                raise ValueError(f"factor {f.side}_{f.i} out of order; expected {side}_{k}")
            alphas[rc] = f.lam
        return cls(n, alphas)


def _right_apply(cols: list[list], f: ElementaryFactor) -> None:
    """``W <- W E`` acting on a column-major copy of ``W``."""
    k = f.i - 1
    lam = f.lam
    if not lam:
        return
    left, right = cols[k - 1], cols[k]
    if f.side == "L":
        cols[k - 1] = [a + lam * b for a, b in zip(left, right)]
        cols[k] = [(1 - lam) * b for b in right]
    else:
        cols[k - 1] = [(1 - lam) * a for a in left]
        cols[k] = [lam * a + b for a, b in zip(left, right)]


def compose_factors(factors, n: int) -> Matrix:
    """Left-to-right product of elementary factors of order ``n``."""
    cols = [[Fraction(int(r == c)) for r in range(n)] for c in range(n)]
    for f in factors:
        _check_index(f, n)
        _right_apply(cols, f)
    return Matrix(tuple(zip(*cols)))


def compose(f: BidiagonalFactorization) -> Matrix:
    return compose_factors(f.factors(), f.n)


def factorize(a: Matrix) -> BidiagonalFactorization:
    """Recover the corner-cutting parameters of a nonsingular stochastic TP matrix.

    Lower factors are peeled from the left by adjacent-row elimination and
    upper factors from the right by adjacent-column elimination, in the
    order fixed by :func:`factor_slots`.  When both entries that determine
    a parameter are zero the parameter is taken as 0.  The remainder must
    end up as the identity, so a returned factorization always composes
    back to ``a``.

    Raises:
        TypeError: for a decimal matrix.
        ValueError: for a non-square matrix.
        NotStochasticTP: when ``a`` is singular, not stochastic or not TP.
    """
    if not a.is_rational:
        raise TypeError("factorize needs exact rational entries")
    if not a.is_square:
        raise ValueError("factorize needs a square matrix")
    n = a.nrows
    if not a.is_nonnegative() or any(s != 1 for s in a.row_sums()):
        raise NotStochasticTP("matrix is not stochastic")
    w = [list(r) for r in a.rows]
    slots = factor_slots(n)
    split = n * (n - 1) // 2
    alphas = {}

    for _, k, (r, c) in slots[:split]:
        row, above = k - 1, k - 2
        num, den = w[row][c - 1], w[above][c - 1]
        if not den:
            if num:
                raise NotStochasticTP(f"nonzero entry ({k},{c}) below a zero pivot")
            alpha = Fraction(0)
        else:
            alpha = num / den
        _accept(alpha, (r, c))
        if alpha:
            w[row] = [(x - alpha * y) / (1 - alpha) for x, y in zip(w[row], w[above])]
        alphas[(r, c)] = alpha

    for _, k, (r, c) in reversed(slots[split:]):
        row = r - 1
        num = w[row][k - 1]
        den = w[row][k - 2] + num
        if not den:
            if num:
                raise NotStochasticTP(f"entry ({r},{k}) cannot be eliminated")
            alpha = Fraction(0)
        else:
            alpha = num / den
        _accept(alpha, (r, c))
        if alpha:
            for x in w:
                x[k - 2] = x[k - 2] / (1 - alpha)
                x[k - 1] = x[k - 1] - alpha * x[k - 2]
        alphas[(r, c)] = alpha

    if any(w[i][j] != (i == j) for i in range(n) for j in range(n)):
        raise NotStochasticTP("elimination did not reduce the matrix to the identity")
    return BidiagonalFactorization(n, alphas)


def _accept(alpha: Fraction, rc) -> None:
    if alpha < 0:
        raise NotStochasticTP(f"negative multiplier {alpha} for alpha{rc}: matrix is not TP")
    if alpha >= 1:
        raise NotStochasticTP(f"multiplier {alpha} >= 1 for alpha{rc}: matrix is singular or not TP")


# -- exact linear algebra -------------------------------------------------------

def integerize(a: Matrix) -> tuple[int, list[list[int]]]:
    """``(D, B)`` with ``a = B / D`` and ``B`` integral."""
    if not a.is_rational:
        raise TypeError("exact arithmetic needs a rational matrix")
    d = lcm(*(v.denominator for v in a.entries()))
    return d, [[v.numerator * (d // v.denominator) for v in r] for r in a.rows]


def _bareiss_det(b: list[list[int]]) -> int:
    a = [list(r) for r in b]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant(a: Matrix, cfg: PrecisionConfig | None = None):
    if not a.is_square:
        raise ValueError("determinant of a non-square matrix")
    if a.is_rational:
        d, b = integerize(a)
        return Fraction(_bareiss_det(b), d ** a.nrows)
    with decimal.localcontext((cfg or numerics.default_config()).context):
        return _float_det([list(r) for r in a.rows])


def _float_det(a: list[list]):
    n = len(a)
    det = a[0][0] * 0 + 1
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        if not a[p][k]:
            return det * 0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            m = a[i][k] / a[k][k]
            a[i] = [x - m * y for x, y in zip(a[i], a[k])]
    return det


def _gauss_jordan(b: list[list[int]], rhs: list[list[int]]) -> tuple[int, list[list[int]]]:
    """Integer-preserving Gauss-Jordan on ``[b | rhs]``.

    Returns ``(d, y)`` where ``b x = rhs`` has solution ``x = y / d``.
    """
    n = len(b)
    a = [list(r) + list(s) for r, s in zip(b, rhs)]
    width = len(a[0])
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                raise SingularMatrix("matrix is singular")
            a[k], a[swap] = a[swap], a[k]
        pivot = a[k][k]
        for i in range(n):
            if i == k:
                continue
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(width):
                q, rem = divmod(row_i[j] * pivot - aik * row_k[j], prev)
                if rem:
                    raise ArithmeticError("fraction-free elimination lost exactness")
                row_i[j] = q
        prev = pivot
    return prev, [r[n:] for r in a]


def solve(a: Matrix, rhs: Matrix) -> Matrix:
    """Exact solution ``X`` of ``a X = rhs`` for rational ``a`` and ``rhs``."""
    if not a.is_square or a.nrows != rhs.nrows:
        raise ValueError("solve needs square a with matching right-hand side")
    d, b = integerize(a)
    e, c = integerize(rhs)
    det, y = _gauss_jordan(b, c)
    scale = Fraction(d, e * det)
    return Matrix(tuple(tuple(scale * v for v in r) for r in y))


def inverse(a: Matrix, cfg: PrecisionConfig | None = None) -> Matrix:
    """Exact inverse on rationals; Gauss-Jordan with partial pivoting on decimals."""
    if not a.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = a.nrows
    if a.is_rational:
        return solve(a, Matrix.identity(n))
    with decimal.localcontext((cfg or numerics.default_config()).context):
        return _decimal_inverse(a)


def _decimal_inverse(a: Matrix) -> Matrix:
    n = a.nrows
    w = [list(r) + [Decimal(int(i == j)) for j in range(n)] for i, r in enumerate(a.rows)]
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(w[i][k]))
        if not w[p][k]:
            raise SingularMatrix("matrix is singular")
        w[k], w[p] = w[p], w[k]
        pivot = w[k][k]
        w[k] = [x / pivot for x in w[k]]
        for i in range(n):
            if i != k and w[i][k]:
                m = w[i][k]
                w[i] = [x - m * y for x, y in zip(w[i], w[k])]
    return Matrix(tuple(tuple(r[n:]) for r in w))


def checkerboard(a: Matrix) -> Matrix:
    """``J a J`` with ``J = diag(1, -1, 1, ...)``: entry ``(i, j)`` times ``(-1)**(i+j)``."""
    if not a.is_square:
        raise ValueError("checkerboard needs a square matrix")
    return Matrix(tuple(tuple(v if (i + j) % 2 == 0 else -v for j, v in enumerate(r))
                        for i, r in enumerate(a.rows)), a.note)


# -- total positivity -------------------------------------------------------------

def minors(a: Matrix, cfg: PrecisionConfig | None = None) -> Iterator[tuple[tuple, tuple, object]]:
    """Every minor of ``a`` as ``(rows, cols, value)``."""
    m, n = a.shape
    for size in range(1, min(m, n) + 1):
        for rows in combinations(range(m), size):
            for cols in combinations(range(n), size):
                sub = Matrix(tuple(tuple(a.rows[r][c] for c in cols) for r in rows))
                yield rows, cols, determinant(sub, cfg)


def all_minors_nonnegative(a: Matrix, tol=0, cfg: PrecisionConfig | None = None) -> bool:
    """Brute-force TP test over every square submatrix."""
    return all(value >= -tol for _, _, value in minors(a, cfg))


def neville_pivots(rows, tol=0) -> list | None:
    """Diagonal pivots of Neville elimination, or None when it fails.

    Failure means a row exchange would be needed or a multiplier is
    negative.  Entries within ``tol`` of zero count as zero.
    """
    a = [list(r) for r in rows]
    n = len(a)
    for k in range(n - 1):
        for i in range(n - 1, k, -1):
            piv, x = a[i - 1][k], a[i][k]
            if abs(piv) <= tol:
                if abs(x) > tol:
                    return None
                continue
            m = x / piv
            if m < 0 and abs(x) > tol:
                return None
            if m:
                a[i] = [p - m * q for p, q in zip(a[i], a[i - 1])]
    return [a[i][i] for i in range(n)]


def is_tp(a: Matrix, cfg: PrecisionConfig | None = None) -> bool:
    """True when every minor of ``a`` is nonnegative.

    Square nonsingular matrices are certified by Neville elimination of
    ``a`` and ``a.T`` (no row exchanges, nonnegative multipliers, positive
    pivots).  Singular or rectangular matrices fall back to enumerating
    minors.  Decimal matrices use the tolerance of ``cfg``.
    """
    if a.is_rational:
        return _is_tp(a, 0, None)
    cfg = cfg or numerics.default_config()
    with decimal.localcontext(cfg.context):
        return _is_tp(a, cfg.tolerance, cfg)


def _is_tp(a: Matrix, tol, cfg) -> bool:
    if not a.is_nonnegative(tol):
        return False
    if a.is_square:
        pivots = neville_pivots(a.rows, tol)
        if pivots is None:
            # A failed elimination is decisive only for nonsingular matrices.
            if abs(determinant(a, cfg)) > tol:
                return False
        elif all(p > tol for p in pivots):
            return neville_pivots(a.T.rows, tol) is not None
    return all_minors_nonnegative(a, tol, cfg)


def is_nonsingular(a: Matrix) -> bool:
    return a.is_square and determinant(a) != 0
