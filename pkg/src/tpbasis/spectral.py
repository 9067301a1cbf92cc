"""Eigenvalues, singular values and condition numbers at high precision.

Two independent routes are provided:

* characteristic polynomial -> real roots.  On rational matrices the
  polynomial is exact (Berkowitz on an integer scaling of the matrix) and
  repeated roots are split off exactly before the numerical root finding;
* cyclic Jacobi rotations on the symmetric matrix ``A^T A`` (singular values).

Both run in :class:`decimal.Decimal` at the working precision of a
:class:`~tpbasis.numerics.PrecisionConfig`.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import lcm

from . import numerics
from .matrix import Matrix
from .numerics import PrecisionConfig, format_decimal, to_decimal
from .tpcore import SingularMatrix, determinant, integerize, inverse


class NonRealSpectrum(ArithmeticError):
    """The characteristic polynomial has non-real roots."""


# -- characteristic polynomial -----------------------------------------------------

def _berkowitz(a: list[list]) -> list:
    """Coefficients ``[1, c_1, ..., c_n]`` of ``det(xI - a)``, highest power first.

    Division-free, so it is exact over the integers.
    """
    n = len(a)
    vect = [1, -a[0][0]]
    for k in range(1, n):
        row = a[k][:k]
        col = [a[i][k] for i in range(k)]
        sub = [r[:k] for r in a[:k]]
        q = [1, -a[k][k]]
        x = col
        for _ in range(k):
            q.append(-sum(r * c for r, c in zip(row, x)))
            x = [sum(s * c for s, c in zip(srow, x)) for srow in sub]
        vect = [sum(q[i - j] * vect[j] for j in range(min(i, k) + 1)) for i in range(k + 2)]
    return vect


def charpoly(a: Matrix, cfg: PrecisionConfig | None = None) -> list:
    """Coefficients of ``det(xI - a)``, lowest power first.

    Exact Fractions for a rational matrix, Decimals otherwise.
    """
    if not a.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = a.nrows
    if a.is_rational:
        d, b = integerize(a)
        high_first = _berkowitz(b)
        # det(xI - b/d) = d^-n det(d x I - b)
        return [Fraction(c * d**k, d**n) for k, c in enumerate(reversed(high_first))]
    cfg = cfg or numerics.default_config()
    with decimal.localcontext(cfg.context):
        return [+c for c in reversed(_berkowitz([list(r) for r in a.rows]))]


# -- exact polynomial helpers (lowest power first) ---------------------------------

def _trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def _deriv(p: list) -> list:
    return _trim([k * c for k, c in enumerate(p)][1:] or [0 * p[0]])


def _divmod(num: list, den: list) -> tuple[list, list]:
    num, den = _trim(num), _trim(den)
    if len(num) < len(den):
        return [Fraction(0)], num
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    rem = list(num)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        coef = rem[i + len(den) - 1] / lead
        out[i] = coef
        if coef:
            for j, dc in enumerate(den):
                rem[i + j] -= coef * dc
    return out, _trim(rem[: len(den) - 1] or [Fraction(0)])


def _monic(p: list) -> list:
    return [c / p[-1] for c in p]


def _gcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while any(b):
        a, b = b, _divmod(a, b)[1]
    return _monic(a)


def _mod_gcd_degree(p: list[int], prime: int) -> int:
    """Degree of ``gcd(p, p')`` over GF(prime)."""
    def trim(f):
        f = [c % prime for c in f]
        while f and not f[-1]:
            f.pop()
        return f

    def rem(f, g):
        f = list(f)
        inv = pow(g[-1], -1, prime)
        while len(f) >= len(g):
            coef = f[-1] * inv % prime
            shift = len(f) - len(g)
            for j, gc in enumerate(g):
                f[shift + j] = (f[shift + j] - coef * gc) % prime
            f = trim(f)
        return f

    f, g = trim(p), trim([k * c for k, c in enumerate(p)][1:])
    while g:
        f, g = g, rem(f, g)
    return len(f) - 1


_PRIME = (1 << 61) - 1


def squarefree_factors(p: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Yun's decomposition ``p = prod q_k^k`` with each ``q_k`` squarefree and monic."""
    p = _monic(_trim(p))
    if len(p) <= 2:
        return [(p, 1)]
    scale = lcm(*(c.denominator for c in p))
    ints = [int(c * scale) for c in p]
    if ints[-1] % _PRIME and _mod_gcd_degree(ints, _PRIME) == 0:
        return [(p, 1)]
    out = []
    dp = _deriv(p)
    a0 = _gcd(p, dp)
    b = _divmod(p, a0)[0]
    c = _divmod(dp, a0)[0]
    d = _sub(c, _deriv(b))
    k = 1
    while len(_trim(b)) > 1:
        a = _gcd(b, d)
        if len(a) > 1:
            out.append((a, k))
        b = _divmod(b, a)[0]
        c = _divmod(d, a)[0]
        d = _sub(c, _deriv(b))
        k += 1
    return out


def _sub(a: list, b: list) -> list:
    size = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (size - len(a))
    b = list(b) + [Fraction(0)] * (size - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _eval_exact(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


# -- numerical real roots ------------------------------------------------------------

def _horner(p: list[Decimal], x: Decimal) -> Decimal:
    acc = p[-1]
    for c in reversed(p[:-1]):
        acc = acc * x + c
    return acc


def _horner2(p: list[Decimal], x: Decimal) -> tuple[Decimal, Decimal]:
    value, slope = p[-1], Decimal(0)
    for c in reversed(p[:-1]):
        slope = slope * x + value
        value = value * x + c
    return value, slope


def _refine(p: list[Decimal], lo: Decimal, hi: Decimal, f_lo: Decimal, eps: Decimal) -> Decimal:
    """Root in the sign-changing bracket ``[lo, hi]``: Newton steps kept inside by bisection."""
    x = (lo + hi) / 2
    for _ in range(10_000):
        fx, dfx = _horner2(p, x)
        if not fx:
            return x
        if (fx < 0) == (f_lo < 0):
            lo, f_lo = x, fx
        else:
            hi = x
        scale = max(abs(lo), abs(hi))
        if hi - lo <= eps * scale:
            return (lo + hi) / 2
        step = fx / dfx if dfx else None
        nxt = x - step if step is not None else None
        if nxt is None or not lo < nxt < hi:
            x = (lo + hi) / 2
            continue
        if abs(step) <= eps * abs(nxt):
            return nxt
        x = nxt
    raise ArithmeticError("root refinement did not converge")


def _rolle_roots(p: list[Decimal], eps: Decimal) -> list[Decimal]:
    """Real roots of ``p`` located between consecutive real roots of ``p'``.

    Exact for squarefree real-rooted ``p``; a polynomial with non-real roots
    yields fewer than ``deg p`` roots.
    """
    deg = len(p) - 1
    if deg == 1:
        return [-p[0] / p[1]]
    crit = _rolle_roots([k * c for k, c in enumerate(p)][1:], eps)
    bound = 1 + max(abs(c / p[-1]) for c in p[:-1])
    points = [-bound] + sorted(crit) + [bound]
    roots = []
    values = [_horner(p, x) for x in points]
    for i in range(len(points) - 1):
        lo, hi = points[i], points[i + 1]
        f_lo, f_hi = values[i], values[i + 1]
        if not f_lo:
            if not roots or roots[-1] != lo:
                roots.append(lo)
            continue
        if not f_hi:
            roots.append(hi)
            continue
        if (f_lo < 0) != (f_hi < 0):
            roots.append(_refine(p, lo, hi, f_lo, eps))
    return roots


def polynomial_real_roots(p: list, cfg: PrecisionConfig) -> list[Decimal]:
    """All roots of ``p`` (lowest power first), ascending, with multiplicity.

    Raises NonRealSpectrum when some root is not real.  Exact Fraction
    input has its repeated roots split off exactly, and roots that are
    rational with a modest denominator are returned exactly.
    """
    exact = all(isinstance(c, (Fraction, int)) for c in p)
    work = cfg.working_digits + 10
    ctx = numerics._context(work)
    eps = Decimal(1).scaleb(-work + 3)
    out = []
    with decimal.localcontext(ctx):
        if exact:
            parts = squarefree_factors([Fraction(c) for c in p])
        else:
            parts = [(_trim(p), 1)]
        for q, mult in parts:
            zeros = 0
            while len(q) > 1 and not q[0]:
                q, zeros = q[1:], zeros + 1
            found = [Decimal(0)] * zeros
            if len(q) > 1:
                qd = [ctx.divide(Decimal(c.numerator), Decimal(c.denominator)) if exact else +c for c in q]
                roots = _rolle_roots(qd, eps)
                if len(roots) != len(q) - 1:
                    raise NonRealSpectrum(
                        f"found {len(roots)} real roots of a degree-{len(q) - 1} factor")
                if exact:
                    roots = [_snap(q, r, cfg) for r in roots]
                found += roots
            out += found * mult
    out = [cfg.context.plus(r) for r in sorted(out)]
    return out


def _snap(q: list[Fraction], root: Decimal, cfg: PrecisionConfig) -> Decimal:
    if not root:
        return root
    cand = Fraction(root).limit_denominator(10 ** (cfg.digits // 2))
    if _eval_exact(q, cand) == 0:
        return to_decimal(cand, cfg)
    return root


# -- eigenvalues ---------------------------------------------------------------------

def eigenvalues(a: Matrix, cfg: PrecisionConfig | None = None) -> list[Decimal]:
    """Ascending real eigenvalues of a matrix whose spectrum is real (TP matrices, say).

    Raises:
        NonRealSpectrum: if the characteristic polynomial has non-real roots,
            or the roots found do not add up to the trace.
    """
    cfg = cfg or numerics.default_config()
    roots = polynomial_real_roots(charpoly(a, cfg), cfg)
    with decimal.localcontext(cfg.context):
        trace = sum(to_decimal(a[i, i], cfg) for i in range(a.nrows))
        total = sum(roots)
        scale = max(Decimal(1), sum(abs(r) for r in roots))
        if abs(total - trace) > cfg.tolerance * scale:
            raise NonRealSpectrum("eigenvalues do not sum to the trace")
    return roots


def _complex_spectral_radius(a: Matrix, cfg: PrecisionConfig) -> Decimal:
    import mpmath

    with mpmath.workdps(cfg.working_digits + 10):
        m = mpmath.matrix([[mpmath.mpf(str(v)) if isinstance(v, Decimal)
                            else mpmath.mpf(v.numerator) / v.denominator for v in r] for r in a.rows])
        values = mpmath.eig(m, left=False, right=False)
        rho = max(abs(v) for v in values)
        return to_decimal(Decimal(mpmath.nstr(rho, cfg.working_digits + 5, strip_zeros=False)), cfg)


def spectral_radius(a: Matrix, cfg: PrecisionConfig | None = None) -> Decimal:
    """Largest eigenvalue modulus.

    Real spectra go through :func:`eigenvalues`; otherwise the matrix is
    handed to mpmath's Hessenberg QR eigensolver.
    """
    cfg = cfg or numerics.default_config()
    try:
        values = eigenvalues(a, cfg)
    except NonRealSpectrum:
        return _complex_spectral_radius(a, cfg)
    return max(abs(v) for v in values)


# -- singular values ---------------------------------------------------------------

def jacobi_eigenvalues(s: list[list[Decimal]], cfg: PrecisionConfig, max_sweeps: int = 60) -> list[Decimal]:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    n = len(s)
    with decimal.localcontext(cfg.context):
        a = [[+v for v in r] for r in s]
        frob = sum(v * v for r in a for v in r).sqrt()
        if not frob:
            return [Decimal(0)] * n
        stop = frob * Decimal(1).scaleb(-cfg.working_digits)
        for _ in range(max_sweeps):
            if max((abs(a[p][q]) for p in range(n) for q in range(p + 1, n)), default=0) <= stop:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p][q]
                    if abs(apq) <= stop:
                        continue
                    theta = (a[q][q] - a[p][p]) / (2 * apq)
                    t = 1 / (abs(theta) + (theta * theta + 1).sqrt())
                    if theta < 0:
                        t = -t
                    c = 1 / (t * t + 1).sqrt()
                    sn = t * c
                    for k in range(n):
                        akp, akq = a[k][p], a[k][q]
                        a[k][p] = c * akp - sn * akq
                        a[k][q] = sn * akp + c * akq
                    for k in range(n):
                        apk, aqk = a[p][k], a[q][k]
                        a[p][k] = c * apk - sn * aqk
                        a[q][k] = sn * apk + c * aqk
                    a[p][q] = a[q][p] = Decimal(0)
        else:
            raise ArithmeticError("Jacobi iteration did not converge")
        return sorted(a[i][i] for i in range(n))


def _rank(a: Matrix) -> int:
    rows = [list(r) for r in a.rows]
    rank, col = 0, 0
    m, n = a.shape
    while rank < m and col < n:
        piv = next((i for i in range(rank, m) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, m):
            f = rows[i][col] / rows[rank][col]
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def singular_values(a: Matrix, cfg: PrecisionConfig | None = None, method: str = "jacobi") -> list[Decimal]:
    """Ascending singular values: square roots of the eigenvalues of ``A^T A``.

    ``method`` is ``"jacobi"`` (cyclic Jacobi) or ``"charpoly"`` (real roots
    of the characteristic polynomial).  On rational input, singular values
    forced to zero by an exact rank deficit are reported as exactly 0.
    """
    cfg = cfg or numerics.default_config()
    gram = a.T @ a if a.is_rational else _decimal_product(a.T, a, cfg)
    if method == "jacobi":
        values = jacobi_eigenvalues([[to_decimal(v, cfg) for v in r] for r in gram.rows], cfg)
    elif method == "charpoly":
        values = eigenvalues(gram, cfg)
    else:
        raise ValueError(f"unknown method {method!r}")
    with decimal.localcontext(cfg.context):
        out = [v.sqrt() if v > 0 else Decimal(0) for v in values]
    if a.is_rational:
        deficit = a.ncols - _rank(a)
        out[:deficit] = [Decimal(0)] * deficit
    return out


def _decimal_product(x: Matrix, y: Matrix, cfg: PrecisionConfig) -> Matrix:
    with decimal.localcontext(cfg.context):
        return x @ y


# -- condition numbers -----------------------------------------------------------------

def kappa_inf_exact(a: Matrix) -> Fraction:
    return a.norm_inf() * inverse(a).norm_inf()


def kappa_1_exact(a: Matrix) -> Fraction:
    return a.norm_1() * inverse(a).norm_1()


def condition_numbers(a: Matrix, cfg: PrecisionConfig | None = None,
                      sigmas: list[Decimal] | None = None) -> tuple[Decimal, Decimal, Decimal]:
    """``(kappa_1, kappa_2, kappa_inf)`` of a nonsingular square matrix."""
    cfg = cfg or numerics.default_config()
    if not a.is_square:
        raise ValueError("condition numbers need a square matrix")
    if a.is_rational:
        if determinant(a) == 0:
            raise SingularMatrix("matrix is singular")
        inv = inverse(a)
        k_inf = to_decimal(a.norm_inf() * inv.norm_inf(), cfg)
        k_1 = to_decimal(a.norm_1() * inv.norm_1(), cfg)
    else:
        inv = inverse(a, cfg)
        with decimal.localcontext(cfg.context):
            k_inf = a.norm_inf() * inv.norm_inf()
            k_1 = a.norm_1() * inv.norm_1()
    sigmas = sigmas if sigmas is not None else singular_values(a, cfg)
    if not sigmas[0]:
        raise SingularMatrix("matrix is singular")
    k_2 = cfg.context.divide(sigmas[-1], sigmas[0])
    return k_1, k_2, k_inf


# -- summary ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralSummary:
    eigenvalues: tuple[Decimal, ...]
    singular_values: tuple[Decimal, ...]
    kappa_1: Decimal | None
    kappa_2: Decimal | None
    kappa_inf: Decimal | None
    digits: int

    @property
    def lambda_min(self) -> Decimal:
        return self.eigenvalues[0]

    @property
    def lambda_max(self) -> Decimal:
        return self.eigenvalues[-1]

    @property
    def sigma_min(self) -> Decimal:
        return self.singular_values[0]

    @property
    def sigma_max(self) -> Decimal:
        return self.singular_values[-1]

    @property
    def rho(self) -> Decimal:
        return max(abs(v) for v in self.eigenvalues)

    def to_json(self) -> dict:
        cfg = PrecisionConfig(self.digits)

        def fmt(x):
            return None if x is None else format_decimal(x, cfg)

        return {
            "digits": self.digits,
            "eigenvalues": [fmt(v) for v in self.eigenvalues],
            "singular_values": [fmt(v) for v in self.singular_values],
            "lambda_min": fmt(self.lambda_min),
            "lambda_max": fmt(self.lambda_max),
            "sigma_min": fmt(self.sigma_min),
            "sigma_max": fmt(self.sigma_max),
            "rho": fmt(self.rho),
            "kappa_1": fmt(self.kappa_1),
            "kappa_2": fmt(self.kappa_2),
            "kappa_inf": fmt(self.kappa_inf),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SpectralSummary":
        def dec(x):
            return None if x is None else Decimal(x)

        return cls(tuple(Decimal(v) for v in obj["eigenvalues"]),
                   tuple(Decimal(v) for v in obj["singular_values"]),
                   dec(obj["kappa_1"]), dec(obj["kappa_2"]), dec(obj["kappa_inf"]), obj["digits"])


def summarize(a: Matrix, cfg: PrecisionConfig | None = None) -> SpectralSummary:
    """Eigenvalues, singular values and condition numbers of a TP-like square matrix."""
    cfg = cfg or numerics.default_config()
    eig = eigenvalues(a, cfg)
    sig = singular_values(a, cfg)
    try:
        k1, k2, kinf = condition_numbers(a, cfg, sig)
    except SingularMatrix:
        k1 = k2 = kinf = None
    return SpectralSummary(tuple(eig), tuple(sig), k1, k2, kinf, cfg.digits)
