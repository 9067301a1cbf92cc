"""Collocation matrices ``(u_j(t_i))`` and structural checks on them."""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from typing import Sequence

from . import numerics
from .bases import BasisSystem, DomainError, evaluate
from .matrix import Matrix
from .numerics import PrecisionConfig, to_decimal

__all__ = [
    "Matrix",
    "collocation_matrix",
    "is_stochastic",
    "uniform_interior_nodes",
    "domain_nodes",
    "check_nodes",
]


def check_nodes(nodes: Sequence) -> tuple:
    nodes = tuple(nodes)
    if not nodes:
        raise ValueError("empty node sequence")
    if len({type(t) for t in nodes if not isinstance(t, int)}) > 1:
        raise TypeError("nodes must share one backend")
    if any(not s < t for s, t in zip(nodes, nodes[1:])):
        raise ValueError("nodes must be strictly increasing")
    return nodes


def collocation_matrix(basis: BasisSystem, nodes: Sequence,
                       cfg: PrecisionConfig | None = None) -> Matrix:
    """Row ``i`` holds the values of every basis function at ``nodes[i]``."""
    nodes = check_nodes(nodes)
    cfg = cfg or numerics.default_config()
    rows = [evaluate(basis, t, cfg) for t in nodes]
    label = ", ".join(str(t) if not isinstance(t, Decimal) else f"{t:.6g}" for t in nodes)
    return Matrix.from_rows(rows, note=f"{basis.kind} at ({label})")


def is_stochastic(m: Matrix, cfg: PrecisionConfig | None = None) -> bool:
    """Nonnegative entries and unit row sums; exact on rationals."""
    if m.is_rational:
        return m.is_nonnegative() and all(s == 1 for s in m.row_sums())
    cfg = cfg or numerics.default_config()
    tol = cfg.tolerance
    ctx = cfg.context
    return m.is_nonnegative(tol) and all(abs(ctx.subtract(sum(r), 1)) <= tol for r in m.rows)


def uniform_interior_nodes(n: int) -> tuple[Fraction, ...]:
    """``i / (n + 2)`` for ``i = 1, ..., n + 1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return tuple(Fraction(i, n + 2) for i in range(1, n + 2))


def domain_nodes(basis: BasisSystem, fractions: Sequence, cfg: PrecisionConfig | None = None) -> tuple:
    """Map fractions of ``[0, 1]`` affinely onto the domain of ``basis``.

    Rational domains keep exact nodes; the cosine system on ``[0, pi]``
    gets Decimal nodes.
    """
    cfg = cfg or numerics.default_config()
    lo, hi = basis.domain(cfg)
    out = []
    for f in fractions:
        f = numerics.as_fraction(f)
        if not 0 <= f <= 1:
            raise DomainError(f"fraction {f} outside [0, 1]")
        if isinstance(lo, Fraction) and isinstance(hi, Fraction) and basis.polynomial:
            out.append(lo + f * (hi - lo))
        else:
            lo_d, hi_d = to_decimal(lo, cfg), to_decimal(hi, cfg)
            ctx = cfg.context
            out.append(ctx.add(lo_d, ctx.multiply(to_decimal(f, cfg), ctx.subtract(hi_d, lo_d))))
    return tuple(out)
