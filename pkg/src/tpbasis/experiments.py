"""Regenerated rational Bernstein / Said-Ball / DP collocation experiments.

For each degree ``n`` a positive integer weight vector is drawn, converted to
Said-Ball and DP weights, and the three rational bases are collocated at
``i/(n+2)``.  Rows carry the spectral data of each matrix; :func:`emit_tables`
renders them as three tables (minimal values, infinity condition numbers and
maximal singular values).
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from . import spectral
from .bases import Bernstein, RationalBasis
from .collocation import collocation_matrix, uniform_interior_nodes
from .conversion import MAX_WEIGHT_DRAWS, draw_convertible_weights, identity_holds, polynomial_basis
from .numerics import PrecisionConfig, format_decimal, format_rational

LABELS = ("M", "B1", "B2")
TARGETS = {"M": "bernstein", "B1": "said-ball", "B2": "dp"}
QUANTITIES = ("lambda_min", "lambda_max", "sigma_min", "sigma_max", "kappa_inf", "kappa_2")
SEARCH_QUANTITIES = {"sigma_max": "sigma_max", "sigma-max": "sigma_max",
                     "kappa_2": "kappa_2", "kappa2": "kappa_2"}


class InequalityViolation(AssertionError):
    """A triple of rows breaks one of the extremal inequalities."""

    def __init__(self, message: str, record: dict):
        super().__init__(message)
        self.record = record


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    label: str
    lambda_min: Decimal
    lambda_max: Decimal
    sigma_min: Decimal
    sigma_max: Decimal
    kappa_inf: Decimal
    kappa_2: Decimal
    weights: tuple
    weights_said_ball: tuple
    weights_dp: tuple
    seed: int

    def value(self, quantity: str) -> Decimal:
        return getattr(self, quantity)

    def to_json(self) -> dict:
        out = {"n": self.n, "label": self.label, "seed": self.seed}
        out.update({q: format_decimal(self.value(q)) for q in QUANTITIES})
        out["weights"] = [format_rational(w) for w in self.weights]
        out["weights_said_ball"] = [format_rational(w) for w in self.weights_said_ball]
        out["weights_dp"] = [format_rational(w) for w in self.weights_dp]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentRow":
        def fr(xs):
            return tuple(Fraction(x) for x in xs)

        return cls(obj["n"], obj["label"], *(Decimal(obj[q]) for q in QUANTITIES),
                   fr(obj["weights"]), fr(obj["weights_said_ball"]), fr(obj["weights_dp"]), obj["seed"])


@dataclass(frozen=True)
class CounterexamplePair:
    """Two rows from one triple where ``first.value(q) > second.value(q)``."""

    quantity: str
    direction: str  # "M>B" or "M<B"
    first: ExperimentRow
    second: ExperimentRow
    draw: int

    def to_json(self) -> dict:
        return {"quantity": self.quantity, "direction": self.direction, "draw": self.draw,
                "first": self.first.to_json(), "second": self.second.to_json()}


@dataclass
class SearchResult:
    quantity: str
    budget: int
    draws: int = 0
    found: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return "M>B" in self.found and "M<B" in self.found

    @property
    def status(self) -> str:
        return "complete" if self.complete else "budget exhausted"

    def to_json(self) -> dict:
        return {"quantity": self.quantity, "budget": self.budget, "draws": self.draws,
                "status": self.status,
                "found": {k: v.to_json() for k, v in sorted(self.found.items())}}


def triple_matrices(n: int, w, ws, wd, nodes=None):
    """Collocation matrices of the rational Bernstein, Said-Ball and DP bases."""
    nodes = uniform_interior_nodes(n) if nodes is None else nodes
    bases = (RationalBasis(Bernstein(n), tuple(w)),
             RationalBasis(polynomial_basis("said-ball", n), tuple(ws)),
             RationalBasis(polynomial_basis("dp", n), tuple(wd)))
    return tuple(collocation_matrix(b, nodes) for b in bases)


def triple_rows(n: int, w, ws, wd, seed: int, cfg: PrecisionConfig) -> list[ExperimentRow]:
    rows = []
    for label, m in zip(LABELS, triple_matrices(n, w, ws, wd)):
        s = spectral.summarize(m, cfg)
        rows.append(ExperimentRow(n, label, s.lambda_min, s.lambda_max, s.sigma_min, s.sigma_max,
                                  s.kappa_inf, s.kappa_2, tuple(w), tuple(ws), tuple(wd), seed))
    return rows


def check_triple(rows: list[ExperimentRow], cfg: PrecisionConfig) -> None:
    """Raise :class:`InequalityViolation` unless the first row is extremal.

    ``kappa_inf`` comes from exact matrices rounded once; rounding is monotone,
    so it is compared with no slack.  Spectral values use the tolerance.
    """
    m, *others = rows
    tol = cfg.scaled_tolerance(15)
    with localcontext(cfg.context):
        for b in others:
            broken = []
            if m.lambda_min - b.lambda_min < -tol:
                broken.append("lambda_min")
            if m.sigma_min - b.sigma_min < -tol:
                broken.append("sigma_min")
            if m.kappa_inf > b.kappa_inf:
                broken.append("kappa_inf")
            if abs(b.lambda_max - 1) > tol or abs(m.lambda_max - 1) > tol:
                broken.append("lambda_max != 1")
            if broken:
                raise InequalityViolation(f"n={m.n}: M vs {b.label} breaks {broken}",
                                          {"broken": broken, "M": m.to_json(), b.label: b.to_json()})


def draw_weights(n: int, rng: np.random.Generator, max_draws: int = MAX_WEIGHT_DRAWS):
    w, ws, wd, draws = draw_convertible_weights(n, rng, 1, 1000, max_draws)
    if not (identity_holds(w, ws, n, "said-ball") and identity_holds(w, wd, n, "dp")):
        raise ArithmeticError(f"converted weights fail the polynomial identity at n={n}")
    return w, ws, wd, draws


def run_table_experiment(nmin: int = 3, nmax: int = 8, seed: int = 0,
                         cfg: PrecisionConfig | None = None,
                         max_draws: int = MAX_WEIGHT_DRAWS) -> list[ExperimentRow]:
    """Three rows per degree in ``nmin..nmax``; the weight stream for ``n`` depends only on ``(seed, n)``."""
    cfg = cfg or PrecisionConfig()
    if not 1 <= nmin <= nmax:
        raise ValueError("need 1 <= nmin <= nmax")
    rows = []
    for n in range(nmin, nmax + 1):
        w, ws, wd, _ = draw_weights(n, np.random.default_rng([seed, n]), max_draws)
        triple = triple_rows(n, w, ws, wd, seed, cfg)
        check_triple(triple, cfg)
        rows += triple
    return rows


def rejection_counts(nmin: int = 3, nmax: int = 8, seed: int = 0) -> dict[int, int]:
    """Draws needed per ``n`` by :func:`run_table_experiment` with the same seed."""
    return {n: draw_weights(n, np.random.default_rng([seed, n]))[3] for n in range(nmin, nmax + 1)}


def search_counterexamples(quantity: str, budget: int = 200, seed: int = 0,
                           cfg: PrecisionConfig | None = None,
                           nmin: int = 3, nmax: int = 8) -> SearchResult:
    """Look for triples where ``M`` is above and below some ``B_i`` in ``quantity``.

    Each draw picks ``n`` uniformly and reruns the table protocol for it.
    """
    cfg = cfg or PrecisionConfig()
    try:
        q = SEARCH_QUANTITIES[quantity]
    except KeyError:
        raise ValueError(f"unknown quantity {quantity!r}") from None
    result = SearchResult(q, budget)
    picker = random.Random(f"counterexample:{seed}")
    for k in range(budget):
        n = picker.randint(nmin, nmax)
        w, ws, wd, _ = draw_weights(n, np.random.default_rng([seed, n, k + 1]))
        m, *others = triple_rows(n, w, ws, wd, seed, cfg)
        result.draws = k + 1
        for b in others:
            if "M>B" not in result.found and m.value(q) > b.value(q):
                result.found["M>B"] = CounterexamplePair(q, "M>B", m, b, k)
            if "M<B" not in result.found and m.value(q) < b.value(q):
                result.found["M<B"] = CounterexamplePair(q, "M<B", b, m, k)
        if result.complete:
            break
    return result


# -- emission --------------------------------------------------------------------------

def _short(x: Decimal) -> str:
    return format(x, ".4e")


TABLES = (
    ("Minimal eigenvalue and singular value", ("lambda_min", "sigma_min")),
    ("Infinity condition numbers", ("kappa_inf",)),
    ("Maximal singular value", ("sigma_max",)),
)


def _grid(rows: list[ExperimentRow]) -> dict[int, dict[str, ExperimentRow]]:
    grid: dict[int, dict[str, ExperimentRow]] = {}
    for r in rows:
        grid.setdefault(r.n, {})[r.label] = r
    return grid


def _table_lines(rows: list[ExperimentRow]):
    grid = _grid(rows)
    labels = [lab for lab in LABELS if any(lab in g for g in grid.values())]
    for title, qs in TABLES:
        header = ["n"] + [f"{q}({lab})" for lab in labels for q in qs]
        body = []
        for n in sorted(grid):
            cells = [str(n)]
            for lab in labels:
                r = grid[n].get(lab)
                cells += [_short(r.value(q)) if r else "" for q in qs]
            body.append(cells)
        yield title, header, body


def emit_tables(rows: list[ExperimentRow], fmt: str = "text") -> str:
    if not rows:
        raise ValueError("no rows to emit")
    if fmt == "json":
        return json.dumps({"rows": [r.to_json() for r in rows]}, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "label", *QUANTITIES, "seed"])
        for r in rows:
            writer.writerow([r.n, r.label, *(_short(r.value(q)) for q in QUANTITIES), r.seed])
        return buf.getvalue()
    if fmt == "text":
        blocks = []
        for title, header, body in _table_lines(rows):
            widths = [max(len(c) for c in col) for col in zip(header, *body)]
            lines = [title, "  ".join(h.rjust(w) for h, w in zip(header, widths))]
            lines += ["  ".join(c.rjust(w) for c, w in zip(cells, widths)) for cells in body]
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def rows_from_json(text: str) -> list[ExperimentRow]:
    return [ExperimentRow.from_json(r) for r in json.loads(text)["rows"]]
