"""Seeded randomized checks of the extremal inequalities for TP matrices.

Each ``check_*`` function runs one trial and returns a :class:`PropertyReport`
with ``attempted == 1``; :func:`run_suite` draws inputs from a seeded model
and merges the per-trial reports.  Inequalities between exact quantities
(entrywise domination, infinity and one-norm condition numbers) are decided
in rational arithmetic with no tolerance; eigenvalue and singular value
comparisons use ``10**(-digits + 15)``.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import reduce

import numpy as np

from . import spectral
from .bases import Bernstein, BasisSystem, RationalBasis, basis_from_json
from .collocation import collocation_matrix, is_stochastic, uniform_interior_nodes
from .conversion import all_positive, convert_weights, draw_convertible_weights, polynomial_basis
from .matrix import Matrix
from .numerics import PrecisionConfig, format_decimal, format_rational, to_decimal
from .tpcore import (BidiagonalFactorization, checkerboard, ElementaryFactor, compose, determinant,
                     elementary_matrix, factor_slots, inverse, is_tp)

SUITES = ("thm3.1", "cor3.2", "cor3.3", "wielandt", "thm2.4")
SPECTRAL_SHIFT = 15
WIELANDT_TOLERANCE = Decimal("1e-20")


class PreconditionError(ValueError):
    """Inputs do not satisfy the hypotheses of the checked statement."""


@dataclass(frozen=True)
class RandomModelConfig:
    seed: int = 0
    n_min: int = 2
    n_max: int = 8
    alpha_max: Fraction = Fraction(95, 100)
    alpha_denominator: int = 1000
    weight_low: int = 1
    weight_high: int = 1000
    trials: int = 100

    def __post_init__(self):
        if not 0 <= self.alpha_max < 1:
            raise ValueError("alpha_max must lie in [0, 1)")
        if not 1 <= self.weight_low <= self.weight_high:
            raise ValueError("weight bounds must be positive integers with low <= high")
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError("need 1 <= n_min <= n_max")

    def trial_rng(self, k: int) -> random.Random:
        return random.Random(f"{self.seed}:{k}")


@dataclass
class PropertyReport:
    property_id: str
    attempted: int = 0
    passed: int = 0
    margins: dict = field(default_factory=dict)
    seed: int | None = None
    digits: int | None = None
    failures: list = field(default_factory=list)

    @property
    def worst_margin(self) -> Decimal | None:
        return min(self.margins.values(), default=None)

    @property
    def ok(self) -> bool:
        return self.passed == self.attempted and not self.failures

    def merge(self, other: "PropertyReport") -> "PropertyReport":
        margins = dict(self.margins)
        for key, value in other.margins.items():
            margins[key] = min(value, margins[key]) if key in margins else value
        return PropertyReport(self.property_id, self.attempted + other.attempted,
                              self.passed + other.passed, margins,
                              self.seed if self.seed is not None else other.seed,
                              self.digits or other.digits, self.failures + other.failures)

    def to_json(self) -> dict:
        return {
            "property": self.property_id,
            "attempted": self.attempted,
            "passed": self.passed,
            "worst_margin": None if self.worst_margin is None else format_decimal(self.worst_margin),
            "margins": {k: format_decimal(v) for k, v in sorted(self.margins.items())},
            "seed": self.seed,
            "digits": self.digits,
            "failures": self.failures,
        }

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{self.property_id}: {status} {self.passed}/{self.attempted} "
                 f"(seed={self.seed}, digits={self.digits})"]
        for key, value in sorted(self.margins.items()):
            shown = f"{value:.4e}" if value else "0"
            lines.append(f"  {key:<36} worst margin {shown}")
        for failure in self.failures[:5]:
            lines.append(f"  failed: {failure.get('claims')}")
        return "\n".join(lines)


# -- random inputs ------------------------------------------------------------------

def random_alpha(rng: random.Random, model: RandomModelConfig) -> Fraction:
    q = model.alpha_denominator
    return Fraction(rng.randint(0, int(model.alpha_max * q)), q)


def random_factorization(n: int, rng: random.Random, model: RandomModelConfig) -> BidiagonalFactorization:
    return BidiagonalFactorization(n, {rc: random_alpha(rng, model) for _, _, rc in factor_slots(n)})


def random_stochastic_tp(n: int, rng: random.Random, model: RandomModelConfig | None = None) -> Matrix:
    """Nonsingular stochastic TP matrix composed from random corner cuttings."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return compose(random_factorization(n, rng, model or RandomModelConfig()))


def random_tp(n: int, rng: random.Random, model: RandomModelConfig) -> Matrix:
    """Nonsingular TP matrix; half the time a stochastic one scaled by a positive diagonal."""
    m = random_stochastic_tp(n, rng, model)
    if rng.random() < 0.5:
        m = m.scale_rows([Fraction(rng.randint(1, 100), 10) for _ in range(n)])
    return m


def random_factor(n: int, rng: random.Random, model: RandomModelConfig) -> ElementaryFactor:
    return ElementaryFactor(rng.choice("LU"), rng.randint(2, n), random_alpha(rng, model))


# -- quantities ---------------------------------------------------------------------

class _Quantities:
    """Lazily computed spectral data of one exact matrix."""

    def __init__(self, m: Matrix, cfg: PrecisionConfig):
        self.m, self.cfg = m, cfg
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def inverse(self) -> Matrix:
        return self._get("inv", lambda: inverse(self.m))

    @property
    def lambda_min(self) -> Decimal:
        return self._get("lam", lambda: spectral.eigenvalues(self.m, self.cfg)[0])

    @property
    def sigma_min(self) -> Decimal:
        return self._get("sig", lambda: spectral.singular_values(self.m, self.cfg)[0])

    @property
    def kappa_inf(self) -> Fraction:
        return self._get("kinf", lambda: self.m.norm_inf() * self.inverse.norm_inf())

    @property
    def kappa_1(self) -> Fraction:
        return self._get("k1", lambda: self.m.norm_1() * self.inverse.norm_1())


def _domination_margin(big: Matrix, small: Matrix) -> Fraction:
    """``min |big| - |small|`` over entries; nonnegative iff ``|big|`` dominates ``small``."""
    return min(abs(b) - abs(s) for b, s in zip(big.entries(), small.entries()))


def _product_claims(mq: _Quantities, aq: _Quantities, cq: _Quantities, cfg: PrecisionConfig) -> dict:
    """Slack of every inequality comparing ``M`` with ``A = M K`` and ``C = K^T M``.

    Each value is ``(margin, exact)``; the claim holds when the margin is
    ``>= 0`` (exact) or ``>= -tolerance``.
    """
    with localcontext(cfg.context):
        return _claims(mq, aq, cq)


def _claims(mq, aq, cq) -> dict:
    return {
        "i: |A^-1| >= |M^-1|": (_domination_margin(aq.inverse, mq.inverse), True),
        "i: |C^-1| >= |M^-1|": (_domination_margin(cq.inverse, mq.inverse), True),
        "ii: lambda_min(A) <= lambda_min(M)": (mq.lambda_min - aq.lambda_min, False),
        "ii: lambda_min(C) <= lambda_min(M)": (mq.lambda_min - cq.lambda_min, False),
        "iii: sigma_min(A) <= sigma_min(M)": (mq.sigma_min - aq.sigma_min, False),
        "iii: sigma_min(C) <= sigma_min(M)": (mq.sigma_min - cq.sigma_min, False),
        "iv: kappa_inf(M) <= kappa_inf(A)": (aq.kappa_inf - mq.kappa_inf, True),
        "iv: kappa_1(M) <= kappa_1(C)": (cq.kappa_1 - mq.kappa_1, True),
    }


def _report(property_id: str, claims: dict, cfg: PrecisionConfig, inputs: dict,
            tolerance: Decimal | None = None) -> PropertyReport:
    tol = cfg.scaled_tolerance(SPECTRAL_SHIFT) if tolerance is None else tolerance
    margins, failed = {}, []
    for name, (margin, exact) in claims.items():
        ok = margin >= 0 if exact else margin >= -tol
        margins[name] = to_decimal(margin, cfg) if isinstance(margin, Fraction) else margin
        if not ok:
            failed.append(name)
    report = PropertyReport(property_id, 1, int(not failed), margins, inputs.get("seed"), cfg.digits)
    if failed:
        report.failures.append({**inputs, "claims": failed})
    return report


def _require_nonsingular_tp(m: Matrix, name: str) -> None:
    if not m.is_rational:
        raise PreconditionError(f"{name} must have exact rational entries")
    if not m.is_square or determinant(m) == 0:
        raise PreconditionError(f"{name} must be square and nonsingular")
    if not is_tp(m):
        raise PreconditionError(f"{name} is not TP")


# -- single-trial checks --------------------------------------------------------------

def check_corner_cut(m: Matrix, f: ElementaryFactor, cfg: PrecisionConfig,
                      seed: str | None = None) -> PropertyReport:
    """Compare ``M`` with ``A = M E`` and ``C = E^T M`` for one corner cutting ``E``."""
    _require_nonsingular_tp(m, "M")
    e = elementary_matrix(f, m.nrows)
    inputs = {"suite": "thm3.1", "seed": seed, "M": m.to_json(), "factor": f.to_json()}
    claims = _product_claims(_Quantities(m, cfg), _Quantities(m @ e, cfg), _Quantities(e.T @ m, cfg), cfg)
    return _report("thm3.1", claims, cfg, inputs)


def check_stochastic_multiplier(m: Matrix, k: Matrix, cfg: PrecisionConfig,
                        seed: str | None = None) -> PropertyReport:
    """Compare ``M`` with ``A = M K`` and ``C = K^T M`` for a stochastic TP ``K``."""
    _require_nonsingular_tp(m, "M")
    _require_nonsingular_tp(k, "K")
    if not is_stochastic(k):
        raise PreconditionError("K must be stochastic")
    inputs = {"suite": "cor3.2", "seed": seed, "M": m.to_json(), "K": k.to_json()}
    claims = _product_claims(_Quantities(m, cfg), _Quantities(m @ k, cfg), _Quantities(k.T @ m, cfg), cfg)
    return _report("cor3.2", claims, cfg, inputs)


def comparison_bases(space: str, n: int, weights, custom=None) -> tuple[BasisSystem, BasisSystem]:
    """The normalized B-basis and the competing NTP basis for a comparison space."""
    if space == "custom":
        if custom is None:
            raise ValueError("custom space needs (normalized_basis, other_basis)")
        return custom
    targets = {"said-ball": "said-ball", "dp": "dp",
               "rational-bernstein-vs-rational-said-ball": "said-ball",
               "rational-bernstein-vs-rational-dp": "dp"}
    if space not in targets:
        raise ValueError(f"unknown comparison space {space!r}")
    target = targets[space]
    converted = convert_weights(target, weights, n)
    if not all_positive(converted):
        raise PreconditionError(f"weights do not convert to positive {target} weights")
    return (RationalBasis(Bernstein(n), tuple(weights)),
            RationalBasis(polynomial_basis(target, n), converted))


def check_normalized_basis(space: str, n: int, weights, nodes, cfg: PrecisionConfig,
                        custom=None, seed: str | None = None) -> PropertyReport:
    """Collocation matrix ``M`` of the normalized B-basis against ``A`` of another NTP basis."""
    normalized, other = comparison_bases(space, n, weights, custom)
    nodes = tuple(nodes)
    if len(nodes) != normalized.dimension:
        raise PreconditionError("the basis comparison is checked on square collocation matrices")
    m = collocation_matrix(normalized, nodes, cfg)
    a = collocation_matrix(other, nodes, cfg)
    inputs = {"suite": "cor3.3", "seed": seed, "space": space, "n": n,
              "weights": None if weights is None else [format_rational(w) for w in weights],
              "nodes": [format_rational(t) for t in nodes]}
    if space == "custom":
        inputs["custom"] = [normalized.to_json(), other.to_json()]
    if m.is_rational and determinant(m) == 0:
        sm, sa = spectral.singular_values(m, cfg)[0], spectral.singular_values(a, cfg)[0]
        claims = {"singular: sigma_min(M) == 0": (-abs(sm), True),
                  "singular: sigma_min(A) == 0": (-abs(sa), True)}
        return _report("cor3.3", claims, cfg, inputs)
    mq, aq = _Quantities(m, cfg), _Quantities(a, cfg)
    with localcontext(cfg.context):
        claims = {
            "lambda_min(M) >= lambda_min(A)": (mq.lambda_min - aq.lambda_min, False),
            "sigma_min(M) >= sigma_min(A)": (mq.sigma_min - aq.sigma_min, False),
            "kappa_inf(M) <= kappa_inf(A)": (aq.kappa_inf - mq.kappa_inf, True),
        }
    return _report("cor3.3", claims, cfg, inputs)


def check_wielandt(m: Matrix, c: Matrix, cfg: PrecisionConfig, seed: str | None = None) -> PropertyReport:
    """``rho(M) >= rho(C)`` when the nonnegative ``M`` dominates ``C``."""
    if not m.is_nonnegative():
        raise PreconditionError("M must be nonnegative")
    if m.shape != c.shape or not m.dominates(c):
        raise PreconditionError("M does not dominate C")
    inputs = {"suite": "wielandt", "seed": seed, "M": m.to_json(), "C": c.to_json()}
    with localcontext(cfg.context):
        margin = spectral.spectral_radius(m, cfg) - spectral.spectral_radius(c, cfg)
    return _report("wielandt", {"rho(M) >= rho(C)": (margin, False)}, cfg, inputs,
                   tolerance=WIELANDT_TOLERANCE)


def check_tp_spectrum(m: Matrix, cfg: PrecisionConfig, seed: str | None = None) -> PropertyReport:
    """A nonsingular TP matrix has positive eigenvalues and ``J M^-1 J`` is TP.

    The margin reported is the smallest eigenvalue; the TP claim is exact.
    """
    _require_nonsingular_tp(m, "M")
    lam = spectral.eigenvalues(m, cfg)[0]
    failed = [name for name, ok in (("eigenvalues positive", lam > 0),
                                    ("J M^-1 J is TP", is_tp(checkerboard(inverse(m)))))
              if not ok]
    report = PropertyReport("thm2.4", 1, int(not failed), {"lambda_min": lam}, seed, cfg.digits)
    if failed:
        report.failures.append({"suite": "thm2.4", "seed": seed, "M": m.to_json(), "claims": failed})
    return report


# -- suites ---------------------------------------------------------------------------

def _random_nodes(n: int, rng: random.Random) -> tuple[Fraction, ...]:
    q = 8 * (n + 1)
    return tuple(Fraction(k, q) for k in sorted(rng.sample(range(q + 1), n + 1)))


def run_trial(suite: str, k: int, model: RandomModelConfig, cfg: PrecisionConfig) -> PropertyReport:
    """Trial ``k`` of ``suite``; the inputs depend only on ``(model.seed, k)``."""
    rng = model.trial_rng(k)
    tag = f"{model.seed}:{k}"
    n = rng.randint(model.n_min, model.n_max)
    if suite == "thm3.1":
        n = max(n, 2)
        return check_corner_cut(random_tp(n, rng, model), random_factor(n, rng, model), cfg, tag)
    if suite == "cor3.2":
        n = max(n, 2)
        return check_stochastic_multiplier(random_tp(n, rng, model), random_stochastic_tp(n, rng, model), cfg, tag)
    if suite == "cor3.3":
        target = rng.choice(["said-ball", "dp"])
        w, _, _, _ = draw_convertible_weights(n, np.random.default_rng(rng.getrandbits(64)),
                                              model.weight_low, model.weight_high)
        nodes = uniform_interior_nodes(n) if rng.random() < 0.5 else _random_nodes(n, rng)
        return check_normalized_basis(target, n, w, nodes, cfg, seed=tag)
    if suite == "wielandt":
        m = Matrix(tuple(tuple(Fraction(rng.randint(0, 10), 10) for _ in range(n)) for _ in range(n)))
        c = m.map(lambda v: v * Fraction(rng.randint(0, 4), 4) * rng.choice((1, -1)))
        if rng.random() < 0.5:
            c = m.map(lambda v: v * rng.choice((1, -1)))
        return check_wielandt(m, c, cfg, tag)
    if suite == "thm2.4":
        return check_tp_spectrum(random_tp(max(n, 2), rng, model), cfg, tag)
    raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")


def _run_chunk(args) -> PropertyReport:
    suite, ks, model, cfg = args
    reports = [run_trial(suite, k, model, cfg) for k in ks]
    return reduce(PropertyReport.merge, reports, PropertyReport(suite, seed=model.seed, digits=cfg.digits))


def run_suite(suite: str, model: RandomModelConfig, cfg: PrecisionConfig, workers: int = 1) -> PropertyReport:
    """Run ``model.trials`` seeded trials of ``suite`` and merge their reports."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    ks = list(range(model.trials))
    if workers <= 1:
        return _run_chunk((suite, ks, model, cfg))
    chunks = [ks[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_run_chunk, [(suite, c, model, cfg) for c in chunks]))
    return reduce(PropertyReport.merge, parts)


def replay(failure: dict, cfg: PrecisionConfig) -> PropertyReport:
    """Re-run a serialized failure record."""
    suite = failure["suite"]
    if suite == "thm3.1":
        return check_corner_cut(Matrix.from_json(failure["M"]), ElementaryFactor.from_json(failure["factor"]),
                                 cfg, failure.get("seed"))
    if suite == "cor3.2":
        return check_stochastic_multiplier(Matrix.from_json(failure["M"]), Matrix.from_json(failure["K"]),
                                   cfg, failure.get("seed"))
    if suite == "cor3.3":
        weights = failure["weights"]
        custom = failure.get("custom")
        return check_normalized_basis(failure["space"], failure["n"],
                                   None if weights is None else [Fraction(w) for w in weights],
                                   [Fraction(t) for t in failure["nodes"]], cfg,
                                   custom=custom and tuple(basis_from_json(b) for b in custom),
                                   seed=failure.get("seed"))
    if suite == "wielandt":
        return check_wielandt(Matrix.from_json(failure["M"]), Matrix.from_json(failure["C"]),
                              cfg, failure.get("seed"))
    if suite == "thm2.4":
        return check_tp_spectrum(Matrix.from_json(failure["M"]), cfg, failure.get("seed"))
    raise ValueError(f"unknown suite {suite!r}")
