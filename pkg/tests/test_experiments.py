from decimal import Decimal
from fractions import Fraction

import pytest

from tpbasis.conversion import identity_holds
from tpbasis.experiments import (ExperimentRow, InequalityViolation, check_triple, emit_tables,
                                 rows_from_json, run_table_experiment, search_counterexamples)
from tpbasis.numerics import PrecisionConfig


@pytest.fixture(scope="module")
def rows():
    return run_table_experiment(3, 8, seed=0, cfg=PrecisionConfig(100))


def fake_row(n=3, label="M", lam=Decimal("0.02994"), **kw):
    base = dict(lambda_min=lam, lambda_max=Decimal(1), sigma_min=Decimal("0.012267"),
                sigma_max=Decimal("1.1934"), kappa_inf=Decimal("141.38"), kappa_2=Decimal("97.3"))
    base.update(kw)
    w = (Fraction(1),) * (n + 1)
    return ExperimentRow(n, label, **base, weights=w, weights_said_ball=w, weights_dp=w, seed=0)


def test_eighteen_rows(rows):
    assert len(rows) == 18
    assert [(r.n, r.label) for r in rows[:3]] == [(3, "M"), (3, "B1"), (3, "B2")]


def test_rows_are_extremal_and_stochastic(rows):
    tol = PrecisionConfig(100).scaled_tolerance(15)
    for k in range(0, 18, 3):
        m, b1, b2 = rows[k:k + 3]
        for b in (b1, b2):
            assert m.lambda_min >= b.lambda_min - tol
            assert m.sigma_min >= b.sigma_min - tol
            assert m.kappa_inf <= b.kappa_inf
        for r in (m, b1, b2):
            assert abs(r.lambda_max - 1) <= tol
            assert all(getattr(r, q) > 0 for q in ("lambda_min", "sigma_min", "sigma_max", "kappa_inf", "kappa_2"))


def test_weights_satisfy_identity(rows):
    for r in rows[::3]:
        assert identity_holds(r.weights, r.weights_said_ball, r.n, "said-ball")
        assert identity_holds(r.weights, r.weights_dp, r.n, "dp")
        assert all(w > 0 for w in r.weights_said_ball + r.weights_dp)
        assert all(1 <= w <= 1000 for w in r.weights)


def test_deterministic():
    cfg = PrecisionConfig(40)
    a = emit_tables(run_table_experiment(3, 5, seed=7, cfg=cfg), "json")
    b = emit_tables(run_table_experiment(3, 5, seed=7, cfg=cfg), "json")
    assert a == b
    assert a != emit_tables(run_table_experiment(3, 5, seed=8, cfg=cfg), "json")


def test_violation_raises_with_record():
    cfg = PrecisionConfig(30)
    good = fake_row(label="B1", lam=Decimal("0.01"))
    with pytest.raises(InequalityViolation) as info:
        check_triple([fake_row(lam=Decimal("0.001")), good, good], cfg)
    assert info.value.record["broken"] == ["lambda_min"]


def test_display_style():
    text = emit_tables([fake_row()], "text")
    assert "2.9940e-2" in text and "1.4138e+2" in text and "1.1934e+0" in text


def test_single_row_tables():
    blocks = emit_tables([fake_row()], "text").strip().split("\n\n")
    assert len(blocks) == 3
    assert all(len(b.splitlines()) == 3 for b in blocks)  # title, header, one row


def test_three_tables_for_full_run(rows):
    blocks = emit_tables(rows, "text").strip().split("\n\n")
    assert [b.splitlines()[0] for b in blocks] == [
        "Minimal eigenvalue and singular value", "Infinity condition numbers", "Maximal singular value"]
    assert all(len(b.splitlines()) == 2 + 6 for b in blocks)


def test_json_roundtrip(rows):
    assert rows_from_json(emit_tables(rows, "json")) == rows


def test_csv(rows):
    lines = emit_tables(rows, "csv").splitlines()
    assert lines[0].startswith("n,label,lambda_min")
    assert len(lines) == 19


def test_empty_and_unknown_format():
    with pytest.raises(ValueError):
        emit_tables([], "text")
    with pytest.raises(ValueError):
        emit_tables([fake_row()], "xml")


def test_zero_budget():
    r = search_counterexamples("sigma_max", budget=0)
    assert r.status == "budget exhausted" and r.found == {} and r.draws == 0


@pytest.mark.parametrize("quantity", ["sigma-max", "kappa2"])
def test_counterexamples_found(quantity):
    r = search_counterexamples(quantity, budget=200, seed=1, cfg=PrecisionConfig(50))
    assert r.complete
    for pair in r.found.values():
        assert pair.first.n == pair.second.n and pair.first.weights == pair.second.weights
        assert pair.first.value(pair.quantity) > pair.second.value(pair.quantity)
        assert "M" in (pair.first.label, pair.second.label)
    assert r.found["M>B"].first.label == "M" and r.found["M<B"].second.label == "M"


def test_unknown_quantity():
    with pytest.raises(ValueError):
        search_counterexamples("rho")
