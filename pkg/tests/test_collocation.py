from fractions import Fraction

import pytest

from tpbasis.bases import DP, Bernstein, CosineEven, DomainError, SaidBall, TrigPoly, rationalize
from tpbasis.collocation import (Matrix, collocation_matrix, domain_nodes, is_stochastic,
                                 uniform_interior_nodes)
from tpbasis.numerics import PrecisionConfig
from tpbasis.tpcore import determinant, is_tp

F = Fraction


def test_bernstein_endpoints_give_identity():
    assert collocation_matrix(Bernstein(1), [F(0), F(1)]) == Matrix.identity(2)


def test_bernstein_quadratic():
    m = collocation_matrix(Bernstein(2), [F(0), F(1, 2), F(1)])
    assert m == Matrix.from_rows([[1, 0, 0], [F(1, 4), F(1, 2), F(1, 4)], [0, 0, 1]])


def test_rational_bernstein_endpoints():
    assert collocation_matrix(rationalize(Bernstein(1), [1, 3]), [F(0), F(1)]) == Matrix.identity(2)


def test_shape_follows_nodes_and_dimension():
    m = collocation_matrix(SaidBall(4), [F(1, 9), F(1, 2), F(2, 3)])
    assert m.shape == (3, 5)


def test_stochastic_examples():
    assert is_stochastic(Matrix.identity(3))
    assert is_stochastic(Matrix.from_rows([[F(1, 2), F(1, 2)], [F(1, 4), F(3, 4)]]))
    assert not is_stochastic(Matrix.from_rows([[1, 1], [0, 1]]))
    assert not is_stochastic(Matrix.from_rows([[F(3, 2), F(-1, 2)], [0, 1]]))


def test_uniform_nodes():
    assert uniform_interior_nodes(1) == (F(1, 3), F(2, 3))
    assert uniform_interior_nodes(3) == (F(1, 5), F(2, 5), F(3, 5), F(4, 5))
    nodes = uniform_interior_nodes(8)
    assert len(nodes) == 9 and nodes[-1] == F(9, 10)


@pytest.mark.parametrize("nodes", [[F(1, 2), F(1, 3)], [F(1, 2), F(1, 2)]])
def test_nodes_must_increase(nodes):
    with pytest.raises(ValueError):
        collocation_matrix(Bernstein(1), nodes)


def test_node_outside_domain():
    with pytest.raises(DomainError):
        collocation_matrix(Bernstein(1), [F(1, 2), F(2)])


@pytest.mark.parametrize("n", range(1, 9))
def test_ntp_collocation_is_stochastic_tp(n, rng):
    w = [rng.randint(1, 1000) for _ in range(n + 1)]
    nodes = uniform_interior_nodes(n)
    for basis in (Bernstein(n), SaidBall(n), DP(n), rationalize(Bernstein(n), w)):
        m = collocation_matrix(basis, nodes)
        assert is_stochastic(m)
        assert is_tp(m)


@pytest.mark.parametrize("n", range(1, 9))
def test_square_bernstein_nonsingular(n, rng):
    q = 50
    nodes = [F(k, q) for k in sorted(rng.sample(range(1, q), n + 1))]
    assert determinant(collocation_matrix(Bernstein(n), nodes)) != 0


def test_trig_collocation_decimal():
    cfg = PrecisionConfig(50)
    for basis in (CosineEven(3), TrigPoly(1, F(1, 2))):
        nodes = domain_nodes(basis, [F(k, basis.dimension + 1) for k in range(1, basis.dimension + 1)], cfg)
        m = collocation_matrix(basis, nodes, cfg)
        assert m.backend == "decimal"
        assert is_stochastic(m, cfg)
        assert is_tp(m, cfg)


def test_json_roundtrip():
    m = collocation_matrix(DP(3), uniform_interior_nodes(3))
    obj = m.to_json()
    assert obj["rows"] == 4 and obj["cols"] == 4 and obj["backend"] == "rational"
    assert Matrix.from_json(obj) == m
