import random

import pytest

from mcmkit.errors import UsageError
from mcmkit.linalg import QQ
from mcmkit.rings import WeightedPolyRing, poly_mul


def circle_ring(p=7):
    R = WeightedPolyRing(p, ["x", "y"])
    return R.quotient(["x^2+y^2"])


def cusp_ring(p=7):
    R = WeightedPolyRing(p, ["x", "y"], [3, 2])
    return R.quotient(["x^2+y^3"])


def test_degree_basis_circle_d1():
    A = circle_ring()
    assert A.degree_basis(1) == ((1, 0), (0, 1))  # {x, y}


def test_degree_basis_circle_d3():
    # Hilbert series (1-t^2)/(1-t)^2 = 1,2,2,2,...
    A = circle_ring()
    assert A.hilbert_function(0) == 1
    assert A.hilbert_function(1) == 2
    assert A.hilbert_function(2) == 2
    assert A.hilbert_function(3) == 2


def test_degree_basis_weighted_cusp_d6():
    A = cusp_ring()
    # weighted degree 6 monomials are x^2 and y^3, one relation between them
    assert A.hilbert_function(6) == 1


def test_unit_law():
    A = circle_ring()
    x = A.element("x")
    one = A.one()
    assert one * x == x


def test_multiply_reduces_by_relation():
    A = circle_ring()
    x = A.element("x")
    assert x * x == A.element("-y^2")


def test_multiply_into_zero_piece():
    A = WeightedPolyRing(7, ["x"]).quotient(["x^2"])
    x = A.element("x")
    prod = x * x
    assert prod.is_zero()
    assert A.hilbert_function(2) == 0


def test_hilbert_function_monomial_ci():
    A = WeightedPolyRing(7, ["x", "y"]).quotient(["x^2", "y^2"])
    assert [A.hilbert_function(d) for d in range(4)] == [1, 2, 1, 0]


def test_hilbert_function_cubic_cone():
    A = WeightedPolyRing(7, ["x", "y", "z"]).quotient(["x^3+y^3+z^3"])
    assert A.hilbert_function(3) == 9  # 10 cubics minus one relation


def test_hilbert_function_degree_zero():
    for A in (circle_ring(), cusp_ring()):
        assert A.hilbert_function(0) == 1


def test_hilbert_series_ci_consistency():
    # generating function of the Hilbert function equals the CI product
    for A in (circle_ring(), cusp_ring(),
              WeightedPolyRing(5, ["x", "y"]).quotient(["x^2", "y^2"])):
        assert A.ci_check()


def test_non_regular_sequence_rejected():
    A = WeightedPolyRing(7, ["x", "y"]).quotient(["x^2", "x*y"])
    assert not A.ci_check()


def test_normal_form_idempotent():
    A = cusp_ring()
    rng = random.Random(0)
    for _ in range(25):
        d = rng.randrange(0, 10)
        monos = A.ambient.monomials(d)
        if not monos:
            continue
        poly = {m: rng.randrange(1, 7) for m in monos if rng.random() < 0.6}
        nf = A.normal_form(poly)
        assert A.normal_form(nf) == nf


def test_multiply_agrees_with_naive_oracle():
    # naive polynomial multiplication followed by reduction
    A = circle_ring()
    rng = random.Random(1)
    for _ in range(20):
        d1, d2 = rng.randrange(0, 5), rng.randrange(0, 5)
        p1 = {m: rng.randrange(1, 7) for m in A.ambient.monomials(d1)}
        p2 = {m: rng.randrange(1, 7) for m in A.ambient.monomials(d2)}
        a = A.element(p1)
        b = A.element(p2)
        expect = A.normal_form(poly_mul(p1, p2, A.field))
        assert (a * b).poly == expect


def test_mixed_ring_operands_rejected():
    A = circle_ring()
    B = cusp_ring()
    with pytest.raises(UsageError):
        A.element("x") * B.element("x")


def test_parser_features():
    R = WeightedPolyRing(7, ["x", "y"])
    assert R.parse("3*x*y") == R.parse("3xy")
    assert R.parse("x^2 - 2") == R.parse("-2 + x^2")
    assert R.parse("(x+y)^2") == R.parse("x^2 + 2xy + y^2")
    with pytest.raises(UsageError):
        R.parse("z")


def test_rational_coefficients():
    R = WeightedPolyRing(0, ["x", "y"])
    A = R.quotient(["x^2+y^2"])
    x = A.element("x")
    assert (x * x) == A.element("-y^2")
    assert A.field == QQ


def test_ring_hilbert_samuel_multiplicity():
    # plane-curve multiplicity oracle: e = min(2, 3) = 2 for the cusp
    A = cusp_ring()
    assert A.multiplicity() == 2
    assert A.krull_dim() == 1
    B = WeightedPolyRing(7, ["x", "y", "z"]).quotient(["x^3+y^3+z^3"])
    assert B.multiplicity() == 3
    assert B.krull_dim() == 2


def test_artinian_detection():
    A = WeightedPolyRing(7, ["x", "y"]).quotient(["x^2", "y^2"])
    assert A.is_artinian()
    assert A.krull_dim() == 0
    assert not cusp_ring().is_artinian()
