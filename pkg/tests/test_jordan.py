import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from qkz.exceptions import AlgebraMismatch
from qkz.jordan import (COMMUTATIVE, JORDAN, Algebra, NCPoly, PolyCoeff, check_associativity,
                        check_hilbert, hilbert_dimension, hilbert_dimension_by_rank,
                        jordan_identity_sides, nc_multiply, nc_power, quantum, random_ncpoly,
                        verify_jordan_identity)
from qkz.linalg import SparseMatrix

from conftest import rationals

p = PolyCoeff.symbol()


def gens(alg):
    return NCPoly.x(alg), NCPoly.y(alg)


def test_poly_coeff_arithmetic():
    a = PolyCoeff([1, 2])          # 1 + 2p
    b = PolyCoeff([0, 0, 3, 0])    # 3p^2, trailing zero trimmed
    assert b.coeffs == (0, 0, 3)
    assert (a * b).coeffs == (0, 0, 3, 6)
    assert (a - a).is_zero()
    assert a(Fraction(1, 2)) == 2
    assert (p * p + p).render() == "p^2+p"
    assert PolyCoeff([Fraction(-1, 2), 0, -1]).render() == "-p^2-1/2"


def test_jordan_products():
    x, y = gens(JORDAN)
    assert x * y == y * x + y * y
    assert str(x * y) == "y^2 + y*x"
    assert x * y * y == NCPoly(JORDAN, {(2, 1): 1, (3, 0): 2})


def test_quantum_and_commutative_products():
    x, y = gens(quantum(2))
    assert x * y == NCPoly(quantum(2), {(1, 1): 2})
    xs, ys = gens(quantum())
    assert (xs * xs * ys).coefficient(1, 2) == PolyCoeff([0, 0, 1])  # q^2
    xc, yc = gens(COMMUTATIVE)
    assert (xc + yc) ** 2 == NCPoly(COMMUTATIVE, {(0, 2): 1, (1, 1): 2, (2, 0): 1})


def test_power_examples():
    x, y = gens(JORDAN)
    assert nc_power(x + p * y, 1) == x + p * y
    sq = nc_power(x + p * y, 2)
    assert sq == NCPoly(JORDAN, {(0, 2): 1, (1, 1): 2 * p, (2, 0): p * p + p})
    assert sq.render() == "(p^2+p)*y^2 + 2p*y*x + x^2"
    assert nc_power(x, 0) == NCPoly.one(JORDAN)
    with pytest.raises(ValueError):
        nc_power(x, -1)


def test_algebra_mismatch():
    with pytest.raises(AlgebraMismatch):
        nc_multiply(NCPoly.x(JORDAN), NCPoly.x(quantum(2)))
    with pytest.raises(AlgebraMismatch):
        NCPoly.x(JORDAN) + NCPoly.y(COMMUTATIVE)


@pytest.mark.parametrize("k", range(1, 11))
def test_identity(k):
    rep = verify_jordan_identity(k)
    assert rep.passed and len(rep) == 3


def test_identity_k2_by_hand():
    lhs, rhs, closed = jordan_identity_sides(2)
    want = NCPoly(JORDAN, {(0, 2): 1, (1, 1): 2 * p, (2, 0): p * (p + 1)})
    assert lhs == rhs == closed == want


def test_identity_fails_in_other_planes():
    # the product form depends on the Jordan relation
    x, y = gens(COMMUTATIVE)
    lhs = nc_power(x + p * y, 2)
    rhs = (x + (p - 1) * y) * (x + (p + 1) * y)
    assert lhs != rhs


@given(st.integers(1, 6), rationals(12, 5))
def test_specialisation_coherence(k, value):
    x, y = gens(JORDAN)
    lhs, rhs, closed = jordan_identity_sides(k)
    numeric = nc_power(x + value * y, k)
    assert lhs.specialize(value) == numeric
    prod_ = NCPoly.one(JORDAN)
    for j in range(1, k + 1):
        prod_ = prod_ * (x + (value - k - 1 + 2 * j) * y)
    assert prod_ == numeric
    assert closed.specialize(value) == numeric


def test_commuting_swap_matches_binomial():
    # x^b y^a = sum_i C(b, i) a(a+1)...(a+i-1) y^(a+i) x^(b-i) in the Jordan plane
    for a in range(4):
        for b in range(5):
            got = NCPoly.x(JORDAN) ** b * NCPoly.y(JORDAN) ** a
            want = {}
            for i in range(b + 1):
                rising = 1
                for m in range(i):
                    rising *= a + m
                if rising:
                    want[a + i, b - i] = comb(b, i) * rising
            assert got == NCPoly(JORDAN, want)


ALGEBRAS = [JORDAN, quantum(2), quantum(1), quantum(Fraction(-3, 5)), COMMUTATIVE, quantum()]


@pytest.mark.parametrize("alg", ALGEBRAS, ids=str)
def test_associativity_fuzz(alg):
    assert check_associativity(alg, triples=100, seed=7).passed


@given(st.sampled_from(ALGEBRAS), st.randoms(use_true_random=False))
def test_associativity_property(alg, rnd):
    f, g, h = (random_ncpoly(alg, rnd, 4) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(st.sampled_from(ALGEBRAS[:5]), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4),
       st.integers(0, 4))
def test_degree_additivity(alg, a1, b1, a2, b2):
    m1, m2 = NCPoly.monomial(alg, a1, b1), NCPoly.monomial(alg, a2, b2)
    prod_ = m1 * m2
    assert {a + b for a, b in prod_.terms} == {a1 + b1 + a2 + b2}


@pytest.mark.parametrize("alg", [JORDAN, quantum(2), quantum(1)], ids=str)
def test_hilbert_dimensions(alg):
    assert [hilbert_dimension(alg, r) for r in range(21)] == list(range(1, 22))
    assert [hilbert_dimension_by_rank(alg, r) for r in range(8)] == list(range(1, 9))
    assert check_hilbert(alg).passed


def test_hilbert_examples():
    assert hilbert_dimension(JORDAN, 0) == 1 and hilbert_dimension(JORDAN, 3) == 4
    assert hilbert_dimension(quantum(2), 10) == 11
    with pytest.raises(ValueError):
        hilbert_dimension(JORDAN, -1)


def test_unknown_algebra():
    with pytest.raises(ValueError):
        Algebra("octonion")


def test_evaluation_on_matrices():
    # Jordan plane acting on C[t]/(t^5): y = t, x = t^2 d/dt + 2
    d = 5
    Y = SparseMatrix(d, d, {i + 1: {i: 1} for i in range(d - 1)})
    X = SparseMatrix(d, d, {i + 1: {i: i} for i in range(1, d - 1)}) + SparseMatrix.identity(d).scale(2)
    assert not (X @ Y - Y @ X).is_zero()
    assert X @ Y - Y @ X - Y @ Y == SparseMatrix.zero(d)
    for k in range(1, 5):
        lhs, rhs, closed = jordan_identity_sides(k)
        for v in (Fraction(2), Fraction(-1, 3)):
            direct = SparseMatrix.identity(d)
            for _ in range(k):
                direct = direct @ (X + Y.scale(v))
            assert closed.specialize(v).evaluate(X, Y) == direct
            assert rhs.specialize(v).evaluate(X, Y) == direct


def test_rendering():
    x, y = gens(JORDAN)
    assert NCPoly(JORDAN).render() == "0"
    assert (x - 3 * y).render() == "-3*y + x"
    assert (NCPoly.one(JORDAN) * Fraction(1, 2)).render() == "1/2"
    assert random_ncpoly(JORDAN, random.Random(0)).render()
