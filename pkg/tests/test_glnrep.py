"""gl(N) irreducibles and tensor products.

Reference values come from Gelfand-Tsetlin patterns (an independent count of
weight multiplicities) and from the character formula for multiplicities of
irreducible components in tensor products.
"""

from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from qkz.exceptions import UnsupportedWeight
from qkz.glnrep import (OperatorMatrix, TensorModule, build_irrep, diagonal_operator,
                        embed_pair, factor_operator, permutation_operator, singular_space_l,
                        swap_operator, two_h_theta_value, vector_in, weight_space_l,
                        weyl_dimension)
from qkz.linalg import SparseMatrix, commutator

CATALOG = [(2, (1, 0)), (2, (2, 0)), (2, (1, 1)),
           (3, (1, 0, 0)), (3, (1, 1, 0)), (3, (2, 1, 0))]


def gt_patterns(top):
    """All Gelfand-Tsetlin patterns with top row ``top``, as lists of rows."""
    if len(top) == 1:
        yield [tuple(top)]
        return
    ranges = [range(top[i + 1], top[i] + 1) for i in range(len(top) - 1)]
    for row in product(*ranges):
        for rest in gt_patterns(row):
            yield [tuple(top)] + rest


def gt_weight_multiplicities(hw):
    mult = {}
    for pat in gt_patterns(hw):
        sums = [sum(r) for r in reversed(pat)]
        w = tuple(sums[0:1] + [sums[k] - sums[k - 1] for k in range(1, len(sums))])
        mult[w] = mult.get(w, 0) + 1
    return mult


def dominant_weights(n, top=3, bottom=-1):
    return st.lists(st.integers(bottom, top), min_size=n, max_size=n).map(
        lambda w: tuple(sorted(w, reverse=True)))


@pytest.mark.parametrize("n,hw,dim", [
    (2, (1, 0), 2), (2, (2, 0), 3), (2, (1, 1), 1),
    (3, (1, 0, 0), 3), (3, (1, 1, 0), 3), (3, (2, 1, 0), 8),
    (3, (3, 1, -2), 42), (4, (2, 1, 1, 0), 15), (4, (1, 0, 0, 0), 4),
])
def test_dimensions_match_weyl_formula(n, hw, dim):
    assert weyl_dimension(n, hw) == dim
    assert build_irrep(n, hw).dim == dim


@pytest.mark.parametrize("n,hw", CATALOG + [(3, (2, 0, 0)), (4, (1, 1, 0, 0))])
def test_commutation_relations(n, hw):
    L = build_irrep(n, hw)
    for i, j, k, l in product(range(1, n + 1), repeat=4):
        lhs = commutator(L.e(i, j), L.e(k, l))
        rhs = SparseMatrix.zero(L.dim)
        if j == k:
            rhs = rhs + L.e(i, l)
        if i == l:
            rhs = rhs - L.e(k, j)
        assert lhs == rhs, (i, j, k, l)


@pytest.mark.parametrize("n,hw", CATALOG)
def test_highest_vector_and_weights(n, hw):
    L = build_irrep(n, hw)
    top = {L.hw_index: 1}
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            assert L.e(i, j).apply(top) == {}
    for i in range(1, n + 1):
        diag = L.e(i, i)
        for t, w in enumerate(L.basis_weights):
            assert diag.apply({t: 1}) == ({t: w[i - 1]} if w[i - 1] else {})
    assert L.basis_weights[L.hw_index] == hw


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(st.just(n), dominant_weights(n, 2 if n == 4 else 3))))
def test_weight_multiplicities_match_gelfand_tsetlin(case):
    n, hw = case
    L = build_irrep(n, hw)
    assert L.weight_multiplicities() == gt_weight_multiplicities(hw)
    assert L.dim == weyl_dimension(n, hw)


@pytest.mark.parametrize("hw", [(0, 1), (1, 2, 0), (1, 0, 1)])
def test_non_dominant_weight_rejected(hw):
    with pytest.raises(UnsupportedWeight):
        build_irrep(len(hw), hw)


def test_determinant_shift():
    a, b = build_irrep(3, (2, 1, 0)), build_irrep(3, (3, 2, 1))
    assert a.dim == b.dim
    for i in range(1, 4):
        assert b.e(i, i) == a.e(i, i) + SparseMatrix.identity(a.dim)
        for j in range(1, 4):
            if i != j:
                assert b.e(i, j) == a.e(i, j)


# -- tensor products -----------------------------------------------------------

def test_tensor_indexing_is_row_major():
    t = TensorModule.of(2, [(1, 0), (2, 0)])
    assert t.dims == (2, 3) and t.dim == 6
    assert t.flat_index((1, 2)) == 5
    assert t.multi_index(4) == (1, 1)
    assert t.hw_index == 0


def test_diagonal_action_is_a_representation():
    t = TensorModule.of(3, [(1, 0, 0), (1, 1, 0)])
    E = {(i, j): diagonal_operator(t, i, j).matrix for i in range(1, 4) for j in range(1, 4)}
    for (i, j), (k, l) in product(E, repeat=2):
        rhs = SparseMatrix.zero(t.dim)
        if j == k:
            rhs = rhs + E[i, l]
        if i == l:
            rhs = rhs - E[k, j]
        assert commutator(E[i, j], E[k, l]) == rhs


def test_factor_operators_commute_across_factors():
    t = TensorModule.of(2, [(1, 0)] * 3)
    a = factor_operator(t, 1, 2, 1).matrix
    b = factor_operator(t, 2, 1, 3).matrix
    assert commutator(a, b).is_zero()
    with pytest.raises(IndexError):
        factor_operator(t, 1, 2, 4)
    with pytest.raises(IndexError):
        factor_operator(t, 0, 2, 1)


def _tensor_char(n, weights):
    mult = {(0,) * n: 1}
    for hw in weights:
        new = {}
        for w, c in mult.items():
            for u, d in gt_weight_multiplicities(hw).items():
                key = tuple(a + b for a, b in zip(w, u))
                new[key] = new.get(key, 0) + c * d
        mult = new
    return mult


def _component_multiplicity(n, weights, mu):
    """Multiplicity of the irreducible mu in the tensor product, by the
    alternating sum over the Weyl group."""
    ch = _tensor_char(n, weights)
    rho = tuple(range(n - 1, -1, -1))
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        shifted = tuple((mu[perm[a]] + rho[perm[a]]) - rho[a] for a in range(n))
        total += sign * ch.get(shifted, 0)
    return total


@pytest.mark.parametrize("n,weights", [
    (2, [(1, 0)] * 2), (2, [(1, 0)] * 4), (2, [(2, 0), (1, 0), (1, 0)]),
    (3, [(1, 0, 0)] * 3), (3, [(1, 0, 0), (2, 1, 0)]), (3, [(1, 0, 0), (1, 0, 0), (1, 1, 0)]),
])
def test_singular_space_dimension_matches_characters(n, weights):
    t = TensorModule.of(n, weights)
    lam = t.total_highest_weight
    ch = _tensor_char(n, weights)
    for l in range(0, 4):
        target = two_h_theta_value(t, l)
        want = sum(_component_multiplicity(n, weights, mu) for mu in ch
                   if list(mu) == sorted(mu, reverse=True) and mu[0] - mu[-1] == target)
        S = singular_space_l(t, l)
        assert S.dim == want, l
        assert S.is_subspace_of(weight_space_l(t, l))
        for a in range(1, n):
            up = diagonal_operator(t, a, a + 1).matrix
            assert all(up.apply(v) == {} for v in S.basis)
    assert sum(weight_space_l(t, l).dim for l in range(lam[0] - lam[-1] + 1)) <= t.dim


def test_gl2_singlet():
    t = TensorModule.of(2, [(1, 0)] * 2)
    S = singular_space_l(t, 1)
    assert S.dim == 1
    assert S.contains(vector_in(t, {(0, 1): 1, (1, 0): -1}))


def test_permutation_operator_intertwines_gl_action():
    t = TensorModule.of(3, [(1, 0, 0), (1, 1, 0), (2, 1, 0)])
    order = (2, 0, 1)
    P = permutation_operator(t, order)
    assert P.target.factor_keys == tuple(t.factor_keys[o] for o in order)
    for i, j in product(range(1, 4), repeat=2):
        lhs = P.matrix @ diagonal_operator(t, i, j).matrix
        rhs = diagonal_operator(P.target, i, j).matrix @ P.matrix
        assert lhs == rhs


def test_swap_and_embed():
    t = TensorModule.of(2, [(1, 0), (2, 0), (1, 0)])
    S = swap_operator(t, 2)
    back = swap_operator(S.target, 2)
    assert (back @ S).matrix == SparseMatrix.identity(t.dim)
    # embedding the flip of factors 1, 3 (both vectors) equals the permutation (2, 1, 0)
    P13 = permutation_operator(TensorModule.of(2, [(1, 0)] * 2), (1, 0)).matrix
    assert embed_pair(t, P13, 1, 3).matrix == permutation_operator(t, (2, 1, 0)).matrix
    with pytest.raises(ValueError):
        embed_pair(t, P13, 1, 2)


def test_operator_matrix_algebra():
    t = TensorModule.of(2, [(1, 0)])
    I = OperatorMatrix.identity(t)
    E = diagonal_operator(t, 1, 2)
    assert (I @ E) == E
    assert (E + E) == E * 2
    assert (E - E) == OperatorMatrix.zero(t)
