"""R-matrices.

Oracle: for the vector representation of gl(N), with the evaluation
T_ij(u) -> delta_ij + e_ji / (u - z) and the coproduct
T_ij(u) -> sum_k T_ik(u) (x) T_kj(u), the normalised intertwiner condition
reduces at first order in 1/u to  a + b (x - y) = 0  for R = a + b P, so

    R(x) = (x - P) / (x - 1).
"""

import json
from fractions import Fraction

import pytest
from hypothesis import given

from qkz.exceptions import NonGenericParameter, NormalizationFailure
from qkz.glnrep import TensorModule, build_irrep, permutation_operator
from qkz.linalg import SparseMatrix
from qkz.rmatrix import (RMatrixKey, audit_cache, begin_audit, check_rmatrix_axioms,
                         check_shift_covariance, clear_cache, compute_rmatrix,
                         rmatrix_operator, solve_intertwiner, solve_rmatrix)

from conftest import rationals

V2, V3 = build_irrep(2, (1, 0)), build_irrep(3, (1, 0, 0))


def yang(L, x):
    P = permutation_operator(TensorModule((L, L)), (1, 0)).matrix
    I = SparseMatrix.identity(L.dim ** 2)
    return (I.scale(x) - P).scale(Fraction(1) / (x - 1))


def middle_block(R):
    d = R.to_dense()
    return [d[1][1:3], d[2][1:3]]


@given(rationals(20, 5).filter(lambda v: v != 1))
def test_vector_rmatrix_gl2(x):
    assert compute_rmatrix(V2, V2, x).matrix == yang(V2, x)


@pytest.mark.parametrize("x", [Fraction(7, 2), -3, Fraction(-11, 5)])
def test_vector_rmatrix_gl3(x):
    assert compute_rmatrix(V3, V3, x).matrix == yang(V3, x)


def test_vector_rmatrix_blocks():
    R = compute_rmatrix(V2, V2, 3).matrix
    assert R[0, 0] == 1 and R[3, 3] == 1
    assert middle_block(R) == [[Fraction(3, 2), Fraction(-1, 2)], [Fraction(-1, 2), Fraction(3, 2)]]
    assert middle_block(compute_rmatrix(V2, V2, -2).matrix) == [
        [Fraction(2, 3), Fraction(1, 3)], [Fraction(1, 3), Fraction(2, 3)]]
    # x = 0: R is the flip
    assert compute_rmatrix(V2, V2, 0).matrix == permutation_operator(TensorModule((V2, V2)), (1, 0)).matrix


def test_pole_is_reported():
    with pytest.raises(NormalizationFailure) as exc:
        compute_rmatrix(V2, V2, 1)
    assert exc.value.parameter == 1
    assert isinstance(exc.value, NonGenericParameter)


def test_opposite_coproduct_convention():
    # With the opposite coproduct the block at x = 1 is finite, [[1/2,1/2],[1/2,1/2]],
    # and the pole moves to x = -1.
    M, dim, ok = solve_intertwiner(V2, V2, 1, 0, opposite=True)
    assert dim == 1 and ok
    P = permutation_operator(TensorModule((V2, V2)), (1, 0)).matrix
    half = Fraction(1, 2)
    assert middle_block(P @ M) == [[half, half], [half, half]]
    M, _, _ = solve_intertwiner(V2, V2, -2, 0, opposite=True)
    assert middle_block(P @ M) == [[2, -1], [-1, 2]]
    with pytest.raises(NonGenericParameter):
        solve_intertwiner(V2, V2, -1, 0, opposite=True)


@pytest.mark.parametrize("n,hw1,hw2", [
    (2, (1, 0), (2, 0)), (2, (2, 0), (2, 0)), (2, (1, 1), (2, 0)),
    (3, (1, 0, 0), (1, 1, 0)), (3, (1, 0, 0), (2, 1, 0)),
])
def test_intertwiner_certificate(n, hw1, hw2):
    L1, L2 = build_irrep(n, hw1), build_irrep(n, hw2)
    M, dim, ok = solve_intertwiner(L1, L2, Fraction(13, 3), 0)
    assert dim == 1 and ok
    src = TensorModule((L1, L2))
    tgt = TensorModule((L2, L1))
    assert M[tgt.hw_index, src.hw_index] == 1
    R = compute_rmatrix(L1, L2, Fraction(13, 3)).matrix
    # weight preserving
    for r, c, v in R.items():
        assert src.basis_weight(r) == src.basis_weight(c)


@pytest.mark.parametrize("n,hws,x,y", [
    (2, [(1, 0)] * 3, 3, 5),
    (3, [(1, 0, 0)] * 3, 2, 5),
    (2, [(2, 0)] * 3, Fraction(7, 2), Fraction(-5, 3)),
    (3, [(1, 1, 0)] * 3, Fraction(7, 2), 11),
])
def test_axioms_on_equal_factors(n, hws, x, y):
    Ls = [build_irrep(n, w) for w in hws]
    rep = check_rmatrix_axioms(*Ls, x, y, printed_everywhere=True)
    assert rep.passed, [c.line() for c in rep.failures]
    names = {c.name for c in rep.checks}
    assert {"rmatrix-ybe", "rmatrix-symmetry", "rmatrix-inversion", "rmatrix-unitarity",
            "rmatrix-equivariance"} <= names


@pytest.mark.parametrize("n,hws", [
    (2, [(1, 0), (2, 0), (1, 1)]),
    (3, [(1, 0, 0), (1, 1, 0), (1, 0, 0)]),
])
def test_axioms_on_mixed_factors(n, hws):
    Ls = [build_irrep(n, w) for w in hws]
    rep = check_rmatrix_axioms(*Ls, Fraction(7, 2), Fraction(-5, 3))
    assert rep.passed, [c.line() for c in rep.failures]


def test_printed_symmetry_needs_equal_centred_factors():
    # For (2,0) x (1,0) the non-trivial eigenvalue ratio is (x + 1)/(x - 2):
    # unitarity holds, R(x) R(-x) = 1 does not.
    A, V = build_irrep(2, (2, 0)), build_irrep(2, (1, 0))
    rep = check_rmatrix_axioms(A, V, V, 5, 2, printed_everywhere=True)
    by = {}
    for c in rep.checks:
        by.setdefault((c.name, c.detail), c.status)
    assert by["rmatrix-unitarity", "pair 12"] == "PASS"
    assert by["rmatrix-symmetry", "pair 12"] == "FAIL"
    assert by["rmatrix-inversion", "pair 12"] == "FAIL"
    assert by["rmatrix-inversion", "pair 23"] == "PASS"
    R = compute_rmatrix(A, V, 5).matrix
    blk = middle_block(R)
    tr = blk[0][0] + blk[1][1]
    det = blk[0][0] * blk[1][1] - blk[0][1] * blk[1][0]
    assert (tr, det) == (3, 2)  # eigenvalues 1 and (5 + 1)/(5 - 2)


def test_shift_covariance():
    for L1, L2 in ((V2, V2), (build_irrep(2, (2, 0)), V2)):
        assert check_shift_covariance(L1, L2, Fraction(5, 3), Fraction(-17, 4)).passed


def test_rmatrix_operator_embedding():
    t = TensorModule.of(2, [(1, 0)] * 3)
    R13 = rmatrix_operator(t, 1, 3, 4)
    # R_13 commutes with anything acting only on factor 2
    from qkz.glnrep import factor_operator
    X = factor_operator(t, 1, 2, 2).matrix
    assert R13.matrix @ X == X @ R13.matrix


def test_disk_cache_roundtrip_and_audit(tmp_path, monkeypatch):
    monkeypatch.setenv("QKZ_CACHE_DIR", str(tmp_path))
    clear_cache()
    A = build_irrep(2, (2, 0))
    fresh = solve_rmatrix(A, V2, Fraction(9, 4))
    key = RMatrixKey.of(A, V2, Fraction(9, 4))
    f = tmp_path / key.filename()
    assert f.exists()
    clear_cache()
    begin_audit()
    cached = solve_rmatrix(A, V2, Fraction(9, 4))
    assert cached.from_cache and cached.matrix == fresh.matrix
    assert audit_cache("c").passed

    data = json.loads(f.read_text())
    r, c, v = data["triplets"][1]
    data["triplets"][1] = [r, c, str(Fraction(v) + 1)]
    f.write_text(json.dumps(data))
    clear_cache()
    begin_audit()
    solve_rmatrix(A, V2, Fraction(9, 4))
    rep = audit_cache("c")
    assert not rep.passed and rep.failures[0].witness

    f.write_text("not json")
    clear_cache()
    assert not solve_rmatrix(A, V2, Fraction(9, 4)).from_cache
    clear_cache()


def test_nongeneric_point_of_mixed_pair():
    A = build_irrep(2, (2, 0))
    with pytest.raises(NonGenericParameter):
        # pole of the (x + 1)/(x - 2) ratio
        compute_rmatrix(A, V2, 2)
