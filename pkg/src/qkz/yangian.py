"""Action of the Yangian Y(gl(N)) on tensor products of evaluation modules.

On an evaluation module L(z) the generators act by
``T_ij^{(s)} -> z^(s-1) e_ji``; on a tensor product the action is the iterated
comultiplication ``T_ij(u) -> sum_k T_ik(u) (x) T_kj(u)``, where the leftmost
factor receives the left leg.  Only finitely many terms of the coproduct sum
contribute, so each ``T_ij^{(s)}`` is an exact finite sum and no truncation of
the generating series is involved.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .exceptions import ConfigurationError
from .glnrep import Irrep, OperatorMatrix, TensorModule, build_irrep, permutation_operator
from .linalg import SparseMatrix, commutator
from .report import CheckResult, Report, compare_matrices

__all__ = [
    "eval_generator",
    "coproduct_generator",
    "coproduct_series",
    "check_yangian_relations",
]


def _eval_matrix(L: Irrep, z, i, j, s) -> SparseMatrix:
    if s == 0:
        return SparseMatrix.identity(L.dim) if i == j else SparseMatrix.zero(L.dim)
    return L.e(j, i).scale(z ** (s - 1))


def eval_generator(L: Irrep, z, i: int, j: int, s: int) -> SparseMatrix:
    """Matrix of T_ij^{(s)} on the evaluation module L(z)."""
    if s < 1:
        raise ValueError("T_ij^(0) is the scalar delta_ij, not an operator")
    return _eval_matrix(L, z, i, j, s)


def _single_series(L, z, smax):
    n = L.n
    return {(i, j, s): _eval_matrix(L, z, i, j, s)
            for i in range(1, n + 1) for j in range(1, n + 1) for s in range(smax + 1)}


def _combine(n, left, right, smax):
    """Series of the tensor product of two modules from their series."""
    out = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for s in range(smax + 1):
                acc = None
                for k in range(1, n + 1):
                    for r in range(s + 1):
                        a, b = left[i, k, r], right[k, j, s - r]
                        if a.is_zero() or b.is_zero():
                            continue
                        term = a.kron(b)
                        acc = term if acc is None else acc + term
                if acc is None:
                    rows = left[1, 1, 0].rows * right[1, 1, 0].rows
                    acc = SparseMatrix.zero(rows)
                out[i, j, s] = acc
    return out


@lru_cache(maxsize=64)
def _series(keys, points, smax, bracketing, opposite=False):
    if opposite:
        # Delta^op on L_1 (x) ... (x) L_n is Delta on the reversed product,
        # conjugated by the reversal of factors.
        rev = _series(keys[::-1], points[::-1], smax, bracketing)
        t = TensorModule(tuple(build_irrep(n, w) for n, w in keys))
        P = permutation_operator(t, tuple(range(len(keys) - 1, -1, -1))).matrix
        Pinv = P.transpose()
        return {k: Pinv @ m @ P for k, m in rev.items()}
    irreps = [build_irrep(n, w) for n, w in keys]
    n = irreps[0].n
    singles = [_single_series(L, z, smax) for L, z in zip(irreps, points)]
    if bracketing == "left":
        acc = singles[0]
        for nxt in singles[1:]:
            acc = _combine(n, acc, nxt, smax)
    elif bracketing == "right":
        acc = singles[-1]
        for prev in reversed(singles[:-1]):
            acc = _combine(n, prev, acc, smax)
    else:
        raise ValueError(f"unknown bracketing {bracketing!r}")
    return acc


def coproduct_series(t: TensorModule, smax: int, bracketing="left", opposite=False) -> dict:
    """All matrices ``T_ij^{(s)}``, 0 <= s <= smax, on L_1(z_1) (x) ... (x) L_n(z_n),
    keyed by ``(i, j, s)``.

    ``opposite=True`` uses the opposite coproduct (leftmost factor receives
    the right leg); it exists for convention audits only.
    """
    if t.points is None:
        raise ConfigurationError("evaluation points are required for the Yangian action")
    return _series(t.factor_keys, t.points, max(smax, 4), bracketing, opposite)


def coproduct_generator(t: TensorModule, i: int, j: int, s: int,
                        bracketing="left", opposite=False) -> OperatorMatrix:
    if s < 1:
        raise ValueError("T_ij^(0) is the scalar delta_ij, not an operator")
    return OperatorMatrix(t, t, coproduct_series(t, s, bracketing, opposite)[i, j, s])


def check_yangian_relations(t: TensorModule, r_max: int, s_max: int, case="") -> Report:
    """Check the defining relations

        [T_ij^(r), T_kl^(s+1)] - [T_ij^(r+1), T_kl^(s)]
            = T_kj^(r) T_il^(s) - T_kj^(s) T_il^(r)

    for 0 <= r <= r_max, 0 <= s <= s_max and all indices.  One result per
    failing relation, plus a summary line.
    """
    case = case or _case_name(t)
    T = coproduct_series(t, max(r_max, s_max) + 1)
    n = t.n_rank
    report = Report()
    count = 0
    for r, s in product(range(r_max + 1), range(s_max + 1)):
        for i, j, k, l in product(range(1, n + 1), repeat=4):
            lhs = (commutator(T[i, j, r], T[k, l, s + 1])
                   - commutator(T[i, j, r + 1], T[k, l, s]))
            rhs = T[k, j, r] @ T[i, l, s] - T[k, j, s] @ T[i, l, r]
            count += 1
            res = compare_matrices("yangian-relations", case, lhs, rhs,
                                   detail=f"i,j,k,l={i},{j},{k},{l} r={r} s={s}")
            if not res.passed:
                report.add(res)
    if not report.checks:
        report.add(CheckResult("yangian-relations", case, "PASS",
                               detail=f"{count} relations, r<={r_max}, s<={s_max}"))
    return report


def _case_name(t):
    ws = "x".join("(" + ",".join(map(str, f.highest_weight)) + ")" for f in t.factors)
    pts = "" if t.points is None else " z=(" + ",".join(str(p) for p in t.points) + ")"
    return f"gl({t.n_rank}) {ws}{pts}"
