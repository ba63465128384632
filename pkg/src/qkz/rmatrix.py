"""Rational R-matrices as normalised Yangian intertwiners.

``R_{L1 L2}(x)`` is found by solving the linear system saying that
``M = P R`` maps ``L1(x) (x) L2(0)`` to ``L2(0) (x) L1(x)`` and commutes with
the action of ``T_ij^{(s)}`` for s = 1, 2, 3.  The solution space must be
one-dimensional; it is normalised by ``M(v1 (x) v2) = v2 (x) v1``.  The s = 4
condition is re-checked on the solution.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .exceptions import NonGenericParameter, NormalizationFailure
from .glnrep import (Irrep, OperatorMatrix, TensorModule, build_irrep, diagonal_operator,
                     embed_pair, permutation_operator, swap_operator)
from .linalg import SparseMatrix, format_rational, nullspace_vectors, parse_rational
from .report import CheckResult, Report, compare_matrices
from .yangian import coproduct_series

__all__ = [
    "RMatrixKey",
    "RMatrixSolution",
    "solve_intertwiner",
    "compute_rmatrix",
    "solve_rmatrix",
    "rmatrix_operator",
    "check_rmatrix_axioms",
    "check_shift_covariance",
    "clear_cache",
    "begin_audit",
    "audit_cache",
]

SOLVE_ORDERS = (1, 2, 3)
CHECK_ORDER = 4


@dataclass(frozen=True)
class RMatrixKey:
    n: int
    hw1: tuple
    hw2: tuple
    x: Fraction

    @classmethod
    def of(cls, L1: Irrep, L2: Irrep, x):
        return cls(L1.n, L1.highest_weight, L2.highest_weight, Fraction(x))

    def filename(self):
        def w(v):
            return "_".join(str(c).replace("-", "m") for c in v)
        x = format_rational(self.x).replace("-", "m").replace("/", "over")
        return f"R_gl{self.n}__{w(self.hw1)}__{w(self.hw2)}__x{x}.json"


@dataclass
class RMatrixSolution:
    key: RMatrixKey
    matrix: SparseMatrix          # R(x) in End(L1 (x) L2)
    intertwiner_dim: int
    higher_order_ok: bool
    from_cache: bool = False


def _intertwiner_matrix(src: TensorModule, tgt: TensorModule, orders, opposite=False):
    """Null space of the intertwining equations M A_s = B_s M, as a list of
    matrices ``tgt.dim x src.dim``.

    Solved in two stages: the s = 1 equations (gl(N)-equivariance) over the
    weight-preserving entries of M, then the remaining orders over the few
    coefficients parametrising the equivariant maps.
    """
    A = coproduct_series(src, max(orders), opposite=opposite)
    B = coproduct_series(tgt, max(orders), opposite=opposite)
    n = src.n_rank

    # Unknowns: M[r, c] for basis vectors of equal gl(N) weight.
    by_weight: dict = {}
    for c in range(src.dim):
        by_weight.setdefault(src.basis_weight(c), []).append(c)
    allowed = [by_weight.get(tgt.basis_weight(r), []) for r in range(tgt.dim)]
    var = {}
    for r in range(tgt.dim):
        for c in allowed[r]:
            var[r, c] = len(var)

    rows = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a, b = A[i, j, 1], B[i, j, 1]
            eqs: dict = {}
            for r in range(tgt.dim):
                for k in allowed[r]:
                    vk = var[r, k]
                    for c, val in a.row(k).items():
                        e = eqs.setdefault((r, c), {})
                        e[vk] = e.get(vk, 0) + val
                for k, val in b.row(r).items():
                    for c in allowed[k]:
                        vk = var[k, c]
                        e = eqs.setdefault((r, c), {})
                        e[vk] = e.get(vk, 0) - val
            for e in eqs.values():
                e = {k: v for k, v in e.items() if v}
                if e:
                    rows.append(e)
    system = SparseMatrix(len(rows), len(var), dict(enumerate(rows)))
    inv = {v: rc for rc, v in var.items()}
    equivariant = []
    for sol in nullspace_vectors(system):
        data: dict = {}
        for v, val in sol.items():
            r, c = inv[v]
            data.setdefault(r, {})[c] = val
        equivariant.append(SparseMatrix(tgt.dim, src.dim, data))

    higher = [s for s in orders if s != 1]
    if not equivariant or not higher:
        return equivariant
    # sum_a c_a (M_a A_s - B_s M_a) = 0, one equation per matrix entry
    eqs = {}
    for a_idx, Ma in enumerate(equivariant):
        for s in higher:
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    res = Ma @ A[i, j, s] - B[i, j, s] @ Ma
                    for r, c, val in res.items():
                        eqs.setdefault((s, i, j, r, c), {})[a_idx] = val
    small = SparseMatrix(len(eqs), len(equivariant), dict(enumerate(eqs.values())))
    out = []
    for coeffs in nullspace_vectors(small):
        M = SparseMatrix.zero(tgt.dim, src.dim)
        for a_idx, cval in coeffs.items():
            M = M + equivariant[a_idx].scale(cval)
        out.append(M)
    return out


def solve_intertwiner(L1: Irrep, L2: Irrep, x1, x2, opposite=False):
    """Normalised intertwiner ``L1(x1) (x) L2(x2) -> L2(x2) (x) L1(x1)``.

    Returns ``(M, intertwiner_dim, higher_order_ok)``.  ``opposite`` selects the
    opposite coproduct (audit only).
    """
    src = TensorModule((L1, L2), (x1, x2))
    tgt = TensorModule((L2, L1), (x2, x1))
    x = Fraction(x1) - Fraction(x2)
    sols = _intertwiner_matrix(src, tgt, SOLVE_ORDERS, opposite)
    if len(sols) != 1:
        raise NonGenericParameter(
            f"intertwiner space for {L1.highest_weight} x {L2.highest_weight} at "
            f"x = {format_rational(x)} has dimension {len(sols)}, expected 1",
            parameter=x, dimension=len(sols))
    M = sols[0]
    lead = M[tgt.hw_index, src.hw_index]
    if lead == 0:
        raise NormalizationFailure(
            f"intertwiner vanishes on v1 (x) v2 at x = {format_rational(x)}",
            parameter=x, dimension=1)
    M = M.scale(Fraction(1) / lead)
    A = coproduct_series(src, CHECK_ORDER, opposite=opposite)
    B = coproduct_series(tgt, CHECK_ORDER, opposite=opposite)
    n = L1.n
    ok = all(M @ A[i, j, CHECK_ORDER] == B[i, j, CHECK_ORDER] @ M
             for i in range(1, n + 1) for j in range(1, n + 1))
    return M, 1, ok


# -- cache ------------------------------------------------------------------

_memory: dict = {}
_accessed: set = set()
_audited: dict = {}


def clear_cache():
    _memory.clear()
    _accessed.clear()
    _audited.clear()


def begin_audit():
    """Start recording which R-matrices are used (see ``audit_cache``)."""
    _accessed.clear()


def _audit_one(sol: "RMatrixSolution") -> CheckResult:
    k = sol.key
    L1, L2 = build_irrep(k.n, k.hw1), build_irrep(k.n, k.hw2)
    src = TensorModule((L1, L2), (k.x, 0))
    tgt = TensorModule((L2, L1), (0, k.x))
    case = f"gl({k.n}) {k.hw1}x{k.hw2} x={format_rational(k.x)}"
    M = swap_operator(TensorModule((L1, L2)), 1).matrix @ sol.matrix
    if M[tgt.hw_index, src.hw_index] != 1:
        return CheckResult("rmatrix-cache", case, "FAIL", witness=[[src.hw_index, "1"]],
                           detail="not normalised on the highest vectors")
    A = coproduct_series(src, CHECK_ORDER)
    B = coproduct_series(tgt, CHECK_ORDER)
    for s in range(1, CHECK_ORDER + 1):
        for i in range(1, k.n + 1):
            for j in range(1, k.n + 1):
                res = compare_matrices("rmatrix-cache", case, M @ A[i, j, s], B[i, j, s] @ M,
                                       detail=f"T_{i}{j}^({s}) not intertwined")
                if not res.passed:
                    return res
    return CheckResult("rmatrix-cache", case, "PASS")


def audit_cache(case="") -> Report:
    """Re-verify every R-matrix used since ``begin_audit`` that was read from
    the disk cache.  Entries loaded from disk are trusted by the solver, so
    this is what detects a corrupted cache.  Returns one summary line, or
    the failures; empty if no R-matrix was used."""
    report = Report()
    if not _accessed:
        return report
    for key in sorted(_accessed, key=RMatrixKey.filename):
        sol = _memory.get(key)
        if sol is None or not sol.from_cache:
            continue
        if key not in _audited:
            _audited[key] = _audit_one(sol)
        res = _audited[key]
        if not res.passed:
            report.add(CheckResult(res.name, case or res.case, "FAIL", witness=res.witness,
                                   detail=f"{res.case}: {res.detail}"))
    if not report.checks:
        report.add(CheckResult("rmatrix-cache", case, "PASS"))
    return report


def _cache_dir():
    d = os.environ.get("QKZ_CACHE_DIR")
    return Path(d) if d else None


def _load(key: RMatrixKey, dim: int):
    d = _cache_dir()
    if d is None:
        return None
    path = d / key.filename()
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        m = SparseMatrix.from_triplets(dim, dim, data["triplets"])
    except (ValueError, KeyError, TypeError, IndexError):
        return None  # unreadable entry: recompute and overwrite it
    return RMatrixSolution(key, m, data.get("intertwiner_dim", 1),
                           data.get("higher_order_ok", True), from_cache=True)


def _store(sol: RMatrixSolution):
    d = _cache_dir()
    if d is None:
        return
    d.mkdir(parents=True, exist_ok=True)
    k = sol.key
    payload = {"n": k.n, "hw1": list(k.hw1), "hw2": list(k.hw2),
               "x": format_rational(k.x), "dim": sol.matrix.rows,
               "intertwiner_dim": sol.intertwiner_dim,
               "higher_order_ok": sol.higher_order_ok,
               "triplets": sol.matrix.to_triplets()}
    tmp = d / (k.filename() + f".{os.getpid()}.tmp")
    tmp.write_text(json.dumps(payload))
    tmp.replace(d / k.filename())


def solve_rmatrix(L1: Irrep, L2: Irrep, x, use_cache=True) -> RMatrixSolution:
    x = parse_rational(x)
    key = RMatrixKey.of(L1, L2, x)
    if use_cache:
        _accessed.add(key)
        hit = _memory.get(key)
        if hit is not None:
            return hit
        hit = _load(key, L1.dim * L2.dim)
        if hit is not None:
            _memory[key] = hit
            return hit
    M, dim, ok = solve_intertwiner(L1, L2, x, 0)
    if not ok:
        raise NonGenericParameter(
            f"order-{CHECK_ORDER} intertwining fails at x = {format_rational(x)}",
            parameter=key.x, dimension=dim)
    # R = P^{-1} M with P the flip L1 (x) L2 -> L2 (x) L1
    flip_back = swap_operator(TensorModule((L2, L1)), 1).matrix
    sol = RMatrixSolution(key, flip_back @ M, dim, ok)
    if use_cache:
        _memory[key] = sol
        _store(sol)
    return sol


def compute_rmatrix(L1: Irrep, L2: Irrep, x) -> OperatorMatrix:
    """R_{L1 L2}(x) as an operator on L1 (x) L2."""
    t = TensorModule((L1, L2))
    return OperatorMatrix(t, t, solve_rmatrix(L1, L2, x).matrix)


def rmatrix_operator(t: TensorModule, a: int, b: int, x) -> OperatorMatrix:
    """R_{L_a L_b}(x) acting on the 1-based tensor slots a, b of ``t``."""
    R = solve_rmatrix(t.factors[a - 1], t.factors[b - 1], x).matrix
    return embed_pair(t.with_points(None), R, a, b)


def check_shift_covariance(L1: Irrep, L2: Irrep, x, c, case="") -> CheckResult:
    """The normalised intertwiner at points (x + c, c) equals the one at (x, 0)."""
    x, c = parse_rational(x), parse_rational(c)
    M0, _, _ = solve_intertwiner(L1, L2, x, 0)
    Mc, _, _ = solve_intertwiner(L1, L2, x + c, c)
    return compare_matrices("rmatrix-shift", case or _pair_case(L1, L2, x), M0, Mc,
                            detail=f"shift {format_rational(c)}")


def _pair_case(L1, L2, x):
    return f"gl({L1.n}) {L1.highest_weight}x{L2.highest_weight} x={format_rational(x)}"


def check_rmatrix_axioms(L1: Irrep, L2: Irrep, L3: Irrep, x, y, case="",
                         printed_everywhere=False) -> Report:
    """Yang-Baxter, symmetry, inversion, unitarity and gl(N)-equivariance.

    Symmetry ``P R_{L1L2}(x) = R_{L2L1}(x) P`` and inversion
    ``R_{L1L2}(x) R_{L1L2}(-x) = 1`` are checked on the pairs with equal
    factors.  They need R to commute with the flip, which is automatic when
    L (x) L is multiplicity free (vector, symmetric square, ...) but fails for
    the gl(3) adjoint, where the adjoint occurs twice in L (x) L.  For
    distinct factors the spectrum of R(x) is not centred at x = 0 under the
    evaluation T_ij^{(s)} -> z^(s-1) e_ji (for gl(2) (2,0) x (1,0) the
    eigenvalue ratio is (x+1)/(x-2)), and both identities fail as well.
    Unitarity ``R_{L1L2}(x) P R_{L2L1}(-x) P = 1`` holds for every pair and is
    checked for all of them.  ``printed_everywhere=True`` imposes symmetry
    and inversion on every pair.
    """
    x, y = parse_rational(x), parse_rational(y)
    case = case or (f"gl({L1.n}) {L1.highest_weight}x{L2.highest_weight}x"
                    f"{L3.highest_weight} x={format_rational(x)} y={format_rational(y)}")
    report = Report()

    t123 = TensorModule((L1, L2, L3))
    lhs = (rmatrix_operator(t123, 1, 2, x - y) @ rmatrix_operator(t123, 1, 3, x)
           @ rmatrix_operator(t123, 2, 3, y))
    rhs = (rmatrix_operator(t123, 2, 3, y) @ rmatrix_operator(t123, 1, 3, x)
           @ rmatrix_operator(t123, 1, 2, x - y))
    report.add(compare_matrices("rmatrix-ybe", case, lhs.matrix, rhs.matrix))

    for La, Lb, label in ((L1, L2, "12"), (L1, L3, "13"), (L2, L3, "23")):
        tab = TensorModule((La, Lb))
        P = permutation_operator(tab, (1, 0)).matrix
        Rx = compute_rmatrix(La, Lb, x).matrix
        uni = Rx @ P.transpose() @ compute_rmatrix(Lb, La, -x).matrix @ P
        report.add(compare_matrices("rmatrix-unitarity", case, uni,
                                    SparseMatrix.identity(tab.dim), detail=f"pair {label}"))
        if La.key != Lb.key and not printed_everywhere:
            continue
        report.add(compare_matrices("rmatrix-symmetry", case, P @ Rx,
                                    compute_rmatrix(Lb, La, x).matrix @ P,
                                    detail=f"pair {label}"))
        report.add(compare_matrices("rmatrix-inversion", case,
                                    Rx @ compute_rmatrix(La, Lb, -x).matrix,
                                    SparseMatrix.identity(tab.dim), detail=f"pair {label}"))

    fails = []
    for La, Lb, label in ((L1, L2, "12"), (L2, L3, "23")):
        tab = TensorModule((La, Lb))
        R = compute_rmatrix(La, Lb, x).matrix
        for i in range(1, L1.n + 1):
            for j in range(1, L1.n + 1):
                d = diagonal_operator(tab, i, j).matrix
                res = compare_matrices("rmatrix-equivariance", case, R @ d, d @ R,
                                       detail=f"pair {label} e_{i}{j}")
                if not res.passed:
                    fails.append(res)
    report.add(fails[0] if fails else
               CheckResult("rmatrix-equivariance", case, "PASS"))
    return report
