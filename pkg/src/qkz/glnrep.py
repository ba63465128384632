"""gl(N) modules: irreducible highest-weight modules, tensor products, weight
spaces and singular vectors.

Weights are tuples of integers holding the eigenvalues of ``e_11, ..., e_NN``.
All indices in the public API (``i, j`` of ``e_ij`` and factor positions
``s``) are 1-based, matching the usual mathematical notation; basis vectors
are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import prod
from fractions import Fraction

from .exceptions import UnsupportedWeight
from .linalg import (CoordinateSolver, SparseMatrix, Subspace, _echelon_insert,
                     nullspace_vectors, vec_axpy)

__all__ = [
    "Irrep",
    "TensorModule",
    "OperatorMatrix",
    "build_irrep",
    "weyl_dimension",
    "factor_operator",
    "diagonal_operator",
    "weight_space_l",
    "singular_space_l",
    "embed_pair",
    "permutation_operator",
]


def _check_weight(n, hw):
    hw = tuple(hw)
    if len(hw) != n:
        raise UnsupportedWeight(f"weight {hw} has length {len(hw)}, expected {n}")
    if any(not isinstance(v, int) or isinstance(v, bool) for v in hw):
        raise UnsupportedWeight(f"weight {hw} is not integral")
    if any(hw[a] < hw[a + 1] for a in range(n - 1)):
        raise UnsupportedWeight(f"weight {hw} is not dominant")
    return hw


def weyl_dimension(n: int, hw) -> int:
    """prod_{i<j} (hw_i - hw_j + j - i) / (j - i)."""
    hw = _check_weight(n, hw)
    num = prod(hw[i] - hw[j] + j - i for i, j in combinations(range(n), 2))
    den = prod(j - i for i, j in combinations(range(n), 2))
    return num // den


# -- ambient modules built from exterior powers -----------------------------

def _wedge_matrices(n, k):
    """Matrices of all e_ab on the k-th exterior power of C^n, basis = sorted
    k-subsets in lexicographic order."""
    subsets = list(combinations(range(n), k))
    index = {s: t for t, s in enumerate(subsets)}
    mats = {}
    for a in range(n):
        for b in range(n):
            data: dict = {}
            for t, s in enumerate(subsets):
                if b not in s:
                    continue
                if a == b:
                    data.setdefault(t, {})[t] = 1
                    continue
                if a in s:
                    continue
                replaced = [a if x == b else x for x in s]
                # sign of the permutation sorting `replaced`
                inversions = sum(1 for u, v in combinations(replaced, 2) if u > v)
                target = index[tuple(sorted(replaced))]
                data.setdefault(target, {})[t] = -1 if inversions % 2 else 1
            mats[a, b] = SparseMatrix(len(subsets), len(subsets), data)
    return len(subsets), mats


def _tensor_sum(dims, per_factor):
    """Matrices of e_ab acting diagonally on a tensor product of modules whose
    individual matrices are ``per_factor[s][a, b]``."""
    keys = per_factor[0].keys()
    total = prod(dims)
    out = {}
    for key in keys:
        acc = SparseMatrix.zero(total)
        for s, mats in enumerate(per_factor):
            left = SparseMatrix.identity(prod(dims[:s]))
            right = SparseMatrix.identity(prod(dims[s + 1:]))
            acc = acc + left.kron(mats[key]).kron(right)
        out[key] = acc
    return out


class Irrep:
    """A finite-dimensional irreducible gl(N) module.

    ``action[i, j]`` (1-based) is the matrix of ``e_ij``.  Basis vector
    ``hw_index`` is the highest weight vector; every basis vector is a weight
    vector with weight ``basis_weights[t]``.
    """

    def __init__(self, n, highest_weight, action, basis_weights, hw_index=0):
        self.n = n
        self.highest_weight = tuple(highest_weight)
        self.action = action
        self.basis_weights = tuple(tuple(w) for w in basis_weights)
        self.hw_index = hw_index
        self.dim = len(self.basis_weights)

    @property
    def key(self):
        return (self.n, self.highest_weight)

    def e(self, i, j) -> SparseMatrix:
        return self.action[i, j]

    def __eq__(self, other):
        return isinstance(other, Irrep) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Irrep(gl({self.n}), {self.highest_weight}, dim={self.dim})"

    def to_json(self):
        return {"n": self.n, "weight": list(self.highest_weight), "dim": self.dim}

    def weight_multiplicities(self):
        mult: dict = {}
        for w in self.basis_weights:
            mult[w] = mult.get(w, 0) + 1
        return mult


@lru_cache(maxsize=None)
def build_irrep(n: int, hw) -> Irrep:
    """Irreducible gl(n) module of dominant integral highest weight ``hw``.

    The module is realised inside a tensor product of exterior powers of C^n
    whose top vector has weight ``hw`` (up to a shift by the determinant).
    Starting from that vector, the simple lowering operators ``e_{i+1,i}`` are
    applied until the span closes; the vectors so produced, kept whenever they
    are independent of the earlier ones, form the basis.  The matrices of all
    ``e_ij`` are then obtained by expressing ``e_ij b`` in that basis.
    """
    hw = _check_weight(n, hw)
    shift = hw[-1]
    mu = [v - shift for v in hw]
    parts = []
    for k in range(1, n):
        parts += [k] * (mu[k - 1] - mu[k])

    if not parts:
        action = {(i + 1, j + 1): SparseMatrix(1, 1, {0: {0: shift}} if i == j else {})
                  for i in range(n) for j in range(n)}
        return Irrep(n, hw, action, [hw])

    dims, factor_mats = [], []
    for k in parts:
        d, mats = _wedge_matrices(n, k)
        dims.append(d)
        factor_mats.append(mats)
    amb = _tensor_sum(dims, factor_mats)
    amb_dim = prod(dims)

    top = {0: 1}  # tensor of e_1 ^ ... ^ e_k in every factor
    basis = [top]
    weights = [tuple(mu)]
    pivots: dict = {}
    _echelon_insert(pivots, top)
    frontier = [0]
    while frontier:
        nxt = []
        for t in frontier:
            for a in range(n - 1):
                w = amb[a + 1, a].apply(basis[t])
                if not w or _echelon_insert(pivots, w) is None:
                    continue
                wt = list(weights[t])
                wt[a] -= 1
                wt[a + 1] += 1
                basis.append(w)
                weights.append(tuple(wt))
                nxt.append(len(basis) - 1)
        frontier = nxt

    solve = CoordinateSolver(basis, amb_dim)
    dim = len(basis)
    action = {}
    for a in range(n):
        for b in range(n):
            cols = []
            for v in basis:
                coeffs = solve(amb[a, b].apply(v))
                if coeffs is None:
                    raise RuntimeError("lowering closure is not a submodule")
                col = {r: c for r, c in enumerate(coeffs) if c}
                cols.append(col)
            m = SparseMatrix.from_columns(dim, cols)
            if a == b and shift:
                m = m + SparseMatrix.identity(dim).scale(shift)
            action[a + 1, b + 1] = m
    weights = [tuple(x + shift for x in w) for w in weights]
    return Irrep(n, hw, action, weights)


# -- tensor products --------------------------------------------------------

@dataclass(frozen=True)
class TensorModule:
    """Ordered tensor product L_1 (x) ... (x) L_n, optionally with evaluation
    points z_1, ..., z_n attached.

    Basis vectors are indexed row-major by the factor basis indices with
    factor 1 varying slowest.
    """

    factors: tuple
    points: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a tensor module needs at least one factor")
        ns = {f.n for f in self.factors}
        if len(ns) != 1:
            raise ValueError("all factors must be modules over the same gl(N)")
        if self.points is not None:
            pts = tuple(Fraction(p) for p in self.points)
            pts = tuple(p.numerator if p.denominator == 1 else p for p in pts)
            if len(pts) != len(self.factors):
                raise ValueError(
                    f"{len(pts)} points given for {len(self.factors)} factors")
            object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, n, weights, points=None):
        return cls(tuple(build_irrep(n, tuple(w)) for w in weights), points)

    @property
    def n_rank(self):
        return self.factors[0].n

    @property
    def n_factors(self):
        return len(self.factors)

    @property
    def dims(self):
        return tuple(f.dim for f in self.factors)

    @property
    def dim(self):
        return prod(self.dims)

    @property
    def factor_keys(self):
        return tuple(f.key for f in self.factors)

    def with_points(self, points):
        return TensorModule(self.factors, points)

    def multi_index(self, idx):
        out = []
        for d in reversed(self.dims):
            idx, r = divmod(idx, d)
            out.append(r)
        return tuple(reversed(out))

    def flat_index(self, multi):
        idx = 0
        for d, i in zip(self.dims, multi):
            idx = idx * d + i
        return idx

    @property
    def hw_index(self):
        return self.flat_index([f.hw_index for f in self.factors])

    def basis_weight(self, idx):
        ws = [f.basis_weights[i] for f, i in zip(self.factors, self.multi_index(idx))]
        return tuple(sum(c) for c in zip(*ws))

    def basis_weights(self):
        return [self.basis_weight(i) for i in range(self.dim)]

    @property
    def total_highest_weight(self):
        return tuple(sum(c) for c in zip(*(f.highest_weight for f in self.factors)))

    def permuted(self, order):
        """Module whose k-th factor is factor ``order[k]`` of this one (0-based)."""
        pts = None if self.points is None else tuple(self.points[o] for o in order)
        return TensorModule(tuple(self.factors[o] for o in order), pts)

    def swapped(self, i):
        """Swap 1-based factors i and i+1 (with their points)."""
        order = list(range(self.n_factors))
        order[i - 1], order[i] = order[i], order[i - 1]
        return self.permuted(order)

    def describe(self):
        return {"n": self.n_rank, "factors": [list(f.highest_weight) for f in self.factors],
                "points": None if self.points is None else [str(p) for p in self.points]}


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A linear map ``source -> target`` between tensor modules."""

    source: TensorModule
    target: TensorModule
    matrix: SparseMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.target.dim} x {self.source.dim}")

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.source.factor_keys != other.target.factor_keys:
            raise ValueError("cannot compose: factor orders do not match")
        return OperatorMatrix(other.source, self.target, self.matrix @ other.matrix)

    def _same_space(self, other):
        if (self.source.factor_keys != other.source.factor_keys
                or self.target.factor_keys != other.target.factor_keys):
            raise ValueError("operators act between different modules")

    def __add__(self, other):
        self._same_space(other)
        return OperatorMatrix(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other):
        self._same_space(other)
        return OperatorMatrix(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self):
        return OperatorMatrix(self.source, self.target, -self.matrix)

    def __mul__(self, a):
        return OperatorMatrix(self.source, self.target, self.matrix.scale(a))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return (self.source.factor_keys == other.source.factor_keys
                and self.target.factor_keys == other.target.factor_keys
                and self.matrix == other.matrix)

    __hash__ = None

    def apply(self, v: dict) -> dict:
        return self.matrix.apply(v)

    @classmethod
    def identity(cls, t: TensorModule):
        return cls(t, t, SparseMatrix.identity(t.dim))

    @classmethod
    def zero(cls, t: TensorModule, target: TensorModule | None = None):
        target = t if target is None else target
        return cls(t, target, SparseMatrix.zero(target.dim, t.dim))


@lru_cache(maxsize=None)
def _factor_matrix(keys, i, j, s):
    irreps = [build_irrep(n, w) for n, w in keys]
    dims = [f.dim for f in irreps]
    left = SparseMatrix.identity(prod(dims[:s - 1]))
    right = SparseMatrix.identity(prod(dims[s:]))
    return left.kron(irreps[s - 1].e(i, j)).kron(right)


def _check_indices(t, i, j):
    n = t.n_rank
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"e_{i}{j} is not an element of gl({n})")


def factor_operator(t: TensorModule, i: int, j: int, s: int) -> OperatorMatrix:
    """``e_ij`` acting on the s-th tensor factor."""
    _check_indices(t, i, j)
    if not 1 <= s <= t.n_factors:
        raise IndexError(f"factor {s} out of range 1..{t.n_factors}")
    return OperatorMatrix(t, t, _factor_matrix(t.factor_keys, i, j, s))


@lru_cache(maxsize=None)
def _diagonal_matrix(keys, i, j):
    acc = _factor_matrix(keys, i, j, 1)
    for s in range(2, len(keys) + 1):
        acc = acc + _factor_matrix(keys, i, j, s)
    return acc


def diagonal_operator(t: TensorModule, i: int, j: int) -> OperatorMatrix:
    """``e_ij`` acting on the whole tensor product (sum over factors)."""
    _check_indices(t, i, j)
    return OperatorMatrix(t, t, _diagonal_matrix(t.factor_keys, i, j))


def two_h_theta_value(t: TensorModule, l: int) -> int:
    """Scalar of e_11 - e_NN on the weight space (t)_l."""
    lam = t.total_highest_weight
    return lam[0] - lam[-1] - 2 * l


def weight_space_indices(t: TensorModule, l: int) -> list[int]:
    target = two_h_theta_value(t, l)
    out = []
    for idx in range(t.dim):
        w = t.basis_weight(idx)
        if w[0] - w[-1] == target:
            out.append(idx)
    return out


def weight_space_l(t: TensorModule, l: int) -> Subspace:
    """Eigenspace of e_11 - e_NN with eigenvalue Lambda_1 - Lambda_N - 2l.

    The tensor basis consists of weight vectors, so the eigenspace is spanned
    by the basis vectors of the right weight.
    """
    return Subspace(t.dim, [{i: 1} for i in weight_space_indices(t, l)])


def singular_space_l(t: TensorModule, l: int) -> Subspace:
    """Vectors of (t)_l killed by every simple raising operator e_{i,i+1}."""
    idx = weight_space_indices(t, l)
    if not idx:
        return Subspace.zero(t.dim)
    n = t.n_rank
    images = [_diagonal_matrix(t.factor_keys, a, a + 1) for a in range(1, n)]
    # Stack the images of the weight-space basis vectors into one matrix whose
    # kernel is the singular subspace in local coordinates.
    cols = []
    for i in idx:
        col = {}
        for block, m in enumerate(images):
            for r, v in m.column(i).items():
                col[block * t.dim + r] = v
        cols.append(col)
    stacked = SparseMatrix.from_columns(len(images) * t.dim, cols)
    vecs = []
    for coeffs in nullspace_vectors(stacked):
        vecs.append({idx[c]: v for c, v in coeffs.items()})
    return Subspace(t.dim, vecs)


def embed_pair(t: TensorModule, op: SparseMatrix, slot_a: int, slot_b: int) -> OperatorMatrix:
    """Place an operator on L_a (x) L_b (first leg on ``slot_a``, second on
    ``slot_b``, both 1-based) into End(t)."""
    fa, fb = t.factors[slot_a - 1], t.factors[slot_b - 1]
    if op.shape != (fa.dim * fb.dim, fa.dim * fb.dim):
        raise ValueError("operator does not match the chosen factors")
    cols = op.columns()
    data: dict = {}
    for c in range(t.dim):
        mi = list(t.multi_index(c))
        local = mi[slot_a - 1] * fb.dim + mi[slot_b - 1]
        for r_local, v in cols[local].items():
            ra, rb = divmod(r_local, fb.dim)
            mi2 = list(mi)
            mi2[slot_a - 1], mi2[slot_b - 1] = ra, rb
            data.setdefault(t.flat_index(mi2), {})[c] = v
    return OperatorMatrix(t, t, SparseMatrix(t.dim, t.dim, data))


def permutation_operator(t: TensorModule, order) -> OperatorMatrix:
    """m_1 (x) ... (x) m_n  ->  m_{order[0]} (x) ... (x) m_{order[n-1]}
    (0-based ``order``), landing in ``t.permuted(order)``."""
    target = t.permuted(order)
    data = {}
    for c in range(t.dim):
        mi = t.multi_index(c)
        data[target.flat_index([mi[o] for o in order])] = {c: 1}
    return OperatorMatrix(t, target, SparseMatrix(t.dim, t.dim, data))


def swap_operator(t: TensorModule, i: int) -> OperatorMatrix:
    """Flip of the 1-based factors i, i+1."""
    order = list(range(t.n_factors))
    order[i - 1], order[i] = order[i], order[i - 1]
    return permutation_operator(t, order)


def vector_in(t: TensorModule, terms) -> dict:
    """Sparse vector from ``{(i_1, ..., i_n): coeff}`` in factor-basis indices."""
    out: dict = {}
    for multi, c in dict(terms).items():
        out = vec_axpy(out, c, {t.flat_index(multi): 1})
    return out
