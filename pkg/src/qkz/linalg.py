"""Exact sparse linear algebra over the rationals.

Scalars are ``int`` or ``fractions.Fraction``; nothing here ever touches a
float.  Sparse vectors are plain ``dict`` objects mapping an index to a
nonzero scalar, matrices are :class:`SparseMatrix`, and linear subspaces are
:class:`Subspace` objects kept in reduced row-echelon form so that equality of
subspaces is equality of their canonical bases.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .exceptions import AmbientDimensionError

__all__ = [
    "SparseMatrix",
    "Subspace",
    "rref",
    "kernel",
    "span",
    "subspace_equal",
    "map_subspace",
    "intersect",
    "coordinates",
    "format_rational",
    "parse_rational",
]


def _normalize(v):
    # Fractions with unit denominator are stored as ints: faster arithmetic.
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def format_rational(v) -> str:
    return str(Fraction(v))


def parse_rational(s) -> Rational:
    if isinstance(s, bool):
        raise ValueError(f"not a rational: {s!r}")
    if isinstance(s, (int, Fraction)):
        return _normalize(Fraction(s))
    if isinstance(s, str):
        return _normalize(Fraction(s.strip()))
    raise ValueError(f"not a rational: {s!r}")


# -- sparse vectors ---------------------------------------------------------

def vec_axpy(y: dict, a, x: dict) -> dict:
    """Return y + a*x as a new vector."""
    out = dict(y)
    if a == 0:
        return out
    for i, v in x.items():
        w = out.get(i, 0) + a * v
        if w:
            out[i] = _normalize(w)
        else:
            out.pop(i, None)
    return out


def vec_scale(a, x: dict) -> dict:
    if a == 0:
        return {}
    return {i: _normalize(a * v) for i, v in x.items()}


class SparseMatrix:
    """A rows x cols matrix stored as ``{row: {col: value}}`` with no zeros."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: dict | None = None):
        self.rows = rows
        self.cols = cols
        clean = {}
        if data:
            for r, row in data.items():
                if not 0 <= r < rows:
                    raise IndexError(f"row {r} out of range for {rows} rows")
                kept = {}
                for c, v in row.items():
                    if not 0 <= c < cols:
                        raise IndexError(f"column {c} out of range for {cols} columns")
                    if v:
                        kept[c] = _normalize(v)
                if kept:
                    clean[r] = kept
        self._data = clean

    @classmethod
    def _raw(cls, rows, cols, data):
        # Trusted constructor: data already clean.
        m = cls.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, data
        return m

    # -- construction ------------------------------------------------------
    @classmethod
    def zero(cls, rows, cols=None):
        return cls._raw(rows, rows if cols is None else cols, {})

    @classmethod
    def identity(cls, n):
        return cls._raw(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, entries):
        entries = [list(r) for r in entries]
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        data = {}
        for r, row in enumerate(entries):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            d = {c: parse_rational(v) for c, v in enumerate(row) if v != 0}
            if d:
                data[r] = d
        return cls(rows, cols, data)

    @classmethod
    def from_columns(cls, rows, columns):
        """Build a matrix whose c-th column is the sparse vector ``columns[c]``."""
        data: dict = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                data.setdefault(r, {})[c] = v
        return cls(rows, len(columns), data)

    @classmethod
    def from_rows(cls, cols, row_vectors):
        return cls(len(row_vectors), cols, {r: dict(v) for r, v in enumerate(row_vectors)})

    @classmethod
    def from_triplets(cls, rows, cols, triplets):
        data: dict = {}
        for r, c, v in triplets:
            v = parse_rational(v)
            if v:
                row = data.setdefault(int(r), {})
                row[int(c)] = row.get(int(c), 0) + v
        return cls(rows, cols, data)

    def to_triplets(self):
        return [[r, c, format_rational(v)]
                for r in sorted(self._data) for c, v in sorted(self._data[r].items())]

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self._data.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    # -- access ------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return sum(len(r) for r in self._data.values())

    def row(self, r) -> dict:
        return self._data.get(r, {})

    def items(self):
        for r, row in self._data.items():
            for c, v in row.items():
                yield r, c, v

    def __getitem__(self, rc):
        r, c = rc
        return self._data.get(r, {}).get(c, 0)

    def column(self, c) -> dict:
        return {r: row[c] for r, row in self._data.items() if c in row}

    def columns(self) -> list:
        cols = [dict() for _ in range(self.cols)]
        for r, row in self._data.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def is_zero(self):
        return not self._data

    # -- arithmetic --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self.nnz))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        data = {r: dict(row) for r, row in self._data.items()}
        for r, orow in other._data.items():
            row = data.setdefault(r, {})
            for c, v in orow.items():
                w = row.get(c, 0) + sign * v
                if w:
                    row[c] = _normalize(w)
                else:
                    row.pop(c, None)
            if not row:
                del data[r]
        return SparseMatrix._raw(self.rows, self.cols, data)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a):
        if a == 0:
            return SparseMatrix.zero(self.rows, self.cols)
        return SparseMatrix._raw(self.rows, self.cols,
                                 {r: {c: _normalize(a * v) for c, v in row.items()}
                                  for r, row in self._data.items()})

    def __mul__(self, a):
        if isinstance(a, SparseMatrix):
            return NotImplemented
        return self.scale(a)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        odata = other._data
        data = {}
        for r, row in self._data.items():
            acc: dict = {}
            for k, a in row.items():
                orow = odata.get(k)
                if orow is None:
                    continue
                for c, b in orow.items():
                    acc[c] = acc.get(c, 0) + a * b
            acc = {c: _normalize(v) for c, v in acc.items() if v}
            if acc:
                data[r] = acc
        return SparseMatrix._raw(self.rows, other.cols, data)

    def apply(self, vec: dict) -> dict:
        """Matrix times sparse vector."""
        out: dict = {}
        for r, row in self._data.items():
            s = 0
            for k, a in row.items():
                x = vec.get(k)
                if x:
                    s += a * x
            if s:
                out[r] = s
        return {i: _normalize(v) for i, v in out.items() if v}

    def transpose(self):
        data: dict = {}
        for r, row in self._data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return SparseMatrix._raw(self.cols, self.rows, data)

    def kron(self, other):
        data = {}
        for r1, row1 in self._data.items():
            for r2, row2 in other._data.items():
                data[r1 * other.rows + r2] = {
                    c1 * other.cols + c2: _normalize(a * b)
                    for c1, a in row1.items() for c2, b in row2.items()}
        return SparseMatrix._raw(self.rows * other.rows, self.cols * other.cols, data)

    def restrict_rows(self, keep):
        keep = set(keep)
        return SparseMatrix._raw(self.rows, self.cols,
                                 {r: dict(row) for r, row in self._data.items() if r in keep})


def commutator(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    return a @ b - b @ a


def first_difference(a: SparseMatrix, b: SparseMatrix):
    """Index of a column on which a and b differ, or None when a == b."""
    if a == b:
        return None
    d = a - b
    return min(c for _, c, _ in d.items())


# -- row reduction ----------------------------------------------------------

def _echelon_insert(pivots: dict, row: dict):
    """Reduce ``row`` against the echelon rows in ``pivots`` (pivot col -> row
    with leading entry 1).  Inserts the remainder as a new pivot row and
    returns its pivot column, or None if the row reduced to zero."""
    row = dict(row)
    while row:
        c = min(row)
        prow = pivots.get(c)
        if prow is None:
            lead = row[c]
            if lead != 1:
                inv = Fraction(1) / lead
                row = {k: _normalize(v * inv) for k, v in row.items()}
            pivots[c] = row
            return c
        a = row[c]
        for k, v in prow.items():
            w = row.get(k, 0) - a * v
            if w:
                row[k] = w
            else:
                row.pop(k, None)
    return None


def _back_substitute(pivots: dict) -> list[int]:
    order = sorted(pivots)
    for c in reversed(order):
        prow = pivots[c]
        for c2 in order:
            if c2 >= c:
                break
            row = pivots[c2]
            a = row.get(c)
            if a:
                for k, v in prow.items():
                    w = row.get(k, 0) - a * v
                    if w:
                        row[k] = _normalize(w)
                    else:
                        row.pop(k, None)
    for c in order:
        pivots[c] = {k: _normalize(v) for k, v in pivots[c].items()}
    return order


def rref_rows(cols: int, row_vectors) -> tuple[list[dict], list[int]]:
    pivots: dict = {}
    for v in row_vectors:
        if v:
            _echelon_insert(pivots, v)
    order = _back_substitute(pivots)
    return [pivots[c] for c in order], order


def rref(m: SparseMatrix) -> tuple[SparseMatrix, list[int]]:
    """Reduced row-echelon form of ``m`` together with its pivot columns."""
    rows, piv = rref_rows(m.cols, (m.row(r) for r in sorted(m._data)))
    return SparseMatrix._raw(len(rows), m.cols, dict(enumerate(rows))), piv


def rank(m: SparseMatrix) -> int:
    pivots: dict = {}
    return sum(_echelon_insert(pivots, m.row(r)) is not None for r in m._data)


def _nullspace_rows(cols: int, rows: list[dict], piv: list[int]) -> list[dict]:
    pivset = set(piv)
    basis = []
    for f in range(cols):
        if f in pivset:
            continue
        v = {f: 1}
        for r, c in zip(rows, piv):
            a = r.get(f)
            if a:
                v[c] = -a
        basis.append(v)
    return basis


def nullspace_vectors(m: SparseMatrix) -> list[dict]:
    """A (non-canonical) basis of the null space: one vector per free column."""
    rows, piv = rref_rows(m.cols, (m.row(r) for r in m._data))
    return _nullspace_rows(m.cols, rows, piv)


# -- subspaces --------------------------------------------------------------

class Subspace:
    """A linear subspace of Q^ambient_dim held by its RREF basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors=()):
        self.ambient_dim = ambient_dim
        for v in vectors:
            if any(not 0 <= i < ambient_dim for i in v):
                raise AmbientDimensionError(
                    f"vector index out of range for ambient dimension {ambient_dim}")
        rows, piv = rref_rows(ambient_dim, vectors)
        self.basis = tuple(rows)
        self.pivots = tuple(piv)

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def contains(self, v: dict) -> bool:
        r = dict(v)
        for prow, c in zip(self.basis, self.pivots):
            a = r.get(c)
            if a:
                r = vec_axpy(r, -a, prow)
        return not r

    def is_subspace_of(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(v) for v in self.basis)

    def as_matrix(self) -> SparseMatrix:
        """Matrix whose columns are the basis vectors."""
        return SparseMatrix.from_columns(self.ambient_dim, list(self.basis))

    def to_json(self):
        return {"ambient_dim": self.ambient_dim,
                "basis": [[[i, format_rational(v)] for i, v in sorted(b.items())]
                          for b in self.basis]}

    @classmethod
    def full(cls, n):
        return cls(n, [{i: 1} for i in range(n)])

    @classmethod
    def zero(cls, n):
        return cls(n, [])


def span(ambient_dim: int, vectors) -> Subspace:
    return Subspace(ambient_dim, list(vectors))


def _check_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise AmbientDimensionError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def kernel(m: SparseMatrix) -> Subspace:
    """Null space of ``m`` in canonical form."""
    return Subspace(m.cols, nullspace_vectors(m))


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    _check_ambient(a, b)
    return a.basis == b.basis


def map_subspace(op: SparseMatrix, s: Subspace) -> Subspace:
    if op.cols != s.ambient_dim:
        raise AmbientDimensionError(
            f"operator has {op.cols} columns, subspace lives in dimension {s.ambient_dim}")
    return Subspace(op.rows, [op.apply(v) for v in s.basis])


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of [A | -B] on stacked coordinates."""
    _check_ambient(a, b)
    if not a.basis or not b.basis:
        return Subspace.zero(a.ambient_dim)
    cols = [dict(v) for v in a.basis] + [vec_scale(-1, v) for v in b.basis]
    stacked = SparseMatrix.from_columns(a.ambient_dim, cols)
    out = []
    for coeffs in nullspace_vectors(stacked):
        v: dict = {}
        for idx, c in coeffs.items():
            if idx < len(a.basis):
                v = vec_axpy(v, c, a.basis[idx])
        out.append(v)
    return Subspace(a.ambient_dim, out)


class CoordinateSolver:
    """Expresses vectors in a fixed independent list of vectors.

    Each basis vector is augmented by a tag coordinate before row reduction,
    so reducing a target vector to zero in the original coordinates leaves
    (minus) its coefficients in the tag coordinates.
    """

    def __init__(self, basis: list[dict], ambient_dim: int):
        self.n = len(basis)
        self.dim = ambient_dim
        self._pivots: dict = {}
        for t, b in enumerate(basis):
            row = dict(b)
            row[ambient_dim + t] = 1
            c = _echelon_insert(self._pivots, row)
            if c is None or c >= ambient_dim:
                raise ValueError("basis vectors are linearly dependent")

    def __call__(self, v: dict):
        """Coefficient list of ``v``, or None when v is outside the span."""
        dim = self.dim
        r = dict(v)
        while True:
            live = [c for c in r if c < dim]
            if not live:
                break
            c = min(live)
            prow = self._pivots.get(c)
            if prow is None:
                return None
            r = vec_axpy(r, -r[c], prow)
        return [_normalize(-r.get(dim + t, 0)) for t in range(self.n)]


def coordinates(basis: list[dict], v: dict, ambient_dim: int | None = None):
    """Coefficients of ``v`` in the independent list ``basis`` (None if v is
    not in their span)."""
    if ambient_dim is None:
        ambient_dim = 1 + max([max(b) for b in basis if b] + [max(v) if v else 0])
    return CoordinateSolver(basis, ambient_dim)(v)
