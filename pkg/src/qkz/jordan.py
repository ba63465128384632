"""Normal-form arithmetic in the Jordan plane and in quantum planes.

Elements are finite sums ``sum c_{a,b} y^a x^b`` with all ``y`` letters to
the left.  The coefficients are polynomials in one formal parameter (``p``
by default, ``q`` for a quantum plane with symbolic ``q``), so identities in
that parameter are checked as polynomial identities.

Rewriting rules used to reach normal form:

* Jordan plane, ``xy = yx + y^2``:  ``x y^a = y^a x + a y^(a+1)``.
* quantum plane, ``xy = q yx``:     ``x^b y^a = q^(ab) y^a x^b``.
* commutative plane:                ``x^b y^a = y^a x^b``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

from .exceptions import AlgebraMismatch
from .linalg import SparseMatrix, format_rational, parse_rational, rank
from .report import CheckResult, Report

__all__ = [
    "PolyCoeff",
    "Algebra",
    "JORDAN",
    "COMMUTATIVE",
    "quantum",
    "NCPoly",
    "nc_multiply",
    "nc_power",
    "verify_jordan_identity",
    "hilbert_dimension",
    "hilbert_dimension_by_rank",
    "check_associativity",
    "check_hilbert",
    "random_ncpoly",
]


def _norm(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class PolyCoeff:
    """Polynomial in one formal symbol with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``symbol^i``; trailing zeros are
    trimmed, so the zero polynomial has an empty list.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_norm(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def symbol(cls):
        return cls((0, 1))

    @classmethod
    def lift(cls, c):
        return c if isinstance(c, PolyCoeff) else cls.const(parse_rational(c))

    @staticmethod
    def _foreign(c):
        return not isinstance(c, (PolyCoeff, int, Fraction, str))

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_constant(self):
        return len(self.coeffs) <= 1

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.coeffs[0] if self.coeffs else 0

    def __add__(self, other):
        if self._foreign(other):
            return NotImplemented
        other = PolyCoeff.lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return PolyCoeff([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return PolyCoeff([-c for c in self.coeffs])

    def __sub__(self, other):
        if self._foreign(other):
            return NotImplemented
        return self + (-PolyCoeff.lift(other))

    def __rsub__(self, other):
        return PolyCoeff.lift(other) - self

    def __mul__(self, other):
        if self._foreign(other):
            return NotImplemented
        other = PolyCoeff.lift(other)
        if self.is_zero() or other.is_zero():
            return PolyCoeff()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyCoeff(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyCoeff):
            try:
                other = PolyCoeff.lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, value):
        """Evaluate at a rational value (Horner)."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return _norm(acc)

    def render(self, symbol="p"):
        if not self.coeffs:
            return "0"
        parts = []
        for deg in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[deg]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if deg == 0:
                body = format_rational(mag)
            else:
                power = symbol if deg == 1 else f"{symbol}^{deg}"
                if mag == 1:
                    body = power
                elif isinstance(mag, int):
                    body = f"{mag}{power}"
                else:
                    body = f"({format_rational(mag)}){power}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += sign + body
        return text

    def __repr__(self):
        return f"PolyCoeff({self.render()})"


@dataclass(frozen=True)
class Algebra:
    """``kind`` is ``"jordan"``, ``"quantum"`` or ``"commutative"``.

    For the quantum plane ``q`` is a rational number, or ``None`` for a
    symbolic ``q`` (the coefficient symbol then stands for ``q``).
    """

    kind: str
    q: object = None

    def __post_init__(self):
        if self.kind not in ("jordan", "quantum", "commutative"):
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.kind == "quantum" and self.q is not None:
            object.__setattr__(self, "q", parse_rational(self.q))

    @property
    def symbol(self):
        return "q" if self.kind == "quantum" and self.q is None else "p"

    def relation(self):
        """The defining relation ``xy - (...)`` as a map word -> coefficient,
        words being strings over ``x``, ``y``."""
        if self.kind == "jordan":
            return {"xy": 1, "yx": -1, "yy": -1}
        if self.kind == "commutative":
            return {"xy": 1, "yx": -1}
        if self.q is None:
            raise ValueError("the relation of a symbolic quantum plane has non-rational entries")
        return {"xy": 1, "yx": -self.q}

    def __str__(self):
        if self.kind == "quantum":
            return f"Quantum(q={'q' if self.q is None else format_rational(self.q)})"
        return self.kind.capitalize()


JORDAN = Algebra("jordan")
COMMUTATIVE = Algebra("commutative")


def quantum(q=None) -> Algebra:
    return Algebra("quantum", q)


@lru_cache(maxsize=None)
def _jordan_swap(b: int, a: int):
    """Normal form of x^b y^a in the Jordan plane, as ((a', b'), int) pairs."""
    if a == 0 or b == 0:
        return (((a, b), 1),)
    # x^b y^a = (x^(b-1) y^a) x + a x^(b-1) y^(a+1)
    out: dict = {}
    for (a1, b1), c in _jordan_swap(b - 1, a):
        out[a1, b1 + 1] = out.get((a1, b1 + 1), 0) + c
    for (a1, b1), c in _jordan_swap(b - 1, a + 1):
        out[a1, b1] = out.get((a1, b1), 0) + a * c
    return tuple(sorted(out.items()))


def _swap(alg: Algebra, b: int, a: int):
    """Normal form of x^b y^a as ((a', b'), PolyCoeff) pairs."""
    if alg.kind == "jordan":
        return [(k, PolyCoeff.const(c)) for k, c in _jordan_swap(b, a)]
    if alg.kind == "commutative" or a == 0 or b == 0:
        return [((a, b), PolyCoeff.const(1))]
    if alg.q is None:
        return [((a, b), PolyCoeff([0] * (a * b) + [1]))]
    return [((a, b), PolyCoeff.const(alg.q ** (a * b)))]


class NCPoly:
    """``sum c_{a,b} y^a x^b`` over an algebra, with PolyCoeff coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Algebra, terms=None):
        self.algebra = algebra
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("exponents must be non-negative")
            c = PolyCoeff.lift(c)
            if not c.is_zero():
                clean[int(a), int(b)] = c
        self.terms = clean

    # -- constructors
    @classmethod
    def x(cls, algebra):
        return cls(algebra, {(0, 1): 1})

    @classmethod
    def y(cls, algebra):
        return cls(algebra, {(1, 0): 1})

    @classmethod
    def one(cls, algebra):
        return cls(algebra, {(0, 0): 1})

    @classmethod
    def monomial(cls, algebra, a, b, coeff=1):
        return cls(algebra, {(a, b): coeff})

    # -- arithmetic
    def _same(self, other):
        if other.algebra != self.algebra:
            raise AlgebraMismatch(f"cannot combine elements of {self.algebra} and {other.algebra}")

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            other = NCPoly(self.algebra, {(0, 0): other})
        self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return NCPoly(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.algebra, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return nc_multiply(self, other)
        c = PolyCoeff.lift(other)
        return NCPoly(self.algebra, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = PolyCoeff.lift(other)
        return NCPoly(self.algebra, {k: c * v for k, v in self.terms.items()})

    def __pow__(self, k):
        return nc_power(self, k)

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        return max((a + b for a, b in self.terms), default=-1)

    def coefficient(self, a, b) -> PolyCoeff:
        return self.terms.get((a, b), PolyCoeff())

    def specialize(self, value) -> "NCPoly":
        """Substitute a rational value for the coefficient symbol."""
        value = parse_rational(value)
        return NCPoly(self.algebra, {k: PolyCoeff.const(c(value)) for k, c in self.terms.items()})

    def evaluate(self, x: SparseMatrix, y: SparseMatrix) -> SparseMatrix:
        """Substitute square matrices for x and y.  Coefficients must be
        constants (specialize first).  Only meaningful if the matrices satisfy
        the defining relation."""
        n = x.rows
        ypow, xpow = [SparseMatrix.identity(n)], [SparseMatrix.identity(n)]
        out = SparseMatrix.zero(n)
        for (a, b), c in self.terms.items():
            while len(ypow) <= a:
                ypow.append(ypow[-1] @ y)
            while len(xpow) <= b:
                xpow.append(xpow[-1] @ x)
            out = out + (ypow[a] @ xpow[b]).scale(c.constant_value())
        return out

    # -- text
    def render(self) -> str:
        if not self.terms:
            return "0"
        sym = self.algebra.symbol
        pieces = []
        for (a, b) in sorted(self.terms, key=lambda k: (-k[0], -k[1])):
            c = self.terms[a, b]
            letters = ["y" if a == 1 else f"y^{a}"] * (a > 0) + ["x" if b == 1 else f"x^{b}"] * (b > 0)
            mono = "*".join(letters)
            neg = False
            if len([v for v in c.coeffs if v]) == 1 and c.coeffs[-1] < 0:
                c, neg = -c, True
            ctext = c.render(sym)
            if "+" in ctext or ctext.lstrip("-").count("-"):
                ctext = f"({ctext})"
            if not mono:
                body = ctext
            elif ctext == "1":
                body = mono
            else:
                body = f"{ctext}*{mono}"
            pieces.append(("-" if neg else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    __str__ = render

    def __repr__(self):
        return f"NCPoly[{self.algebra}]({self.render()})"


def nc_multiply(f: NCPoly, g: NCPoly) -> NCPoly:
    """Normal-form product f*g."""
    f._same(g)
    alg = f.algebra
    out: dict = {}
    for (a1, b1), c1 in f.terms.items():
        for (a2, b2), c2 in g.terms.items():
            c12 = c1 * c2
            # y^a1 (x^b1 y^a2) x^b2
            for (a, b), r in _swap(alg, b1, a2):
                key = (a1 + a, b + b2)
                term = c12 * r
                out[key] = out[key] + term if key in out else term
    return NCPoly(alg, out)


def nc_power(f: NCPoly, k: int) -> NCPoly:
    if k < 0:
        raise ValueError("negative powers are not defined")
    acc = NCPoly.one(f.algebra)
    for _ in range(k):
        acc = nc_multiply(acc, f)
    return acc


# -- the (x + p y)^k identity -------------------------------------------------

def jordan_identity_sides(k: int):
    """(LHS, RHS, CLOSED) for the identity in the Jordan plane:

    (x + p y)^k = prod_{j=1..k} (x + (p - k - 1 + 2j) y)
                = sum_i C(k, i) p(p+1)...(p+i-1) y^i x^(k-i)
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    x, y = NCPoly.x(JORDAN), NCPoly.y(JORDAN)
    p = PolyCoeff.symbol()
    lhs = nc_power(x + p * y, k)
    rhs = NCPoly.one(JORDAN)
    for j in range(1, k + 1):
        rhs = rhs * (x + (p + (2 * j - k - 1)) * y)
    closed_terms = {}
    rising = PolyCoeff.const(1)
    for i in range(k + 1):
        closed_terms[i, k - i] = rising * comb(k, i)
        rising = rising * (p + i)
    return lhs, rhs, NCPoly(JORDAN, closed_terms)


def _poly_witness(f: NCPoly, g: NCPoly):
    diff = f - g
    a, b = min(diff.terms)
    return [[f"y^{a}x^{b}", diff.terms[a, b].render(f.algebra.symbol)]]


def verify_jordan_identity(k: int) -> Report:
    lhs, rhs, closed = jordan_identity_sides(k)
    report = Report()
    case = f"Jordan k={k}"
    for name, f, g in (("lhs=rhs", lhs, rhs), ("lhs=closed", lhs, closed),
                       ("rhs=closed", rhs, closed)):
        if f == g:
            report.add(CheckResult("jordan-identity", case, "PASS", detail=name))
        else:
            report.add(CheckResult("jordan-identity", case, "FAIL",
                                   witness=_poly_witness(f, g), detail=name))
    return report


# -- Hilbert dimensions ---------------------------------------------------------

def hilbert_dimension(algebra: Algebra, r: int) -> int:
    """Number of degree-r words irreducible under the rewriting xy -> ...,
    i.e. words with no ``xy`` factor, counted by a two-state recursion on the
    last letter.  Together with confluence of the rewriting this is the
    dimension of the degree-r component."""
    if r < 0:
        raise ValueError("degree must be non-negative")
    if r == 0:
        return 1
    # ends_x: words ending in x;  ends_y: words ending in y not preceded by x
    ends_x, ends_y = 1, 1
    for _ in range(r - 1):
        ends_x, ends_y = ends_x + ends_y, ends_y  # y may only follow y
    return ends_x + ends_y


def hilbert_dimension_by_rank(algebra: Algebra, r: int) -> int:
    """2^r minus the rank of the degree-r part of the two-sided ideal
    generated by the relation, computed directly over all words."""
    if r < 2:
        return 2 ** r
    rel = algebra.relation()
    index = {w: i for i, w in enumerate("".join(t) for t in product("xy", repeat=r))}
    rows = []
    for left in range(r - 1):
        for pre in product("xy", repeat=left):
            for post in product("xy", repeat=r - 2 - left):
                u, v = "".join(pre), "".join(post)
                row = {}
                for w, c in rel.items():
                    col = index[u + w + v]
                    row[col] = row.get(col, 0) + c
                rows.append({c: v for c, v in row.items() if v})
    m = SparseMatrix(len(rows), len(index), dict(enumerate(rows)))
    return 2 ** r - rank(m)


def random_ncpoly(algebra: Algebra, rng: random.Random, max_degree=4, max_terms=4,
                  symbolic=True) -> NCPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_degree)
        a = rng.randint(0, d)
        deg = rng.randint(0, 2) if symbolic else 0
        terms[a, d - a] = PolyCoeff([Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                                     for _ in range(deg + 1)])
    return NCPoly(algebra, terms)


def check_associativity(algebra: Algebra, triples=100, seed=0, max_degree=4) -> Report:
    rng = random.Random(seed)
    report = Report()
    case = str(algebra)
    for t in range(triples):
        f, g, h = (random_ncpoly(algebra, rng, max_degree) for _ in range(3))
        if (f * g) * h != f * (g * h):
            report.add(CheckResult("associativity", case, "FAIL",
                                   witness=_poly_witness((f * g) * h, f * (g * h)),
                                   detail=f"triple {t}: f={f} g={g} h={h}"))
    if not report.checks:
        report.add(CheckResult("associativity", case, "PASS", detail=f"{triples} triples"))
    return report


def check_hilbert(algebra: Algebra, r_max=20, rank_max=8, triples=100, seed=0) -> Report:
    """dim(A)_r = r + 1 for r <= r_max, cross-checked by ideal ranks for
    r <= rank_max, plus the associativity fuzz on random triples."""
    report = Report()
    case = str(algebra)
    bad = [r for r in range(r_max + 1) if hilbert_dimension(algebra, r) != r + 1]
    if algebra.kind != "quantum" or algebra.q is not None:
        bad += [r for r in range(rank_max + 1)
                if hilbert_dimension_by_rank(algebra, r) != r + 1 and r not in bad]
    if bad:
        r = bad[0]
        report.add(CheckResult("hilbert", case, "FAIL", witness=[[r, str(hilbert_dimension(algebra, r))]],
                               detail=f"dimension in degree {r} differs from {r + 1}"))
    else:
        report.add(CheckResult("hilbert", case, "PASS", detail=f"r<={r_max}, rank check r<={rank_max}"))
    return report.extend(check_associativity(algebra, triples, seed))
