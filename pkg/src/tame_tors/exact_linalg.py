"""Exact fields and linear algebra.

Three kinds of field are provided:

* ``QQ``: the rationals, backed by ``gmpy2.mpq``;
* ``GF(p)``: prime fields;
* ``RationalFunctionField(base)``: ``base(t)``, with elements kept as reduced
  fractions of polynomials with monic denominator.

Matrices are plain lists of rows. Every routine takes the field explicitly so
that empty matrices and zero vectors can be produced without inspecting
entries. Pivoting is deterministic (first nonzero entry in column order).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq

INF = math.inf


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------


class Field:
    """Common interface of the exact fields."""

    characteristic: int = 0
    name: str = "field"

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, x) -> bool:
        return x == 0

    def random_element(self, rng: random.Random, bound: int = 9):
        return self(rng.randint(-bound, bound))

    def __repr__(self) -> str:
        return self.name


class RationalField(Field):
    characteristic = 0
    name = "QQ"

    def __call__(self, x):
        if isinstance(x, RatFunc):
            if not x.is_constant():
                raise ValueError(f"{x} is not a constant")
            return x.constant_value()
        if isinstance(x, str):
            return mpq(Fraction(x.strip()))
        return mpq(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def to_str(self, x) -> str:
        return str(Fraction(int(x.numerator), int(x.denominator)))


QQ = RationalField()


class GFElem:
    """Element of a prime field; payload always in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, GFElem):
            if other.p != self.p:
                raise ValueError("mixing different prime fields")
            return other.v
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GFElem(-self.v, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in GF(p)")
        return GFElem(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GFElem(o, self.p) / self

    def __pow__(self, n: int):
        if n < 0:
            return GFElem(1, self.p) / GFElem(pow(self.v, -n, self.p), self.p)
        return GFElem(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, GFElem):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return str(self.v)


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or not gmpy2.is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, x):
        if isinstance(x, GFElem):
            return x
        if isinstance(x, RatFunc):
            return self(x.constant_value())
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, (Fraction, type(mpq(0)))):
            return GFElem(int(x.numerator), self.p) / GFElem(int(x.denominator), self.p)
        return GFElem(int(x), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def random_element(self, rng, bound=None):
        return GFElem(rng.randrange(self.p), self.p)

    def to_str(self, x) -> str:
        return str(x.v)


def GF(p: int) -> PrimeField:
    return PrimeField(p)


# ---------------------------------------------------------------------------
# Polynomials (dense, coefficients low degree first)
# ---------------------------------------------------------------------------


class Poly:
    """Univariate polynomial over an exact field."""

    __slots__ = ("field", "c")

    def __init__(self, field: Field, coeffs: Iterable):
        self.field = field
        c = [field(x) for x in coeffs]
        while c and field.is_zero(c[-1]):
            c.pop()
        self.c = tuple(c)

    @classmethod
    def _raw(cls, field, c):
        p = object.__new__(cls)
        c = list(c)
        while c and field.is_zero(c[-1]):
            c.pop()
        p.field = field
        p.c = tuple(c)
        return p

    @classmethod
    def x(cls, field):
        return cls._raw(field, [field.zero, field.one])

    @classmethod
    def const(cls, field, a):
        return cls._raw(field, [field(a)])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self):
        return self.c[-1]

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.field, other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return Poly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-x for x in self.c])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.field, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = self.field(other)
            return Poly._raw(self.field, [x * other for x in self.c])
        if not self.c or not other.c:
            return Poly._raw(self.field, [])
        out = [self.field.zero] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if self.field.is_zero(x):
                continue
            for j, y in enumerate(other.c):
                out[i + j] = out[i + j] + x * y
        return Poly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = other.degree
        inv_lead = self.field.one / other.lead()
        if len(r) - 1 < db:
            return Poly._raw(self.field, []), self
        q = [self.field.zero] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            coef = r[k + db] * inv_lead
            q[k] = coef
            if self.field.is_zero(coef):
                continue
            for j, y in enumerate(other.c):
                r[k + j] = r[k + j] - coef * y
        return Poly._raw(self.field, q), Poly._raw(self.field, r[:db])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if not self.c:
            return self
        inv = self.field.one / self.lead()
        return Poly._raw(self.field, [x * inv for x in self.c])

    def __call__(self, x):
        acc = self.field.zero if not isinstance(x, Poly) else Poly._raw(self.field, [])
        for coef in reversed(self.c):
            acc = acc * x + coef
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw(self.field, [self.c[i] * i for i in range(1, len(self.c))])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, int):
            return self.c == Poly.const(self.field, other).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def valuation_at_zero(self):
        if not self.c:
            return INF
        for i, x in enumerate(self.c):
            if not self.field.is_zero(x):
                return i
        return INF  # pragma: no cover

    def shift(self, a) -> "Poly":
        """Return p(x + a)."""
        xa = Poly._raw(self.field, [self.field(a), self.field.one])
        return self(xa) if self.c else self

    def to_str(self, var: str = "x") -> str:
        if not self.c:
            return "0"
        fmt = getattr(self.field, "to_str", str)
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            coef = self.c[i]
            if self.field.is_zero(coef):
                continue
            s = fmt(coef)
            if i == 0:
                terms.append(s)
                continue
            mon = var if i == 1 else f"{var}^{i}"
            if s == "1":
                terms.append(mon)
            elif s == "-1":
                terms.append("-" + mon)
            elif any(ch in s[1:] for ch in "+-") or ("/" in s and isinstance(self.field, RationalFunctionField)):
                terms.append(f"({s})*{mon}")
            else:
                terms.append(f"{s}*{mon}")
        out = terms[0]
        for t in terms[1:]:
            out += t if t.startswith("-") else "+" + t
        return out

    def __repr__(self):
        return f"Poly({self.to_str()})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Return (g, s, u) with s*a + u*b = g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.const(F, 1), Poly._raw(F, [])
    u0, u1 = Poly._raw(F, []), Poly.const(F, 1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if r0.is_zero():
        return r0, s0, u0
    inv = F.one / r0.lead()
    return r0 * inv, s0 * inv, u0 * inv


def squarefree_part(p: Poly) -> Poly:
    """Product of the distinct irreducible factors (characteristic 0)."""
    if p.degree <= 0:
        return Poly.const(p.field, 1)
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


# ---------------------------------------------------------------------------
# Rational functions base(t)
# ---------------------------------------------------------------------------


class RatFunc:
    """Reduced fraction num/den over ``base``; den monic."""

    __slots__ = ("K", "num", "den")

    def __init__(self, K: "RationalFunctionField", num: Poly, den: Poly | None = None, reduced: bool = False):
        self.K = K
        if den is None:
            den = Poly.const(K.base, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = Poly.const(K.base, 1)
            return
        if not reduced and den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num // g
                den = den // g
        lc = den.lead()
        if lc != 1:
            inv = K.base.one / lc
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num.c[0] if self.num.c else self.K.base.zero

    def _wrap(self, other):
        if isinstance(other, RatFunc):
            return other
        return self.K(other)

    def __add__(self, other):
        o = self._wrap(other)
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc(self.K, self.num + o.num, self.den, reduced=True)
        if self.den == o.den:
            return RatFunc(self.K, self.num + o.num, self.den)
        return RatFunc(self.K, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.K, -self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) + (-self)

    def __mul__(self, other):
        o = self._wrap(other)
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc(self.K, self.num * o.num, self.den, reduced=True)
        return RatFunc(self.K, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.K, self.den, self.num, reduced=True)

    def __truediv__(self, other):
        return self * self._wrap(other).inverse()

    def __rtruediv__(self, other):
        return self._wrap(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.K, self.num**n, self.den**n, reduced=True)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num.c == other.num.c and self.den.c == other.den.c
        try:
            o = self.K(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num.c == o.num.c and self.den.c == o.den.c

    def __hash__(self):
        return hash((self.num.c, self.den.c))

    def __bool__(self):
        return not self.num.is_zero()

    def __call__(self, a):
        """Evaluate at t = a (a in the base field)."""
        d = self.den(a)
        if self.K.base.is_zero(d):
            raise ZeroDivisionError(f"{self} has a pole at t={a}")
        return self.num(a) / d

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __repr__(self):
        n = self.num.to_str(self.K.var)
        if self.den.degree == 0:
            return n
        d = self.den.to_str(self.K.var)
        nterms = sum(1 for c in self.num.c if not self.K.base.is_zero(c))
        dterms = sum(1 for c in self.den.c if not self.K.base.is_zero(c))
        n = f"({n})" if nterms > 1 or n.startswith("-") else n
        d = f"({d})" if dterms > 1 else d
        return f"{n}/{d}"


class RationalFunctionField(Field):
    """The field ``base(t)``."""

    def __init__(self, base: Field = QQ, var: str = "t"):
        self.base = base
        self.var = var
        self.characteristic = base.characteristic
        self.name = f"{base.name}({var})"

    def __call__(self, x):
        if isinstance(x, RatFunc) and x.K == self:
            return x
        if isinstance(x, Poly) and x.field == self.base:
            return RatFunc(self, x)
        if isinstance(x, str):
            return parse_ratfunc(x, self)
        return RatFunc(self, Poly.const(self.base, x), reduced=True)

    def is_zero(self, x) -> bool:
        return x.num.is_zero()

    @property
    def t(self) -> RatFunc:
        return RatFunc(self, Poly.x(self.base), reduced=True)

    def poly(self, coeffs) -> RatFunc:
        return RatFunc(self, Poly(self.base, coeffs), reduced=True)

    def random_element(self, rng, bound=9):
        return self(self.base.random_element(rng, bound))

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.base == self.base and other.var == self.var

    def __hash__(self):
        return hash(("frac", self.base, self.var))

    def to_str(self, x) -> str:
        return repr(x)


def parse_ratfunc(s: str, K: RationalFunctionField) -> RatFunc:
    """Parse a rational function written with + - * / ^ ( ) and the variable."""
    import ast

    expr = s.replace("^", "**")
    node = ast.parse(expr, mode="eval").body

    def ev(n):
        if isinstance(n, ast.BinOp):
            a, b = ev(n.left), ev(n.right)
            if isinstance(n.op, ast.Add):
                return a + b
            if isinstance(n.op, ast.Sub):
                return a - b
            if isinstance(n.op, ast.Mult):
                return a * b
            if isinstance(n.op, ast.Div):
                return a / b
            if isinstance(n.op, ast.Pow) and isinstance(n.right, ast.Constant):
                return a ** int(n.right.value)
        if isinstance(n, ast.UnaryOp):
            if isinstance(n.op, ast.USub):
                return -ev(n.operand)
            if isinstance(n.op, ast.UAdd):
                return ev(n.operand)
        if isinstance(n, ast.Constant) and isinstance(n.value, int):
            return K(n.value)
        if isinstance(n, ast.Name):
            if n.id == K.var:
                return K.t
            B = K.base
            while isinstance(B, RationalFunctionField):
                if n.id == B.var:
                    return K(B.t)
                B = B.base
        raise ValueError(f"cannot parse rational function {s!r}")

    return ev(node)


def valuation(x, at=0):
    """Order of vanishing of a rational function at ``t = at``.

    Nonnegative exactly on the local ring at ``(t - at)``; infinity for zero.
    """
    if isinstance(x, RatFunc):
        if x.num.is_zero():
            return INF
        if at != 0:
            num, den = x.num.shift(at), x.den.shift(at)
        else:
            num, den = x.num, x.den
        return num.valuation_at_zero() - den.valuation_at_zero()
    if x == 0:
        return INF
    return 0


def in_local_ring(x, at=0) -> bool:
    return valuation(x, at) >= 0


def residue(x, at=0):
    """Image of a local-ring element in the residue field ``k``."""
    if not isinstance(x, RatFunc):
        return x
    if valuation(x, at) < 0:
        raise ValueError(f"{x} is not in the local ring at t={at}")
    return x(x.K.base(at))


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

Matrix = list  # list of rows


def zeros(r: int, c: int, F: Field) -> Matrix:
    z = F.zero
    return [[z] * c for _ in range(r)]


def identity(n: int, F: Field) -> Matrix:
    m = zeros(n, n, F)
    for i in range(n):
        m[i][i] = F.one
    return m


def to_field(A, F: Field) -> Matrix:
    return [[F(x) for x in row] for row in A]


def shape(A: Matrix, cols: int | None = None):
    if not A:
        return 0, (cols or 0)
    return len(A), len(A[0])


def matmul(A: Matrix, B: Matrix, F: Field, inner: int | None = None, cols: int | None = None) -> Matrix:
    """A (r x n) times B (n x c). ``cols`` needed when B has no rows."""
    r = len(A)
    n = len(B)
    c = len(B[0]) if B else (cols or 0)
    out = zeros(r, c, F)
    if n == 0:
        return out
    iz = F.is_zero
    for i in range(r):
        Ai = A[i]
        oi = out[i]
        for k in range(n):
            a = Ai[k]
            if iz(a):
                continue
            Bk = B[k]
            for j in range(c):
                b = Bk[j]
                if not iz(b):
                    oi[j] = oi[j] + a * b
    return out


def matvec(A: Matrix, v: Sequence, F: Field) -> list:
    out = []
    for row in A:
        acc = F.zero
        for a, b in zip(row, v):
            if not F.is_zero(a) and not F.is_zero(b):
                acc = acc + a * b
        out.append(acc)
    return out


def transpose(A: Matrix, rows: int = 0, cols: int = 0) -> Matrix:
    """Transpose; pass the shape explicitly when ``A`` may be empty."""
    if not A:
        return [[] for _ in range(cols)]
    return [list(col) for col in zip(*A)]


def mat_add(A, B, F):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B, F):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, s, F):
    return [[s * a for a in row] for row in A]


def mat_eq(A, B, F) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        for a, b in zip(ra, rb):
            if not F.is_zero(a - b):
                return False
    return True


def is_zero_matrix(A, F) -> bool:
    return all(F.is_zero(x) for row in A for x in row)


def block_diag(blocks, F, shapes=None):
    """Block diagonal matrix; ``shapes`` gives (rows, cols) of each block."""
    if shapes is None:
        shapes = [shape(b) for b in blocks]
    R = sum(s[0] for s in shapes)
    C = sum(s[1] for s in shapes)
    out = zeros(R, C, F)
    r0 = c0 = 0
    for b, (r, c) in zip(blocks, shapes):
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = b[i][j]
        r0 += r
        c0 += c
    return out


def hstack(mats, F, rows: int):
    out = [[] for _ in range(rows)]
    for M in mats:
        for i in range(rows):
            if M:
                out[i].extend(M[i])
    return out


def rref(A: Matrix, F: Field, ncols: int | None = None):
    """Reduced row echelon form. Returns (R, pivot_columns); R has rank rows."""
    R = [list(row) for row in A]
    if not R:
        return [], []
    m, n = len(R), len(R[0])
    iz = F.is_zero
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = None
        for i in range(r, m):
            if not iz(R[i][c]):
                p = i
                break
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = F.one / R[r][c]
        row = R[r]
        if inv != 1:
            row = [x * inv if not iz(x) else x for x in row]
            R[r] = row
        nz = [j for j in range(c, n) if not iz(row[j])]
        for i in range(m):
            if i == r:
                continue
            f = R[i][c]
            if iz(f):
                continue
            Ri = R[i]
            for j in nz:
                Ri[j] = Ri[j] - f * row[j]
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A: Matrix, F: Field) -> int:
    return len(rref(A, F)[1])


def nullspace(A: Matrix, F: Field, ncols: int | None = None) -> list:
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    n = len(A[0]) if A else (ncols or 0)
    R, piv = rref(A, F) if A else ([], [])
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [F.zero] * n
        v[f] = F.one
        for i, pc in enumerate(piv):
            if not F.is_zero(R[i][f]):
                v[pc] = -R[i][f]
        basis.append(v)
    return basis


def row_space_basis(vectors, F: Field, dim: int) -> list:
    """Reduced echelon basis of the span of ``vectors``."""
    if not vectors:
        return []
    R, _ = rref(vectors, F)
    return R


def complement_basis(vectors, F: Field, dim: int) -> list:
    """Standard basis vectors completing span(vectors) to the whole space."""
    R, piv = rref(vectors, F) if vectors else ([], [])
    pivset = set(piv)
    out = []
    for j in range(dim):
        if j not in pivset:
            e = [F.zero] * dim
            e[j] = F.one
            out.append(e)
    return out


def inverse(A: Matrix, F: Field) -> Matrix:
    n = len(A)
    if n == 0:
        return []
    aug = [list(A[i]) + identity(n, F)[i] for i in range(n)]
    R, piv = rref(aug, F)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def det(A: Matrix, F: Field):
    n = len(A)
    M = [list(r) for r in A]
    d = F.one
    for c in range(n):
        p = next((i for i in range(c, n) if not F.is_zero(M[i][c])), None)
        if p is None:
            return F.zero
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d = d * M[c][c]
        inv = F.one / M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] * inv
            if F.is_zero(f):
                continue
            for j in range(c, n):
                M[i][j] = M[i][j] - f * M[c][j]
    return d


def solve_in_span(basis_rows, v, F: Field):
    """Coordinates of v in terms of linearly independent ``basis_rows``; None if not in span."""
    k = len(basis_rows)
    n = len(v)
    if k == 0:
        return [] if all(F.is_zero(x) for x in v) else None
    A = [[basis_rows[j][i] for j in range(k)] + [v[i]] for i in range(n)]
    R, piv = rref(A, F)
    if piv and piv[-1] == k:
        return None
    x = [F.zero] * k
    for i, pc in enumerate(piv):
        x[pc] = R[i][k]
    return x


@dataclass
class SolutionSet:
    """Exact solution set of A x = b."""

    consistent: bool
    particular: list | None = None
    kernel: list = dc_field(default_factory=list)


def solve_linear(A: Matrix, b: Sequence, F: Field, ncols: int | None = None) -> SolutionSet:
    n = len(A[0]) if A else (ncols or 0)
    A = [[F(x) for x in row] for row in A]
    b = [F(x) for x in b]
    aug = [A[i] + [b[i]] for i in range(len(A))]
    R, piv = rref(aug, F) if aug else ([], [])
    if piv and piv[-1] == n:
        return SolutionSet(False, None, [])
    x = [F.zero] * n
    for i, pc in enumerate(piv):
        x[pc] = R[i][n]
    return SolutionSet(True, x, nullspace(A, F, n))


def kernel_matrix(A: Matrix, F: Field, ncols: int) -> Matrix:
    """Columns spanning ker A, returned as an (ncols x k) matrix."""
    ns = nullspace(A, F, ncols)
    return transpose(ns, len(ns), ncols) if ns else [[] for _ in range(ncols)]


def column_space(A: Matrix, F: Field, nrows: int) -> list:
    """Echelon basis (as vectors) of the column space of A."""
    if not A or not A[0]:
        return []
    return row_space_basis(transpose(A), F, nrows)


def random_matrix(r: int, c: int, F: Field, rng: random.Random, bound: int = 5) -> Matrix:
    return [[F.random_element(rng, bound) for _ in range(c)] for _ in range(r)]


def mat_pow(A: Matrix, n: int, F: Field) -> Matrix:
    out = identity(len(A), F)
    base = A
    while n:
        if n & 1:
            out = matmul(out, base, F, cols=len(A))
        base = matmul(base, base, F, cols=len(A))
        n >>= 1
    return out


def charpoly(A: Matrix, F: Field) -> Poly:
    """Characteristic polynomial det(x I - A) via the Hessenberg/Berkowitz-free
    route: interpolation is avoided by computing the Frobenius form through
    Krylov subspaces."""
    n = len(A)
    result = Poly.const(F, 1)
    if n == 0:
        return result
    # Krylov decomposition: split into cyclic subspaces.
    covered: list = []
    cov_rref: list = []
    for start in range(n):
        e = [F.zero] * n
        e[start] = F.one
        if cov_rref and solve_in_span(cov_rref, e, F) is not None:
            continue
        chain = [e]
        while True:
            v = matvec(A, chain[-1], F)
            combo = solve_in_span(cov_rref + chain, v, F) if (cov_rref or chain) else None
            if combo is not None:
                # minimal poly of A on the quotient by covered: use coefficients of the chain part
                k = len(chain)
                coeffs = combo[len(cov_rref):]
                result = result * Poly(F, [-c for c in coeffs] + [F.one])
                break
            chain.append(v)
        covered.extend(chain)
        cov_rref = row_space_basis(covered, F, n)
        # keep spanning set independent: replace by echelon basis
        if len(cov_rref) == n:
            break
    return result


def sparse_nullspace(rows, ncols: int, F: Field) -> list:
    """Nullspace basis for a system given as sparse rows ``{col: value}``.

    Same output convention as :func:`nullspace`: one vector per free column.
    """
    iz = F.is_zero
    pivot_rows: dict = {}  # pivot col -> normalized row (dict)
    for row in rows:
        r = {c: v for c, v in row.items() if not iz(v)}
        while r:
            c = min(r)
            if c in pivot_rows:
                f = r[c]
                for cc, vv in pivot_rows[c].items():
                    nv = r.get(cc, F.zero) - f * vv
                    if iz(nv):
                        r.pop(cc, None)
                    else:
                        r[cc] = nv
                continue
            inv = F.one / r[c]
            pivot_rows[c] = {cc: vv * inv for cc, vv in r.items()}
            break
    # back substitution to reduced form, highest pivot first
    order = sorted(pivot_rows)
    reduced: dict = {}
    for c in reversed(order):
        row = dict(pivot_rows[c])
        changed = True
        while changed:
            changed = False
            for cc in [k for k in row if k != c and k in reduced]:
                f = row.pop(cc)
                for k, v in reduced[cc].items():
                    if k == cc:
                        continue
                    nv = row.get(k, F.zero) - f * v
                    if iz(nv):
                        row.pop(k, None)
                    else:
                        row[k] = nv
                changed = True
        reduced[c] = row
    basis = []
    for f in range(ncols):
        if f in reduced:
            continue
        v = [F.zero] * ncols
        v[f] = F.one
        for c, row in reduced.items():
            x = row.get(f)
            if x is not None and not iz(x):
                v[c] = -x
        basis.append(v)
    return basis
