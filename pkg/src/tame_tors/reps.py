"""Quiver representations over an exact field.

A representation stores one matrix per arrow ``a: s -> t`` of shape
``d_t x d_s`` (column vectors).  Morphisms are families of per-vertex
matrices.  Everything here is exact.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field as dc_field

from .exact_linalg import (
    QQ,
    Field,
    Poly,
    PrimeField,
    RationalFunctionField,
    charpoly,
    complement_basis,
    det,
    identity,
    matmul,
    nullspace,
    parse_ratfunc,
    rank,
    rref,
    sparse_nullspace,
    transpose,
    zeros,
)
from .quiver import Quiver

SEED = 20240531


class RepError(ValueError):
    pass


# -- small matrix helpers with explicit shapes --------------------------------


def _mm(A, B, F, r, k, c):
    """(r x k) @ (k x c); tolerant of empty dimensions."""
    if r == 0:
        return []
    if k == 0 or c == 0:
        return zeros(r, c, F)
    return matmul(A, B, F, cols=c)


def _cols_to_mat(cols, nrows, F):
    """Matrix whose columns are the given vectors."""
    return [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]


def _mat_cols(M, nrows, ncols):
    return [[M[i][j] for i in range(nrows)] for j in range(ncols)]


def _solve_cols(basis, vecs, F, dim):
    """Coordinates of each vector in ``vecs`` w.r.t. independent ``basis``."""
    k = len(basis)
    if not vecs:
        return []
    if k == 0:
        for v in vecs:
            if any(not F.is_zero(x) for x in v):
                raise RepError("vector not in span")
        return [[] for _ in vecs]
    aug = [[basis[j][i] for j in range(k)] + [v[i] for v in vecs] for i in range(dim)]
    R, piv = rref(aug, F)
    if len(piv) > k or piv != list(range(k)):
        raise RepError("vector not in span")
    return [[R[i][k + m] for i in range(k)] for m in range(len(vecs))]


def characteristic(F: Field) -> int:
    if isinstance(F, PrimeField):
        return F.p
    if isinstance(F, RationalFunctionField):
        return characteristic(F.base)
    return 0


# -- representations -------------------------------------------------------------


class Representation:
    """A representation of ``quiver`` over ``field``.

    ``mats`` is a sequence aligned with ``quiver.arrows``; the matrix for
    ``a: s -> t`` has ``dims[t-1]`` rows and ``dims[s-1]`` columns.
    """

    __slots__ = ("quiver", "field", "dims", "mats")

    def __init__(self, quiver: Quiver, field: Field, dims, mats, check: bool = True):
        self.quiver = quiver
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != quiver.n:
            raise RepError("dimension vector length does not match quiver")
        if len(mats) != len(quiver.arrows):
            raise RepError("need one matrix per arrow")
        out = []
        for (lab, s, t), M in zip(quiver.arrows, mats):
            r, c = self.dims[t - 1], self.dims[s - 1]
            if M is None:
                M = zeros(r, c, field)
            if check:
                if len(M) != r or any(len(row) != c for row in M):
                    raise RepError(f"arrow {lab}: expected a {r}x{c} matrix")
                M = [[field(x) for x in row] for row in M]
            out.append(M)
        self.mats = tuple(out)

    # basic data
    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def d(self, v: int) -> int:
        return self.dims[v - 1]

    def mat(self, arrow) -> list:
        k = arrow if isinstance(arrow, int) else self.quiver.arrow_index(arrow)
        return self.mats[k]

    def path_matrix(self, path, start: int):
        """Matrix of a path (tuple of arrow indices) starting at ``start``."""
        F = self.field
        M = identity(self.d(start), F)
        cur = start
        for k in path:
            _, s, t = self.quiver.arrows[k]
            M = _mm(self.mats[k], M, F, self.d(t), self.d(s), self.d(start))
            cur = t
        return M

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        if self.quiver != other.quiver or self.dims != other.dims:
            return False
        F = self.field
        for A, B in zip(self.mats, other.mats):
            for ra, rb in zip(A, B):
                for a, b in zip(ra, rb):
                    if not F.is_zero(F(a) - F(b)):
                        return False
        return True

    def __repr__(self):
        body = ", ".join(f"{lab}={M}" for (lab, _, _), M in zip(self.quiver.arrows, self.mats))
        return f"Representation(dims={self.dims}, {body})"

    # constructions
    def dual(self) -> "Representation":
        """D X over the opposite quiver."""
        Qop = self.quiver.opposite()
        mats = [[[M[i][j] for i in range(self.d(t))] for j in range(self.d(s))]
                for M, (_, s, t) in zip(self.mats, self.quiver.arrows)]
        return Representation(Qop, self.field, self.dims, mats, check=False)

    def extend(self, K: Field) -> "Representation":
        """Same matrices viewed over a larger field ``K``."""
        return Representation(self.quiver, K, self.dims, [[[K(x) for x in row] for row in M] for M in self.mats])

    def change_basis(self, B) -> "Representation":
        """Representation with arrow maps ``B_t^{-1} X_a B_s`` (B: per-vertex invertible)."""
        from .exact_linalg import inverse

        F = self.field
        Binv = [inverse(b, F) for b in B]
        mats = []
        for M, (_, s, t) in zip(self.mats, self.quiver.arrows):
            ds, dt = self.d(s), self.d(t)
            mats.append(_mm(Binv[t - 1], _mm(M, B[s - 1], F, dt, ds, ds), F, dt, dt, ds))
        return Representation(self.quiver, F, self.dims, mats, check=False)

    def restrict(self, bases) -> "Representation":
        """Subrepresentation spanned by ``bases[v-1]`` (independent vectors, assumed stable)."""
        F = self.field
        dims = [len(b) for b in bases]
        mats = []
        for M, (_, s, t) in zip(self.mats, self.quiver.arrows):
            imgs = [[sum((M[i][j] * u[j] for j in range(self.d(s))), F.zero) for i in range(self.d(t))]
                    for u in bases[s - 1]]
            coords = _solve_cols(bases[t - 1], imgs, F, self.d(t))
            mats.append(_cols_to_mat(coords, dims[t - 1], F) if dims[t - 1] else [])
        return Representation(self.quiver, F, dims, mats, check=False)

    def quotient(self, bases):
        """Quotient by the subrepresentation spanned by ``bases``.

        Returns ``(Q, comp)`` where ``comp[v-1]`` are the standard vectors
        used as a basis of the quotient at ``v``.
        """
        F = self.field
        comp = [complement_basis(bases[v - 1], F, self.d(v)) for v in self.quiver.vertices]
        dims = [len(c) for c in comp]
        mats = []
        for M, (_, s, t) in zip(self.mats, self.quiver.arrows):
            full = list(bases[t - 1]) + comp[t - 1]
            imgs = [[sum((M[i][j] * u[j] for j in range(self.d(s))), F.zero) for i in range(self.d(t))]
                    for u in comp[s - 1]]
            coords = _solve_cols(full, imgs, F, self.d(t))
            k0 = len(bases[t - 1])
            coords = [c[k0:] for c in coords]
            mats.append(_cols_to_mat(coords, dims[t - 1], F) if dims[t - 1] else [])
        return Representation(self.quiver, F, dims, mats, check=False), comp

    def to_text(self) -> str:
        return format_rep(self)


def zero_rep(Q: Quiver, F: Field) -> Representation:
    return Representation(Q, F, [0] * Q.n, [None] * len(Q.arrows))


def direct_sum(reps) -> Representation:
    reps = list(reps)
    if not reps:
        raise RepError("empty direct sum")
    Q, F = reps[0].quiver, reps[0].field
    dims = [sum(X.d(v) for X in reps) for v in Q.vertices]
    mats = []
    for k, (_, s, t) in enumerate(Q.arrows):
        M = zeros(dims[t - 1], dims[s - 1], F)
        r0 = c0 = 0
        for X in reps:
            A = X.mats[k]
            for i in range(X.d(t)):
                for j in range(X.d(s)):
                    M[r0 + i][c0 + j] = A[i][j]
            r0 += X.d(t)
            c0 += X.d(s)
        mats.append(M)
    return Representation(Q, F, dims, mats, check=False)


def simple(Q: Quiver, F: Field, i: int) -> Representation:
    return Representation(Q, F, [int(v == i) for v in Q.vertices], [None] * len(Q.arrows))


def projective(Q: Quiver, F: Field, i: int) -> Representation:
    """P(i): basis of P(i)_v is the set of paths i -> v; arrows append."""
    basis = {v: Q.paths(i, v) for v in Q.vertices}
    idx = {v: {p: n for n, p in enumerate(basis[v])} for v in Q.vertices}
    mats = []
    for k, (_, s, t) in enumerate(Q.arrows):
        M = zeros(len(basis[t]), len(basis[s]), F)
        for c, p in enumerate(basis[s]):
            M[idx[t][p + (k,)]][c] = F.one
        mats.append(M)
    return Representation(Q, F, [len(basis[v]) for v in Q.vertices], mats, check=False)


def injective(Q: Quiver, F: Field, i: int) -> Representation:
    """I(i): basis of I(i)_v is dual to the paths v -> i; an arrow strips itself off the front."""
    basis = {v: Q.paths(v, i) for v in Q.vertices}
    idx = {v: {p: n for n, p in enumerate(basis[v])} for v in Q.vertices}
    mats = []
    for k, (_, s, t) in enumerate(Q.arrows):
        M = zeros(len(basis[t]), len(basis[s]), F)
        for c, q in enumerate(basis[s]):
            if q and q[0] == k:
                M[idx[t][q[1:]]][c] = F.one
        mats.append(M)
    return Representation(Q, F, [len(basis[v]) for v in Q.vertices], mats, check=False)


def random_rep(Q: Quiver, F: Field, dims, rng: random.Random, bound: int = 5) -> Representation:
    mats = [[[F.random_element(rng, bound) for _ in range(dims[s - 1])] for _ in range(dims[t - 1])]
            for _, s, t in Q.arrows]
    return Representation(Q, F, dims, mats, check=False)


# -- morphisms ---------------------------------------------------------------------


class RepMap:
    """Morphism ``source -> target``: ``maps[v-1]`` is ``d_v(target) x d_v(source)``."""

    __slots__ = ("source", "target", "maps")

    def __init__(self, source: Representation, target: Representation, maps):
        self.source = source
        self.target = target
        self.maps = tuple(maps)

    @property
    def field(self):
        return self.source.field

    def is_morphism(self) -> bool:
        X, Y, F = self.source, self.target, self.field
        for k, (_, s, t) in enumerate(X.quiver.arrows):
            L = _mm(Y.mats[k], self.maps[s - 1], F, Y.d(t), Y.d(s), X.d(s))
            R = _mm(self.maps[t - 1], X.mats[k], F, Y.d(t), X.d(t), X.d(s))
            for a, b in zip(L, R):
                if any(not F.is_zero(x - y) for x, y in zip(a, b)):
                    return False
        return True

    def compose(self, other: "RepMap") -> "RepMap":
        """``self ∘ other``."""
        F = self.field
        Z, X = self.target, other.source
        maps = [_mm(self.maps[v - 1], other.maps[v - 1], F, Z.d(v), other.target.d(v), X.d(v))
                for v in X.quiver.vertices]
        return RepMap(X, Z, maps)

    def is_iso(self) -> bool:
        if self.source.dims != self.target.dims:
            return False
        F = self.field
        return all(F.is_zero(det(m, F)) is False for m in self.maps if m)

    def is_zero(self) -> bool:
        F = self.field
        return all(F.is_zero(x) for m in self.maps for row in m for x in row)

    def ranks(self):
        return tuple(rank(m, self.field) if m and m[0] else 0 for m in self.maps)

    def __repr__(self):
        return f"RepMap({list(self.maps)})"


def _combine(maps_list, coeffs, F, shapes):
    out = []
    for v, (r, c) in enumerate(shapes):
        M = zeros(r, c, F)
        for mp, a in zip(maps_list, coeffs):
            if F.is_zero(a):
                continue
            A = mp[v]
            for i in range(r):
                Ai, Mi = A[i], M[i]
                for j in range(c):
                    if not F.is_zero(Ai[j]):
                        Mi[j] = Mi[j] + a * Ai[j]
        out.append(M)
    return out


# -- Hom and Ext ----------------------------------------------------------------------


def _check_pair(X: Representation, Y: Representation):
    if X.quiver != Y.quiver:
        raise RepError("representations live on different quivers")
    if X.field != Y.field:
        raise RepError("representations live over different fields")


def _hom_system(X: Representation, Y: Representation):
    Q, F = X.quiver, X.field
    offs = {}
    o = 0
    for v in Q.vertices:
        offs[v] = o
        o += Y.d(v) * X.d(v)
    rows = []
    for k, (_, s, t) in enumerate(Q.arrows):
        A, B = X.mats[k], Y.mats[k]
        ds, dt_x, es, et = X.d(s), X.d(t), Y.d(s), Y.d(t)
        for r in range(et):
            for c in range(ds):
                row = {}
                # (Y_a f_s)[r][c] = sum_m B[r][m] f_s[m][c]
                for m in range(es):
                    b = B[r][m]
                    if not F.is_zero(b):
                        key = offs[s] + m * ds + c
                        row[key] = row.get(key, F.zero) + b
                # (f_t X_a)[r][c] = sum_m f_t[r][m] A[m][c]
                for m in range(dt_x):
                    a = A[m][c]
                    if not F.is_zero(a):
                        key = offs[t] + r * dt_x + m
                        row[key] = row.get(key, F.zero) - a
                if row:
                    rows.append(row)
    return rows, o, offs


def hom_space(X: Representation, Y: Representation) -> list:
    """Basis of Hom(X, Y) as a list of RepMap, in a deterministic order."""
    _check_pair(X, Y)
    Q, F = X.quiver, X.field
    rows, nvars, offs = _hom_system(X, Y)
    basis = sparse_nullspace(rows, nvars, F)
    out = []
    for vec in basis:
        maps = []
        for v in Q.vertices:
            e, d = Y.d(v), X.d(v)
            o = offs[v]
            maps.append([[vec[o + r * d + c] for c in range(d)] for r in range(e)])
        out.append(RepMap(X, Y, maps))
    return out


def hom_dim(X: Representation, Y: Representation) -> int:
    _check_pair(X, Y)
    rows, nvars, _ = _hom_system(X, Y)
    return len(sparse_nullspace(rows, nvars, X.field))


def ext1_dim(X: Representation, Y: Representation, method: str = "resolution") -> int:
    """dim Ext^1(X, Y).

    ``resolution`` takes the cokernel of the standard map
    ``⊕_v Hom(X_v, Y_v) -> ⊕_a Hom(X_s, Y_t)``; ``ar`` uses the
    Auslander-Reiten formula ``Ext^1(X, Y) ≅ D Hom(Y, τX)`` instead.
    """
    _check_pair(X, Y)
    if method == "ar":
        return hom_dim(Y, ar_translate(X, "tau"))
    if method != "resolution":
        raise ValueError("method must be 'resolution' or 'ar'")
    Q = X.quiver
    nvars = sum(X.d(v) * Y.d(v) for v in Q.vertices)
    target = sum(X.d(s) * Y.d(t) for _, s, t in Q.arrows)
    image_rank = nvars - hom_dim(X, Y)
    return target - image_rank


def end_basis(X: Representation) -> list:
    return [m.maps for m in hom_space(X, X)]


# -- isomorphism ----------------------------------------------------------------------------


def _invertible(maps, F) -> bool:
    return all(not F.is_zero(det(m, F)) for m in maps if m)


def is_isomorphic(X: Representation, Y: Representation, attempts: int | None = None):
    """Return ``(True, RepMap)`` with an isomorphism, or ``(False, None)``.

    Tries the Hom basis, then seeded random combinations of it.
    """
    _check_pair(X, Y)
    if X.dims != Y.dims:
        return False, None
    if X.total_dim == 0:
        return True, RepMap(X, Y, [[] for _ in X.dims])
    H = hom_space(X, Y)
    if not H:
        return False, None
    if hom_dim(Y, X) != len(H):
        return False, None
    F = X.field
    for h in H:
        if _invertible(h.maps, F):
            return True, h
    if len(H) == 1:
        return False, None
    rng = random.Random(SEED)
    shapes = [(Y.d(v), X.d(v)) for v in X.quiver.vertices]
    for _ in range(attempts or (2 * len(H) + 6)):
        coeffs = [F.random_element(rng, 50) for _ in H]
        maps = _combine([h.maps for h in H], coeffs, F, shapes)
        if _invertible(maps, F):
            return True, RepMap(X, Y, maps)
    return False, None


# -- decomposition -------------------------------------------------------------------------


def _end_mul(a, b, dims, F):
    return [_mm(a[i], b[i], F, d, d, d) for i, d in enumerate(dims)]


def _trace(a, F):
    acc = F.zero
    for m in a:
        for i in range(len(m)):
            acc = acc + m[i][i]
    return acc


def radical_dim(X: Representation, E=None) -> int | None:
    """dim rad End(X) via the trace form (characteristic 0 only)."""
    F = X.field
    if characteristic(F) != 0:
        return None
    E = E if E is not None else end_basis(X)
    n = len(E)
    G = [[_trace(_end_mul(E[i], E[j], X.dims, F), F) for j in range(n)] for i in range(n)]
    return n - rank(G, F) if n else 0


def _fitting(phi, X: Representation):
    """Stable kernel and image bases of an endomorphism, per vertex."""
    F = X.field
    kers, ims = [], []
    for v, m in enumerate(phi):
        d = X.dims[v]
        if d == 0:
            kers.append([])
            ims.append([])
            continue
        P = m
        e = 1
        while e < d:
            P = _mm(P, P, F, d, d, d)
            e *= 2
        kers.append(nullspace(P, F, d))
        R, _ = rref(transpose(P), F)
        ims.append(R)
    return kers, ims


def _poly_eval_end(p: Poly, phi, dims, F):
    out = []
    for i, d in enumerate(dims):
        m = phi[i]
        acc = zeros(d, d, F)
        for c in reversed(p.c):
            acc = _mm(acc, m, F, d, d, d)
            for j in range(d):
                acc[j][j] = acc[j][j] + c
        out.append(acc)
    return out


def _factor_poly(p: Poly, F: Field):
    """Distinct irreducible factors of ``p`` (via sympy); None if unsupported."""
    try:
        import sympy
    except ImportError:  # pragma: no cover
        return None
    x = sympy.Symbol("x")
    if isinstance(F, RationalFunctionField):
        t = sympy.Symbol(F.var)

        def cv(c):
            return sympy.sympify(F.to_str(c).replace("^", "**"), locals={F.var: t})
    else:
        t = None

        def cv(c):
            if isinstance(F, PrimeField):
                return sympy.Integer(int(c.v))
            return sympy.Rational(int(c.numerator), int(c.denominator))
    expr = sum(cv(c) * x ** i for i, c in enumerate(p.c))
    kw = {"modulus": F.p} if isinstance(F, PrimeField) else {}
    gens = (x,) if t is None else (x, t)
    _, facs = sympy.factor_list(sympy.together(expr).as_numer_denom()[0], *gens, **kw)
    out = []
    for f, _m in facs:
        fp = sympy.Poly(f, x)
        if fp.degree() < 1:
            continue
        coeffs = [fp.coeff_monomial(x ** i) for i in range(fp.degree() + 1)]
        if isinstance(F, RationalFunctionField):
            cs = [parse_ratfunc(str(sympy.simplify(c)).replace("**", "^"), F) for c in coeffs]
        elif isinstance(F, PrimeField):
            cs = [F(int(c)) for c in coeffs]
        else:
            cs = [F(sympy.Rational(c).p) / F(sympy.Rational(c).q) for c in coeffs]
        out.append(Poly(F, cs).monic())
    return out


def _split_once(X: Representation, E=None):
    """Find a nontrivial Fitting split of X.

    Returns ``(kers, ims)`` or None if X looks indecomposable.
    """
    F = X.field
    E = E if E is not None else end_basis(X)
    if len(E) <= 1:
        return None
    rd = radical_dim(X, E)
    if rd is not None and len(E) - rd == 1:
        return None  # End/rad is the ground field: local
    N = X.total_dim

    def try_phi(phi):
        kers, ims = _fitting(phi, X)
        kdim = sum(len(k) for k in kers)
        if 0 < kdim < N:
            return kers, ims
        if kdim == 0:
            cp = Poly.const(F, 1)
            for i, d in enumerate(X.dims):
                if d:
                    cp = cp * charpoly(phi[i], F)
            facs = _factor_poly(cp, F)
            if facs and len(facs) >= 2:
                psi = _poly_eval_end(facs[0], phi, X.dims, F)
                kers, ims = _fitting(psi, X)
                kdim = sum(len(k) for k in kers)
                if 0 < kdim < N:
                    return kers, ims
        return None

    for b in E:
        r = try_phi(b)
        if r:
            return r
    rng = random.Random(SEED)
    shapes = [(d, d) for d in X.dims]
    for _ in range(2 * len(E) + 4):
        coeffs = [F.random_element(rng, 20) for _ in E]
        r = try_phi(_combine(E, coeffs, F, shapes))
        if r:
            return r
    return None


def is_indecomposable(X: Representation) -> bool:
    return X.total_dim > 0 and _split_once(X) is None


def _decompose_raw(X: Representation):
    """List of (indecomposable summand, per-vertex embedding columns)."""
    F = X.field
    if X.total_dim == 0:
        return []
    split = _split_once(X)
    if split is None:
        return [(X, [identity(d, F) for d in X.dims])]
    out = []
    for part in split:
        Y = X.restrict(part)
        for Z, emb in _decompose_raw(Y):
            cols = []
            for v, d in enumerate(X.dims):
                B = _cols_to_mat(part[v], d, F) if part[v] else [[] for _ in range(d)]
                cols.append(_mm(B, emb[v], F, d, Y.dims[v], Z.dims[v]) if d else [])
            out.append((Z, cols))
    return out


@dataclass
class Decomposition:
    """Summands with multiplicities and an isomorphism onto the original."""

    summands: list  # [(Representation, multiplicity)]
    witness: RepMap | None = None  # direct sum of expanded summands -> X
    original: Representation | None = None

    def expanded(self):
        return [Y for Y, m in self.summands for _ in range(m)]

    def dims(self):
        return [Y.dims for Y, _ in self.summands]


def decompose(X: Representation) -> Decomposition:
    """Krull-Schmidt decomposition with an isomorphism witness."""
    F = X.field
    raw = _decompose_raw(X)
    groups = []  # [rep, [(copy_embedding composed with iso rep->copy)]]
    for Z, emb in raw:
        placed = False
        for g in groups:
            rep = g[0]
            if rep.dims != Z.dims:
                continue
            ok, iso = is_isomorphic(rep, Z)
            if ok:
                g[1].append([_mm(emb[v], iso.maps[v], F, X.dims[v], Z.dims[v], Z.dims[v]) if X.dims[v] else []
                             for v in range(len(X.dims))])
                placed = True
                break
        if not placed:
            groups.append([Z, [emb]])
    groups.sort(key=lambda g: (g[0].total_dim, g[0].dims))
    summands = [(g[0], len(g[1])) for g in groups]
    if not groups:
        return Decomposition([], None, X)
    S = direct_sum([g[0] for g in groups for _ in g[1]])
    maps = []
    for v, d in enumerate(X.dims):
        rows = [[] for _ in range(d)]
        for g in groups:
            for cols in g[1]:
                for i in range(d):
                    rows[i].extend(cols[v][i])
        maps.append(rows)
    return Decomposition(summands, RepMap(S, X, maps), X)


# -- Auslander-Reiten translate ------------------------------------------------------------


def top_generators(X: Representation):
    """(vertex, vector) pairs whose images form a basis of top X = X / rad X."""
    F, Q = X.field, X.quiver
    gens = []
    for v in Q.vertices:
        d = X.d(v)
        if d == 0:
            continue
        span = []
        for k, (_, s, t) in enumerate(Q.arrows):
            if t == v and X.d(s):
                span.extend(_mat_cols(X.mats[k], d, X.d(s)))
        for e in complement_basis(span, F, d):
            gens.append((v, e))
    return gens


def _projective_cover_data(X: Representation):
    """Basis of P0 = ⊕ P(i_σ) and the cover map P0 -> X, per vertex."""
    Q, F = X.quiver, X.field
    gens = top_generators(X)
    basis = {v: [(sg, p) for sg, (i, _) in enumerate(gens) for p in Q.paths(i, v)] for v in Q.vertices}
    pi = {}
    for v in Q.vertices:
        cols = []
        for sg, p in basis[v]:
            i, g = gens[sg]
            Pm = X.path_matrix(p, i)
            cols.append([sum((Pm[r][c] * g[c] for c in range(X.d(i))), F.zero) for r in range(X.d(v))])
        pi[v] = cols  # columns
    return gens, basis, pi


def _free_arrow_mats(Q, basis, F):
    idx = {v: {b: n for n, b in enumerate(basis[v])} for v in Q.vertices}
    mats = []
    for k, (_, s, t) in enumerate(Q.arrows):
        M = zeros(len(basis[t]), len(basis[s]), F)
        for c, (sg, p) in enumerate(basis[s]):
            M[idx[t][(sg, p + (k,))]][c] = F.one
        mats.append(M)
    return mats


def _tau(X: Representation) -> Representation:
    Q, F = X.quiver, X.field
    gens, basis, pi = _projective_cover_data(X)
    P0 = Representation(Q, F, [len(basis[v]) for v in Q.vertices], _free_arrow_mats(Q, basis, F), check=False)
    omega_b = []
    for v in Q.vertices:
        n = len(basis[v])
        d = X.d(v)
        if n == 0:
            omega_b.append([])
        elif d == 0:
            omega_b.append([[F.one if j == i else F.zero for j in range(n)] for i in range(n)])
        else:
            omega_b.append(nullspace(_cols_to_mat(pi[v], d, F), F, n))
    Omega = P0.restrict(omega_b)
    kgens = top_generators(Omega)
    if not kgens:
        return zero_rep(Q, F)
    # kernel generators as P0 elements: dicts (σ, u) -> coefficient
    kg = []
    for j, w in kgens:
        vec = [sum((omega_b[j - 1][m][c] * w[m] for m in range(len(w))), F.zero) for c in range(len(basis[j]))]
        kg.append((j, {basis[j][c]: x for c, x in enumerate(vec) if not F.is_zero(x)}))
    # ν(p1): ⊕_ρ I(j_ρ) -> ⊕_σ I(i_σ)
    src_b = {v: [(r, q) for r, (j, _) in enumerate(kg) for q in Q.paths(v, j)] for v in Q.vertices}
    tgt_b = {v: [(sg, q) for sg, (i, _) in enumerate(gens) for q in Q.paths(v, i)] for v in Q.vertices}
    tgt_idx = {v: {b: n for n, b in enumerate(tgt_b[v])} for v in Q.vertices}
    ker_b = []
    for v in Q.vertices:
        ns, nt = len(src_b[v]), len(tgt_b[v])
        if ns == 0:
            ker_b.append([])
            continue
        M = zeros(nt, ns, F)
        for c, (r, q) in enumerate(src_b[v]):
            for (sg, u), coef in kg[r][1].items():
                L = len(u)
                if L <= len(q) and q[len(q) - L:] == u:
                    M[tgt_idx[v][(sg, q[: len(q) - L])]][c] += coef
        if nt == 0:
            ker_b.append([[F.one if j == i else F.zero for j in range(ns)] for i in range(ns)])
        else:
            ker_b.append(nullspace(M, F, ns))
    # arrow action on ⊕ I(j_ρ)
    src_idx = {v: {b: n for n, b in enumerate(src_b[v])} for v in Q.vertices}
    mats = []
    for k, (_, s, t) in enumerate(Q.arrows):
        M = zeros(len(src_b[t]), len(src_b[s]), F)
        for c, (r, q) in enumerate(src_b[s]):
            if q and q[0] == k:
                M[src_idx[t][(r, q[1:])]][c] = F.one
        mats.append(M)
    big = Representation(Q, F, [len(src_b[v]) for v in Q.vertices], mats, check=False)
    return big.restrict(ker_b)


def ar_translate(X: Representation, direction: str = "tau") -> Representation:
    """τX (``direction='tau'``) or τ⁻X (``'tau_inv'``), from a minimal projective presentation."""
    if direction in ("tau", "forward"):
        return _tau(X)
    if direction in ("tau_inv", "tau-", "inverse"):
        return _tau(X.dual()).dual()
    raise ValueError("direction must be 'tau' or 'tau_inv'")


def tau(X):
    return ar_translate(X, "tau")


def tau_inv(X):
    return ar_translate(X, "tau_inv")


# -- generation ---------------------------------------------------------------------------


def trace_dims(M: Representation, X: Representation):
    """Dimension vector of the trace of M in X (sum of images of all maps M -> X)."""
    F = X.field
    H = hom_space(M, X)
    out = []
    for v in X.quiver.vertices:
        d = X.d(v)
        cols = []
        for h in H:
            cols.extend(_mat_cols(h.maps[v - 1], d, M.d(v)))
        out.append(rank(cols, F) if cols and d else 0)
    return tuple(out)


def gen_membership(M: Representation, X: Representation) -> bool:
    """True iff X is a quotient of a finite direct sum of copies of M."""
    _check_pair(M, X)
    return trace_dims(M, X) == X.dims


# -- text format ----------------------------------------------------------------------------

_ROW = re.compile(r"\[([^\[\]]*)\]")


def parse_field(spec: str) -> Field:
    """``QQ``, ``GF(p)`` or ``QQ(t)`` / ``GF(p)(t)``."""
    from .exact_linalg import GF

    s = spec.replace(" ", "")
    m = re.fullmatch(r"(QQ|GF\((\d+)\))(\((\w+)\))?", s)
    if not m:
        raise RepError(f"unknown field {spec!r}")
    base = QQ if m.group(1) == "QQ" else GF(int(m.group(2)))
    if m.group(3):
        return RationalFunctionField(base, m.group(4))
    return base


def field_name(F: Field) -> str:
    if isinstance(F, RationalFunctionField):
        return f"{field_name(F.base)}({F.var})"
    if isinstance(F, PrimeField):
        return f"GF({F.p})"
    return "QQ"


def parse_entry(s: str, F: Field):
    s = s.strip()
    if isinstance(F, RationalFunctionField):
        return parse_ratfunc(s, F)
    if "/" in s:
        a, b = s.split("/")
        return F(int(a)) / F(int(b))
    return F(int(s))


_MATRIX = re.compile(r"\[\s*(\[[^\[\]]*\]\s*(,\s*\[[^\[\]]*\]\s*)*)?\]")


def parse_matrix(s: str, F: Field):
    if not _MATRIX.fullmatch(s.strip()):
        raise RepError(f"not a matrix literal: {s.strip()[:40]!r}")
    out = []
    for r in _ROW.findall(s):
        r = r.strip()
        out.append([parse_entry(x, F) for x in r.split(",")] if r else [])
    if len({len(r) for r in out}) > 1:
        raise RepError("matrix rows have different lengths")
    return out


def parse_rep(text: str, Q: Quiver, F: Field | None = None) -> Representation:
    """Parse the representation literal::

        field QQ
        dims 1 1
        a = [[1]]
        b = [[0]]

    Unlisted arrows are zero.  ``field`` is optional (default QQ or ``F``).
    """
    dims = None
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("field "):
            F = parse_field(line[6:])
        elif line.startswith("dims "):
            dims = [int(x) for x in line[5:].split()]
        elif "=" in line:
            lab, rhs = line.split("=", 1)
            entries[lab.strip()] = rhs.strip()
        else:
            raise RepError(f"line {lineno}: cannot parse {raw!r}")
    F = F or QQ
    if dims is None:
        raise RepError("missing 'dims' line")
    mats = []
    for lab, s, t in Q.arrows:
        if lab in entries:
            M = parse_matrix(entries.pop(lab), F)
            if dims[s - 1] == 0:
                M = [[] for _ in range(dims[t - 1])] if not M or M == [[]] * len(M) else M
            if dims[t - 1] == 0:
                M = []
            mats.append(M)
        else:
            mats.append(None)
    if entries:
        raise RepError(f"unknown arrows: {sorted(entries)}")
    return Representation(Q, F, dims, mats)


def format_rep(X: Representation) -> str:
    F = X.field
    to_s = getattr(F, "to_str", str)
    lines = [f"field {field_name(F)}", "dims " + " ".join(map(str, X.dims))]
    for (lab, s, t), M in zip(X.quiver.arrows, X.mats):
        if X.d(s) and X.d(t):
            lines.append(f"{lab} = [" + ", ".join("[" + ", ".join(to_s(x) for x in row) + "]" for row in M) + "]")
    return "\n".join(lines) + "\n"


# -- extensions ---------------------------------------------------------------------------------


def _ext_layout(Y: Representation, Z: Representation):
    Q = Y.quiver
    offs, o = [], 0
    for _, s, t in Q.arrows:
        offs.append(o)
        o += Z.d(t) * Y.d(s)
    return offs, o


def ext_cocycles(Y: Representation, Z: Representation) -> list:
    """Cocycles ``η = (η_a: Y_s -> Z_t)`` whose classes form a basis of Ext^1(Y, Z).

    Each cocycle is a list of matrices aligned with the arrows.
    """
    _check_pair(Y, Z)
    Q, F = Y.quiver, Y.field
    offs, total = _ext_layout(Y, Z)
    image = []
    for v in Q.vertices:
        for r in range(Z.d(v)):
            for c in range(Y.d(v)):
                vec = [F.zero] * total
                # h = E_{rc} at vertex v; η_a = Z_a h_s - h_t Y_a
                for k, (_, s, t) in enumerate(Q.arrows):
                    ds = Y.d(s)
                    if s == v:
                        for i in range(Z.d(t)):
                            x = Z.mats[k][i][r]
                            if not F.is_zero(x):
                                vec[offs[k] + i * ds + c] += x
                    if t == v:
                        for j in range(ds):
                            x = Y.mats[k][c][j]
                            if not F.is_zero(x):
                                vec[offs[k] + r * ds + j] -= x
                image.append(vec)
    comp = complement_basis([v for v in image if any(not F.is_zero(x) for x in v)], F, total)
    out = []
    for vec in comp:
        eta = []
        for k, (_, s, t) in enumerate(Q.arrows):
            ds = Y.d(s)
            eta.append([[vec[offs[k] + i * ds + j] for j in range(ds)] for i in range(Z.d(t))])
        out.append(eta)
    return out


def extension_module(Y: Representation, Z: Representation, eta) -> Representation:
    """Middle term E of ``0 -> Z -> E -> Y -> 0`` for the cocycle ``eta``.

    Basis of E_v is the basis of Z_v followed by that of Y_v.
    """
    Q, F = Y.quiver, Y.field
    dims = [Z.d(v) + Y.d(v) for v in Q.vertices]
    mats = []
    for k, (_, s, t) in enumerate(Q.arrows):
        M = zeros(dims[t - 1], dims[s - 1], F)
        zt, zs = Z.d(t), Z.d(s)
        for i in range(zt):
            for j in range(zs):
                M[i][j] = Z.mats[k][i][j]
            for j in range(Y.d(s)):
                M[i][zs + j] = eta[k][i][j]
        for i in range(Y.d(t)):
            for j in range(Y.d(s)):
                M[zt + i][zs + j] = Y.mats[k][i][j]
        mats.append(M)
    return Representation(Q, F, dims, mats, check=False)
