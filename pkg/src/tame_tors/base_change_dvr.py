"""Base change k -> k(t), lattices over k[t], Smith normal form over k[t]_(t-a),
matched filtrations of two reductions, and restriction of torsion handles from a
rational closed point to the generic point.

RQModule text format (entries are polynomials in ``t`` over the base field)::

    rqmodule
    field QQ
    ranks 1 1
    a = [[1]]
    b = [[t]]
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .ar_structure import INF, PI, PP, HomReg, Point, Reg, structure
from .exact_linalg import (
    INF as VAL_INF,
    QQ,
    Field,
    Poly,
    RatFunc,
    RationalFunctionField,
    det,
    identity,
    inverse,
    matmul,
    residue,
    valuation,
    zeros,
)
from .quiver import Quiver
from .reps import (
    RepError,
    RepMap,
    Representation,
    _factor_poly,
    decompose,
    field_name,
    format_rep,
    is_indecomposable,
    is_isomorphic,
    parse_field,
    parse_rep,
    tau,
)
from .torsion import FF, HomPart, RegularTorsSpec, Tors, Upper


class DVRError(ValueError):
    pass


def function_field(k: Field) -> RationalFunctionField:
    return RationalFunctionField(k, "t")


# -- scalar extension -------------------------------------------------------------------


def extend_scalars(X: Representation, K: RationalFunctionField | None = None) -> Representation:
    """The same matrices, read over k(t)."""
    K = K or function_field(X.field)
    return X.extend(K)


def check_tube_bijection(Q: Quiver, bound: int, F: Field = QQ, sample_points=None) -> dict:
    """Extension of scalars keeps indecomposability, component and regular length."""
    K = function_field(F)
    ak, aK = structure(Q, F), structure(Q, K)
    checked, failures = [], []
    for d in ak.indecomposables(bound, sample_points=sample_points or []):
        X = ak.realize(d)
        XK = extend_scalars(X, K)
        row = {"descriptor": str(d), "indecomposable": is_indecomposable(XK)}
        if not isinstance(d, HomReg):
            row["component"] = (ak.component_of(X, check=False), aK.component_of(XK, check=False))
            if isinstance(d, Reg):
                row["regular_length"] = (ak.regular_length(X)[0], aK.regular_length(XK)[0])
        ok = row["indecomposable"] and all(a == b for a, b in [v for k, v in row.items() if isinstance(v, tuple)])
        row["ok"] = ok
        checked.append(row)
        if not ok:
            failures.append(str(d))
    return {"bound": bound, "count": len(checked), "failures": failures, "rows": checked, "ok": not failures}


def check_tau_base_change(X: Representation) -> dict:
    """τ(X ⊗ k(t)) ≅ τ(X) ⊗ k(t), with an explicit isomorphism."""
    K = function_field(X.field)
    lhs = tau(extend_scalars(X, K))
    rhs = extend_scalars(tau(X), K)
    ok, iso = is_isomorphic(lhs, rhs)
    return {"dims_lhs": list(lhs.dims), "dims_rhs": list(rhs.dims), "isomorphic": ok,
            "witness_verified": bool(ok and (iso is None or (iso.is_morphism() and iso.is_iso())))}


# -- modules over k[t] -----------------------------------------------------------------------


class RQModule:
    """A representation over k[t] with free vertex spaces (polynomial matrices)."""

    def __init__(self, quiver: Quiver, base: Field, ranks, mats, check: bool = True):
        self.quiver = quiver
        self.base = base
        self.K = function_field(base)
        self.rep = Representation(quiver, self.K, ranks, [None if M is None else [[self.K(x) for x in r] for r in M] for M in mats], check=check)
        if check:
            for M in self.rep.mats:
                for row in M:
                    for x in row:
                        if not x.is_polynomial():
                            raise DVRError(f"entry {x} is not a polynomial in t")

    @classmethod
    def from_rep(cls, X: Representation, check: bool = True) -> "RQModule":
        F = X.field
        base = F.base if isinstance(F, RationalFunctionField) else F
        return cls(X.quiver, base, X.dims, X.mats, check)

    @classmethod
    def constant(cls, X: Representation) -> "RQModule":
        """k[t] ⊗_k X."""
        return cls(X.quiver, X.field, X.dims, X.mats)

    @property
    def ranks(self):
        return tuple(self.rep.dims)

    def generic(self) -> Representation:
        return self.rep

    def reduce(self, a=0) -> Representation:
        """κ(t - a) ⊗ X."""
        k = self.base
        mats = [[[residue(x, k(a)) for x in row] for row in M] for M in self.rep.mats]
        return Representation(self.quiver, k, self.rep.dims, mats, check=False)

    def to_text(self) -> str:
        body = format_rep(self.rep).splitlines()
        out = ["rqmodule", f"field {field_name(self.base)}", "ranks " + " ".join(map(str, self.ranks))]
        out += [ln for ln in body if not ln.startswith(("field", "dims"))]
        return "\n".join(out) + "\n"

    def __repr__(self):
        return f"RQModule(ranks={list(self.ranks)})"


def split_embedded_quiver(text: str):
    """Separate ``vertices``/``arrow`` lines (an inline quiver) from the rest."""
    qlines, rest = [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        (qlines if line.startswith(("vertices ", "arrow ")) else rest).append(raw)
    return ("\n".join(qlines) if qlines else None), "\n".join(rest)


def parse_rqmodule(text: str, Q: Quiver | None = None) -> RQModule:
    """Parse an RQModule; the quiver may be given inline as ``vertices``/``arrow`` lines."""
    from .quiver import parse_quiver

    qtext, text = split_embedded_quiver(text)
    if qtext is not None:
        Qi = parse_quiver(qtext)
        if Q is not None and Q != Qi:
            raise DVRError("inline quiver differs from the given quiver")
        Q = Qi
    if Q is None:
        raise DVRError("no quiver given (pass one or embed vertices/arrow lines)")
    base = QQ
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or line == "rqmodule":
            continue
        if line.startswith("field "):
            base = parse_field(line[6:])
            if isinstance(base, RationalFunctionField):
                raise DVRError("give the base field k; t is implicit")
            continue
        if line.startswith("ranks "):
            line = "dims " + line[6:]
        lines.append(line)
    X = parse_rep("\n".join(lines), Q, function_field(base))
    return RQModule.from_rep(X)


# -- Smith normal form over the DVR -------------------------------------------------------------


def _shift_entry(x, a, K):
    if a == 0 or not isinstance(x, RatFunc):
        return K(x)
    return RatFunc(K, x.num.shift(a), x.den.shift(a))


def translate(A, a, K):
    """Substitute t -> t + a, so that the point t = a moves to the origin."""
    return [[_shift_entry(x, a, K) for x in row] for row in A]


@dataclass
class SNFResult:
    P: list
    D: list
    Q: list
    exponents: list
    at: object = 0

    @property
    def blocks(self):
        """(exponent, multiplicity) pairs, exponents ascending."""
        out = []
        for e in self.exponents:
            if out and out[-1][0] == e:
                out[-1][1] += 1
            else:
                out.append([e, 1])
        return [tuple(b) for b in out]


def _snf(A, K, nrows, ncols):
    """Rectangular SNF at t = 0: A = P·D·Q with P, Q invertible over k[t]_(t)."""
    B = [row[:] for row in A]
    P = identity(nrows, K)
    Qm = identity(ncols, K)
    r = 0
    exps = []
    while r < min(nrows, ncols):
        best = None
        for i in range(r, nrows):
            for j in range(r, ncols):
                v = valuation(B[i][j])
                if v != VAL_INF and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        if i != r:  # row swap: B <- E B, P <- P E^{-1} (E^{-1} = E)
            B[i], B[r] = B[r], B[i]
            for row in P:
                row[i], row[r] = row[r], row[i]
        if j != r:  # column swap: B <- B G, Q <- G^{-1} Q
            for row in B:
                row[j], row[r] = row[r], row[j]
            Qm[j], Qm[r] = Qm[r], Qm[j]
        piv = B[r][r]
        for i2 in range(r + 1, nrows):
            if K.is_zero(B[i2][r]):
                continue
            c = B[i2][r] / piv  # valuation >= 0
            B[i2] = [x - c * y for x, y in zip(B[i2], B[r])]
            for row in P:  # P <- P E^{-1}: column r += c * column i2
                row[r] = row[r] + c * row[i2]
        for j2 in range(r + 1, ncols):
            if K.is_zero(B[r][j2]):
                continue
            c = B[r][j2] / piv
            for row in B:
                row[j2] = row[j2] - c * row[r]
            Qm[r] = [x + c * y for x, y in zip(Qm[r], Qm[j2])]
        # absorb the unit part of the pivot into P
        unit = piv / (K.t ** v)
        for row in P:
            row[r] = row[r] * unit
        B[r][r] = K.t ** v
        exps.append(v)
        r += 1
    # sort exponents ascending (stable): D' = S D S^T
    order = sorted(range(len(exps)), key=lambda k: exps[k])
    if order != list(range(len(exps))):
        perm = order + list(range(len(exps), nrows))
        permc = order + list(range(len(exps), ncols))
        P = [[row[perm[c]] for c in range(nrows)] for row in P]
        Qm = [Qm[permc[c]] for c in range(ncols)]
        exps = [exps[k] for k in order]
    D = zeros(nrows, ncols, K)
    for k, e in enumerate(exps):
        D[k][k] = K.t ** e
    return P, D, Qm, exps


def snf_dvr(A, K: RationalFunctionField | None = None, at=0) -> SNFResult:
    """Smith normal form of a square, generically invertible matrix over k[t]_(t-at).

    The returned P, D, Q satisfy A = P·D·Q (checked) with D = diag(t^{e_i}),
    exponents ascending, after translating ``t = at`` to the origin.
    """
    n = len(A)
    if K is None:
        K = next((x.K for row in A for x in row if isinstance(x, RatFunc)), function_field(QQ))
    A = [[K(x) for x in row] for row in A]
    if any(len(row) != n for row in A):
        raise DVRError("snf_dvr needs a square matrix")
    if n and K.is_zero(det(A, K)):
        raise DVRError("matrix is singular over the fraction field")
    At = translate(A, at, K)
    for row in At:
        for x in row:
            if valuation(x) < 0:
                raise DVRError(f"entry {x} is not in the local ring at t={at}")
    P, D, Qm, exps = _snf(At, K, n, n)
    if matmul(matmul(P, D, K), Qm, K) != At:  # pragma: no cover
        raise DVRError("internal error: P·D·Q != A")
    back = -K.base(at) if at != 0 else 0
    P, D, Qm = translate(P, back, K), translate(D, back, K), translate(Qm, back, K)
    return SNFResult(P, D, Qm, exps, at)


def minors_exponents(A, K: RationalFunctionField, at=0):
    """Exponents from the gcd-of-minors sequence d_k = min val of k×k minors."""
    n = len(A)
    A = translate([[K(x) for x in row] for row in A], at, K)
    ds = [0]
    for k in range(1, n + 1):
        best = VAL_INF
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(n), k):
                v = valuation(det([[A[i][j] for j in cols] for i in rows], K))
                best = min(best, v)
        ds.append(best)
    return [ds[k] - ds[k - 1] for k in range(1, n + 1)]


def verify_snf(A, res: SNFResult, K: RationalFunctionField) -> dict:
    A = [[K(x) for x in row] for row in A]
    prod_ok = matmul(matmul(res.P, res.D, K), res.Q, K) == A
    vp = valuation(det(res.P, K), res.at) if res.P else 0
    vq = valuation(det(res.Q, K), res.at) if res.Q else 0
    oracle = minors_exponents(A, K, res.at)
    return {"PDQ_equals_A": prod_ok, "val_det_P": vp, "val_det_Q": vq, "exponents": res.exponents,
            "minors_oracle": oracle,
            "ok": prod_ok and vp == 0 and vq == 0 and oracle == res.exponents
            and all(in_R(x, res.at) for M in (res.P, res.Q) for row in M for x in row)}


def in_R(x, at=0) -> bool:
    return valuation(x, at) >= 0


# -- generic isomorphisms -----------------------------------------------------------------------


def _as_map(X: Representation, Y: Representation, f):
    K = X.field
    maps = [[[K(x) for x in row] for row in M] for M in f]
    return RepMap(X, Y, maps)


def _orient(X, Y, f):
    """Accept f as a map X -> Y, or as a map Y -> X (then invert it)."""
    g = _as_map(X.generic(), Y.generic(), f)
    if g.is_morphism() and g.is_iso():
        return g
    h = _as_map(Y.generic(), X.generic(), f)
    if h.is_morphism() and h.is_iso():
        K = X.K
        return RepMap(X.generic(), Y.generic(), [inverse(M, K) if M else M for M in h.maps])
    raise DVRError("f is not an isomorphism between the generic fibres")


def spread_iso(X: RQModule, Y: RQModule, f) -> dict:
    """Nonzero r in k[t] with X[1/r] ≅ Y[1/r], using f and its inverse."""
    g = _orient(X, Y, f)
    K = X.K
    inv = [inverse(M, K) if M else M for M in g.maps]
    dens = [x.den for M in list(g.maps) + inv for row in M for x in row]
    r = Poly.const(K.base, 1)
    from .exact_linalg import poly_gcd

    for d in dens:
        if d.degree > 0:
            r = (r * d) // poly_gcd(r, d)
    r = r.monic()
    # cancellation certificate: g ∘ g^{-1} = 1 exactly; here r' = 1 (domain)
    one_ok = all(matmul(M, N, K) == identity(len(M), K) for M, N in zip(g.maps, inv) if M)
    div_ok = all(_divides_power(d, r) for d in dens)
    return {"r": r.to_str("t"), "r_poly": r, "r_prime": "1", "iso_verified": g.is_morphism() and g.is_iso() and one_ok,
            "entries_in_localization": div_ok}


def _divides_power(d: Poly, r: Poly) -> bool:
    if d.degree == 0:
        return True
    acc = r
    for _ in range(d.degree + 1):
        if (acc % d).is_zero():
            return True
        acc = acc * r
    return False


# -- matched filtrations ----------------------------------------------------------------------------


@dataclass
class MatchedFiltrations:
    m: int
    X_chain: list  # descending: X_chain[i] = basis (per vertex, original coords) of X^i
    Y_chain: list  # ascending
    factors: list  # (X^{i-1}/X^i, Y^i/Y^{i-1}, witness RepMap)
    exponents: dict
    scale: int

    def summary(self):
        return {"m": self.m, "factor_dims": [[list(a.dims), list(b.dims)] for a, b, _ in self.factors],
                "factors_matched": all(w.is_morphism() and w.is_iso() for _, _, w in self.factors)}


def _reduce_rep(Q, k, dims, mats):
    return Representation(Q, k, dims, [[[residue(x) for x in row] for row in M] for M in mats], check=True)


def filtration_pair(X: RQModule, Y: RQModule, f, at=0) -> MatchedFiltrations:
    """Matched filtrations of κ⊗X and κ⊗Y at t = at from a generic isomorphism f.

    After scaling f into Hom(X, Y) and taking per-vertex Smith forms
    f_v = P_v D_v Q_v, the action matrices M (of X in the basis Q_v) and N (of Y in
    the basis P_v) satisfy t^i M_ij = t^j N_ij blockwise, so M is block lower and N
    block upper triangular modulo t with equal diagonal blocks.
    """
    Q = X.quiver
    if Y.quiver != Q:
        raise DVRError("modules live on different quivers")
    K, k = X.K, X.base
    if X.ranks != Y.ranks:
        raise DVRError("ranks differ, so the modules are not generically isomorphic")
    g = _orient(X, Y, f)
    Xm = [translate(M, at, K) for M in X.rep.mats]
    Ym = [translate(M, at, K) for M in Y.rep.mats]
    fm = [translate(M, at, K) for M in g.maps]
    for M in Xm + Ym:
        for row in M:
            for x in row:
                if valuation(x) < 0:
                    raise DVRError("module is not a lattice over the local ring")
    vals = [valuation(x) for M in fm for row in M for x in row if not K.is_zero(x)]
    s = max(0, -min(vals)) if vals else 0
    fm = [[[x * K.t ** s for x in row] for row in M] for M in fm]
    snfs = {}
    for v in Q.vertices:
        n = X.ranks[v - 1]
        if n:
            P, D, Qv, e = _snf(fm[v - 1], K, n, n)
            snfs[v] = (P, D, Qv, e)
    m = max([max(e) for (_, _, _, e) in snfs.values() if e] + [-1]) + 1
    newX, newY = [], []
    for kk, (_, a, b) in enumerate(Q.arrows):
        if not (X.ranks[a - 1] and X.ranks[b - 1]):
            newX.append(None)
            newY.append(None)
            continue
        Pa, _, Qa, _ = snfs[a]
        Pb, _, Qb, _ = snfs[b]
        newX.append(matmul(matmul(Qb, Xm[kk], K), inverse(Qa, K), K))  # basis Q_v
        newY.append(matmul(matmul(inverse(Pb, K), Ym[kk], K), Pa, K))  # basis P_v^{-1}
    Xb = _reduce_rep(Q, k, X.ranks, [M if M is not None else zeros(X.ranks[t - 1], X.ranks[s_ - 1], K) for M, (_, s_, t) in zip(newX, Q.arrows)])
    Yb = _reduce_rep(Q, k, Y.ranks, [M if M is not None else zeros(Y.ranks[t - 1], Y.ranks[s_ - 1], K) for M, (_, s_, t) in zip(newY, Q.arrows)])
    cls = {v: (snfs[v][3] if v in snfs else []) for v in Q.vertices}

    def span(v, pred):
        n = X.ranks[v - 1]
        return [[k.one if c == j else k.zero for c in range(n)] for j in range(n) if pred(cls[v][j])]

    Xch = [[span(v, lambda e, i=i: e >= i) for v in Q.vertices] for i in range(m + 1)]
    Ych = [[span(v, lambda e, i=i: e < i) for v in Q.vertices] for i in range(m + 1)]
    factors = []
    for i in range(1, m + 1):
        Xi_1 = Xb.restrict(Xch[i - 1])
        # X^{i-1}/X^i: quotient of the restriction by the (coordinates of) X^i
        sub = []
        for v in Q.vertices:
            idx = [j for j in range(X.ranks[v - 1]) if cls[v][j] >= i - 1]
            sub.append([[k.one if idx[c] == j else k.zero for c in range(len(idx))]
                        for j in range(X.ranks[v - 1]) if cls[v][j] >= i])
        FX, _ = Xi_1.quotient(sub)
        Yi = Yb.restrict(Ych[i])
        subY = []
        for v in Q.vertices:
            idx = [j for j in range(Y.ranks[v - 1]) if cls[v][j] < i]
            subY.append([[k.one if idx[c] == j else k.zero for c in range(len(idx))]
                         for j in range(Y.ranks[v - 1]) if cls[v][j] < i - 1])
        FY, _ = Yi.quotient(subY)
        w = RepMap(FX, FY, [identity(FX.d(v), k) for v in Q.vertices])
        if not (w.is_morphism() and w.is_iso()):
            raise DVRError(f"factor {i} is not matched; hypothesis failure")
        factors.append((FX, FY, w))
    # chains in the original coordinates of the reductions:
    # the new basis of X_v is the columns of Q_v^{-1}, that of Y_v the columns of P_v
    def orig(preds, side):
        out = []
        for pred in preds:
            per = []
            for v in Q.vertices:
                if v not in snfs:
                    per.append([])
                    continue
                Bm = inverse(snfs[v][2], K) if side == "X" else snfs[v][0]
                n = len(Bm)
                per.append([[residue(Bm[r][c]) for r in range(n)] for c in range(n) if pred(cls[v][c])])
            out.append(per)
        return out

    Xpreds = [lambda e, i=i: e >= i for i in range(m + 1)]
    Ypreds = [lambda e, i=i: e < i for i in range(m + 1)]
    return MatchedFiltrations(m, orig(Xpreds, "X"), orig(Ypreds, "Y"), factors,
                              {v: cls[v] for v in Q.vertices}, s)


# -- restriction of handles ------------------------------------------------------------------------


def _bad_tube(ars, b: Point):
    inv = ars.tube_inventory()
    for T, p in zip(inv.tubes, inv.bad_points):
        if ars._same_point(p, b):
            return T
    return None


def reduce_point(y: Point, a, k: Field):
    """Distinct closed points of the reduction of y at t = a (binary-form reduction).

    Returns a list of Points over k; ∞ appears when the leading coefficient
    drops out after scaling.
    """
    if y.poly is None:
        return [INF]
    cs = y.poly.c
    K = y.poly.field
    vals = [valuation(c, k(a)) if not K.is_zero(c) else VAL_INF for c in cs]
    vmin = min(vals)
    scaled = [c * K.t ** 0 for c in cs]
    if vmin != 0:
        u = (K.t - K(k(a))) ** (-vmin)
        scaled = [c * u for c in cs]
    red = [residue(c, k(a)) for c in scaled]
    p = Poly(k, red)
    out = []
    if p.degree < y.poly.degree:
        out.append(INF)
    if p.degree >= 1:
        for fct in _factor_poly(p, k):
            out.append(Point(fct))
    return out


@dataclass(frozen=True)
class ReduceRule:
    """Homogeneous part of r_pq(T): y is in iff its reduction at t = a lands in T.

    A bad root (a point carrying a tube of rank r) needs some Reg(tube, i, r) in T;
    any other root b needs HomReg(b, 1) in T.
    """

    a: object
    handle: object
    quiver: Quiver
    base: Field

    def contains(self, y: Point, ars=None) -> bool:
        tk = Tors(self.quiver, self.base)
        for b in reduce_point(y, self.a, self.base):
            T = _bad_tube(tk.ars, b)
            if T is not None:
                if not any(tk.desc_member(self.handle, Reg(T.id, i, T.rank)) for i in range(T.rank)):
                    return False
            elif not tk.desc_member(self.handle, HomReg(b, 1)):
                return False
        return True

    def __str__(self):
        return f"reduce(a={self.base.to_str(self.base(self.a)) if hasattr(self.base, 'to_str') else self.a}:{self.handle})"


def r_pq(T, a, Q: Quiver, k: Field = QQ):
    """Restrict a handle at the rational point t = a to the generic point k(t)."""
    K = function_field(k)
    if isinstance(T, FF):
        return FF(T.pair)
    tk = Tors(Q, k)
    inv = tk.ars.tube_inventory()
    hp = T.spec.hom
    all_whole = all(T.spec.tube(t.id) is not None and T.spec.tube(t.id).whole for t in inv.tubes)
    if hp.all and all_whole:
        hom = HomPart(all=True)
    elif hp.is_empty() and not any(
            tk.desc_member(T, Reg(t.id, i, t.rank)) for t in inv.tubes for i in range(t.rank)):
        hom = HomPart()
    else:
        hom = HomPart(rule=ReduceRule(k(a), T, Q, k))
    return Tors(Q, K).normalize(Upper(RegularTorsSpec(T.spec.tubes, hom)))


def generic_contained(G, Tp, a, Q: Quiver, k: Field = QQ):
    """Is the generic handle G inside r_pq(Tp)?  Returns (bool, witness)."""
    tk = Tors(Q, k)
    if isinstance(G, FF):
        return tk.contains(Tp, G)
    stripped = Upper(RegularTorsSpec(G.spec.tubes, HomPart()))
    ok, w = tk.contains(Tp, stripped)
    if not ok:
        return ok, w
    rule = ReduceRule(k(a), Tp, Q, k)
    hp = G.spec.hom
    if hp.all:
        if isinstance(Tp, Upper) and Tp.spec.hom.all and all(
                any(tk.desc_member(Tp, Reg(t.id, i, t.rank)) for i in range(t.rank))
                for t in tk.ars.tube_inventory().tubes):
            return True, None
        return False, "hom=all"
    for y in sorted(hp.points, key=str):
        if not rule.contains(y):
            return False, HomReg(y, 1)
    if hp.rule is not None:
        return False, f"hom={hp.rule}"
    return True, None


def rule_parser(s: str, Q: Quiver, F: Field):
    """Parse ``reduce(a=<a>:<handle>)`` for handles over k(t)."""
    from .torsion import parse_handle

    if not (s.startswith("reduce(a=") and s.endswith(")")):
        raise DVRError(f"unknown homogeneous rule {s!r}")
    body = s[len("reduce(a="):-1]
    a, _, h = body.partition(":")
    k = F.base if isinstance(F, RationalFunctionField) else F
    from .reps import parse_entry

    return ReduceRule(parse_entry(a, k), parse_handle(h, Q, k), Q, k)
