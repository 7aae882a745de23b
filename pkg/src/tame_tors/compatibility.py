"""Families of torsion classes over Spec k[t]: compatibility, gluing witnesses, Φ_t.

Family file format (handles in their canonical text form; ``at a`` is the
closed point t = a, the generic handle lives over k(t))::

    family
    field QQ
    generic = Upper(I;hom=x-t)
    at 0 = Upper(I;hom=x)
    default = Upper(I;hom=all)
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .ar_structure import INF, PI, PP, HomReg, Point, Reg, structure
from .base_change_dvr import (
    ReduceRule,
    RQModule,
    function_field,
    generic_contained,
    reduce_point,
    rule_parser,
)
from .exact_linalg import QQ, Field, block_diag, Poly, RatFunc, RationalFunctionField, identity, inverse, matmul, row_space_basis, rref
from .quiver import Quiver
from .reps import RepMap, Representation, _factor_poly, decompose, direct_sum, ext_cocycles, extension_module, field_name, is_isomorphic, parse_entry, parse_field
from .torsion import FF, HandleError, Tors, Upper, lambda_handle, parse_handle


class CompatError(ValueError):
    pass


@dataclass(frozen=True)
class PrimeLabel:
    """``a is None`` for the zero ideal; otherwise the closed point (t - a)."""

    a: object = None

    @property
    def is_generic(self) -> bool:
        return self.a is None

    def __str__(self):
        if self.a is None:
            return "generic"
        a = self.a
        return "t" if a == 0 else (f"t-{a}" if a > 0 else f"t+{-a}") if not hasattr(a, "v") else f"t-{a}"


GENERIC = PrimeLabel()


@dataclass
class TorsionFamily:
    quiver: Quiver
    base: Field
    generic: object
    assignments: dict  # a -> handle over k
    default: object

    @property
    def K(self):
        return function_field(self.base)

    def handle_at(self, a):
        for b, h in self.assignments.items():
            if b == a:
                return h
        return self.default

    def to_text(self, embed_quiver: bool = True) -> str:
        from .quiver import format_quiver

        lines = ["family", f"field {field_name(self.base)}"]
        if embed_quiver:
            lines += format_quiver(self.quiver).splitlines()
        lines.append(f"generic = {self.generic}")
        for a in sorted(self.assignments, key=lambda x: (float(x) if not hasattr(x, "v") else x.v)):
            lines.append(f"at {self.base.to_str(self.base(a)) if hasattr(self.base, 'to_str') else a} = {self.assignments[a]}")
        lines.append(f"default = {self.default}")
        return "\n".join(lines) + "\n"


def parse_family(text: str, Q: Quiver | None = None) -> TorsionFamily:
    """Parse a family file; the quiver may be embedded as ``vertices``/``arrow`` lines."""
    from .base_change_dvr import split_embedded_quiver
    from .quiver import parse_quiver

    qtext, text = split_embedded_quiver(text)
    if qtext is not None:
        Q = parse_quiver(qtext)
    if Q is None:
        raise CompatError("no quiver given (pass one or embed vertices/arrow lines)")
    k = QQ
    gen = default = None
    assign = {}
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line or line == "family":
            continue
        if line.startswith("field "):
            k = parse_field(line[6:])
            continue
        rows.append(line)
    K = function_field(k)
    for line in rows:
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key == "generic":
            gen = parse_handle(val, Q, K, rule_parser=rule_parser)
        elif key == "default":
            default = parse_handle(val, Q, k)
        elif key.startswith("at "):
            a = parse_entry(key[3:], k)
            if a in assign:
                raise CompatError(f"closed point t={a} listed twice")
            assign[a] = parse_handle(val, Q, k)
        else:
            raise CompatError(f"cannot parse family line {line!r}")
    if gen is None or default is None:
        raise CompatError("family needs 'generic' and 'default' lines")
    return TorsionFamily(Q, k, gen, assign, default)


# -- helpers over k[t] ---------------------------------------------------------------


def rational_roots(p: Poly, k: Field):
    if p.degree < 1:
        return []
    out = []
    for f in _factor_poly(p, k):
        if f.degree == 1:
            out.append(-f.c[0] / f.c[1])
    return sorted(out, key=lambda x: (float(x) if not hasattr(x, "v") else x.v))


def _special_values(y: Point, ars_k, k: Field):
    """Rational a where the reduction of y may hit a bad point (or lose degree)."""
    if y.poly is None:
        return []
    K = y.poly.field
    cand = set()
    for c in y.poly.c:
        if isinstance(c, RatFunc):
            cand.update(rational_roots(c.den, k))
    for b in ars_k.tube_inventory().bad_points:
        if b.poly is not None and b.poly.degree == 1:
            cval = -b.poly.c[0]
            val = sum((ci * K(cval) ** i for i, ci in enumerate(y.poly.c)), K.zero)
            if isinstance(val, RatFunc) and not K.is_zero(val):
                cand.update(rational_roots(val.num, k))
    return sorted(cand, key=lambda x: (float(x) if not hasattr(x, "v") else x.v))


def _is_constant_point(y: Point) -> bool:
    return y.poly is None or all(not isinstance(c, RatFunc) or c.is_constant() for c in y.poly.c)


def _default_contained(G, D, listed, Q: Quiver, k: Field):
    """G ⊆ r_(t-a)(D) for every unlisted rational a (symbolic in a)."""
    tk = Tors(Q, k)
    probe_a = next(a for a in (k(x) for x in range(-50, 50)) if a not in listed)
    if isinstance(G, FF) or (isinstance(G, Upper) and not G.spec.hom.points and not G.spec.hom.rule):
        return generic_contained(G, D, probe_a, Q, k)
    ok, w = generic_contained(Upper(type(G.spec)(G.spec.tubes, type(G.spec.hom)())), D, probe_a, Q, k)
    if not ok:
        return ok, w
    if G.spec.hom.rule is not None:
        return False, f"hom={G.spec.hom.rule} (rule-defined generic handles are not checked symbolically)"
    hom_all_D = tk._hom_all_in(D)
    for y in sorted(G.spec.hom.points, key=str):
        if _is_constant_point(y):
            if not ReduceRule(probe_a, D, Q, k).contains(y):
                return False, HomReg(y, 1)
            continue
        if not hom_all_D:
            return False, HomReg(y, 1)
        for a in _special_values(y, tk.ars, k):
            if a not in listed and not ReduceRule(a, D, Q, k).contains(y):
                return False, ("t=" + str(a), HomReg(y, 1))
    return True, None


def is_compatible(F: TorsionFamily) -> dict:
    """r_pq(X^p) ⊇ X^generic at every listed closed point and (symbolically) the default."""
    Q, k = F.quiver, F.base
    rows = []
    for a in sorted(F.assignments, key=str):
        ok, w = generic_contained(F.generic, F.assignments[a], a, Q, k)
        rows.append({"prime": str(PrimeLabel(a)), "contained": ok, "witness": None if ok else str(w)})
    ok, w = _default_contained(F.generic, F.default, set(F.assignments), Q, k)
    rows.append({"prime": "default", "contained": ok, "witness": None if ok else str(w)})
    return {"compatible": all(r["contained"] for r in rows), "checks": rows}


# -- gluing witnesses ----------------------------------------------------------------------


@dataclass
class GlueWitness:
    X: RQModule
    q: PrimeLabel
    iso: RepMap  # X_q -> X'
    certificates: list
    case: int
    corrections: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["member"] for c in self.certificates) and self.iso.is_morphism() and self.iso.is_iso()

    def summary(self):
        return {"case": self.case, "ranks": list(self.X.ranks), "iso_verified": self.iso.is_morphism() and self.iso.is_iso(),
                "certificates": self.certificates, "corrections": self.corrections, "ok": self.ok}


def _levels(Q: Quiver):
    lev = {v: 0 for v in Q.vertices}
    for v in Q.topological_order():
        for _, s, t in Q.arrows:
            if s == v:
                lev[t] = max(lev[t], lev[s] + 1)
    return lev


def polynomial_lift(X: Representation):
    """Rescale bases by powers of a common denominator so every entry is a polynomial.

    Returns (RQModule, iso) with iso: lift_K -> X.
    """
    K, Q = X.field, X.quiver
    from .exact_linalg import poly_gcd

    d = Poly.const(K.base, 1)
    for M in X.mats:
        for row in M:
            for x in row:
                if x.den.degree > 0:
                    d = (d * x.den) // poly_gcd(d, x.den)
    lev = _levels(Q)
    dK = K(d)
    scale = {v: dK ** lev[v] for v in Q.vertices}
    mats = []
    for M, (_, s, t) in zip(X.mats, Q.arrows):
        f = scale[t] / scale[s]
        mats.append([[x * f for x in row] for row in M])
    L = RQModule(Q, K.base, X.dims, mats)
    iso = RepMap(L.generic(), X, [[[K.one / scale[v] if i == j else K.zero for j in range(X.d(v))] for i in range(X.d(v))]
                                  for v in Q.vertices])
    return L, iso


def _preimage_lattice(L: RQModule, a, W):
    """Sublattice {x : x mod (t-a) ∈ W}, with the inclusion matrices B_v (new -> old)."""
    K, k, Q = L.K, L.base, L.quiver
    pi = K.t - K(k(a))
    Bs = []
    for v in Q.vertices:
        n = L.ranks[v - 1]
        rows = W[v - 1]
        R, piv = rref(rows, k) if rows else ([], [])
        cols = [[K(x) for x in r] for r in R]
        for j in range(n):
            if j not in piv:
                cols.append([pi if i == j else K.zero for i in range(n)])
        Bs.append([[cols[c][r] for c in range(n)] for r in range(n)])
    mats = []
    for M, (_, s, t) in zip(L.rep.mats, Q.arrows):
        if not (L.ranks[s - 1] and L.ranks[t - 1]):
            mats.append(None)
            continue
        mats.append(matmul(matmul(inverse(Bs[t - 1], K), M, K), Bs[s - 1], K))
    return RQModule(Q, k, L.ranks, mats), Bs


def _candidate_subreps(Z: Representation):
    """Subrepresentations to try in the correction search (deterministic order)."""
    Q, k = Z.quiver, Z.field
    out = []
    for v in Q.vertices:
        for i in range(Z.d(v)):
            e = [k.one if j == i else k.zero for j in range(Z.d(v))]
            sub = []
            for w in Q.vertices:
                vecs = []
                for p in Q.paths(v, w):
                    Pm = Z.path_matrix(p, v)
                    vecs.append([sum((Pm[r][c] * e[c] for c in range(Z.d(v))), k.zero) for r in range(Z.d(w))])
                vecs = [x for x in vecs if any(not k.is_zero(y) for y in x)]
                sub.append(row_space_basis(vecs, k, Z.d(w)) if vecs else [])
            out.append(sub)
    seen, uniq = set(), []
    for s in out:
        key = tuple(tuple(tuple(r) for r in b) for b in s)
        if key not in seen and 0 < sum(len(b) for b in s) < Z.total_dim:
            seen.add(key)
            uniq.append(s)
    return uniq


def correct_at(L: RQModule, a, T, tk: Tors, max_depth: int = 4, max_nodes: int = 400):
    """Breadth-first search over iterated preimage sublattices until the reduction is in T."""
    K = L.K
    start = (L, [identity(n, K) for n in L.ranks])
    queue = [(start, 0)]
    seen = 0
    while queue:
        (M, B), depth = queue.pop(0)
        Z = M.reduce(a)
        if tk.member(T, Z):
            return M, B, depth
        seen += 1
        if depth >= max_depth or seen > max_nodes:
            continue
        for W in _candidate_subreps(Z):
            M2, B2 = _preimage_lattice(M, a, W)
            Btot = [matmul(b1, b2, K) if b1 else b1 for b1, b2 in zip(B, B2)]
            queue.append(((M2, Btot), depth + 1))
    return None


def _hom_point(desc):
    return desc.point if isinstance(desc, HomReg) else None


def glue_witness(F: TorsionFamily, Xp: Representation, q: PrimeLabel = GENERIC,
                 max_depth: int = 4, rng_seed: int = 20240531) -> GlueWitness:
    """An RQModule X with X_q ≅ X' and κ(p) ⊗ X in X^p at every checked closed point."""
    if not q.is_generic:
        raise CompatError("only the generic point is supported as gluing target")
    Q, k, K = F.quiver, F.base, F.K
    tK, tk = Tors(Q, K), Tors(Q, k)
    if not tK.member(F.generic, Xp):
        raise CompatError("X' is not in the generic handle of the family")
    dec = decompose(Xp)
    if len(dec.expanded()) > 1:
        return _glue_sum(F, dec, q, max_depth, rng_seed)
    desc = structure(Q, K).describe(Xp)
    if isinstance(desc, HomReg) and desc.length > 1:
        return _glue_uniserial(F, Xp, desc, q, max_depth, rng_seed)
    listed = set(F.assignments)
    corrections = []
    if not isinstance(desc, HomReg):
        case = 1
        Xk = structure(Q, k).realize(desc)
        X = RQModule.constant(Xk)
        ok, iso = is_isomorphic(X.generic(), Xp)
        if not ok:  # pragma: no cover
            raise CompatError("descent of X' is not isomorphic to X'")
        primes = sorted(listed, key=str)
        symbolic = "constant lift: reduction is the same module at every closed point"
    else:
        case = 2
        X, iso = polynomial_lift(Xp)
        special = set()
        for M in X.rep.mats:
            for row in M:
                for x in row:
                    if x.num.degree > 0:
                        special.update(rational_roots(x.num, k))
        special.update(_special_values(desc.point, tk.ars, k))
        primes = sorted(listed | special, key=str)
        symbolic = "homogeneous reduction away from the listed and special points"
    certs = []
    for a in primes:
        T = F.handle_at(a)
        Z = X.reduce(a)
        if not tk.member(T, Z):
            res = correct_at(X, a, T, tk, max_depth)
            if res is None:
                raise CompatError(f"no corrected lattice found at t={a} within depth {max_depth}")
            X2, B, depth = res
            # iso: X2_K -> X_K is B; compose with the running iso
            step = RepMap(X2.generic(), X.generic(), B)
            iso = iso.compose(step)
            corrections.append({"prime": str(PrimeLabel(a)), "depth": depth})
            X = X2
        certs.append({"prime": str(PrimeLabel(a)), "prime_value": a, "handle": str(T), "reduction_dims": list(X.reduce(a).dims),
                      "member": tk.member(T, X.reduce(a))})
    # spot checks of the default at a few unlisted points
    rng = random.Random(rng_seed)
    spots = []
    while len(spots) < 3:
        a = k(rng.randint(-40, 40))
        if a not in primes and a not in spots:
            spots.append(a)
    for a in spots:
        Z = X.reduce(a)
        certs.append({"prime": str(PrimeLabel(a)), "prime_value": a, "handle": str(F.default), "reduction_dims": list(Z.dims),
                      "member": tk.member(F.default, Z), "spot_check": True})
    gw = GlueWitness(X, q, iso, certs, case, corrections)
    gw.symbolic = symbolic
    return gw


def _glue_uniserial(F: TorsionFamily, Xp, desc, q, max_depth, rng_seed) -> GlueWitness:
    """Homogeneous modules of length > 1 as iterated extensions of a glued length-one lattice.

    Every reduction of the result is an iterated extension of reductions of the
    length-one lattice, all of which are members, so no correction search is needed.
    """
    Q, k, K = F.quiver, F.base, F.K
    g1 = glue_witness(F, structure(Q, K).realize(HomReg(desc.point, 1)), q, max_depth, rng_seed)
    E1 = g1.X.generic()
    cur = E1
    for _ in range(desc.length - 1):
        etas = ext_cocycles(E1, cur)
        if not etas:  # pragma: no cover
            raise CompatError("no self-extension of the homogeneous simple")
        cur = extension_module(E1, cur, etas[0])
    X = RQModule.from_rep(cur)
    ok, iso = is_isomorphic(X.generic(), Xp)
    if not ok:
        raise CompatError("iterated extension is not isomorphic to X'")
    tk = Tors(Q, k)
    certs = []
    for c in g1.certificates:
        a = c["prime_value"]
        T = F.default if c.get("spot_check") else F.handle_at(a)
        Z = X.reduce(a)
        certs.append({**c, "reduction_dims": list(Z.dims), "member": tk.member(T, Z)})
    gw = GlueWitness(X, q, iso, certs, 2, g1.corrections)
    gw.symbolic = "iterated extension of a length-one witness; reductions are extensions of members"
    return gw


def _glue_sum(F: TorsionFamily, dec, q, max_depth, rng_seed) -> GlueWitness:
    # torsion classes are closed under sums: glue summandwise, then recombine
    parts = [glue_witness(F, Y, q, max_depth, rng_seed) for Y in dec.expanded()]
    K = F.K
    X = RQModule.from_rep(direct_sum([g.X.generic() for g in parts]))
    S = direct_sum([g.iso.target for g in parts])
    n = len(F.quiver.vertices)
    blocks = [block_diag([g.iso.maps[v] for g in parts], K,
                         [(g.iso.target.dims[v], g.iso.source.dims[v]) for g in parts]) for v in range(n)]
    iso = dec.witness.compose(RepMap(X.generic(), S, blocks))
    tk = Tors(F.quiver, F.base)
    certs, seen = [], set()
    for g in parts:
        for c in g.certificates:
            if c["prime"] in seen:
                continue
            seen.add(c["prime"])
            a = c["prime_value"]
            T = F.handle_at(a) if not c.get("spot_check") else F.default
            Z = X.reduce(a)
            certs.append({**c, "reduction_dims": list(Z.dims), "member": tk.member(T, Z)})
    gw = GlueWitness(X, q, iso, certs, max(g.case for g in parts),
                     [c for g in parts for c in g.corrections])
    gw.symbolic = "direct sum of summandwise witnesses"
    return gw


# -- Φ_t -------------------------------------------------------------------------------------


def _auto_primes(gens, k):
    cand = set()
    for N in gens:
        for M in N.rep.mats:
            for row in M:
                for x in row:
                    if x.num.degree > 0:
                        cand.update(rational_roots(x.num, k))
            # 2x2 minors catch rank drops of combinations
            rows = len(M)
            cols = len(M[0]) if M else 0
            for i in range(rows):
                for i2 in range(i + 1, rows):
                    for j in range(cols):
                        for j2 in range(j + 1, cols):
                            m = M[i][j] * M[i2][j2] - M[i][j2] * M[i2][j]
                            if m.num.degree > 0:
                                cand.update(rational_roots(m.num, k))
    return sorted(cand, key=str)


def phi_t(gens, Q: Quiver | None = None, primes=None) -> TorsionFamily:
    """Pointwise torsion closures of the reductions of the generators."""
    if not gens:
        raise CompatError("phi_t needs at least one generator")
    Q = Q or gens[0].quiver
    k = gens[0].base
    K = function_field(k)
    tK, tk = Tors(Q, K), Tors(Q, k)
    generic = tK.closure([N.generic() for N in gens])
    # default: closure of the constant descent of the generic summands
    descents, moving, special = [], False, set()
    aK, ak = structure(Q, K), structure(Q, k)
    for N in gens:
        for Y, m in decompose(N.generic()).summands:
            d = aK.describe(Y, check=False)
            if isinstance(d, HomReg):
                if _is_constant_point(d.point):
                    pk = Point(Poly(k, [c.constant_value() if isinstance(c, RatFunc) else c for c in d.point.poly.c])) \
                        if d.point.poly is not None else INF
                    descents.append(ak.realize(HomReg(pk, d.length)))
                else:
                    moving = True
                    special.update(_special_values(d.point, ak, k))
            else:
                descents.append(ak.realize(d))
    if moving:
        b0 = tk.sample_points()[0]
        default = tk.closure(descents + [ak.realize(HomReg(b0, 1))])
        if isinstance(default, Upper):
            default = tk.normalize(Upper(type(default.spec)(default.spec.tubes, type(default.spec.hom)(all=True))))
    else:
        default = tk.closure(descents)
    explicit = primes is not None
    primes = [k(a) for a in primes] if explicit else sorted(set(_auto_primes(gens, k)) | special, key=str)
    assign = {}
    for a in primes:
        h = tk.closure([N.reduce(a) for N in gens])
        if explicit or not tk.equal(h, default):
            assign[a] = h
    return TorsionFamily(Q, k, generic, assign, default)


def _sample_members(F: TorsionFamily, samples: int):
    """Up to ``samples`` generic members, each a tuple of descriptors (a direct sum)."""
    Q, K = F.quiver, F.K
    tK = Tors(Q, K)
    aK = structure(Q, K)
    out = []
    G = F.generic
    if isinstance(G, Upper):
        out += [HomReg(y, 1) for y in sorted(G.spec.hom.points, key=str)]
    from .ar_structure import parse_point

    for s in ("x-t", "x^2-t", "x-t-1"):
        y = parse_point(s, K)
        if any(aK._same_point(y, b) for b in aK.tube_inventory().bad_points):
            continue
        if HomReg(y, 1) not in out and tK.desc_member(G, HomReg(y, 1)):
            out.append(HomReg(y, 1))
    out += [HomReg(d.point, 2) for d in list(out) if d.point.degree == 1]
    bound = 3 * sum(Q.delta)
    for d in aK.indecomposables(bound, sample_points=[]):
        if len(out) >= 4 * samples:
            break
        if tK.desc_member(G, d):
            out.append(d)
    # interleave components so homogeneous and exceptional samples both appear
    hom = [d for d in out if isinstance(d, HomReg)]
    rest = [d for d in out if not isinstance(d, HomReg)]
    mixed = []
    while (hom or rest) and len(mixed) < samples:
        if hom:
            mixed.append((hom.pop(0),))
        if rest and len(mixed) < samples:
            mixed.append((rest.pop(0),))
    # too few indecomposable members: pad with direct sums, still members
    singles = list(mixed)
    i = 0
    while singles and len(mixed) < samples:
        mixed.append(singles[i % len(singles)] * (i // len(singles) + 2))
        i += 1
    return mixed


def verify_main_theorem(F: TorsionFamily, samples: int = 5) -> dict:
    """Glue witnesses for sampled generic members, then compare Φ_t of them with F."""
    Q, k, K = F.quiver, F.base, F.K
    comp = is_compatible(F)
    if not comp["compatible"]:
        raise CompatError("family is not compatible")
    tK = Tors(Q, K)
    rows, mods = [], []
    for ds in _sample_members(F, samples):
        gw = glue_witness(F, tK.realize_sum(list(ds)))
        rows.append({"sample": "+".join(str(d) for d in ds), **gw.summary()})
        mods.append(gw.X)
    ok = all(r["ok"] for r in rows)
    contained = None
    if mods:
        Fp = phi_t(mods, Q, primes=list(F.assignments))
        tk = Tors(Q, k)
        contained = tK.contains(F.generic, Fp.generic)[0] and all(
            tk.contains(F.assignments[a], Fp.assignments[a])[0] for a in F.assignments)
    return {"samples": rows, "witnesses_ok": ok, "phi_t_contained": contained,
            "ok": ok and contained is not False}


def constant_family(Q: Quiver, k: Field, h, primes=()) -> TorsionFamily:
    K = function_field(k)
    return TorsionFamily(Q, k, h, {k(a): h for a in primes}, h)


def round_trip_constant(Q: Quiver, k: Field, pair_handle: FF, primes=(0, 1)) -> dict:
    """Φ_t of the constant lift of a support τ-tilting module returns the constant family."""
    tk = Tors(Q, k)
    M = tk.realize_sum(list(pair_handle.pair.modules))
    F = phi_t([RQModule.constant(M)], Q, primes=list(primes))
    same = all(h == pair_handle for h in F.assignments.values()) and F.default == pair_handle and F.generic == pair_handle
    return {"family": F.to_text(), "round_trip": same}
