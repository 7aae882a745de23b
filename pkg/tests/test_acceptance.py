"""Acceptance criteria, one test each.

Every test appends a ``[criterion N] PASS/FAIL: ...`` line that the conftest hook
prints in the terminal summary; ``python tests/test_acceptance.py`` runs just these.
"""

import itertools
import random
import time

from conftest import ACCEPTANCE_LINES
from families import INCOMPATIBLE, compatible_families, incompatible
from pairgen import random_pair
from tame_tors.ar_structure import HomReg, Reg, structure
from tame_tors.base_change_dvr import (
    check_tube_bijection,
    filtration_pair,
    function_field,
    r_pq,
    snf_dvr,
    verify_snf,
)
from tame_tors.compatibility import is_compatible, round_trip_constant, verify_main_theorem
from tame_tors.exact_linalg import QQ
from tame_tors.quiver import A2_tilde, D4_tilde, kronecker, linear_A
from tame_tors.reps import ext1_dim, hom_dim, random_rep
from tame_tors.torsion import FF, Tors, Upper, parse_handle

K = function_field(QQ)


def record(n, ok, detail):
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_dims(Q, rng, total):
    d = [0] * Q.n
    for _ in range(total):
        d[rng.randrange(Q.n)] += 1
    return d


def test_criterion_1_euler_identity():
    rng = random.Random(1)
    quivers = [linear_A(2), kronecker(), D4_tilde()]
    t0 = time.time()
    bad = 0
    for i in range(200):
        Q = quivers[i % 3]
        X = random_rep(Q, QQ, random_dims(Q, rng, rng.randint(1, 5)), rng)
        Y = random_rep(Q, QQ, random_dims(Q, rng, rng.randint(1, 5)), rng)
        e = ext1_dim(X, Y)
        if hom_dim(X, Y) - e != Q.euler_form(X.dims, Y.dims) or ext1_dim(X, Y, "ar") != e:
            bad += 1
    dt = time.time() - t0
    record(1, bad == 0 and dt < 30, f"200 pairs, {bad} mismatches, {dt:.1f}s")


def test_criterion_2_tube_inventory():
    t0 = time.time()
    inv = structure(D4_tilde(), QQ).tube_inventory()
    delta = (2, 1, 1, 1, 1)
    simples = [d for T in inv.tubes for d in T.dims]
    sums = [tuple(map(sum, zip(*T.dims))) for T in inv.tubes]
    dt = time.time() - t0
    ok = inv.ranks == [2, 2, 2] and len(simples) == 6 and all(s == delta for s in sums) and dt < 60
    record(2, ok, f"ranks={inv.ranks}, {len(simples)} regular simples, tube sums {sums}, {dt:.1f}s")


def test_criterion_3_base_change_bijection():
    rows = []
    for Q in (D4_tilde(), A2_tilde()):
        rep = check_tube_bijection(Q, 2 * sum(Q.quiver_type.delta))
        rows.append((rep["count"], len(rep["failures"])))
    ok = all(f == 0 for _, f in rows)
    record(3, ok, f"D4~: {rows[0][0]} descriptors, A2~: {rows[1][0]} descriptors, failures {[f for _, f in rows]}")


UPPER = [
    ("kron", "Upper(I)"),
    ("kron", "Upper(I;hom=x)"),
    ("kron", "Upper(I;hom=x,x-1,inf)"),
    ("kron", "Upper(I+R)"),
    ("d4", "Upper(I;tube0=Reg(0,0,1))"),
    ("d4", "Upper(I;tube1=Reg(1,1,2);tube2=whole;hom=x-3)"),
]


def test_criterion_4_characterization():
    tors = {"kron": Tors(kronecker(), QQ), "d4": Tors(D4_tilde(), QQ)}
    ff = list(tors["kron"].enumerate_ftors(4).nodes)
    ff_d4 = list(tors["d4"].enumerate_ftors(2).nodes)
    cases = [(tors["kron"], h, True) for h in ff] + [(tors["d4"], h, True) for h in ff_d4]
    cases += [(tors[q], parse_handle(s, tors[q].Q), False) for q, s in UPPER]
    bad = []
    for T, h, expect_ff in cases:
        rep = T.check_characterization(h)
        if not (rep["agree"] and rep["partition_exactly_one"] and rep["i_functorially_finite"] is expect_ff):
            bad.append(str(h))
    n_ff = len(ff) + len(ff_d4)
    ok = n_ff >= 20 and len(UPPER) >= 5 and not bad
    record(4, ok, f"{n_ff} FF handles, {len(UPPER)} Upper handles, disagreements {bad}")


def test_criterion_5_tilting_regular_bound():
    Q = D4_tilde()
    fr = Tors(Q, QQ).enumerate_ftors(6)
    tilting = [h.pair for h in fr.nodes if not h.pair.supp and len(h.pair.modules) == Q.n]
    worst = max(sum(isinstance(d, (Reg, HomReg)) for d in p.modules) for p in tilting)
    record(5, worst <= Q.n - 2, f"{len(fr.nodes)} classes, {len(tilting)} tilting, max regular summands {worst}")


def test_criterion_6_snf_filtration():
    rng = random.Random(20240531)
    quivers = [kronecker(), A2_tilde(), D4_tilde()]
    t0 = time.time()
    bad_snf = bad_filt = 0
    for i in range(100):
        Q = quivers[i % 3]
        X, Y, f, exps = random_pair(Q, [rng.randint(1, 6) for _ in Q.vertices], rng, max_exp=3)
        for v in Q.vertices:
            res = snf_dvr(f[v - 1], K)
            if not verify_snf(f[v - 1], res, K)["ok"] or res.exponents != sorted(exps[v]):
                bad_snf += 1
        if not filtration_pair(X, Y, f).summary()["factors_matched"]:
            bad_filt += 1
    dt = time.time() - t0
    ok = bad_snf == 0 and bad_filt == 0 and dt < 120
    record(6, ok, f"100 pairs, SNF failures {bad_snf}, unmatched filtrations {bad_filt}, {dt:.1f}s")


def test_criterion_7_rpq_embedding():
    Q = kronecker()
    tk, tK = Tors(Q, QQ), Tors(Q, K)
    nodes = list(tk.enumerate_ftors(4).nodes)
    images = [r_pq(h, 0, Q) for h in nodes]
    injective = len(set(map(str, images))) == len(nodes)
    order = all(tk.contains(a, b)[0] == tK.contains(ra, rb)[0]
                for (a, ra), (b, rb) in itertools.product(zip(nodes, images), repeat=2))
    ff_kept = all(isinstance(g, FF) for g in images)
    uppers = [parse_handle(s, Q) for q, s in UPPER if q == "kron"]
    non_ff = all(isinstance(r_pq(h, 0, Q), Upper) and not tK.is_functorially_finite(r_pq(h, 0, Q))[0]
                 for h in uppers)
    ok = injective and order and ff_kept and non_ff
    record(7, ok, f"{len(nodes)} FF handles: injective={injective}, order preserved and reflected={order}, "
                  f"{len(uppers)} Upper handles stay non-FF={non_ff}")


def test_criterion_8_end_ring_law():
    ars = structure(D4_tilde(), QQ)
    bad, n = [], 0
    for T in ars.tube_inventory().tubes:
        for ray in range(T.rank):
            for ln in range(1, 6):
                s = (ln - 1) // T.rank
                law = ars.end_ring_law(ars.realize(Reg(T.id, ray, ln)))
                n += 1
                if not (law["dim_end"] == s + 1 and law["nilpotency"] == s + 1 and law["truncated_polynomial"]):
                    bad.append((T.id, ray, ln))
    record(8, n == 30 and not bad, f"{n} tube modules, End = k[x]/(x^(s+1)) failures {bad}")


def test_criterion_9_compatibility_pipeline():
    t0 = time.time()
    fams = compatible_families()
    bad = []
    for name, F in fams.items():
        if len(F.assignments) > 3 or not is_compatible(F)["compatible"]:
            bad.append(name)
            continue
        rep = verify_main_theorem(F, 5)
        if not rep["ok"] or len(rep["samples"]) < 5:
            bad.append(name)
    Q = D4_tilde()
    rt = round_trip_constant(Q, QQ, parse_handle("Lambda", Q, QQ))["round_trip"]
    dt = time.time() - t0
    ok = len(fams) >= 10 and not bad and rt and dt < 300
    record(9, ok, f"{len(fams)} families, failures {bad}, constant tilting round trip={rt}, {dt:.1f}s")


def test_criterion_10_negative_controls():
    witnesses = {}
    for name in INCOMPATIBLE:
        rep = is_compatible(incompatible(name))
        if not rep["compatible"]:
            witnesses[name] = next(r["witness"] for r in rep["checks"] if not r["contained"])
    ok = len(INCOMPATIBLE) >= 5 and len(witnesses) == len(INCOMPATIBLE) and all(witnesses.values())
    record(10, ok, f"{len(witnesses)}/{len(INCOMPATIBLE)} rejected, witnesses {witnesses}")


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
