import random

import pytest

from pairgen import random_pair
from tame_tors.ar_structure import Point, parse_point
from tame_tors.base_change_dvr import (
    DVRError,
    RQModule,
    check_tau_base_change,
    check_tube_bijection,
    filtration_pair,
    function_field,
    minors_exponents,
    parse_rqmodule,
    r_pq,
    rule_parser,
    snf_dvr,
    spread_iso,
    verify_snf,
)
from tame_tors.exact_linalg import QQ
from tame_tors.quiver import format_quiver, kronecker
from tame_tors.reps import random_rep
from tame_tors.torsion import FF, Tors, Upper, parse_handle

K = function_field(QQ)
t = K.t


@pytest.mark.parametrize("A, exps", [
    ([[t, 0], [1, t]], [0, 2]),
    ([[t, 0], [0, t]], [1, 1]),
    ([[1, t], [t, 1]], [0, 0]),
    ([[t ** 3, t], [0, t ** 2]], [1, 4]),
])
def test_snf_examples(A, exps):
    res = snf_dvr(A, K)
    assert res.exponents == exps
    chk = verify_snf(A, res, K)
    assert chk["ok"], chk
    assert minors_exponents(A, K) == exps


def test_snf_away_from_origin():
    A = [[t - 2, 0], [1, (t - 2) * t]]
    res = snf_dvr(A, K, at=2)
    assert res.exponents == [0, 2]
    assert verify_snf(A, res, K)["ok"]
    # at the origin only t divides the second invariant factor
    assert snf_dvr(A, K, at=0).exponents == [0, 1]


def test_snf_blocks():
    assert snf_dvr([[t, 0, 0], [0, t, 0], [0, 0, 1]], K).blocks == [(0, 1), (1, 2)]


def test_snf_rejects_bad_input():
    with pytest.raises(DVRError):
        snf_dvr([[t, t], [1, 1]], K)
    with pytest.raises(DVRError):
        snf_dvr([[1 / t, 0], [0, 1]], K)
    with pytest.raises(DVRError):
        snf_dvr([[1, 0, 0], [0, 1, 0]], K)


def test_rqmodule_parse_and_reduce(kron):
    X = parse_rqmodule("rqmodule\nfield QQ\nranks 1 1\na = [[1]]\nb = [[t-2]]\n", kron)
    assert X.ranks == (1, 1)
    assert X.reduce(2).mats[1] == [[QQ(0)]]
    again = parse_rqmodule(X.to_text(), kron)
    assert again.generic().mats == X.generic().mats


def test_rqmodule_inline_quiver():
    Q = kronecker()
    X = parse_rqmodule(format_quiver(Q) + "\nranks 1 1\na = [[1]]\nb = [[t]]\n")
    assert X.quiver == Q


def test_rqmodule_rejects_fractions(kron):
    with pytest.raises(DVRError):
        parse_rqmodule("ranks 1 1\na = [[1/t]]\nb = [[1]]\n", kron)
    with pytest.raises(DVRError):
        parse_rqmodule("ranks 1 1\na = [[1]]\nb = [[1]]\n")


def test_spread_iso(kron):
    X = RQModule(kron, QQ, [1, 1], [[[1]], [[t]]])
    Y = RQModule(kron, QQ, [1, 1], [[[t]], [[t ** 2]]])
    rep = spread_iso(X, Y, [[[1]], [[t]]])
    assert rep["r"] == "t"
    assert rep["iso_verified"] and rep["entries_in_localization"]
    # the inverse direction is accepted too
    assert spread_iso(X, Y, [[[1]], [[1 / t]]])["r"] == "t"
    with pytest.raises(DVRError):
        spread_iso(X, Y, [[[1]], [[1]]])


def test_filtration_simple(kron):
    X = RQModule(kron, QQ, [1, 1], [[[1]], [[t]]])
    Y = RQModule(kron, QQ, [1, 1], [[[t]], [[t ** 2]]])
    mf = filtration_pair(X, Y, [[[1]], [[t]]])
    s = mf.summary()
    assert s["factors_matched"]
    assert mf.m >= 1
    # both reductions have the same composition factors in total
    tot = lambda side: [sum(f[side][v] for f in s["factor_dims"]) for v in range(2)]
    assert tot(0) == tot(1) == [1, 1]


@pytest.mark.parametrize("seed", range(8))
def test_random_pairs(kron, d4t, seed):
    rng = random.Random(seed)
    Q = kron if seed % 2 else d4t
    ranks = [rng.randint(1, 3) for _ in Q.vertices]
    X, Y, f, exps = random_pair(Q, ranks, rng)
    for v in Q.vertices:
        res = snf_dvr(f[v - 1], K)
        assert res.exponents == sorted(exps[v])
        assert verify_snf(f[v - 1], res, K)["ok"]
    assert filtration_pair(X, Y, f).summary()["factors_matched"]


@pytest.mark.parametrize("fixture", ["d4t", "a2t", "kron"])
def test_tube_bijection(fixture, request):
    Q = request.getfixturevalue(fixture)
    rep = check_tube_bijection(Q, 2 * sum(Q.quiver_type.delta))
    assert rep["ok"], rep["failures"]


def test_tau_commutes_with_base_change(kron):
    rng = random.Random(3)
    for _ in range(4):
        X = random_rep(kron, QQ, [2, 3], rng)
        assert check_tau_base_change(X)["isomorphic"]


def test_rpq_ff_passthrough(kron):
    h = parse_handle("FF(PP(1,0)+PP(2,1))", kron)
    g = r_pq(h, 0, kron)
    assert isinstance(g, FF) and g.pair == h.pair


def test_rpq_upper(kron):
    g = r_pq(parse_handle("Upper(I;hom=x)", kron), 0, kron)
    assert isinstance(g, Upper)
    hp = g.spec.hom
    assert hp.contains(parse_point("x-t", K))
    assert not hp.contains(parse_point("x-t-1", K))
    assert hp.contains(Point.rational(0, K))
    assert not hp.contains(Point.rational(1, K))
    # the rule survives a print/parse round trip
    again = parse_handle(str(g), kron, K, rule_parser=rule_parser)
    assert again.spec.hom.contains(parse_point("x-t", K))
    assert not again.spec.hom.contains(parse_point("x-t-1", K))


def test_rpq_extremes(kron):
    assert str(r_pq(parse_handle("Upper(I)", kron), 0, kron)) == "Upper(I)"
    assert str(r_pq(parse_handle("Upper(I+R)", kron), 0, kron)) == "Upper(I;hom=all)"
    assert not Tors(kron, K).is_functorially_finite(r_pq(parse_handle("Upper(I)", kron), 0, kron))[0]
