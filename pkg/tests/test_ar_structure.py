import pytest

from tame_tors.ar_structure import (
    INF,
    PI,
    PP,
    DescriptorError,
    HomReg,
    Point,
    Reg,
    parse_descriptor,
    parse_point,
    structure,
)
from tame_tors.exact_linalg import GF, QQ
from tame_tors.quiver import A2_tilde, D4_tilde, kronecker, linear_A
from tame_tors.reps import direct_sum, is_indecomposable, is_isomorphic, tau


def test_d4_tubes():
    inv = structure(D4_tilde(), QQ).tube_inventory()
    assert inv.ranks == [2, 2, 2]
    delta = D4_tilde().delta
    for T in inv.tubes:
        a, b = T.dims
        assert tuple(x + y for x, y in zip(a, b)) == delta


def test_a2t_and_kronecker_tubes():
    assert structure(A2_tilde(), QQ).tube_inventory().ranks == [2]
    assert structure(kronecker(), QQ).tube_inventory().ranks == []


def test_tau_cycles_regular_simples():
    ars = structure(D4_tilde(), QQ)
    for T in ars.tube_inventory().tubes:
        for i in range(T.rank):
            S = ars.realize(Reg(T.id, i, 1))
            assert is_isomorphic(tau(S), ars.realize(Reg(T.id, (i + 1) % T.rank, 1)))[0]


@pytest.mark.parametrize("Q", [kronecker(), D4_tilde(), A2_tilde()])
def test_realize_describe_round_trip(Q):
    ars = structure(Q, QQ)
    for d in ars.indecomposables(2 * sum(Q.delta)):
        X = ars.realize(d)
        assert X.dims == ars.dim_of(d)
        assert is_indecomposable(X)
        got = ars.describe(X)
        if isinstance(d, HomReg):
            assert isinstance(got, HomReg) and got.length == d.length and ars._same_point(got.point, d.point)
        else:
            assert got == d


def test_components():
    ars = structure(kronecker(), QQ)
    assert ars.component_of(ars.realize(PP(1, 2))) == "P"
    assert ars.component_of(ars.realize(PI(2, 1))) == "I"
    assert ars.component_of(ars.realize(HomReg(Point.rational(3, QQ), 1))) == "R"
    with pytest.raises(DescriptorError):
        ars.component_of(direct_sum([ars.realize(PP(1, 0)), ars.realize(PP(2, 0))]))


def test_regular_length_chain():
    ars = structure(D4_tilde(), QQ)
    ln, chain = ars.regular_length(ars.realize(Reg(0, 1, 3)))
    assert ln == 3 and len(chain) == 4 and chain[-1] == ars.dim_of(Reg(0, 1, 3))
    ln, chain = ars.regular_length(ars.realize(HomReg(Point.rational(3, QQ), 2)))
    assert ln == 2 and chain[-1] == (4, 2, 2, 2, 2)


def test_end_ring_law_small():
    ars = structure(D4_tilde(), QQ)
    rep = ars.end_ring_law(ars.realize(Reg(1, 0, 3)))
    assert rep["dim_end"] == 2 and rep["nilpotency"] == 2 and rep["truncated_polynomial"]


def test_tau_minus_sincere_and_hom_nonvanishing():
    ars = structure(D4_tilde(), QQ)
    # P(1) is the simple at the sink; its τ⁻-shift is sincere and stays so
    assert not ars.is_tau_minus_sincere(PP(1, 0))
    assert ars.is_tau_minus_sincere(PP(1, 1))
    rep = ars.hom_nonvanishing_check(PP(1, 1), PI(1, 0), HomReg(Point.rational(5, QQ), 1))
    assert rep["claim_a"] is True and rep["claim_b"] is True


def test_descriptor_parsing():
    F = QQ
    assert parse_descriptor("PP(1,2)", F) == PP(1, 2)
    assert parse_descriptor("Reg(0,1,3)", F) == Reg(0, 1, 3)
    h = parse_descriptor("HomReg(x-3,2)", F)
    assert h.length == 2 and str(h.point) == "x-3"
    assert parse_point("inf", F) == INF
    with pytest.raises(DescriptorError):
        parse_descriptor("Foo(1)", F)


def test_dynkin_indecomposables_count():
    # A3 has 6 positive roots
    assert len(structure(linear_A(3), QQ).indecomposables(10)) == 6


def test_finite_field_inventory():
    assert structure(D4_tilde(), GF(5)).tube_inventory().ranks == [2, 2, 2]
