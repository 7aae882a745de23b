import pytest

from tame_tors.quiver import (
    A2_tilde,
    D4_tilde,
    Quiver,
    QuiverError,
    classify,
    format_quiver,
    kronecker,
    linear_A,
    parse_quiver,
)


def test_classify_types():
    assert classify(linear_A(4)).tag == "Dynkin"
    assert classify(Quiver(4, [("a", 1, 2), ("b", 2, 3), ("c", 4, 2)])).tag == "Dynkin"  # D4
    qt = classify(D4_tilde())
    assert qt.tag == "ExtendedDynkin" and qt.delta == (2, 1, 1, 1, 1)
    assert classify(kronecker()).delta == (1, 1)
    assert classify(A2_tilde()).delta == (1, 1, 1)
    assert classify(kronecker(3)).tag == "Wild"


def test_type_string():
    assert str(kronecker().quiver_type) == "ExtendedDynkin, delta=[1,1]"
    assert str(linear_A(2).quiver_type) == "Dynkin"


def test_cycle_rejected():
    with pytest.raises(QuiverError):
        Quiver(2, [("a", 1, 2), ("b", 2, 1)])


def test_parse_round_trip():
    Q = D4_tilde()
    assert parse_quiver(format_quiver(Q)) == Q
    with pytest.raises(QuiverError):
        parse_quiver("arrow a 1 2\n")
    with pytest.raises(QuiverError):
        parse_quiver("vertices 2\nedge a 1 2\n")


def test_euler_form_kronecker():
    Q = kronecker()
    assert Q.euler_form((1, 0), (0, 1)) == -2
    assert Q.tits_form((1, 1)) == 0


@pytest.mark.parametrize("Q", [kronecker(), D4_tilde(), A2_tilde(), linear_A(3)])
def test_coxeter_projective_to_injective(Q):
    for i in Q.vertices:
        assert Q.coxeter_transform(Q.dim_projective(i)) == tuple(-x for x in Q.dim_injective(i))
        d = Q.dim_projective(i)
        assert Q.coxeter_transform(Q.coxeter_transform(d), "inverse") == d


def test_defect_signs():
    Q = D4_tilde()
    for i in Q.vertices:
        assert Q.defect(Q.dim_projective(i)) < 0
        assert Q.defect(Q.dim_injective(i)) > 0
    assert Q.defect(Q.delta) == 0


def test_coxeter_period():
    assert kronecker().coxeter_period == 1
    assert D4_tilde().coxeter_period == 2
