import pytest

from families import (
    CONSTANTS,
    GENERATORS,
    INCOMPATIBLE,
    constant,
    generated_family,
    incompatible,
)
from tame_tors.ar_structure import parse_descriptor
from tame_tors.base_change_dvr import RQModule, parse_rqmodule
from tame_tors.compatibility import (
    GENERIC,
    CompatError,
    PrimeLabel,
    glue_witness,
    is_compatible,
    parse_family,
    phi_t,
    round_trip_constant,
    verify_main_theorem,
)
from tame_tors.exact_linalg import QQ
from tame_tors.quiver import kronecker
from tame_tors.reps import is_isomorphic, parse_rep
from tame_tors.torsion import Tors, parse_handle


@pytest.fixture(scope="module")
def kr_line():
    return generated_family("kr_line")


def test_phi_t_of_line(kr_line):
    assert str(kr_line.generic) == "Upper(I;hom=x-t)"
    assert {str(a): str(h) for a, h in kr_line.assignments.items()} == {"0": "Upper(I;hom=x)"}
    assert str(kr_line.default) == "Upper(I;hom=all)"


def test_phi_t_explicit_primes():
    X = parse_rqmodule(GENERATORS["kr_mix"])
    F = phi_t([X], primes=[0, 5])
    assert sorted(int(a) for a in F.assignments) == [0, 5]
    assert str(F.assignments[QQ(5)]) == "Upper(I;hom=x-5,x-6)"


def test_family_text_round_trip(kr_line):
    again = parse_family(kr_line.to_text())
    assert again.to_text() == kr_line.to_text()
    assert is_compatible(again)["compatible"]


@pytest.mark.parametrize("text", [
    "family\ngeneric = Lambda\ndefault = Lambda\n",  # no quiver
    GENERATORS["kr_s1"].split("ranks")[0] + "generic = Lambda\n",
    GENERATORS["kr_s1"].split("ranks")[0] + "generic = Lambda\nat 0 = Lambda\nat 0 = Lambda\ndefault = Lambda\n",
    GENERATORS["kr_s1"].split("ranks")[0] + "generic = Lambda\nsomewhere = Lambda\ndefault = Lambda\n",
])
def test_family_parse_errors(text):
    with pytest.raises(Exception):
        parse_family(text)


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_generated_families_compatible(name):
    assert is_compatible(generated_family(name))["compatible"]


@pytest.mark.parametrize("name", sorted(INCOMPATIBLE))
def test_incompatible_rejected(name):
    rep = is_compatible(incompatible(name))
    assert not rep["compatible"]
    assert any(r["witness"] for r in rep["checks"] if not r["contained"])
    with pytest.raises(CompatError):
        verify_main_theorem(incompatible(name), 2)


@pytest.mark.parametrize("name", ["kr_line", "kr_mix", "a2t_line"])
def test_verify_main_theorem(name):
    rep = verify_main_theorem(generated_family(name), 4)
    assert rep["ok"], rep


@pytest.mark.parametrize("name", sorted(CONSTANTS))
def test_constant_families(name):
    F = constant(name)
    assert is_compatible(F)["compatible"]
    assert verify_main_theorem(F, 3)["ok"]


def test_round_trip_constant():
    Q = kronecker()
    for s in ["Lambda", "FF(PP(1,1)+PP(2,2))", "FF(PP(2,0);supp=1)"]:
        assert round_trip_constant(Q, QQ, parse_handle(s, Q, QQ))["round_trip"], s


def test_glue_case1_is_constant(kr_line):
    Xp = Tors(kr_line.quiver, kr_line.K).realize(parse_descriptor("PI(1,1)", kr_line.K))
    gw = glue_witness(kr_line, Xp)
    assert gw.case == 1 and gw.ok
    assert gw.X.reduce(0).dims == Xp.dims


def test_glue_case2_with_correction(kr_line):
    Xp = parse_rep("dims 1 1\na = [[t]]\nb = [[t^2]]\n", kr_line.quiver, kr_line.K)
    gw = glue_witness(kr_line, Xp)
    assert gw.case == 2 and gw.ok
    assert gw.corrections and gw.corrections[0]["prime"] == "t"
    assert is_isomorphic(gw.X.generic(), Xp)[0]


def test_glue_uniserial(kr_line):
    Xp = Tors(kr_line.quiver, kr_line.K).realize(parse_descriptor("HomReg(x-t,3)", kr_line.K))
    gw = glue_witness(kr_line, Xp)
    assert gw.ok and gw.X.ranks == (3, 3)


def test_glue_decomposable(kr_line):
    Xp = parse_rep("dims 2 2\na = [[t,0],[0,1]]\nb = [[t^2,0],[0,t]]\n", kr_line.quiver, kr_line.K)
    gw = glue_witness(kr_line, Xp)
    assert gw.ok
    assert is_isomorphic(gw.X.generic(), Xp)[0]


def test_glue_preconditions(kr_line):
    tK = Tors(kr_line.quiver, kr_line.K)
    with pytest.raises(CompatError):
        glue_witness(kr_line, tK.realize(parse_descriptor("PP(1,0)", kr_line.K)))
    with pytest.raises(CompatError):
        glue_witness(kr_line, tK.realize(parse_descriptor("PI(1,0)", kr_line.K)), PrimeLabel(0))


def test_prime_labels():
    assert str(GENERIC) == "generic"
    assert str(PrimeLabel(QQ(0))) == "t"
    assert str(PrimeLabel(QQ(3))) == "t-3"
    assert str(PrimeLabel(QQ(-2))) == "t+2"


def test_constant_lattice_reduces_to_itself():
    Q = kronecker()
    M = Tors(Q, QQ).realize(parse_descriptor("PP(1,1)", QQ))
    X = RQModule.constant(M)
    for a in (0, 7):
        assert is_isomorphic(X.reduce(a), M)[0]
