import io
import json

import pytest

from families import KR
from tame_tors import __version__
from tame_tors.cli import run

D4 = "vertices 5\narrow a 2 1\narrow b 3 1\narrow c 4 1\narrow d 5 1\n"
A2 = "vertices 2\narrow a 1 2\n"


@pytest.fixture
def files(tmp_path):
    content = {
        "kron.quiver": KR,
        "d4.quiver": D4,
        "a2.quiver": A2,
        "p1.rep": "dims 1 2\na = [[1],[0]]\nb = [[0],[1]]\n",
        "m.mat": "[[t,0],[1,t]]\n",
        "X.rq": KR + "ranks 1 1\na = [[1]]\nb = [[t]]\n",
        "Y.rq": KR + "ranks 1 1\na = [[t]]\nb = [[t^2]]\n",
        "fam.txt": "family\nfield QQ\n" + KR + "generic = Upper(I;hom=x-t)\nat 0 = Upper(I;hom=x)\ndefault = Upper(I;hom=all)\n",
        "bad.txt": "family\n" + KR + "generic = Lambda\nat 0 = FF(PP(2,0);supp=1)\ndefault = Upper(I;hom=all)\n",
        "xp.rep": "dims 1 1\na = [[t+1]]\nb = [[t^2+t]]\n",
    }
    for name, text in content.items():
        (tmp_path / name).write_text(text)
    return lambda name: str(tmp_path / name)


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue().strip()


def test_classify(files):
    assert cli("classify", files("kron.quiver")) == (0, "ExtendedDynkin, delta=[1,1]")


def test_json_report(files, tmp_path):
    dest = tmp_path / "r.json"
    code, text = cli("--json", "--output", str(dest), "classify", files("d4.quiver"))
    assert code == 0
    rep = json.loads(text)
    assert set(rep) == {"command", "summary", "version", "seed", "report"}
    assert rep["version"] == __version__
    assert rep["report"]["delta"] == [2, 1, 1, 1, 1]
    assert json.loads(dest.read_text()) == rep


def test_indec_and_tau(files):
    assert cli("indec", files("kron.quiver"), "--bound", "4") == (0, "14 indecomposables up to dimension 4")
    assert cli("tau", files("kron.quiver"), files("p1.rep"), "--inverse") == (0, "tau_inv: dims=[3, 4]")


def test_tubes(files):
    assert cli("tubes", files("d4.quiver")) == (0, "ranks=[2, 2, 2]")
    assert cli("tubes", files("a2.quiver"))[0] == 2


def test_tors(files):
    assert cli("tors", "enumerate", files("kron.quiver"), "--depth", "3") == (0, "7 torsion classes at depth <= 3")
    assert cli("tors", "check", files("kron.quiver"), "--handle", "Lambda") == (0, "functorially_finite=true")
    assert cli("tors", "check", files("kron.quiver"), "--handle", "Upper(I)") == (0, "functorially_finite=false")
    assert cli("tors", "check", files("kron.quiver"), "--handle", "FF(PP(1,0))")[0] == 1
    assert cli("tors", "check", files("kron.quiver"))[0] == 1


def test_snf_and_filtration(files):
    assert cli("snf", files("m.mat")) == (0, "exponents=[0, 2]")
    assert cli("filtration", files("X.rq"), files("Y.rq")) == (0, "m=2, factors matched")


def test_rpq(files):
    code, text = cli("rpq", files("kron.quiver"), "--handle", "Upper(I;hom=x)")
    assert code == 0 and text.startswith("Upper(I;hom=reduce(a=0:")
    assert cli("rpq", files("kron.quiver"), "--handle", "Lambda")[1] == "FF(PP(1,0)+PP(2,0))"


def test_compat(files, tmp_path):
    assert cli("compat", "check", files("fam.txt")) == (0, "compatible=true")
    assert cli("compat", "check", files("bad.txt")) == (0, "compatible=false")
    assert cli("compat", "witness", files("fam.txt"), "--rep", files("xp.rep")) == (0, "case=2, ok=true")
    code, text = cli("--json", "compat", "phit", files("X.rq"))
    assert code == 0
    fam = tmp_path / "phit.txt"
    fam.write_text(json.loads(text)["report"]["family"])
    assert cli("compat", "check", str(fam)) == (0, "compatible=true")


def test_field_from_environment(files, monkeypatch):
    monkeypatch.setenv("TAME_TORS_FIELD", "GF(5)")
    code, text = cli("--json", "tau", files("kron.quiver"), files("p1.rep"), "--inverse")
    assert code == 0 and "field GF(5)" in json.loads(text)["report"]["representation"]
    monkeypatch.setenv("TAME_TORS_FIELD", "GF(6)")
    assert cli("classify", files("kron.quiver"))[0] == 0  # classify ignores the field
    assert cli("tubes", files("kron.quiver"))[0] == 1


def test_parse_errors(files):
    assert cli("classify", files("missing.quiver"))[0] == 1
    assert cli("snf", files("kron.quiver"))[0] == 1
    assert cli("no-such-command")[0] == 1
