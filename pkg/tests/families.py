"""Torsion families used by the compatibility and acceptance tests."""

from tame_tors.base_change_dvr import parse_rqmodule
from tame_tors.compatibility import constant_family, parse_family, phi_t
from tame_tors.exact_linalg import QQ
from tame_tors.quiver import parse_quiver
from tame_tors.torsion import parse_handle

KR = "vertices 2\narrow a 1 2\narrow b 1 2\n"
D4 = "vertices 5\narrow a 2 1\narrow b 3 1\narrow c 4 1\narrow d 5 1\n"
A2T = "vertices 3\narrow a 1 2\narrow b 2 3\narrow c 1 3\n"

# families Φ_t(X) of a single lattice X
GENERATORS = {
    "kr_line": KR + "ranks 1 1\na = [[1]]\nb = [[t]]\n",
    "kr_sq": KR + "ranks 1 1\na = [[1]]\nb = [[t^2]]\n",
    "kr_p1": KR + "ranks 1 2\na = [[1],[0]]\nb = [[0],[1]]\n",
    "kr_s1": KR + "ranks 1 0\n",
    "kr_mix": KR + "ranks 2 2\na = [[1,0],[0,1]]\nb = [[t,0],[0,t+1]]\n",
    "d4_hom": D4 + "ranks 2 1 1 1 1\na = [[1],[0]]\nb = [[0],[1]]\nc = [[1],[1]]\nd = [[1],[t]]\n",
    "a2t_line": A2T + "ranks 1 1 1\na = [[1]]\nb = [[1]]\nc = [[t]]\n",
}

# (quiver text, handle, listed points) for constant families
CONSTANTS = {
    "kr_upper_I": (KR, "Upper(I)", (0,)),
    "d4_lambda": (D4, "Lambda", (0, 1)),
    "kr_tilting": (KR, "FF(PP(1,1)+PP(2,2))", (0, 2)),
}

INCOMPATIBLE = {
    "lambda_at0": KR + "generic = Lambda\nat 0 = FF(PP(2,0);supp=1)\ndefault = Lambda\n",
    "hom_lost": KR + "generic = Upper(I;hom=x-t)\nat 0 = Upper(I)\ndefault = Upper(I;hom=all)\n",
    "default_small": KR + "generic = Upper(I;hom=all)\ndefault = Upper(I;hom=x)\n",
    "pp_lost": KR + "generic = Lambda\ndefault = Upper(I;hom=all)\n",
    "tube_lost": D4 + "generic = Upper(I;tube0=whole)\nat 0 = Upper(I)\ndefault = Upper(I;tube0=whole)\n",
}


def generated_family(name):
    return phi_t([parse_rqmodule(GENERATORS[name])])


def constant(name):
    qtext, h, pts = CONSTANTS[name]
    Q = parse_quiver(qtext)
    return constant_family(Q, QQ, parse_handle(h, Q, QQ), primes=pts)


def incompatible(name):
    return parse_family(INCOMPATIBLE[name])


def compatible_families():
    out = {n: generated_family(n) for n in GENERATORS}
    out.update({n: constant(n) for n in CONSTANTS})
    return out
