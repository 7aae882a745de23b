"""Representations of the Kronecker quiver: classification, Hom/Ext, the AR translate.

Run with ``python examples_scripts/01_representations.py``.
"""

from tame_tors import QQ, decompose, ext1_dim, hom_space, kronecker, parse_rep, structure
from tame_tors.reps import ar_translate, format_rep, hom_dim

Q = kronecker()
print("quiver type:", Q.quiver_type)

# The projective at the source has dimension vector (1, 2).
P1 = parse_rep("dims 1 2\na = [[1],[0]]\nb = [[0],[1]]\n", Q, QQ)
S2 = parse_rep("dims 0 1\n", Q, QQ)
print("Hom(S2, P1) has dimension", len(hom_space(S2, P1)))
print("Ext^1(P1, S2) =", ext1_dim(P1, S2), " Euler form:", Q.euler_form(P1.dims, S2.dims))

# Going along the preprojective component with the inverse AR translate.
X = P1
for k in range(3):
    print(f"tau^-{k} P1 has dims {list(X.dims)}")
    X = ar_translate(X, "tau_inv")

# A random-looking module splits into named indecomposables.
M = parse_rep("dims 2 2\na = [[1,0],[0,1]]\nb = [[3,0],[0,0]]\n", Q, QQ)
ars = structure(Q, QQ)
for Y, mult in decompose(M).summands:
    print(f"summand {ars.describe(Y)} x{mult}, component {ars.component_of(Y)}")

# The same literal over a prime field.
from tame_tors import GF  # noqa: E402

Mp = parse_rep(format_rep(M).replace("field QQ", "field GF(3)"), Q, GF(3))
print("over GF(3) the b-map is", Mp.mats[1], "and dim End =", hom_dim(Mp, Mp))
