"""Restricting torsion classes from the closed point t = a to the generic point of k[t]."""

from tame_tors import QQ, function_field, kronecker, parse_handle, r_pq
from tame_tors.ar_structure import parse_point
from tame_tors.torsion import Tors

Q = kronecker()
K = function_field(QQ)

# Functorially finite classes pass through unchanged.
print(r_pq(parse_handle("FF(PP(1,1)+PP(2,2))", Q), 0, Q))

# A homogeneous point y over k(t) lies in the restriction iff it reduces into T at t = 0.
g = r_pq(parse_handle("Upper(I;hom=x)", Q), 0, Q)
print(g)
for y in ["x-t", "x-t-1", "x^2-t", "x-1/t"]:
    print(f"  {y:7s} ->", g.spec.hom.contains(parse_point(y, K)))
print("still not functorially finite:", not Tors(Q, K).is_functorially_finite(g)[0])
