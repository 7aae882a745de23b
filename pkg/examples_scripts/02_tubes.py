"""The regular part of D4~: three tubes of rank two, and the endomorphism rings of
their modules.
"""

from tame_tors import QQ, D4_tilde, structure
from tame_tors.ar_structure import HomReg, Point, Reg

Q = D4_tilde()
ars = structure(Q, QQ)
inv = ars.tube_inventory()
print("null root:", Q.quiver_type.delta)
for T, p in zip(inv.tubes, inv.bad_points):
    print(f"tube {T.id}: rank {T.rank} at the point {p}, regular simples {[list(d) for d in T.dims]}")

# A module of regular length l in a tube of rank r, with l = s*r + t and 1 <= t <= r,
# has End = k[x]/(x^(s+1)).
for ln in range(1, 6):
    law = ars.end_ring_law(ars.realize(Reg(0, 0, ln)))
    print(f"Reg(0,0,{ln}): dim End = {law['dim_end']}, nilpotency of the radical = {law['nilpotency']}")

# Homogeneous tubes sit at every other closed point; this one lives at x = 3.
H = ars.realize(HomReg(Point.rational(3, QQ), 2))
print("HomReg(x-3,2) dims", list(H.dims), "regular length", ars.regular_length(H)[0])
