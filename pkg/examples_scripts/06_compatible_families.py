"""Families of torsion classes over k[t]: Phi_t of a lattice, compatibility, and
gluing a generic module back into a lattice with prescribed reductions.
"""

from tame_tors import glue_witness, is_compatible, parse_family, parse_rqmodule, phi_t, verify_main_theorem
from tame_tors.reps import parse_rep

X = parse_rqmodule("""vertices 2
arrow a 1 2
arrow b 1 2
ranks 2 2
a = [[1,0],[0,1]]
b = [[t,0],[0,t+1]]
""")
F = phi_t([X])
print(F.to_text())
print("compatible:", is_compatible(F)["compatible"])

# Glue the generic module at the point x = t+1 back into a lattice.  The chosen
# presentation vanishes at t = 0, so the naive lift needs a correction there.
Xp = parse_rep("dims 1 1\na = [[t]]\nb = [[t^2+t]]\n", F.quiver, F.K)
gw = glue_witness(F, Xp)
print(f"gluing case {gw.case}, corrections {gw.corrections}:")
print(gw.X.to_text())
for c in gw.certificates:
    print(f"  at {c['prime']}: reduction in {c['handle']}: {c['member']}")

print("sampled check of the whole family:", verify_main_theorem(F, 4)["ok"])

# Shrinking the class at t = 0 breaks compatibility, and the report says why.
bad = parse_family(F.to_text().replace("at 0 = Upper(I;hom=x,x-1)", "at 0 = Upper(I;hom=x-1)"))
print(is_compatible(bad))
