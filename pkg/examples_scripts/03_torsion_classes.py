"""Torsion classes: mutation of support tau-tilting pairs and the split between
functorially finite classes and the interval [I, I+R].
"""

from tame_tors import QQ, Tors, kronecker, parse_handle
from tame_tors.quiver import D4_tilde

Q = kronecker()
T = Tors(Q, QQ)

fr = T.enumerate_ftors(4)
print(f"{len(fr.nodes)} functorially finite classes within mutation depth 4:")
for h, d in zip(fr.nodes, fr.depth):
    print(f"  depth {d}: {h}")

# Classes that are not functorially finite are handled symbolically.
for s in ["Lambda", "Upper(I)", "Upper(I;hom=x,inf)", "Upper(I+R)"]:
    h = parse_handle(s, Q)
    rep = T.check_characterization(h)
    print(f"{s:22s} functorially finite: {rep['i_functorially_finite']}, all conditions agree: {rep['agree']}")

# Membership is decided exactly, module by module.
I_hom0 = parse_handle("Upper(I;hom=x)", Q)
for d in ["PI(1,0)", "HomReg(x,2)", "HomReg(x-1,1)", "PP(2,3)"]:
    from tame_tors.ar_structure import parse_descriptor

    print(f"{d} in {I_hom0}: {T.desc_member(I_hom0, parse_descriptor(d, QQ))}")

# On D4~ every tilting module has at most three regular summands.
fr6 = Tors(D4_tilde(), QQ).enumerate_ftors(4)
tilting = [h for h in fr6.nodes if not h.pair.supp and len(h.pair.modules) == 5]
print(f"D4~ depth 4: {len(tilting)} tilting modules, e.g. {tilting[-1]}")
