"""Lattices over k[t]: Smith normal form at a point, and the matched filtrations
relating two reductions of generically isomorphic lattices.
"""

from tame_tors import function_field, kronecker, parse_rqmodule, snf_dvr, spread_iso, filtration_pair
from tame_tors.base_change_dvr import verify_snf
from tame_tors.exact_linalg import QQ

K = function_field(QQ)
t = K.t

A = [[t, 0], [1, t]]
res = snf_dvr(A, K)
print("A = P D Q with exponents", res.exponents, "; check:", verify_snf(A, res, K)["ok"])
print("at t = 1 the same matrix is a unit:", snf_dvr(A, K, at=1).exponents)

# Two lattices with the same generic fibre but different reductions at t = 0.
Q = kronecker()
X = parse_rqmodule("ranks 1 1\na = [[1]]\nb = [[t]]\n", Q)
Y = parse_rqmodule("ranks 1 1\na = [[t]]\nb = [[t^2]]\n", Q)
f = [[[1]], [[t]]]  # X -> Y over k(t)
print("isomorphic after inverting", spread_iso(X, Y, f)["r"])

print("reduction of X at 0:", [M for M in X.reduce(0).mats])
print("reduction of Y at 0:", [M for M in Y.reduce(0).mats])
mf = filtration_pair(X, Y, f)
for i, (a, b, w) in enumerate(mf.factors, 1):
    print(f"factor {i}: dims {list(a.dims)} vs {list(b.dims)}, witness is an iso: {w.is_iso()}")
