import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tame_tors.exact_linalg import (
    GF,
    INF,
    QQ,
    Poly,
    RationalFunctionField,
    det,
    identity,
    inverse,
    matmul,
    matvec,
    nullspace,
    poly_gcd,
    rank,
    residue,
    solve_linear,
    valuation,
)

small = st.integers(min_value=-4, max_value=4)


def mat(n, m):
    return st.lists(st.lists(small, min_size=m, max_size=m), min_size=n, max_size=n)


@settings(max_examples=60, deadline=None)
@given(mat(3, 4))
def test_rank_nullity(A):
    A = [[QQ(x) for x in r] for r in A]
    ker = nullspace(A, QQ, 4)
    assert rank(A, QQ) + len(ker) == 4
    for v in ker:
        assert all(x == 0 for x in matvec(A, v, QQ))


@settings(max_examples=60, deadline=None)
@given(mat(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solve_linear_consistent(A, x0):
    A = [[QQ(x) for x in r] for r in A]
    b = matvec(A, [QQ(x) for x in x0], QQ)
    sol = solve_linear(A, b, QQ)
    assert sol.consistent
    assert matvec(A, sol.particular, QQ) == b


def test_solve_linear_inconsistent():
    sol = solve_linear([[1, 1], [2, 2]], [1, 3], QQ)
    assert not sol.consistent


@settings(max_examples=40, deadline=None)
@given(mat(3, 3), mat(3, 3))
def test_det_multiplicative(A, B):
    A = [[QQ(x) for x in r] for r in A]
    B = [[QQ(x) for x in r] for r in B]
    assert det(matmul(A, B, QQ), QQ) == det(A, QQ) * det(B, QQ)


@settings(max_examples=40, deadline=None)
@given(mat(3, 3))
def test_inverse_over_gf7(A):
    F = GF(7)
    A = [[F(x) for x in r] for r in A]
    if det(A, F) == F.zero:
        return
    assert matmul(A, inverse(A, F), F) == identity(3, F)


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=1, max_size=5), st.lists(small, min_size=2, max_size=4))
def test_poly_division(a, b):
    pa, pb = Poly(QQ, a), Poly(QQ, b)
    if pb.is_zero():
        return
    q, r = pa.divmod(pb)
    assert q * pb + r == pa
    assert r.is_zero() or r.degree < pb.degree


def test_gcd():
    x = Poly.x(QQ)
    g = poly_gcd((x - 1) * (x + 2), (x - 1) * (x - 3))
    assert g == (x - 1).monic()


def test_valuation_and_residue():
    K = RationalFunctionField(QQ)
    t = K.t
    assert valuation(t ** 3 / (t + 1)) == 3
    assert valuation((t - 2) ** 2, at=QQ(2)) == 2
    assert valuation(1 / t) == -1
    assert valuation(K.zero) == INF
    assert residue((t + 3) / (t + 1)) == 3
    with pytest.raises(ValueError):
        residue(1 / t)


def test_parse_ratfunc():
    K = RationalFunctionField(QQ)
    assert K("t^2 - 1") / K("t+1") == K("t-1")


def test_prime_field_arithmetic():
    F = GF(5)
    assert F(3) * F(2) == F(1)
    assert F(2) / F(3) == F(4)
    with pytest.raises(Exception):
        GF(6)
