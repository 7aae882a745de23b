import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tame_tors.exact_linalg import GF, QQ, det, random_matrix
from tame_tors.quiver import D4_tilde, kronecker, linear_A
from tame_tors.reps import (
    RepError,
    decompose,
    direct_sum,
    ext1_dim,
    format_rep,
    gen_membership,
    hom_dim,
    hom_space,
    injective,
    is_indecomposable,
    is_isomorphic,
    parse_rep,
    projective,
    random_rep,
    simple,
    tau,
    tau_inv,
)

QUIVERS = [linear_A(2), kronecker(), D4_tilde()]


def dims_for(Q, rng, total):
    d = [0] * Q.n
    for _ in range(total):
        d[rng.randrange(Q.n)] += 1
    return d


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 4))
def test_euler_identity(qi, seed, n1, n2):
    Q = QUIVERS[qi]
    rng = random.Random(seed)
    X = random_rep(Q, QQ, dims_for(Q, rng, n1), rng)
    Y = random_rep(Q, QQ, dims_for(Q, rng, n2), rng)
    e = Q.euler_form(X.dims, Y.dims)
    assert hom_dim(X, Y) - ext1_dim(X, Y) == e
    assert ext1_dim(X, Y, "ar") == ext1_dim(X, Y)


def test_hom_space_elements_are_morphisms():
    Q = kronecker()
    P1, P2 = projective(Q, QQ, 1), projective(Q, QQ, 2)
    H = hom_space(P2, P1)
    assert len(H) == 2 and all(h.is_morphism() for h in H)
    assert hom_dim(P1, P2) == 0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_decompose_witness(seed):
    rng = random.Random(seed)
    Q = kronecker()
    X = random_rep(Q, QQ, [rng.randint(0, 3), rng.randint(0, 3)], rng)
    if X.total_dim == 0:
        return
    dec = decompose(X)
    assert dec.witness.is_morphism() and dec.witness.is_iso()
    assert all(is_indecomposable(Y) for Y in dec.expanded())
    assert [sum(x) for x in zip(*[Y.dims for Y in dec.expanded()])] == list(X.dims)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_isomorphic_under_base_change(seed):
    rng = random.Random(seed)
    Q = D4_tilde()
    X = random_rep(Q, QQ, [2, 1, 1, 1, 1], rng)
    B = []
    for d in X.dims:
        while True:
            M = random_matrix(d, d, QQ, rng)
            if det(M, QQ) != 0:
                break
        B.append(M)
    Y = X.change_basis(B)
    ok, iso = is_isomorphic(X, Y)
    assert ok and iso.is_morphism() and iso.is_iso()


def test_non_isomorphic():
    Q = kronecker()
    assert not is_isomorphic(projective(Q, QQ, 1), injective(Q, QQ, 2))[0]


def test_krull_schmidt_multiplicity():
    Q = kronecker()
    S2 = simple(Q, QQ, 2)
    dec = decompose(direct_sum([S2, projective(Q, QQ, 1), S2]))
    assert sorted(m for _, m in dec.summands) == [1, 2]


@pytest.mark.parametrize("F", [QQ, GF(3)])
def test_tau_on_kronecker(F):
    Q = kronecker()
    P1 = projective(Q, F, 1)
    assert tau(P1).total_dim == 0
    X = tau_inv(P1)
    assert X.dims == (3, 4)
    assert is_isomorphic(tau(X), P1)[0]
    I2 = injective(Q, F, 2)
    assert tau_inv(I2).total_dim == 0


def test_tau_dimension_follows_coxeter():
    Q = D4_tilde()
    for v in Q.vertices:
        X = tau_inv(projective(Q, QQ, v))
        assert X.dims == Q.coxeter_transform(Q.dim_projective(v), "inverse")


def test_gen_membership():
    Q = kronecker()
    P1 = projective(Q, QQ, 1)
    assert gen_membership(P1, simple(Q, QQ, 1))
    assert not gen_membership(simple(Q, QQ, 1), simple(Q, QQ, 2))
    assert gen_membership(direct_sum([P1, P1]), tau_inv(P1))


def test_parse_format_round_trip():
    Q = kronecker()
    X = parse_rep("dims 1 2\na = [[1],[0]]\nb = [[0],[1]]\n", Q)
    assert parse_rep(format_rep(X), Q) == X
    assert is_isomorphic(X, projective(Q, QQ, 1))[0]


def test_parse_errors():
    Q = kronecker()
    with pytest.raises(RepError):
        parse_rep("a = [[1]]\n", Q)
    with pytest.raises(RepError):
        parse_rep("dims 1 1\nz = [[1]]\n", Q)
    with pytest.raises(RepError):
        parse_rep("dims 1 1\na = [[1, 2]]\n", Q)
