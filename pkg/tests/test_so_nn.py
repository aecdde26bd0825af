from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from nctorus.errors import ActionUndefined, BadP, InvariantViolation, NotSkewIntegral, NotUnimodular
from nctorus.linalg import identity, matmul, transpose
from nctorus.skewmat import SkewMatrix, index_tuples, standard_Z
from nctorus.so_nn import (
    BlockElement,
    act_on_theta,
    canonical_sigma_permutation,
    compose,
    extension_condition,
    identity_element,
    make_g_I_sigma,
    make_mu,
    make_rho,
    make_sigma,
    permutation_matrix,
)

W4 = [[0, -1], [1, 0]]


def rational_theta(n, vals):
    it = iter(vals)
    return SkewMatrix.from_upper(n, {(i, j): next(it) for i in range(1, n + 1) for j in range(i + 1, n + 1)})


def neg_id(n):
    return [[-1 if i == j else 0 for j in range(n)] for i in range(n)]


def test_rho_examples():
    assert make_rho(identity(2)) == identity_element(2)
    g = make_rho(W4)
    assert g.A == g.D == ((0, -1), (1, 0))
    assert make_rho([[1, 1], [0, 1]]).D == ((1, 0), (-1, 1))
    with pytest.raises(NotUnimodular):
        make_rho([[2, 0], [0, 1]])


def test_mu_examples():
    assert make_mu([[0, 0], [0, 0]]) == identity_element(2)
    assert make_mu(standard_Z(2)).B == ((0, 1), (-1, 0))
    with pytest.raises(NotSkewIntegral):
        make_mu([[0, Fraction(1, 2)], [Fraction(-1, 2), 0]])


def test_sigma_examples():
    g = make_sigma(2, 1)
    assert g.A == g.D == ((0, 0), (0, 0))
    assert g.B == g.C == ((1, 0), (0, 1))
    assert make_sigma(3, 1).A == ((0, 0, 0), (0, 0, 0), (0, 0, 1))
    for n in range(2, 7):
        for p in range(1, n // 2 + 1):
            s = make_sigma(n, p)
            assert compose(s, s) == identity_element(n)
    with pytest.raises(BadP):
        make_sigma(3, 2)


def test_invalid_block_element():
    with pytest.raises(InvariantViolation):
        BlockElement(1, [[2]], [[0]], [[0]], [[1]])


def test_action_examples():
    theta = SkewMatrix.from_upper(2, {(1, 2): Fraction(1, 3)})
    assert act_on_theta(make_sigma(2, 1), theta) == SkewMatrix.from_upper(2, {(1, 2): -3})
    assert act_on_theta(make_mu(standard_Z(2)), theta) == theta + standard_Z(2)
    R = [[1, 1], [0, 1]]
    assert act_on_theta(make_rho(R), theta).rows() == matmul(matmul(R, theta.rows()), transpose(R))
    with pytest.raises(ActionUndefined):
        act_on_theta(make_sigma(2, 1), SkewMatrix.zeros(2))


@given(st.lists(st.integers(-6, 6), min_size=6, max_size=6), st.integers(1, 5),
       st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_action_composes(vals, den, nvals):
    theta = rational_theta(4, [Fraction(v, den) for v in vals])
    g = compose(make_rho([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 1, 1]]), make_sigma(4, 1))
    h = make_mu(rational_theta(4, nvals))
    try:
        inner = act_on_theta(h, theta)
        expected = act_on_theta(g, inner)
    except ActionUndefined:
        return
    assert act_on_theta(compose(g, h), theta) == expected


@given(st.lists(st.integers(-6, 6), min_size=3, max_size=3), st.integers(1, 5))
def test_inverse_undoes_action(vals, den):
    theta = rational_theta(3, [Fraction(v, den) for v in vals])
    g = make_sigma(3, 1)
    try:
        moved = act_on_theta(g, theta)
    except ActionUndefined:
        return
    assert act_on_theta(g.inverse(), moved) == theta


def test_canonical_permutations():
    assert canonical_sigma_permutation((1, 2), 4) == (1, 2, 3, 4)
    assert canonical_sigma_permutation((3, 4), 4) == (3, 4, 1, 2)
    assert canonical_sigma_permutation((1, 3), 4) == (1, 3, 2, 4)


def test_permutation_matrix_moves_entries():
    # R theta R^t lists theta on I first
    theta = SkewMatrix.symbolic(4)
    sigma = (3, 4, 1, 2)
    R = permutation_matrix(sigma)
    moved = matmul(matmul(R, theta.rows()), transpose(R))
    for k in range(4):
        for l in range(4):
            assert moved[k][l] == theta[sigma[k] - 1, sigma[l] - 1]


def test_g_I_sigma_examples():
    assert make_g_I_sigma((1, 2), 2) == make_sigma(2, 1)
    expected = compose(make_sigma(4, 1), make_rho(permutation_matrix((3, 4, 1, 2))))
    assert make_g_I_sigma((3, 4), 4) == expected


@pytest.mark.parametrize("n", range(2, 7))
def test_g_I_sigma_in_group(n):
    for I in index_tuples(n):
        g = make_g_I_sigma(I, n)
        assert g.violations() == []
        assert compose(g, g.inverse()) == identity_element(n)


def test_g_I_sigma_moves_minor_to_corner():
    # the upper-left block of R theta R^t is theta restricted to I
    theta = rational_theta(4, [Fraction(k, 7) for k in range(1, 7)])
    for I in index_tuples(4):
        R = permutation_matrix(canonical_sigma_permutation(I, 4))
        moved = matmul(matmul(R, theta.rows()), transpose(R))
        k = len(I)
        assert [r[:k] for r in moved[:k]] == theta.submatrix(I).rows()


def test_extension_examples():
    for n in range(2, 6):
        assert all(extension_condition(neg_id(n), I) for I in index_tuples(n))
    assert extension_condition(W4, (1, 2))
    W = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    assert not extension_condition(W, (1, 3))
    assert extension_condition(W, (1, 2)) and extension_condition(W, (3, 4))
    with pytest.raises(NotUnimodular):
        extension_condition([[2, 0], [0, 1]], (1, 2))


@pytest.mark.parametrize("n", range(2, 6))
def test_extension_independent_of_sigma(n):
    Ws = [
        neg_id(n),
        [[1 if j == (i + 1) % n else 0 for j in range(n)] for i in range(n)],
        [[1 if i == j else (1 if (i, j) == (0, 1) else 0) for j in range(n)] for i in range(n)],
    ]
    for W in Ws:
        for I in index_tuples(n):
            rest = [k for k in range(1, n + 1) if k not in I]
            base = extension_condition(W, I)
            for head in permutations(I):
                for tail in permutations(rest):
                    assert extension_condition(W, I, head + tail) == base
