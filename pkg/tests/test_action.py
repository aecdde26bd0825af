import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import has_fixed_vector
from nctorus.action import (
    W2,
    W3,
    W4,
    W6,
    CyclicAction,
    PhaseMonomial,
    alpha_orbit_of_generator,
    apply_alpha,
    block_diag,
    check_theta_symplectic,
    cocycle_omega,
    cocycle_omega_half,
    cocycle_omega_prime,
    compatibility_check,
    flip,
    free_outside_origin,
    group_product,
    is_integral_exponent,
    monomial_product,
    order_of,
    reduce_mod_one,
    split_block_diagonal,
)
from nctorus.errors import DimensionMismatch, InvariantViolation, NotBlockDiagonal
from nctorus.exact_arith import Poly
from nctorus.skewmat import SkewMatrix

t12, t34 = Poly.var(1, 2), Poly.var(3, 4)
ROTATIONS = {2: W2, 3: W3, 4: W4, 6: W6}


def block_theta():
    return SkewMatrix.from_upper(4, {(1, 2): t12, (3, 4): t34})


def test_symplectic_examples():
    for n in range(2, 6):
        assert check_theta_symplectic(flip(n), SkewMatrix.symbolic(n))
    assert check_theta_symplectic(W4, SkewMatrix.symbolic(2))
    assert check_theta_symplectic([[1, 1], [0, 1]], SkewMatrix.from_upper(2, {(1, 2): 1}))
    padded = block_diag([[1, 1], [0, 1]], [[1, 0], [0, 1]])
    theta = SkewMatrix.from_upper(4, {(1, 2): Fraction(1, 3), (1, 3): 1, (3, 4): Fraction(2, 5)})
    assert not check_theta_symplectic(padded, theta)
    with pytest.raises(DimensionMismatch):
        check_theta_symplectic(flip(3), SkewMatrix.symbolic(2))


def test_order_examples():
    for N, W in ROTATIONS.items():
        assert order_of(W) == N
    assert order_of(W6) == 6
    assert order_of(flip(3)) == 2
    assert order_of([[1, 1], [0, 1]], max_order=24) is None


def test_freeness_examples():
    assert free_outside_origin(W3, 3)
    assert free_outside_origin(flip(4), 2)
    assert not free_outside_origin([[-1, 0, 0], [0, -1, 0], [0, 0, 1]], 2)


@pytest.mark.parametrize("W", [W2, W3, W4, W6, flip(3), flip(4), block_diag(W4, W6), block_diag(W4, [[1]]),
                               [[0, 1, 0], [0, 0, 1], [1, 0, 0]], block_diag(W3, [[-1]])])
def test_freeness_matches_box_search(W):
    N = order_of(W)
    expected = not any(has_fixed_vector(W, k, radius=3) for k in range(1, N))
    assert free_outside_origin(W, N) == expected


def test_cyclic_action_validation():
    act = CyclicAction.generated_by(W6, SkewMatrix.symbolic(2))
    assert act.order == 6 and act.n == 2
    assert act.power(6) == [[1, 0], [0, 1]]
    with pytest.raises(InvariantViolation):
        CyclicAction(W4, SkewMatrix.symbolic(2), 2)
    with pytest.raises(InvariantViolation):
        CyclicAction.generated_by([[1, 1], [0, 1]], SkewMatrix.from_upper(2, {(1, 2): 1}))


@pytest.mark.parametrize("N", [2, 3, 4, 6])
def test_alpha_to_the_N_is_identity_on_generators(N):
    act = CyclicAction.generated_by(ROTATIONS[N], SkewMatrix.symbolic(2))
    for i in (1, 2):
        mono = alpha_orbit_of_generator(act, i)
        assert mono.exponents == tuple(int(r == i - 1) for r in range(2))
        assert is_integral_exponent(mono.phase)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_flip_squares_to_identity(n):
    act = CyclicAction.generated_by(flip(n), SkewMatrix.symbolic(n))
    for i in range(1, n + 1):
        mono = alpha_orbit_of_generator(act, i)
        assert mono.phase == 0
        assert alpha_orbit_of_generator(act, i, 1).exponents == tuple(-int(r == i - 1) for r in range(n))


def test_diagonal_action_orbit():
    act = CyclicAction.generated_by(block_diag(W4, W6), block_theta())
    assert act.order == 12
    for i in range(1, 5):
        assert is_integral_exponent(alpha_orbit_of_generator(act, i).phase)


def test_alpha_is_multiplicative():
    theta = block_theta()
    act = CyclicAction.generated_by(block_diag(W4, W6), theta)
    rng = random.Random(3)
    for _ in range(40):
        a = PhaseMonomial(Fraction(0), tuple(rng.randint(-2, 2) for _ in range(4)))
        b = PhaseMonomial(Fraction(0), tuple(rng.randint(-2, 2) for _ in range(4)))
        lhs = apply_alpha(act, monomial_product(theta, a, b))
        rhs = monomial_product(theta, apply_alpha(act, a), apply_alpha(act, b))
        assert lhs.exponents == rhs.exponents
        assert is_integral_exponent(lhs.phase - rhs.phase)


def test_omega_examples():
    theta = SkewMatrix.symbolic(2)
    assert cocycle_omega(theta, (0, 0), (1, 3)) == 0
    assert cocycle_omega(theta, (1, 0), (0, 1)) == t12
    assert cocycle_omega(theta, (0, 1), (1, 0)) == -t12
    assert cocycle_omega_half(theta, (1, 0), (0, 1)) == t12 * Fraction(1, 2)
    assert cocycle_omega_prime(theta, W4, (0, 0), 1, (1, 0), 2) == 0
    assert cocycle_omega_prime(theta, W4, (1, 2), 0, (3, -1), 1) == cocycle_omega(theta, (1, 2), (3, -1))


vec = st.lists(st.integers(-4, 4), min_size=3, max_size=3)


@given(vec, vec, vec)
def test_omega_cocycle_identity(x, y, z):
    theta = SkewMatrix.symbolic(3)

    def add(u, v):
        return [a + b for a, b in zip(u, v)]

    lhs = cocycle_omega(theta, x, y) + cocycle_omega(theta, add(x, y), z)
    rhs = cocycle_omega(theta, x, add(y, z)) + cocycle_omega(theta, y, z)
    assert lhs == rhs


def test_omega_prime_cocycle_identity():
    rng = random.Random(11)
    theta = block_theta()
    W = block_diag(W4, W6)
    for _ in range(200):
        x, y, z = ([rng.randint(-3, 3) for _ in range(4)] for _ in range(3))
        s, t, u = (rng.randint(0, 11) for _ in range(3))
        xy, st_ = group_product(W, x, s, y, t)
        yz, tu = group_product(W, y, t, z, u)
        lhs = cocycle_omega_prime(theta, W, x, s, y, t) + cocycle_omega_prime(theta, W, xy, st_, z, u)
        rhs = cocycle_omega_prime(theta, W, x, s, yz, tu) + cocycle_omega_prime(theta, W, y, t, z, u)
        assert is_integral_exponent(lhs - rhs)


def test_reduce_mod_one():
    assert reduce_mod_one(Fraction(7, 4)) == Fraction(3, 4)
    assert reduce_mod_one(Fraction(-1, 4)) == Fraction(3, 4)
    assert reduce_mod_one(t12) == t12
    assert is_integral_exponent(Poly.constant(3))


def test_compatibility_examples():
    for n in range(2, 6):
        assert compatibility_check(flip(n), SkewMatrix.symbolic(n), 1)
    assert compatibility_check(block_diag(W4, W6), block_theta(), 1)
    coupled = SkewMatrix.from_upper(4, {(1, 2): Fraction(1, 3), (1, 3): Fraction(1, 2), (3, 4): 2})
    assert not compatibility_check(block_diag(W4, [[1, 0], [0, 1]]), coupled, 1)
    with pytest.raises(NotBlockDiagonal):
        split_block_diagonal([[0, 1, 0], [1, 0, 0], [0, 0, 1]], 1)


def test_compatibility_agrees_with_symplectic_check():
    rng = random.Random(5)
    for _ in range(30):
        W = block_diag(ROTATIONS[rng.choice([2, 3, 4, 6])], ROTATIONS[rng.choice([2, 3, 4, 6])])
        theta = SkewMatrix.from_upper(4, {(1, 2): Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                                          (3, 4): Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                                          (1, 3): rng.choice([0, 0, 1])})
        assert compatibility_check(W, theta, 1) == check_theta_symplectic(W, theta)
