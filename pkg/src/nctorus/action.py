"""Finite-order theta-symplectic integer matrices and the induced action on A_theta.

Phases are kept as exact exponents: the scalar ``c`` stands for ``e(c) = exp(2 pi i c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, InvariantViolation, NotBlockDiagonal, NotUnimodular
from .exact_arith import Poly, Scalar, FieldElement
from .linalg import (
    block,
    det_bareiss,
    identity,
    is_integer_matrix,
    is_zero_matrix,
    mat_equal,
    matmul,
    matpow,
    matsub,
    matvec,
    to_int_matrix,
    transpose,
)
from .skewmat import SkewMatrix

DEFAULT_MAX_ORDER = 24

# Generators of the finite cyclic subgroups of SL(2, Z), up to conjugacy.
W2 = ((-1, 0), (0, -1))
W3 = ((-1, -1), (1, 0))
W4 = ((0, -1), (1, 0))
W6 = ((0, -1), (1, 1))


def flip(n: int) -> list:
    return [[-1 if i == j else 0 for j in range(n)] for i in range(n)]


def block_diag(*blocks) -> list:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, a in enumerate(row):
                out[k + i][k + j] = a
        k += len(b)
    return out


def _check_unimodular(W) -> list:
    if not is_integer_matrix(W):
        raise NotUnimodular("W must be an integer matrix")
    W = to_int_matrix(W)
    if len(W) != len(W[0]) or det_bareiss(W) not in (1, -1):
        raise NotUnimodular("W must lie in GL(n, Z)")
    return W


def check_theta_symplectic(W, theta: SkewMatrix) -> bool:
    """Exact test of W^t theta W == theta."""
    if len(W) != theta.n or any(len(r) != theta.n for r in W):
        raise DimensionMismatch("W and theta have different sizes")
    th = theta.rows()
    return mat_equal(matmul(matmul(transpose(W), th), W), th)


def order_of(W, max_order: int = DEFAULT_MAX_ORDER):
    """Least N <= max_order with W^N = id; None when no such N exists (treated as infinite)."""
    W = _check_unimodular(W)
    n = len(W)
    power = identity(n)
    for k in range(1, max_order + 1):
        power = matmul(power, W)
        if mat_equal(power, identity(n)):
            return k
    return None


def free_outside_origin(W, N: int) -> bool:
    """No nonidentity power W^k (0 < k < N) fixes a nonzero integer vector."""
    W = to_int_matrix(W)
    n = len(W)
    power = identity(n)
    for _ in range(1, N):
        power = matmul(power, W)
        if det_bareiss(matsub(power, identity(n))) == 0:
            return False
    return True


@dataclass(frozen=True)
class CyclicAction:
    """A theta-symplectic W of exact order N, generating F = <W>."""

    W: tuple
    theta: SkewMatrix
    order: int

    def __post_init__(self):
        W = _check_unimodular(self.W)
        object.__setattr__(self, "W", tuple(tuple(r) for r in W))
        if len(W) != self.theta.n:
            raise DimensionMismatch("W and theta have different sizes")
        if not check_theta_symplectic(W, self.theta):
            raise InvariantViolation("W^t theta W != theta")
        if order_of(W, self.order) != self.order:
            raise InvariantViolation(f"W does not have exact order {self.order}")

    @classmethod
    def generated_by(cls, W, theta: SkewMatrix, max_order: int = DEFAULT_MAX_ORDER) -> "CyclicAction":
        N = order_of(W, max_order)
        if N is None:
            raise InvariantViolation(f"W has no finite order <= {max_order}")
        return cls(W, theta, N)

    @property
    def n(self) -> int:
        return self.theta.n

    def power(self, k: int) -> list:
        return matpow([list(r) for r in self.W], k % self.order)

    def to_json(self) -> dict:
        return {"W": [list(r) for r in self.W], "order": self.order}


# ---------------------------------------------------------------------------
# phases


def _dot(x, y):
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def ordering_phase(theta: SkewMatrix, v: Sequence[int]) -> Scalar:
    """sum_{j<k} v_k v_j theta_jk."""
    n = theta.n
    total = Fraction(0)
    for k in range(1, n):
        for j in range(k):
            if v[k] and v[j]:
                total = total + v[k] * v[j] * theta.entries[j][k]
    return total


def alpha_phase_exponent(act: CyclicAction, i: int):
    """Phase exponent and exponent vector of alpha(U_i) = e(c) U_1^{a_1i} ... U_n^{a_ni} (i is 1-based)."""
    if not 1 <= i <= act.n:
        raise IndexError(f"generator index {i} out of range")
    column = [act.W[r][i - 1] for r in range(act.n)]
    return ordering_phase(act.theta, column), tuple(column)


def cocycle_omega(theta: SkewMatrix, x: Sequence[int], y: Sequence[int]) -> Scalar:
    """Exponent of omega_theta(x, y) = e(<-theta x, y>)."""
    tx = matvec(theta.rows(), list(x))
    return -_dot(tx, y)


def cocycle_omega_half(theta: SkewMatrix, x: Sequence[int], y: Sequence[int]) -> Scalar:
    """Exponent of the halved convention e(<-theta x, y>/2) used for the dual torus."""
    return cocycle_omega(theta, x, y) * Fraction(1, 2)


def cocycle_omega_prime(theta: SkewMatrix, W, x, s: int, y, t: int) -> Scalar:
    """Exponent of omega'((x, W^s), (y, W^t)) = omega_theta(x, W^s y) on Z^n x| <W>."""
    Ws = matpow(to_int_matrix(W), s) if s >= 0 else None
    if Ws is None:
        raise ValueError("powers of W are taken with s >= 0")
    return cocycle_omega(theta, x, matvec(Ws, list(y)))


def group_product(W, x, s: int, y, t: int):
    """(x, s)(y, t) = (x + W^s y, s + t) in Z^n x| <W>."""
    Ws = matpow(to_int_matrix(W), s)
    return tuple(a + b for a, b in zip(x, matvec(Ws, list(y)))), s + t


def reduce_mod_one(c: Scalar):
    """Fractional part of a rational exponent; non-rational exponents are returned unchanged."""
    if isinstance(c, Fraction):
        return c - (c.numerator // c.denominator)
    if isinstance(c, FieldElement) and c.is_rational():
        return reduce_mod_one(c.coeffs[0])
    if isinstance(c, Poly) and c.is_constant():
        return reduce_mod_one(c.constant_term())
    return c


def is_integral_exponent(c: Scalar) -> bool:
    return reduce_mod_one(c) == 0


# ---------------------------------------------------------------------------
# ordered monomials e(c) U_1^{v_1} ... U_n^{v_n} under U_k U_j = e(theta_jk) U_j U_k


@dataclass(frozen=True)
class PhaseMonomial:
    phase: Scalar
    exponents: tuple


def monomial_product(theta: SkewMatrix, a: PhaseMonomial, b: PhaseMonomial) -> PhaseMonomial:
    # moving U_j^{b_j} left past U_k^{a_k} (k > j) costs e(a_k b_j theta_jk)
    n = theta.n
    extra = Fraction(0)
    for k in range(1, n):
        for j in range(k):
            if a.exponents[k] and b.exponents[j]:
                extra = extra + a.exponents[k] * b.exponents[j] * theta.entries[j][k]
    return PhaseMonomial(a.phase + b.phase + extra, tuple(x + y for x, y in zip(a.exponents, b.exponents)))


def monomial_power(theta: SkewMatrix, a: PhaseMonomial, m: int) -> PhaseMonomial:
    s = ordering_phase(theta, a.exponents)
    return PhaseMonomial(a.phase * m + s * Fraction(m * (m - 1), 2), tuple(m * x for x in a.exponents))


def apply_alpha(act: CyclicAction, mono: PhaseMonomial) -> PhaseMonomial:
    """alpha(e(c) U^v) = e(c) alpha(U_1)^{v_1} ... alpha(U_n)^{v_n}."""
    result = PhaseMonomial(mono.phase, (0,) * act.n)
    for i in range(1, act.n + 1):
        if mono.exponents[i - 1] == 0:
            continue
        c, col = alpha_phase_exponent(act, i)
        result = monomial_product(act.theta, result, monomial_power(act.theta, PhaseMonomial(c, col), mono.exponents[i - 1]))
    return result


def alpha_orbit_of_generator(act: CyclicAction, i: int, k: int = None) -> PhaseMonomial:
    """alpha^k(U_i); by default k = N, which must return U_i up to an integral phase."""
    k = act.order if k is None else k
    mono = PhaseMonomial(Fraction(0), tuple(int(r == i - 1) for r in range(act.n)))
    for _ in range(k):
        mono = apply_alpha(act, mono)
    return mono


# ---------------------------------------------------------------------------
# block form


def split_block_diagonal(W, k: int):
    W = to_int_matrix(W)
    n = len(W)
    if not (is_zero_matrix(block(W, range(k), range(k, n))) and is_zero_matrix(block(W, range(k, n), range(k)))):
        raise NotBlockDiagonal(f"W is not block diagonal with a {k}x{k} leading block")
    return block(W, range(k), range(k)), block(W, range(k, n), range(k, n))


def compatibility_check(W, theta: SkewMatrix, p: int) -> bool:
    """The four block relations of W^t theta W = theta for W = diag(W1, W4), W1 of size 2p."""
    W1, W4 = split_block_diagonal(W, 2 * p)
    t11, t12, t21, t22 = theta.blocks(2 * p)

    def holds(X, T, Y):
        if not T or not T[0]:
            return True
        return mat_equal(matmul(matmul(transpose(X), T), Y), T)

    return holds(W1, t11, W1) and holds(W1, t12, W4) and holds(W4, t21, W1) and holds(W4, t22, W4)
