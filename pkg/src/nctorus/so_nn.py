"""The group SO(n,n|Z) in 2x2 block form, its standard generators and the
fractional-linear action on skew matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    ActionUndefined,
    BadP,
    DimensionMismatch,
    DivisionByZero,
    InvariantViolation,
    NotSkewIntegral,
    NotUnimodular,
    UnsupportedInSymbolicMode,
)
from .exact_arith import SYMBOLIC
from .linalg import (
    block,
    block_matrix,
    det_bareiss,
    identity,
    integer_inverse,
    inverse,
    is_integer_matrix,
    is_zero_matrix,
    mat_equal,
    matadd,
    matmul,
    shape,
    to_int_matrix,
    transpose,
    zeros,
)
from .skewmat import SkewMatrix, check_index_tuple


def _freeze(M) -> tuple:
    return tuple(tuple(int(a) for a in r) for r in M)


@dataclass(frozen=True)
class BlockElement:
    """The 2n x 2n integer matrix (A B; C D) in SO(n,n|Z)."""

    n: int
    A: tuple
    B: tuple
    C: tuple
    D: tuple

    def __post_init__(self):
        for name in "ABCD":
            M = getattr(self, name)
            if not is_integer_matrix(M):
                raise InvariantViolation(f"block {name} is not an integer matrix")
            object.__setattr__(self, name, _freeze(M))
            if shape(getattr(self, name)) != (self.n, self.n) and self.n:
                raise DimensionMismatch(f"block {name} is not {self.n}x{self.n}")
        problems = self.violations()
        if problems:
            raise InvariantViolation("; ".join(problems))

    def violations(self) -> list:
        A, B, C, D = self.A, self.B, self.C, self.D
        At, Bt, Ct, Dt = transpose(A), transpose(B), transpose(C), transpose(D)
        out = []
        if self.n == 0:
            return out
        if not is_zero_matrix(matadd(matmul(At, C), matmul(Ct, A))):
            out.append("A^t C + C^t A != 0")
        if not is_zero_matrix(matadd(matmul(Bt, D), matmul(Dt, B))):
            out.append("B^t D + D^t B != 0")
        if not mat_equal(matadd(matmul(At, D), matmul(Ct, B)), identity(self.n)):
            out.append("A^t D + C^t B != id")
        if det_bareiss(self.matrix()) != 1:
            out.append("determinant != 1")
        return out

    def matrix(self) -> list:
        return block_matrix([[self.A, self.B], [self.C, self.D]])

    @classmethod
    def from_matrix(cls, M) -> "BlockElement":
        size, cols = shape(M)
        if size != cols or size % 2:
            raise DimensionMismatch("SO(n,n) elements are 2n x 2n")
        n = size // 2
        return cls(n, block(M, range(n), range(n)), block(M, range(n), range(n, size)),
                   block(M, range(n, size), range(n)), block(M, range(n, size), range(n, size)))

    def inverse(self) -> "BlockElement":
        # g^{-1} = Q g^t Q for the split form Q = (0 id; id 0)
        return BlockElement(self.n, transpose(self.D), transpose(self.B), transpose(self.C), transpose(self.A))

    def to_json(self) -> dict:
        return {k: [list(r) for r in getattr(self, k)] for k in "ABCD"}


def identity_element(n: int) -> BlockElement:
    return BlockElement(n, identity(n), zeros(n, n), zeros(n, n), identity(n))


def make_rho(R: Sequence[Sequence[int]]) -> BlockElement:
    if not is_integer_matrix(R):
        raise NotUnimodular("R must be an integer matrix")
    R = to_int_matrix(R)
    inv = integer_inverse(R)
    if inv is None:
        raise NotUnimodular("R is not in GL(n, Z)")
    n = len(R)
    return BlockElement(n, R, zeros(n, n), zeros(n, n), transpose(inv))


def make_mu(N) -> BlockElement:
    rows = N.rows() if isinstance(N, SkewMatrix) else [list(r) for r in N]
    n = len(rows)
    if not is_integer_matrix(rows) or any(rows[i][j] != -rows[j][i] for i in range(n) for j in range(n)):
        raise NotSkewIntegral("mu(N) needs an integral skew-symmetric N")
    return BlockElement(n, identity(n), to_int_matrix(rows), zeros(n, n), identity(n))


def make_sigma(n: int, p: int) -> BlockElement:
    if not 1 <= 2 * p <= n:
        raise BadP(f"sigma_2p needs 1 <= 2p <= n (got p={p}, n={n})")
    k = 2 * p
    swapped = [[1 if i == j and i < k else 0 for j in range(n)] for i in range(n)]
    kept = [[1 if i == j and i >= k else 0 for j in range(n)] for i in range(n)]
    return BlockElement(n, kept, swapped, swapped, kept)


def compose(g: BlockElement, h: BlockElement) -> BlockElement:
    if g.n != h.n:
        raise DimensionMismatch("cannot compose elements of different size")
    return BlockElement.from_matrix(matmul(g.matrix(), h.matrix()))


def act_on_theta(g: BlockElement, theta: SkewMatrix) -> SkewMatrix:
    """(A theta + B)(C theta + D)^{-1}, exactly."""
    if theta.mode == SYMBOLIC:
        raise UnsupportedInSymbolicMode("the action needs inverses; use rational or field entries")
    if theta.n != g.n:
        raise DimensionMismatch("theta and g have different sizes")
    th = theta.rows()
    num = matadd(matmul(g.A, th), g.B)
    den = matadd(matmul(g.C, th), g.D)
    try:
        den_inv = inverse(den)
    except DivisionByZero:
        raise ActionUndefined("C theta + D is singular") from None
    result = matmul(num, den_inv)
    try:
        return SkewMatrix(result)
    except Exception as exc:  # pragma: no cover - would mean g is not in SO(n,n)
        raise InvariantViolation(f"action produced a non-skew matrix: {exc}") from exc


# ---------------------------------------------------------------------------
# the elements g_{I, Sigma}

def canonical_sigma_permutation(I: Sequence[int], n: int) -> tuple:
    """Sigma with Sigma(k) = i_k for k <= 2p, then the complement of I in increasing order."""
    I = check_index_tuple(I, n)
    rest = [k for k in range(1, n + 1) if k not in I]
    return tuple(I) + tuple(rest)


def permutation_matrix(sigma: Sequence[int]) -> list:
    """R with R[k, Sigma(k)] = 1, so that R theta R^t has entries theta[Sigma(k), Sigma(l)]."""
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{tuple(sigma)} is not a permutation of 1..{n}")
    return [[1 if sigma[k] == j + 1 else 0 for j in range(n)] for k in range(n)]


def make_g_I_sigma(I: Sequence[int], n: int) -> BlockElement:
    sigma = canonical_sigma_permutation(I, n)
    return compose(make_sigma(n, len(I) // 2), make_rho(permutation_matrix(sigma)))


def conjugated_generator(W, I: Sequence[int], sigma: Sequence[int] = None) -> list:
    """V = R W^t R^{-1} for the permutation matrix R of Sigma."""
    n = len(W)
    if sigma is None:
        sigma = canonical_sigma_permutation(I, n)
    R = permutation_matrix(sigma)
    return matmul(matmul(R, transpose(W)), transpose(R))


def extension_condition(W, I: Sequence[int], sigma: Sequence[int] = None) -> bool:
    """True iff R W^t R^{-1} is block diagonal with blocks of sizes |I| and n - |I|."""
    if not is_integer_matrix(W) or det_bareiss(to_int_matrix(W)) not in (1, -1):
        raise NotUnimodular("W must lie in GL(n, Z)")
    n = len(W)
    I = check_index_tuple(I, n)
    if sigma is not None and set(sigma[: len(I)]) != set(I):
        raise ValueError("Sigma must map 1..2p onto I")
    V = conjugated_generator(to_int_matrix(W), I, sigma)
    k = len(I)
    return is_zero_matrix(block(V, range(k), range(k, n))) and is_zero_matrix(block(V, range(k, n), range(k)))
