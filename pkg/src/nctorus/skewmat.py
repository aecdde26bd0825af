"""Skew-symmetric matrices, pfaffians and pfaffian minors.

Index tuples follow the 1-based convention ``I = (i_1 < ... < i_2p)``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    InvalidIndexTuple,
    NotSkewSymmetric,
    OddDimension,
    UnsupportedInSymbolicMode,
)
from .exact_arith import Poly, Scalar, common_frame, scalar_sign, to_scalar, SYMBOLIC

IndexTuple = tuple


class SkewMatrix:
    """Immutable n x n skew-symmetric matrix over exact scalars."""

    __slots__ = ("n", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(to_scalar(a) for a in r) for r in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise NotSkewSymmetric("matrix is not square")
        for i in range(n):
            if rows[i][i] != 0:
                raise NotSkewSymmetric(f"nonzero diagonal entry at ({i + 1},{i + 1})")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise NotSkewSymmetric(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")
        common_frame(a for r in rows for a in r)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, key, value):
        raise AttributeError("SkewMatrix is immutable")

    @classmethod
    def from_upper(cls, n: int, upper: Mapping) -> "SkewMatrix":
        """Build from ``{(i, j): value}`` with 1-based i < j; omitted entries are 0."""
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in upper.items():
            if not 1 <= i < j <= n:
                raise NotSkewSymmetric(f"upper entry ({i},{j}) is not above the diagonal of a {n}x{n} matrix")
            v = to_scalar(v)
            rows[i - 1][j - 1] = v
            rows[j - 1][i - 1] = -v
        return cls(rows)

    @classmethod
    def symbolic(cls, n: int, pairs: Iterable = None) -> "SkewMatrix":
        """Generic theta: independent indeterminates theta_ij on ``pairs`` (all i < j by default)."""
        if pairs is None:
            pairs = combinations(range(1, n + 1), 2)
        return cls.from_upper(n, {(i, j): Poly.var(i, j) for i, j in pairs})

    @classmethod
    def zeros(cls, n: int) -> "SkewMatrix":
        return cls([[0] * n for _ in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list:
        return [list(r) for r in self.entries]

    def upper(self) -> dict:
        return {(i + 1, j + 1): self.entries[i][j] for i in range(self.n) for j in range(i + 1, self.n)}

    @property
    def mode(self) -> str:
        return common_frame(a for r in self.entries for a in r).mode

    def submatrix(self, I: Sequence[int]) -> "SkewMatrix":
        idx = [i - 1 for i in I]
        return SkewMatrix([[self.entries[a][b] for b in idx] for a in idx])

    def blocks(self, k: int):
        """Split at position k: (upper-left, upper-right, lower-left, lower-right)."""
        n, e = self.n, self.entries
        return (
            [list(e[i][:k]) for i in range(k)],
            [list(e[i][k:]) for i in range(k)],
            [list(e[i][:k]) for i in range(k, n)],
            [list(e[i][k:]) for i in range(k, n)],
        )

    def __add__(self, other: "SkewMatrix") -> "SkewMatrix":
        return SkewMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __mul__(self, c) -> "SkewMatrix":
        return SkewMatrix([[a * c for a in r] for r in self.entries])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SkewMatrix):
            return NotImplemented
        return self.n == other.n and all(
            a == b for r, s in zip(self.entries, other.entries) for a, b in zip(r, s)
        )

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"SkewMatrix({[[str(a) for a in r] for r in self.entries]})"


def check_index_tuple(I: Sequence[int], n: int) -> tuple:
    I = tuple(int(i) for i in I)
    if len(I) % 2:
        raise InvalidIndexTuple(f"index tuple {I} has odd length")
    if any(not 1 <= i <= n for i in I):
        raise InvalidIndexTuple(f"index tuple {I} out of range for n={n}")
    if any(a >= b for a, b in zip(I, I[1:])):
        raise InvalidIndexTuple(f"index tuple {I} is not strictly increasing")
    return I


def index_tuples(n: int) -> list:
    """All nonempty even index tuples, ordered by size then lexicographically."""
    return [I for k in range(2, n + 1, 2) for I in combinations(range(1, n + 1), k)]


def index_str(I: Sequence[int]) -> str:
    return ",".join(str(i) for i in I)


# ---------------------------------------------------------------------------
# pfaffians

def _perfect_matchings(items: tuple):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        for m in _perfect_matchings(rest[:k] + rest[k + 1:]):
            yield ((first, partner),) + m


def _parity(seq: Sequence[int]) -> int:
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inversions % 2 else 1


def pfaffian_matching(A: SkewMatrix) -> Scalar:
    """Signed sum over perfect matchings; the sign is the parity of the flattened pairing."""
    if A.n % 2:
        raise OddDimension(f"pfaffian of an odd ({A.n}x{A.n}) matrix")
    total = Fraction(0)
    for matching in _perfect_matchings(tuple(range(A.n))):
        flat = [x for pair in matching for x in pair]
        term = Fraction(_parity(flat))
        for i, j in matching:
            term = term * A.entries[i][j]
            if term == 0:
                break
        total = total + term
    return total


def _pf_expand(A: SkewMatrix, idx: tuple, memo: dict) -> Scalar:
    if not idx:
        return Fraction(1)
    hit = memo.get(idx)
    if hit is not None:
        return hit
    first = idx[0]
    total = Fraction(0)
    for k in range(1, len(idx)):
        a = A.entries[first][idx[k]]
        if a == 0:
            continue
        rest = idx[1:k] + idx[k + 1:]
        sub = _pf_expand(A, rest, memo)
        total = total + a * sub if k % 2 else total - a * sub
    memo[idx] = total
    return total


def pfaffian_expansion(A: SkewMatrix, memo: dict = None) -> Scalar:
    """Recursive expansion along the first row, memoised over index subsets."""
    if A.n % 2:
        raise OddDimension(f"pfaffian of an odd ({A.n}x{A.n}) matrix")
    return _pf_expand(A, tuple(range(A.n)), {} if memo is None else memo)


def pfaffian(A: SkewMatrix, method: str = "matching") -> Scalar:
    if method == "matching":
        return pfaffian_matching(A)
    if method == "expansion":
        return pfaffian_expansion(A)
    raise ValueError(f"unknown pfaffian method {method!r}")


def pfaffian_minor(A: SkewMatrix, I: Sequence[int]) -> Scalar:
    I = check_index_tuple(I, A.n)
    return pfaffian_matching(A.submatrix(I))


def all_pfaffian_minors(A: SkewMatrix) -> dict:
    """Every pfaffian minor, keyed by index tuple in canonical order (2^(n-1) - 1 entries)."""
    memo: dict = {}
    return {I: _pf_expand(A, tuple(i - 1 for i in I), memo) for I in index_tuples(A.n)}


def standard_Z(n: int) -> SkewMatrix:
    if n < 2:
        raise ValueError("Z needs n >= 2")
    return SkewMatrix([[1 if j > i else (-1 if j < i else 0) for j in range(n)] for i in range(n)])


def minors_positive(A: SkewMatrix) -> bool:
    return all(scalar_sign(v) > 0 for v in all_pfaffian_minors(A).values())


def find_positive_t(theta: SkewMatrix, t_max: int = 64):
    """Least t in [1, t_max] making every pfaffian minor of theta + tZ positive, else None."""
    if theta.mode == SYMBOLIC:
        raise UnsupportedInSymbolicMode("positivity of generic minors is undecidable")
    Z = standard_Z(theta.n)
    for t in range(1, t_max + 1):
        if minors_positive(theta + Z * t):
            return t
    return None
