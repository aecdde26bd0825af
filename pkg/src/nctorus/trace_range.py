"""Finitely generated Z-submodules of the scalar space, kept in Hermite normal form.

A range is stored as ``(1/D) * L`` where ``L`` is an integer lattice written in
coordinates over a canonical Q-basis (powers of the field generator, or
monomials in the theta_ij).  Two ranges are equal exactly when their
canonical forms are identical.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .action import CyclicAction
from .errors import LabelMismatch, MixedKinds, ModeMismatch, UnsupportedInSymbolicMode, ZeroScale
from .exact_arith import (
    FIELD,
    RATIONAL,
    SYMBOLIC,
    FieldElement,
    Frame,
    NumberField,
    Poly,
    Scalar,
    common_frame,
    coordinates_in,
    frame_labels,
    label_str,
    scalar_from_labels,
    scalar_sign,
    to_scalar,
)
from .skewmat import SkewMatrix, all_pfaffian_minors, index_str
from .so_nn import extension_condition

DEFAULT_COEFF_BOUND = 10
CF_ITERATION_CAP = 500


class Outcome(enum.Enum):
    NOT_FOUND = "not_found"
    UNKNOWN = "unknown"


# ---------------------------------------------------------------------------
# Hermite normal form


def hnf(rows: Sequence[Sequence[int]]) -> list:
    """Row Hermite normal form: echelon, positive pivots, entries above each pivot in [0, pivot).

    Zero rows are dropped, so the result is a basis of the row lattice.
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    r = 0
    for col in range(ncols):
        # gather the gcd of column ``col`` (rows r..) into row r
        for i in range(r + 1, len(A)):
            if A[i][col] == 0:
                continue
            a, b = A[r][col], A[i][col]
            g, x, y = _xgcd(a, b)
            ra, rb = A[r], A[i]
            A[r] = [x * u + y * v for u, v in zip(ra, rb)]
            A[i] = [(a // g) * v - (b // g) * u for u, v in zip(ra, rb)]
        if r < len(A) and A[r][col] != 0:
            if A[r][col] < 0:
                A[r] = [-u for u in A[r]]
            piv = A[r][col]
            for i in range(r):
                q = A[i][col] // piv
                if q:
                    A[i] = [u - q * v for u, v in zip(A[i], A[r])]
            r += 1
            if r == len(A):
                break
    return [row for row in A[:r] if any(row)]


def _xgcd(a: int, b: int):
    """g = gcd(a, b) >= 0 with x a + y b = g; degenerate a = 0 handled."""
    old_r, rr = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while rr:
        q = old_r // rr
        old_r, rr = rr, old_r - q * rr
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# ranges


@dataclass(frozen=True)
class ZModuleRange:
    """(1/denominator) times the row lattice of ``basis``, over the Q-basis ``labels``."""

    mode: str
    field: NumberField
    labels: tuple
    denominator: int
    basis: tuple

    @property
    def frame(self) -> Frame:
        return Frame(self.mode, self.field)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def generators(self) -> list:
        """The HNF basis as scalars."""
        return [
            scalar_from_labels(self.frame, self.labels, [Fraction(c, self.denominator) for c in row])
            for row in self.basis
        ]

    def contains(self, a: Scalar) -> bool:
        return range_equal(self, span(self.generators() + [a], frame=self.frame))

    def label_strings(self) -> list:
        return [label_str(self.mode, lab) for lab in self.labels]

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "denominator": self.denominator,
            "labels": self.label_strings(),
            "basis": [list(r) for r in self.basis],
            "generators": [str(g) for g in self.generators()],
        }
        if self.field is not None:
            out["field"] = self.field.to_json()
        return out

    def __str__(self):
        gens = ", ".join(str(g) for g in self.generators())
        return f"Z<{gens}>"


def _resolve_frame(values: Sequence, frame: Frame = None) -> Frame:
    found = common_frame(values)
    if frame is None:
        return found
    if found.mode == RATIONAL:
        return frame
    if found != frame:
        raise ModeMismatch(f"generators live in {found.mode} mode, expected {frame.mode}")
    return frame


def span(generators: Iterable, frame: Frame = None) -> ZModuleRange:
    """Canonical form of the Z-span of the generators.

    ``frame`` forces the ambient mode, e.g. to view rational generators inside a number field.
    """
    gens = [to_scalar(g) for g in generators]
    frame = _resolve_frame(gens, frame)
    labels = frame_labels(frame, gens)
    coords = [coordinates_in(g, frame, labels) for g in gens]
    D0 = 1
    for row in coords:
        for c in row:
            D0 = D0 * c.denominator // math.gcd(D0, c.denominator)
    H = hnf([[int(c * D0) for c in row] for row in coords])
    content = 0
    for row in H:
        for a in row:
            content = math.gcd(content, a)
    g = math.gcd(content, D0) if H else D0
    D = D0 // g
    H = [[a // g for a in row] for row in H]
    if frame.mode == SYMBOLIC:
        # keep only monomials that survive (all do, but zero generators contribute none)
        keep = [k for k in range(len(labels)) if any(row[k] for row in H)]
        labels = tuple(labels[k] for k in keep)
        H = [[row[k] for k in keep] for row in H]
    if not H:
        D = 1
    return ZModuleRange(frame.mode, frame.field, tuple(labels), D, tuple(tuple(r) for r in H))


def _same_ambient(R1: ZModuleRange, R2: ZModuleRange):
    """Bring two ranges into one frame; rational ranges embed into the other side's frame."""
    if R1.mode == R2.mode and R1.field == R2.field:
        return R1, R2
    if R1.mode == RATIONAL:
        return span(R1.generators(), frame=R2.frame), R2
    if R2.mode == RATIONAL:
        return R1, span(R2.generators(), frame=R1.frame)
    raise LabelMismatch(f"ranges over different bases ({R1.mode} vs {R2.mode})")


def range_equal(R1: ZModuleRange, R2: ZModuleRange) -> bool:
    R1, R2 = _same_ambient(R1, R2)
    return (R1.labels, R1.denominator, R1.basis) == (R2.labels, R2.denominator, R2.basis)


def range_contains(big: ZModuleRange, small: ZModuleRange) -> bool:
    big, small = _same_ambient(big, small)
    return range_equal(big, span(big.generators() + small.generators(), frame=big.frame))


def scale_range(R: ZModuleRange, lam) -> ZModuleRange:
    """lambda * R.  Symbolic ranges accept rational lambda only."""
    lam = to_scalar(lam)
    if lam == 0:
        raise ZeroScale("scaling a range by zero")
    if isinstance(lam, Poly):
        if not lam.is_constant():
            raise UnsupportedInSymbolicMode("scaling by a non-constant polynomial")
        lam = lam.constant_term()
    if R.mode == SYMBOLIC and not isinstance(lam, Fraction):
        raise UnsupportedInSymbolicMode("symbolic ranges can only be scaled by rationals")
    frame = R.frame
    if isinstance(lam, FieldElement):
        if R.mode == RATIONAL:
            frame = Frame(FIELD, lam.field)
        elif lam.field != R.field:
            raise ModeMismatch("scale factor from a different number field")
    return span([g * lam for g in R.generators()], frame=frame)


def torus_range(theta: SkewMatrix) -> ZModuleRange:
    """Z + sum of pf(M_I) Z over all even index tuples I."""
    return span([Fraction(1)] + list(all_pfaffian_minors(theta).values()))


@dataclass(frozen=True)
class OrbifoldRangeReport:
    lower: ZModuleRange
    upper: ZModuleRange
    decided: bool
    admitted_minors: tuple
    order: int

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "decided": self.decided,
            "admitted": [index_str(I) for I in self.admitted_minors],
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
        }


def orbifold_range_bounds(theta: SkewMatrix, act: CyclicAction) -> OrbifoldRangeReport:
    """Sandwich the orbifold trace range between the admitted minors over N and Tr(K_0)/N."""
    if act.theta != theta:
        raise ValueError("the action is defined for a different theta")
    N = act.order
    inv_N = Fraction(1, N)
    minors = all_pfaffian_minors(theta)
    admitted = tuple(I for I in minors if extension_condition(act.W, I))
    lower = span([inv_N] + [minors[I] * inv_N for I in admitted])
    upper = scale_range(torus_range(theta), inv_N)
    lower, upper = _same_ambient(lower, upper)
    return OrbifoldRangeReport(lower, upper, range_equal(lower, upper), admitted, N)


# ---------------------------------------------------------------------------
# scaling search


def _coefficient_vectors(rank: int, bound: int):
    """Nonzero integer vectors ordered by sup norm, then l1 norm, then lexicographically."""
    for s in range(1, bound + 1):
        shell = [c for c in product(range(-s, s + 1), repeat=rank) if max(abs(x) for x in c) == s]
        shell.sort(key=lambda c: (sum(abs(x) for x in c), c))
        yield from shell


def morita_lambda_search(R1: ZModuleRange, R2: ZModuleRange, coeff_bound: int = DEFAULT_COEFF_BOUND):
    """A verified lambda > 0 with R1 = lambda * R2, or NOT_FOUND (ranks differ) or UNKNOWN (search exhausted).

    Candidates are lambda = (sum c_i b1_i) / b2_1 with |c_i| <= coeff_bound, since
    lambda * b2_1 must lie in R1.
    """
    if SYMBOLIC in (R1.mode, R2.mode):
        raise UnsupportedInSymbolicMode("lambda search needs numeric ranges")
    if R1.mode == FIELD and R2.mode == FIELD and R1.field != R2.field:
        raise ModeMismatch("ranges over different number fields")
    R1, R2 = _same_ambient(R1, R2)
    if R1.rank != R2.rank:
        return Outcome.NOT_FOUND
    if R1.rank == 0:
        return Fraction(1)
    b1 = R1.generators()
    first = R2.generators()[0]
    inv_first = 1 / first
    seen = set()
    for c in _coefficient_vectors(R1.rank, coeff_bound):
        target = sum((ci * b for ci, b in zip(c, b1)), Fraction(0))
        lam = target * inv_first
        if lam in seen or scalar_sign(lam) <= 0:
            continue
        seen.add(lam)
        if range_equal(R1, scale_range(R2, lam)):
            return lam
    return Outcome.UNKNOWN


# ---------------------------------------------------------------------------
# GL(2, Z) orbits of real numbers


def exact_floor(x) -> int:
    if isinstance(x, Fraction):
        return math.floor(x)
    if isinstance(x, FieldElement) and not x.is_rational():
        # an irrational value is never an integer, so a tight enough enclosure settles the floor
        for k in (16, 32, 64, 128):
            lo, hi = x.enclosure(k)
            if math.floor(lo) == math.floor(hi):
                return math.floor(lo)
    a = math.floor(float(x))
    while scalar_sign(x - a) < 0:
        a -= 1
    while scalar_sign(x - (a + 1)) >= 0:
        a += 1
    return a


def _as_rational(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, FieldElement) and x.is_rational():
        return x.coeffs[0]
    return None


def continued_fraction(x, cap: int = CF_ITERATION_CAP):
    """(pre-period, period) of an exact continued fraction, or None if no period shows within ``cap`` steps.

    Rationals have a finite expansion and an empty period.
    """
    seen = {}
    quotients = []
    for k in range(cap):
        r = _as_rational(x)
        if r is not None:
            # finite expansion
            while True:
                a = math.floor(r)
                quotients.append(a)
                if r == a:
                    return tuple(quotients), ()
                r = 1 / (r - a)
        if x in seen:
            j = seen[x]
            return tuple(quotients[:j]), tuple(quotients[j:])
        seen[x] = k
        a = exact_floor(x)
        quotients.append(a)
        x = 1 / (x - a)
    return None


def _cyclic_equal(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    doubled = a + a
    return any(doubled[k:k + len(b)] == b for k in range(len(a)))


def gl2_orbit_equal(theta1, theta2, cap: int = CF_ITERATION_CAP):
    """True iff theta2 = (a theta1 + b)/(c theta1 + d) for some GL(2, Z) matrix; Outcome.UNKNOWN if undetermined.

    Rationals form a single orbit.  Irrationals are compared by the periodic tails of their continued fractions.
    """
    x, y = to_scalar(theta1), to_scalar(theta2)
    if isinstance(x, Poly) or isinstance(y, Poly):
        raise MixedKinds("orbit test needs numeric values")
    if isinstance(x, FieldElement) and isinstance(y, FieldElement) and x.field != y.field:
        raise MixedKinds("values from different number fields")
    rx, ry = _as_rational(x), _as_rational(y)
    if rx is not None and ry is not None:
        return True
    if (rx is None) != (ry is None):
        return False
    cx, cy = continued_fraction(x, cap), continued_fraction(y, cap)
    if cx is None or cy is None:
        return Outcome.UNKNOWN
    return _cyclic_equal(cx[1], cy[1])
