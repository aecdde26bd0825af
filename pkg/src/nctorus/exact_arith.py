"""Exact scalars.

Three interchangeable kinds of scalar are supported:

* ``Fraction`` -- plain rationals (the stdlib type is used as is);
* ``FieldElement`` -- elements of a real number field ``Q(alpha)`` where
  ``alpha`` is the unique root of a monic polynomial inside a rational
  isolating interval;
* ``Poly`` -- polynomials over Q in the indeterminates ``theta_ij`` (i < j),
  used for "generic" skew matrices.

Integers and Fractions mix freely with either of the other two kinds.  Mixing
field elements of different fields, or field elements with polynomials,
raises :class:`ModeMismatch`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import (
    DivisionByZero,
    InvalidFieldSpec,
    ModeMismatch,
    ReducibleFieldSpec,
    UnsupportedInSymbolicMode,
)

RATIONAL = "rational"
FIELD = "field"
SYMBOLIC = "symbolic"

# Safety valve for sign refinement; only reachable with a reducible minpoly.
MAX_REFINEMENT_STEPS = 4000


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


# ---------------------------------------------------------------------------
# Dense univariate polynomials over Q, coefficient lists low -> high.

def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _peval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _psub(a, b) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _pdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r = _trim(r)
    return _trim(q), r


def _pxgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
        t0, t1 = t1, _psub(t0, _pmul(q, t1))
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    return ([c / lead for c in r0], [c / lead for c in s0], [c / lead for c in t0])


def _pderiv(p):
    return _trim([i * c for i, c in enumerate(p)][1:])


def _sturm_count(p, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of p in (lo, hi]."""
    seq = [_trim(p), _pderiv(p)]
    while seq[-1]:
        _, r = _pdivmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])

    def changes(x):
        signs = [s for s in (_sgn(_peval(q, x)) for q in seq) if s != 0]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    return changes(lo) - changes(hi)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _has_rational_root(p) -> bool:
    denom = 1
    for c in p:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    ints = [int(c * denom) for c in p]
    # strip zero roots
    if ints[0] == 0:
        return True
    a0, ad = abs(ints[0]), abs(ints[-1])

    def divisors(m):
        out = []
        for k in range(1, math.isqrt(m) + 1):
            if m % k == 0:
                out.extend((k, m // k))
        return out

    for num in divisors(a0):
        for den in divisors(ad):
            for s in (1, -1):
                if _peval(p, Fraction(s * num, den)) == 0:
                    return True
    return False


def _interval_eval(p, lo: Fraction, hi: Fraction):
    if not p:
        return Fraction(0), Fraction(0)
    rlo = rhi = p[-1]
    for c in reversed(p[:-1]):
        prods = (rlo * lo, rlo * hi, rhi * lo, rhi * hi)
        rlo, rhi = min(prods) + c, max(prods) + c
    return rlo, rhi


# ---------------------------------------------------------------------------
# Number fields

_REFINED: dict = {}


@dataclass(frozen=True)
class NumberField:
    """Q(alpha) for the real root of ``minpoly`` isolated by ``interval``.

    ``minpoly`` lists coefficients constant term first and must be monic.
    """

    minpoly: tuple
    interval: tuple

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.minpoly)
        lo, hi = (as_fraction(x) for x in self.interval)
        object.__setattr__(self, "minpoly", coeffs)
        object.__setattr__(self, "interval", (lo, hi))
        d = len(coeffs) - 1
        if d < 1:
            raise InvalidFieldSpec("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise InvalidFieldSpec("minimal polynomial must be monic")
        if not lo < hi:
            raise InvalidFieldSpec("isolating interval must satisfy lo < hi")
        flo, fhi = _peval(coeffs, lo), _peval(coeffs, hi)
        if flo * fhi >= 0:
            raise InvalidFieldSpec("minimal polynomial must change sign strictly inside the interval")
        g, _, _ = _pxgcd(list(coeffs), _pderiv(list(coeffs)))
        if len(g) > 1:
            raise ReducibleFieldSpec("minimal polynomial is not square-free")
        if _sturm_count(list(coeffs), lo, hi) != 1:
            raise InvalidFieldSpec("interval does not isolate exactly one root")
        if 2 <= d <= 3 and _has_rational_root(list(coeffs)):
            raise ReducibleFieldSpec("minimal polynomial has a rational root")

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, [-self.minpoly[0]])
        return FieldElement(self, [0, 1])

    def __call__(self, coeffs: Iterable) -> "FieldElement":
        return FieldElement(self, coeffs)

    def root_bounds(self, steps: int):
        """Isolating interval after ``steps`` bisections (width halves each step)."""
        cache = _REFINED.setdefault(self, [self.interval])
        while len(cache) <= steps:
            lo, hi = cache[-1]
            if lo == hi:
                cache.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            fm = _peval(self.minpoly, mid)
            if fm == 0:
                cache.append((mid, mid))
            elif _sgn(fm) == _sgn(_peval(self.minpoly, lo)):
                cache.append((mid, hi))
            else:
                cache.append((lo, mid))
        return cache[steps]

    def to_json(self) -> dict:
        return {"minpoly": [str(c) for c in self.minpoly], "interval": [str(x) for x in self.interval]}

    def __repr__(self):
        return f"NumberField(minpoly={[str(c) for c in self.minpoly]}, interval=({self.interval[0]}, {self.interval[1]}))"


def quadratic_field(d: int) -> NumberField:
    """Q(sqrt(d)) embedded with the positive square root."""
    r = math.isqrt(d)
    if r * r == d:
        raise InvalidFieldSpec(f"{d} is a perfect square")
    return NumberField((-d, 0, 1), (r, r + 1))


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Iterable):
        coeffs = _trim([as_fraction(c) for c in coeffs])
        d = field.degree
        if len(coeffs) > d:
            _, coeffs = _pdivmod(coeffs, list(field.minpoly))
        coeffs = list(coeffs) + [Fraction(0)] * (d - len(coeffs))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, key, value):
        raise AttributeError("FieldElement is immutable")

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ModeMismatch("field elements from different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [other])
        if isinstance(other, Poly):
            if other.is_constant():
                return FieldElement(self.field, [other.constant_term()])
            raise ModeMismatch("cannot combine a field element with a symbolic polynomial")
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, _pmul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldElement(self.field, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero field element")
        if self.field.degree == 2:
            # multiply by the conjugate: (a + b x)(a - b c1 - b x) = a^2 - a b c1 + b^2 c0
            c0, c1 = self.field.minpoly[0], self.field.minpoly[1]
            a, b = (list(self.coeffs) + [Fraction(0)] * 2)[:2]
            norm = a * a - a * b * c1 + b * b * c0
            if norm == 0:
                raise ReducibleFieldSpec("inversion met a nontrivial gcd with the minimal polynomial")
            return FieldElement(self.field, [(a - b * c1) / norm, -b / norm])
        g, s, _ = _pxgcd(_trim(self.coeffs), list(self.field.minpoly))
        if len(g) != 1:
            raise ReducibleFieldSpec("inversion met a nontrivial gcd with the minimal polynomial")
        return FieldElement(self.field, s)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except ModeMismatch:
            return False
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def enclosure(self, steps: int):
        """Rational interval containing the real value, from ``steps`` root bisections."""
        lo, hi = self.field.root_bounds(steps)
        return _interval_eval(_trim(self.coeffs), lo, hi)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            return _sgn(self.coeffs[0])
        # cheap refinements first; the gcd test only matters when zero cannot be excluded
        checked = False
        k = 0
        while k <= MAX_REFINEMENT_STEPS:
            lo, hi = self.enclosure(k)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if lo == hi == 0:
                break
            if k >= 64 and not checked:
                g, _, _ = _pxgcd(_trim(self.coeffs), list(self.field.minpoly))
                if len(g) != 1:
                    raise ReducibleFieldSpec("nonzero element vanishes at a root of a factor of the minimal polynomial")
                checked = True
            k = k + 1 if k < 8 else 2 * k
        raise ReducibleFieldSpec("sign refinement did not separate the value from zero")

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        k = 56
        while True:
            lo, hi = self.enclosure(k)
            mid = (lo + hi) / 2
            if hi - lo <= abs(mid) * Fraction(1, 2**60) or hi - lo < Fraction(1, 2**200):
                return float(mid)
            k += 8

    def __repr__(self):
        return f"FieldElement({[str(c) for c in self.coeffs]})"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            label = "" if k == 0 else ("a" if k == 1 else f"a^{k}")
            if not label:
                parts.append(str(c))
            elif c == 1:
                parts.append(label)
            else:
                parts.append(f"{c}*{label}")
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Symbolic polynomials in theta_ij

def _mono_mul(a: tuple, b: tuple) -> tuple:
    exps = dict(a)
    for var, e in b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


def monomial_key(mono: tuple):
    """Graded lexicographic order on monomials in the (i, j) variables."""
    return (sum(e for _, e in mono), mono)


def monomial_str(mono: tuple) -> str:
    if not mono:
        return "1"
    parts = []
    for (i, j), e in mono:
        name = f"t{i}_{j}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class Poly:
    """Polynomial over Q in indeterminates ``theta_ij``; variables are pairs (i, j), i < j."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc: dict = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for mono, c in items:
            mono = tuple(sorted((tuple(v), int(e)) for v, e in mono if e))
            c = as_fraction(c)
            acc[mono] = acc.get(mono, Fraction(0)) + c
        clean = tuple(sorted(((m, c) for m, c in acc.items() if c != 0), key=lambda mc: monomial_key(mc[0])))
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, key, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def var(cls, i: int, j: int) -> "Poly":
        if not i < j:
            raise ValueError("symbolic variables are theta_ij with i < j")
        return cls({(((i, j), 1),): 1})

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls({(): c})

    def is_constant(self) -> bool:
        return all(not m for m, _ in self.terms)

    def constant_term(self) -> Fraction:
        for m, c in self.terms:
            if not m:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other)
        if isinstance(other, FieldElement):
            if other.is_rational():
                return Poly.constant(other.coeffs[0])
            raise ModeMismatch("cannot combine a symbolic polynomial with a field element")
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Poly(list(self.terms) + list(o.terms))

    __radd__ = __add__

    def __neg__(self):
        return Poly([(m, -c) for m, c in self.terms])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = []
        for m1, c1 in self.terms:
            for m2, c2 in o.terms:
                out.append((_mono_mul(m1, m2), c1 * c2))
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise UnsupportedInSymbolicMode("symbolic polynomials only admit non-negative integer powers")
        result = Poly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __truediv__(self, other):
        # division by a nonzero rational constant is scalar multiplication
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Poly) and other.is_constant() and not other.is_zero():
            return self * (1 / other.constant_term())
        raise UnsupportedInSymbolicMode("symbolic polynomials admit no division")

    def __rtruediv__(self, other):
        raise UnsupportedInSymbolicMode("symbolic polynomials admit no inverses")

    def inverse(self):
        raise UnsupportedInSymbolicMode("symbolic polynomials admit no inverses")

    def sign(self):
        raise UnsupportedInSymbolicMode("sign of a generic symbolic value is undefined")

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except ModeMismatch:
            return False
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_term())
        return hash(self.terms)

    def monomials(self) -> list:
        return [m for m, _ in self.terms]

    def coefficient(self, mono: tuple) -> Fraction:
        for m, c in self.terms:
            if m == mono:
                return c
        return Fraction(0)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for k, (m, c) in enumerate(self.terms):
            sign, mag = ("-", -c) if c < 0 else ("+", c)
            body = str(mag) if not m else (monomial_str(m) if mag == 1 else f"{mag}*{monomial_str(m)}")
            if k == 0:
                out = body if sign == "+" else "-" + body
            else:
                out += f" {sign} {body}"
        return out


Scalar = Union[Fraction, FieldElement, Poly]


# ---------------------------------------------------------------------------
# Mode handling and the scalar operations


def to_scalar(x) -> Scalar:
    if isinstance(x, (FieldElement, Poly, Fraction)):
        return x
    if isinstance(x, (int, str)):
        return as_fraction(x)
    raise TypeError(f"not a scalar: {x!r}")


def mode_of(x) -> str:
    if isinstance(x, FieldElement):
        return FIELD
    if isinstance(x, Poly):
        return SYMBOLIC
    if isinstance(x, (int, Fraction)):
        return RATIONAL
    raise TypeError(f"not a scalar: {x!r}")


@dataclass(frozen=True)
class Frame:
    """Common mode of a collection of scalars (and the shared field, if any)."""

    mode: str
    field: NumberField = None


def common_frame(values: Iterable) -> Frame:
    mode, fld = RATIONAL, None
    for v in values:
        m = mode_of(v)
        if m == RATIONAL:
            continue
        if m == FIELD:
            if mode == SYMBOLIC:
                raise ModeMismatch("field elements mixed with symbolic polynomials")
            if fld is not None and v.field != fld:
                raise ModeMismatch("field elements from different number fields")
            mode, fld = FIELD, v.field
        else:
            if mode == FIELD:
                raise ModeMismatch("field elements mixed with symbolic polynomials")
            mode = SYMBOLIC
    return Frame(mode, fld)


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    a, b = to_scalar(a), to_scalar(b)
    common_frame([a, b])
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def scalar_invert(a: Scalar) -> Scalar:
    a = to_scalar(a)
    if isinstance(a, Poly):
        raise UnsupportedInSymbolicMode("symbolic polynomials admit no inverses")
    if isinstance(a, FieldElement):
        return a.inverse()
    if a == 0:
        raise DivisionByZero("inverse of zero")
    return 1 / a


def scalar_sign(a: Scalar) -> int:
    a = to_scalar(a)
    if isinstance(a, Fraction):
        return _sgn(a)
    return a.sign()


def is_zero(a: Scalar) -> bool:
    return a == 0


def to_float(a: Scalar) -> float:
    a = to_scalar(a)
    if isinstance(a, Poly):
        if a.is_constant():
            return float(a.constant_term())
        raise UnsupportedInSymbolicMode("no numeric value for a generic symbolic entry")
    return float(a)


@dataclass(frozen=True)
class QBasisCoordinates:
    """Coordinates on a canonical Q-basis.

    Labels are ``0`` for the rational unit, the power ``k`` for ``alpha**k``
    in field mode, and monomial tuples in symbolic mode.
    """

    mode: str
    basis: tuple
    coords: tuple
    field: NumberField = None

    def label_strings(self) -> list:
        return [label_str(self.mode, b) for b in self.basis]


def label_str(mode: str, label) -> str:
    if mode == SYMBOLIC:
        return monomial_str(label)
    if label == 0:
        return "1"
    return "a" if label == 1 else f"a^{label}"


def scalar_coordinates(a: Scalar) -> QBasisCoordinates:
    a = to_scalar(a)
    if isinstance(a, Fraction):
        return QBasisCoordinates(RATIONAL, (0,), (a,))
    if isinstance(a, FieldElement):
        return QBasisCoordinates(FIELD, tuple(range(a.field.degree)), a.coeffs, a.field)
    return QBasisCoordinates(SYMBOLIC, tuple(m for m, _ in a.terms), tuple(c for _, c in a.terms))


def coordinates_in(a: Scalar, frame: Frame, labels: Sequence) -> list:
    """Coordinates of ``a`` on an explicit label list of ``frame``."""
    a = to_scalar(a)
    if frame.mode == RATIONAL:
        return [as_fraction(a if not isinstance(a, Poly) else a.constant_term())]
    if frame.mode == FIELD:
        el = a if isinstance(a, FieldElement) else FieldElement(frame.field, [a])
        return [el.coeffs[k] for k in labels]
    p = a if isinstance(a, Poly) else Poly.constant(a)
    return [p.coefficient(m) for m in labels]


def from_coordinates(coords: QBasisCoordinates) -> Scalar:
    return scalar_from_labels(Frame(coords.mode, coords.field), coords.basis, coords.coords)


def scalar_from_labels(frame: Frame, labels: Sequence, coords: Sequence) -> Scalar:
    if frame.mode == RATIONAL:
        return as_fraction(coords[0]) if coords else Fraction(0)
    if frame.mode == FIELD:
        vec = [Fraction(0)] * frame.field.degree
        for k, c in zip(labels, coords):
            vec[k] += as_fraction(c)
        return FieldElement(frame.field, vec)
    return Poly(list(zip(labels, coords)))


def frame_labels(frame: Frame, values: Iterable) -> tuple:
    """Canonical label list for the given values (all powers in field mode)."""
    if frame.mode == RATIONAL:
        return (0,)
    if frame.mode == FIELD:
        return tuple(range(frame.field.degree))
    monos = set()
    for v in values:
        if isinstance(v, Poly):
            monos.update(v.monomials())
        elif v != 0:
            monos.add(())
    return tuple(sorted(monos, key=monomial_key))
