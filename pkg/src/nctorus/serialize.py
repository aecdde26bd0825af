"""JSON encodings of scalars, fields and matrices."""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidFieldSpec, NCTorusError, ParseError
from .exact_arith import FieldElement, NumberField, Poly, as_fraction
from .skewmat import SkewMatrix


def parse_rational(obj) -> Fraction:
    if isinstance(obj, bool):
        raise ParseError(f"not a rational: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return as_fraction(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {obj!r}") from exc
    raise ParseError(f"rationals are integers or 'p/q' strings, got {obj!r}")


def parse_field(obj) -> NumberField:
    if obj is None:
        return None
    try:
        return NumberField(tuple(parse_rational(c) for c in obj["minpoly"]),
                           tuple(parse_rational(x) for x in obj["interval"]))
    except KeyError as exc:
        raise ParseError(f"field spec is missing {exc}") from exc


def parse_scalar(obj, field: NumberField = None):
    """A rational, a field element ``{"coeffs": [...]}`` or a polynomial ``{"terms": [...]}``."""
    if isinstance(obj, dict):
        if "coeffs" in obj:
            fld = parse_field(obj["field"]) if "field" in obj else field
            if fld is None:
                raise InvalidFieldSpec("field element given without a field spec")
            return FieldElement(fld, [parse_rational(c) for c in obj["coeffs"]])
        if "terms" in obj:
            terms = []
            for t in obj["terms"]:
                mono = {}
                for pair in t.get("monomial", []):
                    i, j = int(pair[0]), int(pair[1])
                    if not i < j:
                        raise ParseError(f"monomial variable ({i},{j}) needs i < j")
                    mono[(i, j)] = mono.get((i, j), 0) + 1
                terms.append((tuple(sorted(mono.items())), parse_rational(t.get("coeff", 1))))
            return Poly(terms)
        raise ParseError(f"unrecognised scalar object with keys {sorted(obj)}")
    return parse_rational(obj)


def scalar_to_json(a):
    if isinstance(a, int):
        return str(a)
    if isinstance(a, Fraction):
        return str(a)
    if isinstance(a, FieldElement):
        return {"coeffs": [str(c) for c in a.coeffs]}
    if isinstance(a, Poly):
        return {"terms": [{"monomial": [[i, j] for (i, j), e in m for _ in range(e)], "coeff": str(c)}
                          for m, c in a.terms]}
    raise TypeError(f"not a scalar: {a!r}")


def parse_matrix(obj, field: NumberField = None) -> SkewMatrix:
    """``{"n": n, "upper": {"i,j": scalar}}``; ``"generic"`` adds indeterminates theta_ij."""
    try:
        n = int(obj["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("matrix needs an integer 'n'") from exc
    field = parse_field(obj["field"]) if "field" in obj else field
    upper = {}
    for key, val in obj.get("upper", {}).items():
        try:
            i, j = (int(s) for s in key.split(","))
        except ValueError as exc:
            raise ParseError(f"bad entry key {key!r}; expected 'i,j'") from exc
        upper[(i, j)] = parse_scalar(val, field)
    generic = obj.get("generic")
    if generic:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)] if generic is True \
            else [tuple(map(int, pr)) for pr in generic]
        for pr in pairs:
            if pr in upper:
                raise ParseError(f"entry {pr} given both explicitly and as generic")
            upper[pr] = Poly.var(*pr)
    try:
        return SkewMatrix.from_upper(n, upper)
    except NCTorusError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def matrix_to_json(theta: SkewMatrix) -> dict:
    return {
        "n": theta.n,
        "upper": {f"{i},{j}": scalar_to_json(v) for (i, j), v in theta.upper().items() if v != 0},
    }


def parse_int_matrix(obj) -> list:
    if not isinstance(obj, list) or not obj or any(not isinstance(r, list) for r in obj):
        raise ParseError("integer matrices are non-empty lists of rows")
    rows = []
    for r in obj:
        if any(isinstance(a, bool) or not isinstance(a, int) for a in r):
            raise ParseError("integer matrix entries must be integers")
        rows.append(list(r))
    if any(len(r) != len(rows) for r in rows):
        raise ParseError("integer matrix must be square")
    return rows
