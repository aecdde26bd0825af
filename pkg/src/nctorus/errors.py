"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""


class NCTorusError(Exception):
    code = "ERROR"


class ModeMismatch(NCTorusError, TypeError):
    code = "MODE_MISMATCH"


class DivisionByZero(NCTorusError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class UnsupportedInSymbolicMode(NCTorusError):
    code = "UNSUPPORTED_IN_SYMBOLIC_MODE"


class InvalidFieldSpec(NCTorusError, ValueError):
    code = "INVALID_FIELD_SPEC"


class ReducibleFieldSpec(InvalidFieldSpec):
    code = "REDUCIBLE_FIELD_SPEC"


class NotSkewSymmetric(NCTorusError, ValueError):
    code = "NOT_SKEW_SYMMETRIC"


class OddDimension(NCTorusError, ValueError):
    code = "ODD_DIMENSION"


class InvalidIndexTuple(NCTorusError, ValueError):
    code = "INVALID_INDEX_TUPLE"


class DimensionMismatch(NCTorusError, ValueError):
    code = "DIMENSION_MISMATCH"


class NotUnimodular(NCTorusError, ValueError):
    code = "NOT_UNIMODULAR"


class NotSkewIntegral(NCTorusError, ValueError):
    code = "NOT_SKEW_INTEGRAL"


class BadP(NCTorusError, ValueError):
    code = "BAD_P"


class InvariantViolation(NCTorusError):
    code = "INVARIANT_VIOLATION"


class ActionUndefined(NCTorusError, ValueError):
    code = "ACTION_UNDEFINED"


class NotBlockDiagonal(NCTorusError, ValueError):
    code = "NOT_BLOCK_DIAGONAL"


class LabelMismatch(NCTorusError, ValueError):
    code = "LABEL_MISMATCH"


class ZeroScale(NCTorusError, ValueError):
    code = "ZERO_SCALE"


class MixedKinds(NCTorusError, TypeError):
    code = "MIXED_KINDS"


class SingularBlock(NCTorusError, ValueError):
    code = "SINGULAR_BLOCK"


class OutOfGrid(NCTorusError, ValueError):
    code = "OUT_OF_GRID"


class UnsupportedW1(NCTorusError, ValueError):
    code = "UNSUPPORTED_W1"


class ParseError(NCTorusError, ValueError):
    code = "PARSE_ERROR"


class SchemaError(NCTorusError, ValueError):
    code = "SCHEMA_ERROR"
