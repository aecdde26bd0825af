"""JSON Schemas for CLI inputs and reports.  ``docs/schemas`` holds a dump of these."""

from __future__ import annotations

import json
from pathlib import Path

DIALECT = "https://json-schema.org/draft/2020-12/schema"

_rational = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[-+]?\d+(\s*/\s*[-+]?\d+)?\s*$"},
    ]
}
_field = {
    "type": "object",
    "required": ["minpoly", "interval"],
    "properties": {
        "minpoly": {"type": "array", "minItems": 2, "items": {"$ref": "#/$defs/rational"}},
        "interval": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"$ref": "#/$defs/rational"}},
    },
    "additionalProperties": False,
}
_scalar = {
    "oneOf": [
        {"$ref": "#/$defs/rational"},
        {
            "type": "object",
            "required": ["coeffs"],
            "properties": {
                "coeffs": {"type": "array", "items": {"$ref": "#/$defs/rational"}},
                "field": {"$ref": "#/$defs/field"},
            },
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["terms"],
            "properties": {
                "terms": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["coeff"],
                        "properties": {
                            "monomial": {
                                "type": "array",
                                "items": {"type": "array", "items": {"type": "integer", "minimum": 1},
                                          "minItems": 2, "maxItems": 2},
                            },
                            "coeff": {"$ref": "#/$defs/rational"},
                        },
                        "additionalProperties": False,
                    },
                }
            },
            "additionalProperties": False,
        },
    ]
}
_matrix = {
    "type": "object",
    "required": ["n"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "upper": {
            "type": "object",
            "propertyNames": {"pattern": r"^\d+,\d+$"},
            "additionalProperties": {"$ref": "#/$defs/scalar"},
        },
        "generic": {
            "oneOf": [
                {"type": "boolean"},
                {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                            "minItems": 2, "maxItems": 2}},
            ]
        },
        "field": {"$ref": "#/$defs/field"},
    },
    "additionalProperties": False,
}
_int_matrix = {
    "type": "array",
    "minItems": 1,
    "items": {"type": "array", "minItems": 1, "items": {"type": "integer"}},
}
_index_tuple = {"type": "array", "items": {"type": "integer", "minimum": 1}}

DEFS = {
    "rational": _rational,
    "field": _field,
    "scalar": _scalar,
    "matrix": _matrix,
    "int_matrix": _int_matrix,
    "index_tuple": _index_tuple,
}


def _obj(required, properties) -> dict:
    props = {"field": {"$ref": "#/$defs/field"}}
    props.update(properties)
    return {"type": "object", "required": list(required), "properties": props, "additionalProperties": False}


_theta = {"$ref": "#/$defs/matrix"}
_W = {"$ref": "#/$defs/int_matrix"}
_pos = {"type": "integer", "minimum": 1}

INPUT_SCHEMAS = {
    "pfaffian": _obj(["theta"], {"theta": _theta}),
    "minors": _obj(["theta"], {"theta": _theta}),
    "find-t": _obj(["theta"], {"theta": _theta, "t_max": _pos}),
    "check-symplectic": _obj(["W", "theta"], {"W": _W, "theta": _theta}),
    "order": _obj(["W"], {"W": _W, "max_order": _pos}),
    "freeness": _obj(["W"], {"W": _W, "max_order": _pos}),
    "extension-check": _obj(["W"], {"W": _W, "I": {"oneOf": [
        {"$ref": "#/$defs/index_tuple"},
        {"type": "array", "items": {"$ref": "#/$defs/index_tuple"}},
    ]}}),
    "trace-range": _obj(["theta"], {"theta": _theta}),
    "orbifold-range": _obj(["theta", "W"], {"theta": _theta, "W": _W, "max_order": _pos}),
    "morita-lambda": _obj(["R1", "R2"], {
        "R1": {"type": "array", "items": {"$ref": "#/$defs/scalar"}},
        "R2": {"type": "array", "items": {"$ref": "#/$defs/scalar"}},
        "coeff_bound": _pos,
    }),
    "gl2-orbit": _obj(["theta1", "theta2"], {"theta1": {"$ref": "#/$defs/scalar"},
                                            "theta2": {"$ref": "#/$defs/scalar"}}),
    "verify-module": _obj(["theta", "p", "grid"], {
        "name": {"type": "string"},
        "theta": _theta,
        "p": _pos,
        "t11": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/scalar"}}},
        "grid": {
            "type": "object",
            "required": ["L", "h"],
            "properties": {"L": {"type": "number", "exclusiveMinimum": 0},
                           "h": {"type": "number", "exclusiveMinimum": 0},
                           "K": {"type": "integer", "minimum": 0}},
            "additionalProperties": False,
        },
        "W": _W,
        "phase": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "l_box": {"type": "integer", "minimum": 0},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "tests": {"type": "array", "items": {"enum": [
            "commutation", "inner_identity", "covariance", "unitarity", "inner_compat", "fourier_fixed_point",
        ]}},
    }),
}

REPORT_SCHEMA = {
    "$schema": DIALECT,
    "title": "nctorus report",
    "type": "object",
    "required": ["command", "status", "payload", "flags", "version"],
    "properties": {
        "command": {"enum": sorted(INPUT_SCHEMAS)},
        "status": {"enum": ["ok", "error", "unknown"]},
        "payload": {"type": "object"},
        "flags": {"type": "object"},
        "version": {"type": "string"},
        "error": {
            "type": "object",
            "required": ["code", "message"],
            "properties": {"code": {"type": "string"}, "message": {"type": "string"}},
        },
        "timing": {"type": "object"},
    },
    "additionalProperties": False,
}


def input_schema(command: str) -> dict:
    schema = {"$schema": DIALECT, "title": f"nctorus {command} input", "$defs": DEFS}
    schema.update(INPUT_SCHEMAS[command])
    return schema


def all_schemas() -> dict:
    """File name -> schema, as shipped in docs/schemas."""
    out = {f"{cmd}.input.json": input_schema(cmd) for cmd in INPUT_SCHEMAS}
    out["report.json"] = REPORT_SCHEMA
    return out


def dump(directory) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, schema in all_schemas().items():
        path = directory / name
        path.write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


if __name__ == "__main__":  # pragma: no cover
    import sys

    for p in dump(sys.argv[1] if len(sys.argv) > 1 else "docs/schemas"):
        print(p)
