"""JSON schemas for the structured documents read by the command line."""

from __future__ import annotations

from typing import Any, Mapping

import jsonschema

from .errors import InvalidInputError

SCHEMA_VERSION = 1

_int = {"type": "integer"}
_labels = {"type": "array", "items": {"type": "string", "minLength": 1}}

SURFACE = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["plane", "hirzebruch", "blowup"]},
        "e": {"type": "integer", "minimum": 0},
        "base": {"$ref": "#/$defs/surface"},
        "points": _labels,
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "hirzebruch"}}}, "then": {"required": ["e"]}},
        {"if": {"properties": {"kind": {"const": "blowup"}}}, "then": {"required": ["base", "points"]}},
    ],
}

LINEAR_SYSTEM = {
    "type": "object",
    "required": ["surface", "class"],
    "properties": {
        "surface": {"$ref": "#/$defs/surface"},
        "class": {
            "oneOf": [
                {"type": "object", "additionalProperties": _int},
                {"type": "array", "items": _int},
            ]
        },
        "mults": {"type": "object", "additionalProperties": _int},
        "on_c0": _labels,
    },
}

STEP = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["cremona", "dejonquieres", "elementary", "blowdown_f1", "blowdown_hirzebruch"]},
        "centers": _labels,
        "center": {"type": "string"},
        "degree": {"type": "integer", "minimum": 2},
        "inverse": {"type": "boolean"},
        "on_c0": {"type": "boolean"},
    },
}

PLANE_SYSTEM = {
    "type": "object",
    "required": ["degree"],
    "properties": {
        "degree": {"type": "integer", "minimum": 1},
        "p0": {"type": "integer", "minimum": 0},
        "points": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
    },
    "additionalProperties": False,
}

_DEFS = {"surface": SURFACE}


def _document(body: Mapping[str, Any], required: list[str]) -> dict:
    return {
        "type": "object",
        "$defs": _DEFS,
        "required": required,
        "properties": {"schema_version": {"const": SCHEMA_VERSION}, **body},
    }


SCHEMAS: dict[str, dict] = {
    "apply": _document(
        {"system": LINEAR_SYSTEM, "chain": {"type": "array", "items": STEP}},
        ["system", "chain"],
    ),
    "dim": _document({"system": PLANE_SYSTEM}, ["system"]),
    "genus": _document({"system": PLANE_SYSTEM}, ["system"]),
    "oracle": _document({"system": PLANE_SYSTEM}, ["system"]),
    "chase": _document(
        {
            "e": {"type": "integer", "minimum": 0},
            "delta": {"type": "integer", "minimum": 0},
            "a": {"type": "integer", "minimum": 1},
            "k": {"type": "integer", "minimum": 0},
            "plane_degree": {"type": "integer", "minimum": 1},
        },
        ["e", "delta"],
    ),
    "classify": _document(
        {
            "base": {"enum": ["plane", "hirzebruch"]},
            "degree": {"type": "integer", "minimum": 0},
            "singular_mults": {"type": "array", "items": {"type": "integer"}},
            "e": {"type": "integer", "minimum": 0},
            "a": {"type": "integer", "minimum": 0},
            "b": {"type": "integer", "minimum": 0},
            "standard": {"type": "boolean"},
            "delta_connected": {"type": ["boolean", "null"]},
        },
        ["base"],
    ),
}


def validate(command: str, payload: Any) -> None:
    """Raise :class:`InvalidInputError` naming the offending field path."""
    schema = SCHEMAS[command]
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(payload), key=lambda err: list(err.absolute_path))
    if errors:
        err = errors[0]
        path = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise InvalidInputError(f"{command}: {path}: {err.message}")
