"""JSON Schemas (draft 2020-12) for the reports the CLI emits."""
from __future__ import annotations

_NUM = {"type": "number"}
_INT = {"type": "integer"}
_NULLABLE_NUM = {"type": ["number", "null"]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "experiment report",
    "type": "object",
    "required": [
        "kind",
        "config",
        "mean",
        "prediction",
        "second_moment",
        "exceptional_count",
        "threshold",
        "error_budget",
        "timing",
    ],
    "properties": {
        "kind": {"enum": ["average", "moment", "census"]},
        "config": {
            "type": "object",
            "required": ["x", "A", "B", "r", "c", "d"],
            "properties": {
                "x": _INT,
                "A": _INT,
                "B": _INT,
                "r": _INT,
                "c": _NUM,
                "d": _NUM,
            },
            "additionalProperties": False,
        },
        "mean": _NUM,
        "prediction": _NUM,
        "second_moment": _NULLABLE_NUM,
        "exceptional_count": {"type": ["integer", "null"]},
        "threshold": _NULLABLE_NUM,
        "error_budget": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "value"],
                "properties": {"name": {"type": "string"}, "value": _NUM},
            },
        },
        "warnings": {"type": "array", "items": {"type": "string"}},
        "diagnostics": {"type": "object"},
        "timing": {
            "type": ["object", "null"],
            "properties": {"seconds": _NUM},
        },
    },
    "additionalProperties": False,
}


def _obj(required: dict, extra: dict | None = None) -> dict:
    props = dict(required)
    props.update(extra or {})
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": sorted(required),
        "properties": props,
    }


_CHECK = {
    "type": "object",
    "required": ["name", "passed", "cases", "failures", "seconds"],
    "properties": {
        "name": {"type": "string"},
        "passed": {"type": "boolean"},
        "cases": _INT,
        "failures": {"type": "array", "items": {"type": "string"}},
        "seconds": _NUM,
    },
}

SCHEMAS = {
    "average": REPORT_SCHEMA,
    "moment": REPORT_SCHEMA,
    "census": REPORT_SCHEMA,
    "trace": _obj({"p": _INT, "a": _INT, "b": _INT, "r": _INT, "points": _INT}),
    "distribution": _obj(
        {
            "p": _INT,
            "total": _INT,
            "counts": {"type": "array", "items": {"type": "array", "items": _INT}},
        },
        {"membership_r": _INT, "membership_count": _INT},
    ),
    "classnum": _obj(
        {
            "D": _INT,
            "H": _INT,
            "decomposition": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["f", "d", "h"],
                    "properties": {"f": _INT, "d": _INT, "h": _INT},
                },
            },
        }
    ),
    "isoclasses": _obj(
        {
            "p": _INT,
            "r": _INT,
            "class_count": _INT,
            "nonzero_class_count": _INT,
            "H": _INT,
            "classes": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["a", "b", "size"],
                    "properties": {"a": _INT, "b": _INT, "size": _INT},
                },
            },
        }
    ),
    "charcheck": _obj(
        {
            "q": _INT,
            "orthogonality": {"type": "object"},
            "polya_vinogradov": {"type": "object"},
            "fourth_moment": {"type": "object"},
            "passed": {"type": "boolean"},
        }
    ),
    "boxcount": _obj(
        {
            "p": _INT,
            "r": _INT,
            "A": _INT,
            "B": _INT,
            "total": _NUM,
            "M": _NUM,
            "E1": _NUM,
            "E2": _NUM,
            "direct": _INT,
            "nonzero_classes": _INT,
            "main_term_closed_form": _NUM,
            "max_imag": _NUM,
            "residual": _NUM,
        }
    ),
    "constants": _obj(
        {
            "r": _INT,
            "value": _NUM,
            "truncation_prime": _INT,
            "tail_bound": _NUM,
            "truncated": _NUM,
            "inverted_divisor_factors": {"type": "boolean"},
        }
    ),
    "lemma3": _obj(
        {
            "x": _INT,
            "r": _INT,
            "total": _NUM,
            "prediction": _NUM,
            "ratio": _NUM,
            "prime_count": _INT,
            "inverted_divisor_factors": {"type": "boolean"},
        }
    ),
    "verify-all": _obj(
        {"passed": {"type": "boolean"}, "checks": {"type": "array", "items": _CHECK}}
    ),
}
