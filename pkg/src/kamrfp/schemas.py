"""JSON Schemas for the CLI reports (draft 2020-12)."""

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_TIMINGS = {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}}
_APPROX = {"type": "object", "additionalProperties": {"type": "number"}}

SOLVE_REPORT = {
    "type": "object",
    "required": [
        "command", "mode", "n", "m", "k", "scenarios", "variables", "fstar", "theta",
        "loss", "flow", "worst_attack", "certified", "timings_ms",
    ],
    "properties": {
        "command": {"const": "solve"},
        "mode": {"enum": ["two_phase", "combined"]},
        "n": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 0},
        "k": {"type": "integer", "minimum": 1},
        "scenarios": {"type": "integer", "minimum": 1},
        "variables": {"type": "integer", "minimum": 1},
        "fstar": RATIONAL,
        "theta": RATIONAL,
        "loss": RATIONAL,
        "flow": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["arc", "value"],
                "properties": {"arc": {"type": "integer", "minimum": 1}, "value": RATIONAL,
                               "value_float": {"type": "number"}},
            },
        },
        "worst_attack": {"type": ["array", "null"], "items": {"type": "integer", "minimum": 1}},
        "certified": {"type": "boolean"},
        "lp_method": {"type": ["string", "null"]},
        "timings_ms": _TIMINGS,
        "approx": _APPROX,
    },
}

ATTACK_REPORT = {
    "type": "object",
    "required": [
        "command", "n", "m", "k", "scenarios", "attacked_flow_value", "residual", "loss",
        "worst_attack", "subsets_evaluated", "timings_ms",
    ],
    "properties": {
        "command": {"const": "attack"},
        "attacked_flow_value": RATIONAL,
        "residual": RATIONAL,
        "loss": RATIONAL,
        "worst_attack": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "subsets_evaluated": {"type": "integer", "minimum": 1},
        "timings_ms": _TIMINGS,
        "approx": _APPROX,
    },
}

ORACLE_REPORT = {
    "type": "object",
    "required": ["command", "n", "m", "fstar", "tolerance", "lambda", "theta", "skipped"],
    "properties": {
        "command": {"const": "oracle-k1"},
        "fstar": RATIONAL,
        "tolerance": RATIONAL,
        "lambda": {"anyOf": [RATIONAL, {"type": "null"}]},
        "theta": {"anyOf": [RATIONAL, {"type": "null"}]},
        "skipped": {"type": "boolean"},
        "timings_ms": _TIMINGS,
        "approx": _APPROX,
    },
}

ERROR_REPORT = {
    "type": "object",
    "required": ["error"],
    "properties": {"error": {"type": "string"}, "exit_code": {"enum": [2, 3, 4]}},
}

BY_COMMAND = {"solve": SOLVE_REPORT, "attack": ATTACK_REPORT, "oracle-k1": ORACLE_REPORT}
