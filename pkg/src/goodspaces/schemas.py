"""JSON Schemas for every ``--json`` payload of the command-line interface."""

_STR_LIST = {"type": "array", "items": {"type": "string"}}

_TRACE_STEP = {
    "type": "object",
    "required": ["rule", "citation", "at"],
    "properties": {"rule": {"type": "string"}, "citation": {"type": "string"}, "at": {"type": "string"}},
    "additionalProperties": False,
}

JUDGMENT = {
    "type": "object",
    "required": ["verdict", "ring", "trace", "notes"],
    "properties": {
        "verdict": {"enum": ["good", "bad", "unknown"]},
        "ring": {"type": "string"},
        "trace": {"type": "array", "items": _TRACE_STEP, "minItems": 1},
        "notes": _STR_LIST,
    },
    "additionalProperties": False,
}

CLASSIFY = {
    "type": "object",
    "required": ["expr", "judgment"],
    "properties": {"expr": {"type": "string"}, "judgment": JUDGMENT},
    "additionalProperties": False,
}

PROFILE = {
    "type": "object",
    "required": ["expr", "profile"],
    "properties": {
        "expr": {"type": "string"},
        "profile": {"type": "object", "patternProperties": {"^[0-9]+$": JUDGMENT}, "additionalProperties": False},
    },
    "additionalProperties": False,
}

_ORDERS = {"type": "array", "items": {"type": "integer", "minimum": 1}}

NILPOTENT_ACTION = {
    "type": "object",
    "required": ["actor_order", "target_order", "nilpotent", "series", "stabilized", "obstruction", "brute_force"],
    "properties": {
        "actor_order": {"type": "integer", "minimum": 1},
        "target_order": {"type": "integer", "minimum": 1},
        "nilpotent": {"type": "boolean"},
        "series": _ORDERS,
        "stabilized": {"type": "boolean"},
        "obstruction": {"oneOf": [{"type": "null"}, _STR_LIST]},
        "brute_force": {"type": ["boolean", "null"]},
    },
    "additionalProperties": False,
}

KERNEL_RANK = {
    "type": "object",
    "required": ["expr", "p", "rank", "quotient_order", "euler_characteristic"],
    "properties": {
        "expr": {"type": "string"},
        "p": {"type": "integer"},
        "rank": {"type": "integer", "minimum": 0},
        "quotient_order": {"type": "integer", "minimum": 1},
        "euler_characteristic": {"type": "string"},
    },
    "additionalProperties": False,
}

EULER = {
    "type": "object",
    "required": ["expr", "euler_characteristic"],
    "properties": {"expr": {"type": "string"}, "euler_characteristic": {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"}},
    "additionalProperties": False,
}

_DEGREE = {
    "type": "object",
    "required": ["degree"],
    "properties": {
        "degree": {"type": "integer", "minimum": 0},
        "dim": {"type": "integer", "minimum": 0},
        "free_rank": {"type": "integer", "minimum": 0},
        "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
    },
    "oneOf": [{"required": ["dim"]}, {"required": ["free_rank", "torsion"]}],
    "additionalProperties": False,
}

GRADED = {
    "type": "object",
    "required": ["ring", "degrees"],
    "properties": {"ring": {"type": "string"}, "degrees": {"type": "array", "items": _DEGREE, "minItems": 1}},
    "additionalProperties": False,
}

HOMOLOGY = {
    "type": "object",
    "required": ["space", "homology"],
    "properties": {"space": {"type": "string"}, "homology": GRADED},
    "additionalProperties": False,
}

HOMOLOGY_COMPARE = {
    "type": "object",
    "required": ["left", "right", "equal", "left_homology", "right_homology", "notes"],
    "properties": {
        "left": {"type": "string"},
        "right": {"type": "string"},
        "equal": {"type": "boolean"},
        "left_homology": GRADED,
        "right_homology": GRADED,
        "notes": _STR_LIST,
    },
    "additionalProperties": False,
}

SERIES = {
    "type": "object",
    "required": ["group", "p", "order", "lower_p_central", "reaches_trivial", "sylow_order", "o_p_order"],
    "properties": {
        "group": {"type": "string"},
        "p": {"type": "integer"},
        "order": {"type": "integer", "minimum": 1},
        "lower_p_central": _ORDERS,
        "reaches_trivial": {"type": "boolean"},
        "sylow_order": {"type": "integer", "minimum": 1},
        "o_p_order": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

ZLATTICE_SINGLE = {
    "type": "object",
    "required": ["rank", "orders", "nilpotent", "rational_dims", "stabilized_at", "lattice_series", "method"],
    "properties": {
        "rank": {"type": "integer", "minimum": 1},
        "orders": _ORDERS,
        "nilpotent": {"type": "boolean"},
        "rational_dims": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "stabilized_at": {"type": ["integer", "null"]},
        "lattice_series": {"type": "string"},
        "method": {"type": "string"},
    },
    "additionalProperties": False,
}

ZLATTICE_ENUMERATION = {
    "type": "object",
    "required": ["parameters", "checked", "nilpotent", "trivial", "counterexamples", "by_rank"],
    "properties": {
        "parameters": {"type": "object"},
        "checked": {"type": "integer", "minimum": 0},
        "nilpotent": {"type": "integer", "minimum": 0},
        "trivial": {"type": "integer", "minimum": 0},
        "counterexamples": {"type": "array"},
        "by_rank": {"type": "object"},
    },
    "additionalProperties": False,
}

ORACLE = {
    "type": "object",
    "required": ["group", "oracle", "closed_form", "agree"],
    "properties": {
        "group": {"type": "string"},
        "oracle": GRADED,
        "closed_form": {"oneOf": [{"type": "null"}, GRADED]},
        "agree": {"type": ["boolean", "null"]},
    },
    "additionalProperties": False,
}

BY_COMMAND = {
    "classify": CLASSIFY,
    "profile": PROFILE,
    "nilpotent-action": NILPOTENT_ACTION,
    "kernel-rank": KERNEL_RANK,
    "euler": EULER,
    "homology": HOMOLOGY,
    "homology-compare": HOMOLOGY_COMPARE,
    "series": SERIES,
    "zlattice": ZLATTICE_SINGLE,
    "zlattice-enumerate": ZLATTICE_ENUMERATION,
    "oracle": ORACLE,
}
