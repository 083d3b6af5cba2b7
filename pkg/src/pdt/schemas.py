"""JSON schemas for every record the command-line tool emits.

They are plain dicts in JSON Schema draft 2020-12 so any validator can use
them; the package itself does not validate at runtime.
"""

_number = {"type": "number"}
_prob = {"type": "number", "minimum": 0, "maximum": 1}
_nonneg = {"type": "integer", "minimum": 0}
_opt_number = {"type": ["number", "null"]}
_opt_str = {"type": ["string", "null"]}

CAPACITY = {
    "type": "object",
    "required": ["eps1", "eps2", "N", "c2p", "r_lb", "r_ub", "r_ex"],
    "properties": {
        "eps1": _prob, "eps2": _prob, "N": {"type": "integer", "minimum": 2},
        "c2p": _opt_number, "r_lb": _number, "r_ub": _number, "r_ex": _number,
    },
    "additionalProperties": False,
}

PARAMS = {
    "type": "object",
    "required": ["n", "N", "eps1", "eps2", "delta"],
    "properties": {"n": {"type": "integer", "minimum": 1}, "N": {"type": "integer", "minimum": 2},
                   "eps1": _prob, "eps2": _prob, "delta": _number},
}

PLAN_FIELDS = ["n", "N", "r1", "r2", "size_L", "size_Lt", "size_C", "size_Ct", "size_S",
               "size_St", "m_dot", "m_ddot", "m_total"]

SIZE_PLAN = {
    "type": "object",
    "required": PLAN_FIELDS,
    "properties": {k: (_number if k in ("r1", "r2") else _nonneg) for k in PLAN_FIELDS},
    "additionalProperties": False,
}

PLAN = {
    "type": "object",
    "required": ["params", "plan"],
    "properties": {"params": PARAMS, "plan": SIZE_PLAN},
}

_bits = {"type": "string", "pattern": "^[01]*$"}
_set_entry = {
    "type": "object",
    "required": ["slot", "indices"],
    "properties": {"slot": _nonneg, "indices": {"type": "array", "items": _nonneg}},
}

TRANSCRIPT_ENTRY = {
    "type": "object",
    "required": ["sender", "tag", "length"],
    "properties": {
        "sender": {"enum": ["Alice", "Bob", "Cathy"]},
        "tag": {"enum": ["bob-sets", "cathy-sets", "ciphertexts", "ot-sets", "ot-ciphertexts",
                         "abort"]},
        "length": _nonneg,
        "payload": {"anyOf": [{"type": "array", "items": _set_entry}, {"type": "string"}]},
    },
}

RUN_RECORD = {
    "type": "object",
    "required": ["params", "plan", "seeds", "status", "abort_stage", "abort_party", "u", "w",
                 "achieved_rate", "m_total", "transcript", "transcript_sha256"],
    "properties": {
        "params": PARAMS,
        "plan": SIZE_PLAN,
        "seeds": {"type": "object", "additionalProperties": {"type": "integer"}},
        "seed": {"type": "integer"},
        "status": {"enum": ["Completed", "Aborted"]},
        "abort_stage": {"enum": [None, "BobSizeCheck", "CathySizeCheck",
                                 "AliceIntersectionCheck", "OTSizeCheck"]},
        "abort_party": _opt_str,
        "u": _nonneg, "w": _nonneg,
        "achieved_rate": _number,
        "m_total": _nonneg,
        "decoded_correctly": {"type": "boolean"},
        "transcript": {"type": "array", "items": TRANSCRIPT_ENTRY},
        "transcript_sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "x": _bits, "y": {"type": "string"}, "z": {"type": "string"},
    },
}

_condition = {
    "type": "object",
    "required": ["id", "description", "value", "threshold", "passed"],
    "properties": {"id": {"type": "string"}, "description": {"type": "string"},
                   "value": {"type": "number", "minimum": 0},
                   "threshold": _number, "passed": {"type": "boolean"}},
}

PRIVACY_REPORT = {
    "type": "object",
    "required": ["config", "outcomes", "atoms", "mass", "mass_ok", "p_complete", "entries",
                 "all_pass"],
    "properties": {
        "config": {"type": "object"},
        "outcomes": _nonneg, "atoms": _nonneg, "mass": _number,
        "mass_ok": {"type": "boolean"}, "p_complete": _prob,
        "entries": {"type": "array", "items": _condition, "minItems": 1},
        "all_pass": {"type": "boolean"},
        "announcement_tv": {"type": "object", "additionalProperties": _prob},
    },
}

BUDGET_ERROR = {
    "type": "object",
    "required": ["error", "detail"],
    "properties": {"error": {"const": "budget-exceeded"}, "detail": {"type": "string"}},
}

ERROR = {
    "type": "object",
    "required": ["error", "detail"],
    "properties": {"error": {"type": "string"}, "detail": {"type": "string"},
                   "invariant": {"type": "string"}},
}

SWEEP_COLUMNS = ["eps1", "eps2", "N", "n", "delta", "trials", "abort_rate",
                 "decode_error_rate", "mean_rate", "r_lb", "r_ub", "c2p"]
