"""JSON encoding for traces, audit reports and basis suites.

Complex numbers are ``[re, im]`` pairs; floats use Python's shortest
round-trip repr, so identical inputs give byte-identical output.
"""
from __future__ import annotations

import json
import math

import numpy as np

SCHEMA_VERSION = 1


def as_float(x) -> float | None:
    x = float(x)
    if not math.isfinite(x):
        return None
    return x + 0.0  # folds -0.0 into 0.0


def complex_pair(z) -> list:
    z = complex(z)
    return [as_float(z.real), as_float(z.imag)]


def vector(v) -> list:
    return [complex_pair(z) for z in np.asarray(v).reshape(-1)]


def matrix(m) -> list:
    return [vector(row) for row in np.asarray(m)]


def trace_to_dict(t) -> dict:
    return {
        "protocol": t.protocol,
        "parameters": {k: (list(map(as_float, v)) if isinstance(v, (list, tuple)) else as_float(v))
                       for k, v in t.parameters.items()},
        "outcomes": list(t.outcomes),
        "probability": as_float(t.probability),
        "messages": [m.as_dict() for m in t.messages],
        "corrections": [{"party": c.party.value, "name": c.name, "matrix": matrix(c.matrix)}
                        for c in t.corrections],
        "final_state": {"dims": list(t.final_state.dims), "amps": vector(t.final_state.amps)},
        "fidelity": as_float(t.fidelity),
        "total_bits": t.total_bits,
    }


def report_to_dict(r) -> dict:
    return {
        "protocol": r.protocol,
        "samples": r.samples,
        "seed": r.seed,
        "ok": r.ok,
        "pairs": [
            {
                "outcomes": list(p.outcomes),
                "listed_name": p.listed_name,
                "listed_matrix": matrix(p.listed_matrix),
                "oracle_matrix": None if p.oracle_matrix is None else matrix(p.oracle_matrix),
                "oracle_constant": p.oracle_constant,
                "agrees": p.agrees,
                "max_fidelity_deficit": as_float(p.max_fidelity_deficit),
                "oracle_max_deficit": as_float(p.oracle_max_deficit),
                "checked": p.checked,
            }
            for p in r.pairs
        ],
        "discrepancies": [
            {"outcomes": list(d.outcomes), "parameters": d.parameters, "fidelity": as_float(d.fidelity)}
            for d in r.discrepancies
        ],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=True, allow_nan=False) + "\n"
