"""Versioned JSON documents, scalar encoding and run manifests."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import SchemaError
from .scalars import Surd

SCHEMA = "projdyn/1"
VERSION = "0.1.0"


# scalars

def parse_scalar(x):
    """int and 'p/q' strings are exact; floats stay floats.

    Objects {"re", "im", "sqrt", "sre", "sim"} stand for
    (re + im i) + (sre + sim i) sqrt(sqrt); all parts are optional.
    """
    if isinstance(x, bool):
        raise SchemaError("boolean where a number was expected")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational {x!r}") from exc
    if isinstance(x, dict):
        extra = set(x) - {"re", "im", "sqrt", "sre", "sim"}
        if extra:
            raise SchemaError(f"unknown scalar fields {sorted(extra)}")
        parts = [parse_scalar(x.get(k, 0)) for k in ("re", "im", "sre", "sim")]
        d = x.get("sqrt", 0)
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise SchemaError("sqrt must be a non-negative integer")
        if all(isinstance(p, Fraction) for p in parts):
            return Surd(parts[0], parts[1], parts[2], parts[3], d)
        r = math.sqrt(d)
        return complex(float(parts[0]) + float(parts[2]) * r, float(parts[1]) + float(parts[3]) * r)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(float(x[0]), float(x[1]))
    raise SchemaError(f"cannot read a scalar from {x!r}")


def _rat(q: Fraction):
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def dump_scalar(x):
    if isinstance(x, Fraction):
        return _rat(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, Surd):
        if x.is_rational():
            return _rat(x.a)
        out = {"re": _rat(x.a), "im": _rat(x.b)}
        if x.d:
            out.update(sqrt=x.d, sre=_rat(x.c), sim=_rat(x.e))
        return {k: v for k, v in out.items() if v != 0 or k == "re"}
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        return x.real if x.imag == 0 else {"re": x.real, "im": x.imag}
    if isinstance(x, (float, np.floating)):
        return float(x)
    raise SchemaError(f"cannot encode {type(x).__name__}")


def parse_matrix(rows) -> list:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SchemaError("a matrix is a non-empty list of rows")
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise SchemaError("ragged matrix")
    M = [[parse_scalar(x) for x in r] for r in rows]
    if all(isinstance(x, (Fraction, Surd)) for r in M for x in r):
        return [[Surd.coerce(x) for x in r] for r in M]
    return np.array([[complex(x) for x in r] for r in M], dtype=complex)


def dump_matrix(M) -> list:
    if isinstance(M, np.ndarray):
        return [[dump_scalar(complex(x)) for x in r] for r in M]
    return [[dump_scalar(x) for x in r] for r in M]


def dump_vector(v) -> list:
    return [dump_scalar(x if not isinstance(x, np.generic) else complex(x)) for x in v]


# documents

def load_document(text: str, required=(), optional=()) -> dict:
    """Parse a document and reject unknown fields and foreign schemas."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg} at line {exc.lineno}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise SchemaError(f"schema {schema!r}, expected {SCHEMA!r}")
    allowed = set(required) | set(optional) | {"schema", "kind"}
    extra = set(doc) - allowed
    if extra:
        raise SchemaError(f"unknown fields {sorted(extra)}")
    missing = [k for k in required if k not in doc]
    if missing:
        raise SchemaError(f"missing fields {missing}")
    return doc


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass
class RunManifest:
    """What was run, on what, and how."""
    command: str
    inputs: dict = field(default_factory=dict)     # name -> sha256
    tol: float = 1e-9
    mode: str = "exact"
    seed: int = 0
    version: str = VERSION

    def as_dict(self) -> dict:
        return {"command": self.command, "inputs": dict(sorted(self.inputs.items())),
                "tol": self.tol, "mode": self.mode, "seed": self.seed, "version": self.version}


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (Fraction, Surd, complex, np.complexfloating)):
        return dump_scalar(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x) or math.isnan(x):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        return x
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    return x


def envelope(manifest: RunManifest, result: dict) -> dict:
    return {"schema": SCHEMA, "manifest": manifest.as_dict(), "result": _clean(result)}


def dumps(doc: dict) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(_clean(doc), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"
