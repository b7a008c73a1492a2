"""JSON quiver and representation documents."""

from __future__ import annotations

import json
import re
import warnings
from importlib import resources

import jsonschema

from .exactalg import QQ, Matrix, parse_rational
from .flows import Weight
from .quiver import (
    DisconnectedQuiverWarning,
    Quiver,
    Representation,
    injective,
    kronecker_I,
    kronecker_P,
    projective,
    simple,
)

RATIONAL = r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"

QUIVER_SCHEMA = {
    "type": "object",
    "required": ["vertices", "arrows", "weight"],
    "additionalProperties": False,
    "properties": {
        "vertices": {"type": "array", "items": {"type": "string"}, "minItems": 1, "uniqueItems": True},
        "arrows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "tail", "head"],
                "additionalProperties": False,
                "properties": {"id": {"type": "string"}, "tail": {"type": "string"}, "head": {"type": "string"}},
            },
        },
        "weight": {"type": "object", "additionalProperties": {"type": "integer"}},
    },
}

_ENTRY = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": RATIONAL}]}

REP_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "required": ["builtin"],
            "additionalProperties": False,
            "properties": {"builtin": {"type": "string", "pattern": r"^(P|I)\([0-9]+\)$|^(S|proj|inj)\(.+\)$"}},
        },
        {
            "type": "object",
            "required": ["dims"],
            "additionalProperties": False,
            "properties": {
                "dims": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
                "maps": {
                    "type": "object",
                    "additionalProperties": {"type": "array", "items": {"type": "array", "items": _ENTRY}},
                },
            },
        },
    ]
}


class SchemaError(ValueError):
    """A document does not match its schema or is internally inconsistent."""


def _validate(doc, schema, what):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"{what}: {exc.message}" + (f" (at {path})" if path else "")) from None


def read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read ({exc.strerror})") from None


def quiver_from_doc(doc) -> tuple:
    """``(Quiver, Weight)`` from a quiver document (schema-checked)."""
    _validate(doc, QUIVER_SCHEMA, "quiver file")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DisconnectedQuiverWarning)
        q = Quiver(doc["vertices"], [(a["id"], a["tail"], a["head"]) for a in doc["arrows"]])
    try:
        w = Weight.of(q, doc["weight"])
    except ValueError as exc:
        raise SchemaError(f"quiver file: {exc}") from None
    return q, w


def _kronecker_builtin(q: Quiver, rep: Representation) -> Representation:
    if len(q.vertices) != 2 or len(q.arrows) != 2 or any(
            (a.tail, a.head) != (q.arrows[0].tail, q.arrows[0].head) for a in q.arrows) or q.arrows[0].tail == q.arrows[0].head:
        raise SchemaError("builtins P(n) and I(n) need a Kronecker quiver with two arrows")
    src, dst = q.arrows[0].tail, q.arrows[0].head
    dims = {src: rep.dims["1"], dst: rep.dims["2"]}
    maps = {q.arrows[0].id: rep.maps["a1"], q.arrows[1].id: rep.maps["a2"]}
    return Representation(q, dims, maps)


def rep_from_doc(q: Quiver, doc) -> Representation:
    _validate(doc, REP_SCHEMA, "representation file")
    if "builtin" in doc:
        name = doc["builtin"]
        m = re.fullmatch(r"(P|I|S|proj|inj)\((.+)\)", name)
        kind, arg = m.group(1), m.group(2)
        try:
            if kind == "P":
                return _kronecker_builtin(q, kronecker_P(int(arg)))
            if kind == "I":
                return _kronecker_builtin(q, kronecker_I(int(arg)))
            ctor = {"S": simple, "proj": projective, "inj": injective}[kind]
            return ctor(q, arg)
        except ValueError as exc:
            raise SchemaError(f"representation file: {exc}") from None
    try:
        maps = {}
        for aid, rows in doc.get("maps", {}).items():
            maps[aid] = [[parse_rational(x) for x in row] for row in rows]
        dims = doc["dims"]
        unknown = set(dims) - set(q.vertices)
        if unknown:
            raise ValueError(f"dims for unknown vertices {sorted(unknown)}")
        conv = {}
        for aid, rows in maps.items():
            if aid not in q.arrow_ids:
                raise ValueError(f"map for unknown arrow {aid!r}")
            a = q.arrow(aid)
            r, c = dims.get(a.head, 0), dims.get(a.tail, 0)
            if len(rows) != r or any(len(row) != c for row in rows):
                raise ValueError(f"map {aid} must be {r}x{c}")
            conv[aid] = Matrix.from_rows(rows, QQ, ncols=c) if r else Matrix.zeros(0, c)
        return Representation(q, dims, conv)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"representation file: {exc}") from None


def load_quiver(path: str):
    doc = read_json(path)
    q, w = quiver_from_doc(doc)
    return q, w, doc


def load_rep(q: Quiver, path: str):
    doc = read_json(path)
    return rep_from_doc(q, doc), doc


def fixture_path(name: str) -> str:
    """Path of a bundled fixture such as ``kronecker2.json``."""
    return str(resources.files("cjtkit").joinpath("fixtures", name))
