"""Coefficient tables on disk.

One JSON file holds one matrix (a coefficient block or a similarity ``S``)
or one matrix family (a real irrep, indexed by element).  Every entry is a
``[re, im]`` pair with 17 significant digits, so a save/load cycle is
bit-exact.  A SHA-256 checksum over the payload values catches edits that
keep the file well-formed, and the provenance section records the tool
version together with checksums of the bundled data the numbers came from.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .basis import FLAVORS, CoefficientBlock
from .datafiles import SCHEMA_VERSION, file_sha256, group_file, irrep_file, read_json, write_json
from .errors import ChecksumMismatch, SchemaMismatch

KINDS = ("coefficient_block", "real_irrep", "similarity")

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _PAIR}}

FILE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "kind", "group", "p", "shape", "provenance", "checksum"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": list(KINDS)},
        "group": {"enum": ["T", "O", "I"]},
        "p": {"type": "integer", "minimum": 1},
        "l": {"type": "integer", "minimum": 0},
        "n": {"type": "integer", "minimum": 1},
        "flavor": {"enum": list(FLAVORS)},
        "shape": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "matrix": _MATRIX,
        "matrices": {"type": "array", "minItems": 1, "items": _MATRIX},
        "provenance": {
            "type": "object",
            "required": ["tool", "version", "data_files"],
            "properties": {"data_files": {"type": "object", "additionalProperties": {"type": "string"}}},
        },
        "checksum": {"type": "string", "pattern": "^sha256:[0-9a-f]{64}$"},
    },
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "coefficient_block"}}},
            "then": {"required": ["l", "n", "flavor", "matrix"]},
        },
        {"if": {"properties": {"kind": {"const": "similarity"}}}, "then": {"required": ["matrix"]}},
        {"if": {"properties": {"kind": {"const": "real_irrep"}}}, "then": {"required": ["matrices"]}},
    ],
}

_PAYLOAD_KEYS = ("kind", "group", "p", "l", "n", "flavor", "shape", "matrix", "matrices")


def provenance(group: str) -> dict:
    return {
        "tool": "symharm",
        "version": __version__,
        "data_files": {
            group_file(group).name: file_sha256(group_file(group)),
            irrep_file(group).name: file_sha256(irrep_file(group)),
        },
    }


def _pairs(M: np.ndarray) -> list:
    M = np.asarray(M)
    re = M.real.astype(float)
    im = M.imag.astype(float) if np.iscomplexobj(M) else np.zeros_like(re)
    return [[[re[i, j], im[i, j]] for j in range(M.shape[1])] for i in range(M.shape[0])]


def _unpairs(rows) -> np.ndarray:
    a = np.array(rows, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def payload_checksum(doc: dict) -> str:
    """Checksum over the identifying fields and numeric values of a table."""
    payload = {k: doc[k] for k in _PAYLOAD_KEYS if k in doc}
    for key in ("matrix", "matrices"):
        if key in payload:
            payload[key] = np.asarray(payload[key], dtype=float).tolist()
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _finish(doc: dict) -> dict:
    doc["checksum"] = payload_checksum(doc)
    return doc


def block_document(block: CoefficientBlock) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "coefficient_block",
        "group": block.group,
        "p": int(block.p),
        "l": int(block.l),
        "n": int(block.n),
        "flavor": block.flavor,
        "shape": list(block.H.shape),
        "matrix": _pairs(block.H),
        "provenance": provenance(block.group),
    }
    return _finish(doc)


def save_block(block: CoefficientBlock, path) -> Path:
    path = Path(path)
    write_json(path, block_document(block))
    return path


def save_similarity(group: str, p: int, S: np.ndarray, path) -> Path:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "similarity",
        "group": group,
        "p": int(p),
        "shape": list(S.shape),
        "matrix": _pairs(S),
        "provenance": provenance(group),
    }
    path = Path(path)
    write_json(path, _finish(doc))
    return path


def save_real_irrep(group: str, p: int, gamma_r: np.ndarray, path) -> Path:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "real_irrep",
        "group": group,
        "p": int(p),
        "shape": list(gamma_r.shape),
        "matrices": [_pairs(G) for G in gamma_r],
        "provenance": provenance(group),
    }
    path = Path(path)
    write_json(path, _finish(doc))
    return path


def _position(err: jsonschema.ValidationError) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)


def load_document(path) -> dict:
    """Parse and validate a table file; returns the raw document.

    Raises :class:`SchemaMismatch` (with the offending position) for
    malformed or structurally invalid files and :class:`ChecksumMismatch`
    when the payload no longer matches its recorded checksum.
    """
    doc = read_json(path)
    validator = jsonschema.Draft202012Validator(FILE_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        first = errors[0]
        raise SchemaMismatch(f"{path}: {_position(first)}: {first.message}")
    key = "matrices" if doc["kind"] == "real_irrep" else "matrix"
    shape = _shape_or_ragged(doc[key])
    if shape is None or shape[:-1] != tuple(doc["shape"]):
        raise SchemaMismatch(f"{path}: $.{key}: ragged or does not match shape {doc['shape']}")
    if payload_checksum(doc) != doc["checksum"]:
        raise ChecksumMismatch(f"{path}: payload does not match checksum {doc['checksum']}")
    return doc


def _shape_or_ragged(value):
    try:
        return np.array(value, dtype=float).shape
    except ValueError:
        return None


def load_block(path) -> CoefficientBlock:
    doc = load_document(path)
    if doc["kind"] != "coefficient_block":
        raise SchemaMismatch(f"{path}: $.kind: expected 'coefficient_block', found {doc['kind']!r}")
    H = _unpairs(doc["matrix"])
    if doc["flavor"] == "real":
        if np.any(H.imag != 0):
            raise SchemaMismatch(f"{path}: $.matrix: real-flavor block has nonzero imaginary parts")
        H = H.real
    return CoefficientBlock(doc["group"], doc["p"], doc["l"], doc["n"], doc["flavor"], H)


def load_matrix(path) -> np.ndarray:
    """The complex matrix (or element-indexed stack) stored in any table file."""
    doc = load_document(path)
    if doc["kind"] == "real_irrep":
        return np.array([_unpairs(M) for M in doc["matrices"]])
    return _unpairs(doc["matrix"])
