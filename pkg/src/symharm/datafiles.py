"""Bundled data files and the JSON dialect shared by every file we write.

Floats are written with 17 significant digits so that any float64 survives a
save/load cycle bit-exactly.  Matrices are stored row-major; complex
matrices as separate ``re``/``im`` arrays (bundled data) or as rows of
``[re, im]`` pairs (coefficient tables, see :mod:`symharm.tables`).
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from pathlib import Path

import numpy as np

from .errors import SchemaMismatch

SCHEMA_VERSION = 1
DATA_ENV = "SYMHARM_DATA_DIR"


def data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    text = format(x, ".17g")
    # keep a float token so readers never see an int (or lose the sign of -0.0)
    return text if any(c in text for c in ".en") else text + ".0"


def dumps(obj, indent: int = 1, _level: int = 0) -> str:
    """Serialize to JSON, keeping numeric lists on one line.

    Only the types we actually write are supported: dict, list/tuple, str,
    bool, int, float, None and numpy scalars/arrays.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


def read_json(path):
    """Parse a JSON file, turning decode failures into :class:`SchemaMismatch`."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def group_file(name: str) -> Path:
    return data_dir() / f"group_{name}.json"


def irrep_file(name: str) -> Path:
    return data_dir() / f"irreps_{name}.json"


def _require(doc, key, kind, where):
    if key not in doc:
        raise SchemaMismatch(f"{where}: missing key {key!r}")
    if not isinstance(doc[key], kind):
        raise SchemaMismatch(f"{where}: key {key!r} has type {type(doc[key]).__name__}")
    return doc[key]


def load_group_data(name: str) -> dict:
    """Return ``{"name", "expected_order", "generators"}`` for a bundled group."""
    path = group_file(name)
    doc = read_json(path)
    where = str(path)
    if _require(doc, "kind", str, where) != "group":
        raise SchemaMismatch(f"{where}: kind is {doc['kind']!r}, expected 'group'")
    gens = []
    for i, flat in enumerate(_require(doc, "generators", list, where)):
        if len(flat) != 9:
            raise SchemaMismatch(f"{where}: generators[{i}] has {len(flat)} entries, expected 9")
        gens.append(np.array(flat, dtype=float).reshape(3, 3))
    return {
        "name": _require(doc, "name", str, where),
        "expected_order": _require(doc, "expected_order", int, where),
        "generators": gens,
    }


def load_irrep_data(name: str) -> dict:
    """Return the raw irrep file for a group with generator images as complex arrays."""
    path = irrep_file(name)
    doc = read_json(path)
    where = str(path)
    if _require(doc, "kind", str, where) != "irreps":
        raise SchemaMismatch(f"{where}: kind is {doc['kind']!r}, expected 'irreps'")
    words = [tuple(w) for w in _require(doc, "words", list, where)]
    irreps = []
    for i, entry in enumerate(_require(doc, "irreps", list, where)):
        at = f"{where}: irreps[{i}]"
        d = _require(entry, "dim", int, at)
        images = []
        for j, gen in enumerate(_require(entry, "generators", list, at)):
            re = np.array(_require(gen, "re", list, f"{at}.generators[{j}]"), dtype=float)
            im = np.array(_require(gen, "im", list, f"{at}.generators[{j}]"), dtype=float)
            if re.size != d * d or im.size != d * d:
                raise SchemaMismatch(f"{at}.generators[{j}]: expected {d * d} entries")
            images.append((re + 1j * im).reshape(d, d))
        irreps.append(
            {
                "p": _require(entry, "p", int, at),
                "label": _require(entry, "label", str, at),
                "dim": d,
                "generators": images,
            }
        )
    return {"group": _require(doc, "group", str, where), "words": words, "irreps": irreps}
