"""Report serialization, element files, the report schema and atomic writes."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import jsonschema

from .algebra import AlgebraElement
from .cocycle import RewritePiece
from .errors import NotationError
from .symbolic import EMPTY, Window, parse_word


def _encode(obj, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = f"{obj:.17g}"
        return text if any(ch in text for ch in ".e") else text + ".0"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if hasattr(obj, "tolist"):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [inner + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def element_to_json(A: AlgebraElement) -> list[dict]:
    return [{"window": p.window.to_json() or [],
             "source": "".join(map(str, p.source)),
             "target": "".join(map(str, p.target)),
             "re": p.coeff.real, "im": p.coeff.imag} for p in A.pieces]


def element_from_json(data, d: int) -> AlgebraElement:
    if not isinstance(data, list):
        raise NotationError("element file must hold a list of pieces")
    pieces = []
    for k, item in enumerate(data):
        if not isinstance(item, dict) or set(item) != {"window", "source", "target", "re", "im"}:
            raise NotationError(f"piece {k}: expected keys window, source, target, re, im")
        win, src, tgt = item["window"], item["source"], item["target"]
        if win in ([], None):
            window = EMPTY
        elif (isinstance(win, list) and len(win) == 2 and all(isinstance(v, int) and v != 0 for v in win)
              and win[0] <= win[1]):
            window = Window.from_slots(*win)
        else:
            raise NotationError(f"piece {k}: window must be [first_slot, last_slot] with nonzero slots")
        source = parse_word(src, d) if src else ()
        target = parse_word(tgt, d) if tgt else ()
        if not len(source) == len(target) == len(window):
            raise NotationError(f"piece {k}: words must fill the window")
        re_, im_ = item["re"], item["im"]
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)
                   for v in (re_, im_)):
            raise NotationError(f"piece {k}: re and im must be finite numbers")
        pieces.append(RewritePiece(window, source, target, complex(re_, im_)))
    return AlgebraElement(tuple(pieces), d)


def load_element(path: str | Path, d: int) -> AlgebraElement:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise NotationError(f"{path}: invalid JSON ({exc})") from exc
    return element_from_json(data, d)


_RESIDUAL = {"type": "number", "minimum": 0}
_CHECK = {
    "type": "object",
    "required": ["residual", "passed"],
    "properties": {
        "residual": _RESIDUAL,
        "passed": {"type": "boolean"},
        "residuals": {
            "type": "array",
            "items": {"type": "object", "required": ["id", "residual"],
                      "properties": {"id": {"type": "string"}, "residual": _RESIDUAL}},
        },
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "kmsgibbs report",
    "type": "object",
    "required": ["command", "ok"],
    "properties": {
        "command": {"type": "string"},
        "ok": {"type": "boolean"},
        "potential": {
            "type": "object",
            "required": ["alphabet", "range", "values"],
            "properties": {"alphabet": {"type": "integer", "minimum": 1},
                           "range": {"type": "integer", "minimum": 1},
                           "values": {"type": "object", "additionalProperties": {"type": "number"}}},
        },
        "beta": {"type": "number"},
        "seed": {"type": ["integer", "null"]},
        "result": {"type": "object"},
        "checks": {
            "type": "object",
            "properties": {name: _CHECK for name in
                           ("gibbs", "bowen", "invariance", "bar_ratio", "uniqueness", "kms")},
            "additionalProperties": False,
        },
        "tolerances": {"type": "object", "additionalProperties": {"type": "number", "exclusiveMinimum": 0}},
    },
}


def report_schema() -> dict:
    return REPORT_SCHEMA


def validate_report(report: dict) -> None:
    jsonschema.validate(report, REPORT_SCHEMA)


def to_csv(report: dict) -> str:
    """One row per residual: ``check,id,residual``; scalar results as ``result,key,value``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["section", "id", "value"])
    for name, check in report.get("checks", {}).items():
        for item in check.get("residuals", []):
            writer.writerow([name, item["id"], f"{item['residual']:.17g}"])
        writer.writerow([name, "max", f"{check['residual']:.17g}"])
    for key, value in report.get("result", {}).items():
        if isinstance(value, float):
            writer.writerow(["result", key, f"{value:.17g}"])
        elif isinstance(value, (int, str, bool)):
            writer.writerow(["result", key, value])
    return buf.getvalue()
