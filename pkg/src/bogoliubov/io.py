"""Problem files, reports and the ensemble CSV.

Problem files are JSON with complex entries written as ``[re, im]`` pairs::

    {
      "dim": 1,
      "h": [
        [[1, 0]]
      ],
      "k": [
        [[0.59999999999999998, 0]]
      ],
      "label": "single-mode",
      "schema_version": "1"
    }

The canonical form sorts keys, prints floats with 17 significant digits and
keeps each matrix row on one line, so ``dumps(loads(text)) == text`` for any
canonical file.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import SchemaError
from .nambu import Problem, validate_problem

SCHEMA_VERSION = "1"

CSV_COLUMNS = (
    "seed",
    "g_norm",
    "g_hs",
    "v_opnorm",
    "v_opnorm_bound",
    "v_hs",
    "v_hs_bound",
    "max_diag_eq_residual",
    "e0",
    "lower_bound",
)


@dataclass(frozen=True, eq=False)
class ProblemFile:
    """In-memory form of a problem file."""

    h: np.ndarray
    k: np.ndarray
    label: Optional[str] = None
    schema_version: str = SCHEMA_VERSION

    @property
    def dim(self) -> int:
        return int(self.h.shape[0])

    def to_problem(self) -> Problem:
        return validate_problem(self.h, self.k, label=self.label)

    @classmethod
    def from_problem(cls, p: Problem) -> "ProblemFile":
        return cls(h=np.array(p.h.entries), k=np.array(p.K.entries), label=p.label)


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise SchemaError(f"non-finite number {x!r} cannot be serialized")
    text = "%.17g" % x
    return "0" if text == "-0" else text


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _format_float(float(v))
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    raise SchemaError(f"cannot serialize value of type {type(v).__name__}")


def _is_inline(v) -> bool:
    """Lists of scalars or of scalar lists fit on one line."""
    if not isinstance(v, list):
        return False
    return all(
        not isinstance(x, (list, dict))
        or (isinstance(x, list) and all(not isinstance(y, (list, dict)) for y in x))
        for x in v
    )


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    return _scalar(v)


def _dump(v, indent: int) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(str(key))}: {_dump(v[key], indent + 1)}" for key in sorted(v)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple)):
        v = list(v)
        if _is_inline(v):
            return _inline(v)
        return "[\n" + ",\n".join(pad + _dump(x, indent + 1) for x in v) + "\n" + end + "]"
    if isinstance(v, np.ndarray):
        return _dump(v.tolist(), indent)
    return _scalar(v)


def canonical_dumps(obj) -> str:
    """Canonical text for a JSON-like tree of dicts, lists and scalars."""
    return _dump(obj, 0) + "\n"


def _pairs(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _matrix(raw, n: int, name: str) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{name} must be an n x n array of [re, im] pairs") from None
    if arr.shape != (n, n, 2):
        raise SchemaError(f"{name} has shape {arr.shape}, expected {(n, n, 2)}")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{name} contains non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def problem_to_dict(pf: ProblemFile) -> dict:
    out = {
        "schema_version": pf.schema_version,
        "dim": pf.dim,
        "h": _pairs(pf.h),
        "k": _pairs(pf.k),
    }
    if pf.label is not None:
        out["label"] = pf.label
    return out


def dumps_problem(pf: ProblemFile) -> str:
    return canonical_dumps(problem_to_dict(pf))


def loads_problem(text: str) -> ProblemFile:
    """Parse problem-file text.

    Raises:
        SchemaError: invalid JSON, unknown version, missing or mistyped fields.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    extra = set(data) - {"schema_version", "dim", "h", "k", "label"}
    if extra:
        raise SchemaError(f"unknown fields {sorted(extra)}")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"schema_version must be {SCHEMA_VERSION!r}")
    n = data.get("dim")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError("dim must be a positive integer")
    for key in ("h", "k"):
        if key not in data:
            raise SchemaError(f"missing field {key!r}")
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise SchemaError("label must be a string")
    return ProblemFile(
        h=_matrix(data["h"], n, "h"), k=_matrix(data["k"], n, "k"), label=label
    )


def read_problem_file(path) -> ProblemFile:
    return loads_problem(Path(path).read_text(encoding="utf-8"))


def write_problem_file(pf: ProblemFile, path) -> None:
    Path(path).write_text(dumps_problem(pf), encoding="utf-8")


def _jsonable(v):
    """Recursively convert numpy values and tuples into plain JSON types."""
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        if np.iscomplexobj(v):
            return _jsonable(_pairs(v) if v.ndim == 2 else [[float(z.real), float(z.imag)] for z in v])
        return _jsonable(v.tolist())
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def dumps_report(report: dict) -> str:
    return canonical_dumps(_jsonable(report))


def write_report(report: dict, path) -> None:
    Path(path).write_text(dumps_report(report), encoding="utf-8")


def strip_wall_time(report: dict) -> dict:
    """Copy of ``report`` with every ``wall_time`` entry removed."""
    if isinstance(report, dict):
        return {k: strip_wall_time(v) for k, v in report.items() if k != "wall_time"}
    if isinstance(report, list):
        return [strip_wall_time(x) for x in report]
    return report


def write_ensemble_csv(rows, path) -> None:
    """Rows are dicts keyed by :data:`CSV_COLUMNS`; floats use 17 significant digits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow(
                [row[c] if isinstance(row[c], (int, np.integer)) else _format_float(float(row[c]))
                 for c in CSV_COLUMNS]
            )
