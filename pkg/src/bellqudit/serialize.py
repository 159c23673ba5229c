"""JSON/CSV encoding shared by the command line tools.

Reals are written with 17 significant digits so they re-parse to the same
double; complex numbers are ``[re, im]`` pairs and matrices are
``{"rows", "cols", "entries"}`` with entries in row-major order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np


def format_real(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def dumps(obj, indent: int | None = 2, _level: int = 0) -> str:
    """Deterministic JSON with fixed-precision reals."""
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        items = [dumps(v, indent, _level + 1) for v in obj]
        # short numeric rows stay on one line
        if indent is None or all(not v.startswith(("[", "{")) for v in items):
            return "[" + ", ".join(items) + "]"
        pad = "\n" + " " * (indent * (_level + 1))
        return "[" + ",".join(pad + v for v in items) + "\n" + " " * (indent * _level) + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        if indent is None:
            return "{" + ", ".join(items) + "}"
        pad = "\n" + " " * (indent * (_level + 1))
        return "{" + ",".join(pad + v for v in items) + "\n" + " " * (indent * _level) + "}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def complex_pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def vector_to_json(v) -> list[list[float]]:
    return [complex_pair(z) for z in np.asarray(v).ravel()]


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    rows, cols = m.shape
    return {"rows": rows, "cols": cols, "entries": vector_to_json(m)}


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return flat.reshape(rows, cols)


def csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_real(v) if isinstance(v, (float, np.floating)) else v for v in row]
        )
    return buf.getvalue()


@dataclass
class ClassifyRecord:
    """Flat, serialisable summary of one classification."""

    family: str
    d: int
    params: dict
    weights: list[float]
    verdict: str
    min_pt_eig: float
    witness: dict | None = None
    decomposition_terms: int | None = None
    evidence: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "d": self.d,
            "params": self.params,
            "weights": self.weights,
            "verdict": self.verdict,
            "summary": {
                "min_pt_eig": self.min_pt_eig,
                "witness": self.witness,
                "decomposition_terms": self.decomposition_terms,
            },
            "evidence": self.evidence,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> ClassifyRecord:
        summary = obj["summary"]
        return cls(
            family=obj["family"],
            d=int(obj["d"]),
            params=dict(obj["params"]),
            weights=[float(x) for x in obj["weights"]],
            verdict=obj["verdict"],
            min_pt_eig=float(summary["min_pt_eig"]),
            witness=summary["witness"],
            decomposition_terms=summary["decomposition_terms"],
            evidence=list(obj["evidence"]),
        )
