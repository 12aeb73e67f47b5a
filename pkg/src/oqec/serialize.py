"""JSON interchange for channels, decompositions, and reports.

Wire format:

* complex scalar: two-element array [re, im];
* matrix: row-major nested arrays of complex scalars;
* channel: {"dim_in": int, "dim_out": int, "kraus": [matrix, ...]};
* decomposition: {"dim_a": int, "dim_b": int, "dim_c": int,
  "frame": matrix (optional)}.

Python's json module emits shortest-round-trip decimals, so a dump/load
cycle reproduces every float bit-exactly.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .channels import Channel
from .conditions import ConditionReport
from .errors import FormatError
from .spaces import Decomposition

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "channel_to_json",
    "channel_from_json",
    "decomposition_to_json",
    "decomposition_from_json",
    "condition_report_to_json",
    "load_json_file",
    "dump_json_file",
]


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _complex_from_json(obj: Any, field: str) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj)
    ):
        raise FormatError(field, f"expected a [re, im] pair, got {obj!r}")
    return complex(obj[0], obj[1])


def matrix_from_json(obj: Any, field: str = "matrix") -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise FormatError(field, "expected a non-empty array of rows")
    width = None
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise FormatError(f"{field}[{i}]", "expected a non-empty row array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise FormatError(f"{field}[{i}]", f"row length {len(row)} != {width}")
        rows.append([_complex_from_json(z, f"{field}[{i}][{j}]") for j, z in enumerate(row)])
    return np.array(rows, dtype=np.complex128)


def _int_field(obj: dict, key: str, minimum: int, field: str) -> int:
    if key not in obj:
        raise FormatError(f"{field}.{key}", "missing")
    val = obj[key]
    if not isinstance(val, int) or isinstance(val, bool) or val < minimum:
        raise FormatError(f"{field}.{key}", f"expected an integer >= {minimum}, got {val!r}")
    return val


def channel_to_json(ch: Channel, metadata: dict | None = None) -> dict:
    out = {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [matrix_to_json(e) for e in ch.kraus],
    }
    if metadata is not None:
        out["metadata"] = metadata
    return out


def channel_from_json(obj: Any, field: str = "channel") -> Channel:
    if not isinstance(obj, dict):
        raise FormatError(field, "expected an object")
    dim_in = _int_field(obj, "dim_in", 1, field)
    dim_out = _int_field(obj, "dim_out", 1, field)
    kraus_obj = obj.get("kraus")
    if not isinstance(kraus_obj, list) or not kraus_obj:
        raise FormatError(f"{field}.kraus", "expected a non-empty array of matrices")
    kraus = []
    for i, mat in enumerate(kraus_obj):
        m = matrix_from_json(mat, f"{field}.kraus[{i}]")
        if m.shape != (dim_out, dim_in):
            raise FormatError(
                f"{field}.kraus[{i}]",
                f"shape {m.shape} does not match (dim_out, dim_in)=({dim_out}, {dim_in})",
            )
        kraus.append(m)
    return Channel(tuple(kraus))


def decomposition_to_json(dec: Decomposition) -> dict:
    out = {"dim_a": dec.dim_a, "dim_b": dec.dim_b, "dim_c": dec.dim_c}
    if dec.frame is not None:
        out["frame"] = matrix_to_json(dec.frame)
    return out


def decomposition_from_json(obj: Any, field: str = "decomposition") -> Decomposition:
    if not isinstance(obj, dict):
        raise FormatError(field, "expected an object")
    dim_a = _int_field(obj, "dim_a", 1, field)
    dim_b = _int_field(obj, "dim_b", 1, field)
    dim_c = _int_field(obj, "dim_c", 0, field)
    frame = None
    if obj.get("frame") is not None:
        frame = matrix_from_json(obj["frame"], f"{field}.frame")
        dv = dim_a * dim_b + dim_c
        if frame.shape != (dv, dv):
            raise FormatError(
                f"{field}.frame", f"shape {frame.shape} does not match dim_v={dv}"
            )
    return Decomposition(dim_a=dim_a, dim_b=dim_b, dim_c=dim_c, frame=frame)


def condition_report_to_json(report: ConditionReport) -> dict:
    """Report with witnesses reduced to JSON-friendly pieces."""
    out = {
        "condition": report.condition,
        "passed": report.passed,
        "residual": report.residual,
        "tol": report.tol,
    }
    wit = report.witnesses
    if report.condition == "b":
        out["witnesses"] = {
            "max_pair": list(wit["max_pair"]),
            "max_pair_residual": wit["max_pair_residual"],
            "b_blocks": {
                f"{j},{k}": matrix_to_json(b) for (j, k), b in wit["b_blocks"].items()
            },
        }
    elif report.condition == "c":
        out["witnesses"] = {
            "rho_ra": matrix_to_json(wit["rho_ra"]),
            "rho_rbe": matrix_to_json(wit["rho_rbe"]),
        }
    elif report.condition == "d":
        out["witnesses"] = {
            "entropy_a": wit["entropy_a"],
            "entropy_v": wit["entropy_v"],
            "entropy_rbe": wit["entropy_rbe"],
            "gap": wit["gap"],
        }
    return out


def load_json_file(path: str, field: str = "file") -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{field}:{path}", f"invalid JSON ({exc})") from exc


def dump_json_file(path: str, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")
