"""Reading labelled vectors from CSV/JSON and writing JSON reports."""
import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import IoError, ParseError

FORMATS = ("csv", "json")


@dataclass
class InputDataset:
    vectors: dict
    source: str
    format: str

    @property
    def labels(self):
        return list(self.vectors)

    def get(self, label):
        try:
            return self.vectors[label]
        except KeyError:
            raise ParseError(f"no vector labelled {label!r} in {self.source}; "
                             f"available: {', '.join(self.vectors)}") from None


def detect_format(path, fmt=None):
    if fmt:
        if fmt not in FORMATS:
            raise ParseError(f"unknown input format {fmt!r}")
        return fmt
    suffix = Path(path).suffix.lower().lstrip(".")
    return suffix if suffix in FORMATS else "csv"


def _check_finite(label, values, where):
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        k = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"non-finite entry in vector {label!r} at {where(k)}")
    return arr


def _parse_csv(text, source):
    vectors = {}
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        label = row[0].strip()
        if not label:
            raise ParseError("empty label", line=lineno, column=1)
        if label in vectors:
            raise ParseError(f"duplicate label {label!r}", line=lineno, column=1)
        values = []
        for col, cell in enumerate(row[1:], start=2):
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(f"non-numeric value {cell.strip()!r}",
                                 line=lineno, column=col) from None
        if not values:
            raise ParseError(f"vector {label!r} has no values", line=lineno)
        vectors[label] = _check_finite(label, values,
                                       lambda k, n=lineno: f"line {n}, column {k + 2}")
    if not vectors:
        raise ParseError(f"no vectors found in {source}")
    return vectors


def _parse_json(text, source):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object of label -> array")
    vectors = {}
    for label, values in doc.items():
        if not isinstance(values, list) or not values:
            raise ParseError(f"vector {label!r} must be a non-empty array")
        for k, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"element {label}[{k}] is not a number: {v!r}")
        vectors[label] = _check_finite(label, values, lambda k, lab=label: f"{lab}[{k}]")
    if not vectors:
        raise ParseError(f"no vectors found in {source}")
    return vectors


def parse_input(path, fmt=None):
    """Load labelled vectors from ``path`` (CSV rows or a JSON object)."""
    fmt = detect_format(path, fmt)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    parse = _parse_csv if fmt == "csv" else _parse_json
    return InputDataset(parse(text, str(path)), str(path), fmt)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no inf/nan literals
        return x if math.isfinite(x) else str(x)
    return obj


@dataclass
class ReportDocument:
    tool_version: str
    operation: str
    generator: object
    inputs: list
    result: object
    tolerance: float
    passed: bool
    exit_code: int = 0
    duration_ms: float = 0.0
    error: object = None
    params: dict = field(default_factory=dict)

    def payload(self):
        """Everything except the wall-clock duration (deterministic per input)."""
        return _jsonable({
            "tool_version": self.tool_version,
            "operation": self.operation,
            "generator": self.generator,
            "params": self.params,
            "inputs": self.inputs,
            "result": self.result,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "exit_code": self.exit_code,
            "error": self.error,
        })

    def to_json(self):
        doc = self.payload()
        doc["duration_ms"] = round(float(self.duration_ms), 3)
        return json.dumps(doc, indent=2)


def describe_inputs(dataset, labels):
    return [{"label": lab, "length": int(dataset.get(lab).size),
             "mass": float(np.sum(dataset.get(lab)))} for lab in labels]
