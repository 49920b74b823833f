"""Function documents: the JSON surface of the library.

A two-variable document:

    {"schema_version": "1",
     "x_weights": ["2/3", "1/3"],
     "y_weights": ["3/4", "1/4"],
     "values": [["0", "1"], ["1", "0"]],
     "numeric": false}

An arity-n document replaces the weight lists with "weights_per_axis" and
flattens "values" row-major under "shape". Rationals travel as "p/q" strings
in lowest terms (a bare integer string is accepted on input); floats are
rejected. With "numeric": true the value labels are parsed as rationals in
[0, 1], which enables the density form of the joint statistics.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Dict, List, Union

from .errors import ParseError
from .functions import FiniteFunction, TensorFunction
from .measure import FiniteMeasureSpace

SCHEMA_VERSION = "1"

_RATIONAL_RE = re.compile(r"^(0|[1-9][0-9]*)/([1-9][0-9]*)$")
_INTEGER_RE = re.compile(r"^(0|[1-9][0-9]*)$")


def parse_rational(text, where: str = "rational") -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"{where}: expected a rational string, got {text!r}")
    if _INTEGER_RE.match(text):
        return Fraction(int(text))
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ParseError(f"{where}: {text!r} is not a non-negative 'p/q' string")
    p, q = int(m.group(1)), int(m.group(2))
    if gcd(p, q) != 1:
        raise ParseError(f"{where}: {text!r} is not in lowest terms")
    return Fraction(p, q)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _parse_weights(items, where: str) -> List[Fraction]:
    if not isinstance(items, list) or not items:
        raise ParseError(f"{where}: expected a non-empty list of rational strings")
    return [parse_rational(w, f"{where}[{i}]") for i, w in enumerate(items)]


def _space(weights, prefix: str, where: str) -> FiniteMeasureSpace:
    try:
        return FiniteMeasureSpace(
            tuple(f"{prefix}{i}" for i in range(len(weights))), tuple(weights)
        )
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def _parse_label(value, numeric: bool, where: str):
    if not isinstance(value, str):
        raise ParseError(f"{where}: value labels must be strings, got {value!r}")
    if "," in value or ";" in value:
        raise ParseError(f"{where}: value labels must not contain ',' or ';'")
    if numeric:
        rat = parse_rational(value, where)
        if not 0 <= rat <= 1:
            raise ParseError(f"{where}: numeric values must lie in [0, 1]")
        return rat
    return value


def parse_function_document(doc) -> Union[FiniteFunction, TensorFunction]:
    if not isinstance(doc, dict):
        raise ParseError("document: expected a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(
            f"document: unsupported schema_version {doc.get('schema_version')!r}"
        )
    numeric = doc.get("numeric", False)
    if not isinstance(numeric, bool):
        raise ParseError("document: 'numeric' must be a boolean")

    if "weights_per_axis" in doc:
        return _parse_tensor_document(doc, numeric)

    for key in ("x_weights", "y_weights", "values"):
        if key not in doc:
            raise ParseError(f"document: missing field {key!r}")
    x_space = _space(_parse_weights(doc["x_weights"], "x_weights"), "x", "x_weights")
    y_space = _space(_parse_weights(doc["y_weights"], "y_weights"), "y", "y_weights")
    rows = doc["values"]
    if not isinstance(rows, list) or len(rows) != x_space.size:
        raise ParseError("values: expected one row per x atom")
    matrix = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != y_space.size:
            raise ParseError(f"values[{i}]: expected one entry per y atom")
        matrix.append(
            tuple(
                _parse_label(v, numeric, f"values[{i}][{j}]")
                for j, v in enumerate(row)
            )
        )
    return FiniteFunction(x_space, y_space, tuple(matrix))


def _parse_tensor_document(doc, numeric: bool) -> TensorFunction:
    axes_weights = doc["weights_per_axis"]
    if not isinstance(axes_weights, list) or not axes_weights:
        raise ParseError("weights_per_axis: expected a non-empty list of lists")
    axes = tuple(
        _space(
            _parse_weights(ws, f"weights_per_axis[{a}]"),
            f"a{a}_",
            f"weights_per_axis[{a}]",
        )
        for a, ws in enumerate(axes_weights)
    )
    shape = doc.get("shape")
    if shape != [axis.size for axis in axes]:
        raise ParseError("shape: must equal the per-axis atom counts")
    flat = doc.get("values")
    expected = 1
    for axis in axes:
        expected *= axis.size
    if not isinstance(flat, list) or len(flat) != expected:
        raise ParseError(f"values: expected a flat list of {expected} labels")
    labels = tuple(
        _parse_label(v, numeric, f"values[{i}]") for i, v in enumerate(flat)
    )
    return TensorFunction(axes, labels)


def _format_label(label) -> str:
    if isinstance(label, Fraction):
        return format_rational(label)
    return str(label)


def serialize_function(f: Union[FiniteFunction, TensorFunction]) -> Dict:
    """The canonical document of a function (atom ids are positional)."""
    if isinstance(f, TensorFunction):
        doc = {
            "schema_version": SCHEMA_VERSION,
            "weights_per_axis": [
                [format_rational(w) for w in axis.weights] for axis in f.axes
            ],
            "shape": [axis.size for axis in f.axes],
            "values": [_format_label(v) for v in f.values],
        }
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "x_weights": [format_rational(w) for w in f.x_space.weights],
            "y_weights": [format_rational(w) for w in f.y_space.weights],
            "values": [[_format_label(v) for v in row] for row in f.values],
        }
    if _is_numeric(f):
        doc["numeric"] = True
    return doc


def _is_numeric(f) -> bool:
    flat = f.values if isinstance(f, TensorFunction) else (
        v for row in f.values for v in row
    )
    return all(isinstance(v, Fraction) for v in flat)


def serialize_corner_key(matrix) -> str:
    """Row-major corner serialization: cells joined by ',', rows by ';'."""
    return ";".join(",".join(_format_label(v) for v in row) for row in matrix)


def serialize_tensor_key(flat) -> str:
    return ",".join(_format_label(v) for v in flat)
