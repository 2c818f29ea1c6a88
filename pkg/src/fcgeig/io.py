"""JSON tensor files.

Schema::

    {"order": 3, "dim": 3,
     "entries": [{"idx": [1, 1, 1], "val": -0.1281}, ...]}

Indices are 1-based and each ``idx`` must be sorted non-decreasingly.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import OrderMismatch, ParseError
from .tensor import DenseTensor, SumUnaryTensor, SymTensor, dense_from_entries

__all__ = ["parse_tensor_file", "tensor_from_json", "tensor_to_json", "write_tensor_file"]

MAX_EXPAND = 5_000_000


def tensor_from_json(doc) -> DenseTensor:
    if not isinstance(doc, dict):
        raise ParseError("tensor document must be a JSON object")
    try:
        order = doc["order"]
        dim = doc["dim"]
        raw = doc["entries"]
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from None
    for key, val in (("order", order), ("dim", dim)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            raise ParseError(f"{key} must be a positive integer")
    if order < 2:
        raise ParseError("order must be at least 2")
    if not isinstance(raw, list):
        raise ParseError("entries must be a list")
    entries = []
    for k, item in enumerate(raw):
        if not isinstance(item, dict) or "idx" not in item or "val" not in item:
            raise ParseError(f"entry {k} must be an object with 'idx' and 'val'")
        idx, val = item["idx"], item["val"]
        if not isinstance(idx, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) for i in idx
        ):
            raise ParseError(f"entry {k}: idx must be a list of integers")
        if any(a > b for a, b in zip(idx, idx[1:])):
            raise ParseError(f"entry {k}: idx {idx} is not sorted")
        if not isinstance(val, (int, float)) or isinstance(val, bool) or not math.isfinite(val):
            raise ParseError(f"entry {k}: val must be a finite number")
        entries.append((idx, float(val)))
    try:
        return dense_from_entries(order, dim, entries)
    except OrderMismatch as exc:
        raise ParseError(str(exc)) from None


def parse_tensor_file(path) -> DenseTensor:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return tensor_from_json(doc)


def tensor_to_json(A: SymTensor) -> dict:
    if isinstance(A, SumUnaryTensor):
        if math.comb(A.dim + A.order - 1, A.order) > MAX_EXPAND:
            raise ValueError("tensor too large to write as explicit entries")
        A = A.to_dense()
    return {
        "order": A.order,
        "dim": A.dim,
        "entries": [{"idx": list(idx), "val": val} for idx, val in A.to_entries()],
    }


def write_tensor_file(A: SymTensor, path) -> None:
    Path(path).write_text(json.dumps(tensor_to_json(A)) + "\n", encoding="utf-8")
