"""JSON serialization with 17-significant-digit floats (bit-faithful doubles)."""

from __future__ import annotations

import json
import math


def _render(obj, out: list) -> None:
    if isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("non-finite float in JSON document")
        out.append(format(obj, ".17g"))
    elif isinstance(obj, int):
        out.append(repr(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _render(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _render(v, out)
        out.append("]")
    else:  # numpy scalars and anything float-like
        _render(float(obj), out)


def dumps17(obj) -> str:
    out: list = []
    _render(obj, out)
    return "".join(out)


def dump17(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps17(obj))
        fh.write("\n")


def load(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
