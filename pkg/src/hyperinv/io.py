"""JSON/CSV helpers: complex numbers, sequences and matrices."""
from __future__ import annotations

import csv
import io as _io
import json
import re

import numpy as np

__all__ = [
    "cx_from_json",
    "cx_to_json",
    "matrix_to_csv",
    "matrix_to_json",
    "parse_complex",
    "read_json",
    "seq_from_json",
    "seq_to_json",
    "write_json",
]

_PAIR = re.compile(r"^\s*([^,]+)\s*,\s*([^,]+)\s*$")


def parse_complex(text):
    """Parse ``re``, ``re+imj`` (Python syntax) or ``re,im``."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip()
    m = _PAIR.match(s)
    if m:
        return complex(float(m.group(1)), float(m.group(2)))
    try:
        return complex(s.replace(" ", ""))
    except ValueError:
        raise ValueError(f"cannot parse complex literal {text!r}") from None


def cx_to_json(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def cx_from_json(obj):
    if isinstance(obj, dict):
        return complex(float(obj["re"]), float(obj.get("im", 0.0)))
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    return parse_complex(obj)


def seq_to_json(seq):
    return [cx_to_json(v) for v in seq]


def seq_from_json(data):
    """A list of complex entries, or ``{"values": [...]}``."""
    if isinstance(data, dict):
        data = data["values"]
    return np.array([cx_from_json(v) for v in data], dtype=complex)


def matrix_to_json(values):
    """Lower-triangular rows, row ``r`` holding columns ``1..r``."""
    values = np.asarray(values)
    n = values.shape[0]
    return {"n": n,
            "rows": [[cx_to_json(values[r, k]) for k in range(r + 1)]
                     for r in range(n)]}


def matrix_to_csv(values):
    """Row-major CSV; every cell written as the pair ``re,im`` (quoted)."""
    values = np.asarray(values)
    buf = _io.StringIO()
    w = csv.writer(buf)
    for r in range(values.shape[0]):
        w.writerow([f"{complex(values[r, k]).real!r},{complex(values[r, k]).imag!r}"
                    for k in range(r + 1)])
    return buf.getvalue()


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path, obj, pretty=False):
    text = json.dumps(obj, indent=2 if pretty else None)
    if path is None or path == "-":
        print(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
