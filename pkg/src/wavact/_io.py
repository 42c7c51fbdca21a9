"""Atomic file output and stable number formatting shared by the writers."""

import json
import math
import os
import tempfile
from pathlib import Path

FORMAT_VERSION = 1
UNDEFINED = "NA"


def atomic_write_text(path, text: str) -> Path:
    """Write ``text`` to a sibling temp file, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def fmt(value) -> str:
    """CSV cell: strings verbatim, ints as ints, floats in shortest round-trip form, None/NaN as NA."""
    if value is None:
        return UNDEFINED
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return UNDEFINED
    if value.is_integer() and abs(value) < 2**53:
        return str(int(value))
    return repr(value)


def write_csv(path, header, rows) -> Path:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return atomic_write_text(path, "\n".join(lines) + "\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path, obj) -> Path:
    return atomic_write_text(path, json.dumps(obj, indent=2) + "\n")


def posix_number(t):
    """Store whole-second times as ints so files stay readable."""
    t = float(t)
    return int(t) if t.is_integer() else t
