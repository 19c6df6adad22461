"""CSV output with 17 significant digits and write-then-rename."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path

RESIDUAL_HEADER = ("u", "v", "x", "y", "z", "H", "K", "residual")
PROFILE_HEADER = ("s", "f", "z", "theta")


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_text_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(float(x)) for x in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> None:
    write_text_atomic(path, csv_text(header, rows))
