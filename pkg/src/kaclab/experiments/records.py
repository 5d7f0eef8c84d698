"""Trial records and their CSV form."""
from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass

__all__ = ["TrialRecord", "HEADER", "write_records", "read_records", "format_records"]

HEADER = ("experiment", "law", "n", "trial", "observable", "value", "aux1", "aux2")


@dataclass(frozen=True, order=True)
class TrialRecord:
    experiment: str
    law: str
    n: int
    trial: int
    observable: str
    value: float | int
    aux1: float | int | None = None
    aux2: float | int | None = None

    def key(self):
        return (self.experiment, self.n, self.trial, self.observable)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def _num(text: str):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def sort_records(records) -> list[TrialRecord]:
    out = sorted(records, key=TrialRecord.key)
    for a, b in zip(out, out[1:]):
        if a.key() == b.key():
            raise ValueError(f"duplicate record {a.key()}")
    return out


def format_records(records) -> str:
    """CSV text, header first, rows ordered by (experiment, n, trial, observable)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in sort_records(records):
        w.writerow([r.experiment, r.law, r.n, r.trial, r.observable, _fmt(r.value), _fmt(r.aux1), _fmt(r.aux2)])
    return buf.getvalue()


def atomic_write(path, text: str) -> None:
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_records(records, path) -> None:
    atomic_write(path, format_records(records))


def read_records(path) -> list[TrialRecord]:
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if tuple(header or ()) != HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        out = []
        for row in rows:
            exp, law, n, trial, obs, val, a1, a2 = row
            v = _num(val)
            out.append(TrialRecord(exp, law, int(n), int(trial), obs, v, _num(a1), _num(a2)))
    return out


def is_finite(v) -> bool:
    return v is not None and math.isfinite(v)
