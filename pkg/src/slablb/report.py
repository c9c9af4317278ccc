"""Verification reports and the file writers used by the CLI."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

PASS, FAIL, SKIPPED, VACUOUS = "pass", "fail", "skipped", "vacuous"


def jsonable(x: Any) -> Any:
    """Make report payloads JSON-safe. Fractions become "p/q" strings."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item") and callable(x.item):  # numpy scalars
        return jsonable(x.item())
    return x


@dataclass
class VerificationReport:
    check_id: str
    status: str
    params: dict = field(default_factory=dict)
    measured: Any = None
    bound: Any = None
    fitted_constants: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def passed(self) -> bool | None:
        if self.status in (SKIPPED, VACUOUS):
            return None
        return self.status == PASS

    def to_json(self) -> dict:
        return jsonable(
            {
                "check_id": self.check_id,
                "params": self.params,
                "measured": self.measured,
                "bound": self.bound,
                "fitted_constants": self.fitted_constants,
                "pass": self.passed,
                "status": self.status,
                "notes": self.notes,
            }
        )


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL


def any_failed(reports: Iterable[VerificationReport]) -> bool:
    return any(r.status == FAIL for r in reports)


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def dump_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False) + "\n"


def write_json(path, obj: Any) -> None:
    atomic_write_text(path, dump_json(obj))


def write_csv(path, header: list[str], rows: Iterable[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([jsonable(v) for v in row])
    atomic_write_text(path, buf.getvalue())
