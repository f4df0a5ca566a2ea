"""Machine-readable reports: deterministic JSON and flat CSV tables.

JSON output sorts keys and renders every float with 17 significant digits,
so a report survives a round trip bit for bit and two runs over the same
inputs produce identical bytes.  Non-finite floats become ``null``.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from typing import Any, Iterable

__all__ = ["to_plain", "dumps_json", "rows_to_csv", "write_text", "make_report"]


def to_plain(obj: Any) -> Any:
    """Dataclasses, enums and tuples down to dict/list/scalars."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return obj


def _float(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def _encode(obj: Any, indent: int, level: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, key in enumerate(sorted(obj)):
            out.append(f"{pad}{json.dumps(key)}: ")
            _encode(obj[key], indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(pad)
            _encode(item, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        out.append(_float(float(obj)))


def dumps_json(obj: Any, indent: int = 2) -> str:
    out: list[str] = []
    _encode(to_plain(obj), indent, 0, out)
    out.append("\n")
    return "".join(out)


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _float(v) if math.isfinite(v) else ""
    return str(v)


def rows_to_csv(header: list[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(col)) for col in header])
    return buf.getvalue()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def make_report(config: dict, version: str, claims=(), constants=(), **extra) -> dict:
    report = {
        "meta": {"config": config, "version": version},
        "claims": list(claims),
        "constants": list(constants),
    }
    report.update(extra)
    return report
