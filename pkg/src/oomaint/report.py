"""Tabular report output in CSV or JSON.

A report is a list of named sections, each a header plus rows. Floats are
written with four decimals and missing values as ``NA`` (CSV) or ``null``
(JSON), so identical inputs always give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, TextIO

DECIMALS = 4


@dataclass
class Section:
    name: str
    header: list[str]
    rows: list[list] = field(default_factory=list)


def csv_cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "NA"
        text = f"{value:.{DECIMALS}f}"
        return "0.0000" if text == "-0.0000" else text
    return str(value)


def json_value(value):
    if isinstance(value, float):
        if math.isnan(value):
            return None
        rounded = round(value, DECIMALS)
        return 0.0 if rounded == 0 else rounded
    if isinstance(value, (list, tuple)):
        return [json_value(v) for v in value]
    if isinstance(value, dict):
        return {k: json_value(v) for k, v in value.items()}
    return value


def section_csv(section: Section) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(section.header)
    for row in section.rows:
        writer.writerow([csv_cell(v) for v in row])
    return buf.getvalue()


def section_records(section: Section) -> list[dict]:
    return [dict(zip(section.header, (json_value(v) for v in row))) for row in section.rows]


def sections_json(sections: list[Section]) -> str:
    doc = {s.name: section_records(s) for s in sections}
    return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def render(sections: list[Section], fmt: str) -> str:
    """All sections as one text; CSV sections get a ``# name`` line when there are several."""
    if fmt == "json":
        return sections_json(sections)
    if len(sections) == 1:
        return section_csv(sections[0])
    return "\n".join(f"# {s.name}\n{section_csv(s)}" for s in sections)


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def emit(sections: list[Section], fmt: str, out: Optional[str], stream: TextIO, stem: str) -> list[Path]:
    """Write to ``stream`` when ``out`` is None, else into directory ``out``.

    In a directory CSV gives one ``<section>.csv`` per section and JSON one
    ``<stem>.json`` file. Returns the paths written.
    """
    if out is None:
        stream.write(render(sections, fmt))
        return []
    root = Path(out)
    written = []
    if fmt == "json":
        path = root / f"{stem}.json"
        write_text(path, sections_json(sections))
        written.append(path)
    else:
        for s in sections:
            path = root / f"{s.name}.csv"
            write_text(path, section_csv(s))
            written.append(path)
    return written
