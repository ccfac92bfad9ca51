"""Comparison tables, reference-data ingest and output formatting."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ReferenceDataError
from .field_poly import FieldSpec
from .invariants import Discriminant, InvariantReport, genus, supersingular_count
from .places import Place, count_places_of_degree

REFERENCE_HEADER = ["q", "genus", "max_known", "upper_bound"]
FORMATS = ("md", "csv", "json")


@dataclass(frozen=True)
class ReferenceRow:
    """Externally sourced point counts for curves of a given genus over F_{q^2}."""

    q: int
    genus: int
    max_known: int
    upper_bound: int

    def __post_init__(self):
        if self.genus < 0:
            raise ReferenceDataError(f"negative genus in {self}")
        if self.max_known > self.upper_bound:
            raise ReferenceDataError(f"max_known exceeds upper_bound in {self}")


def parse_reference(text: str, source: str = "<reference>") -> list[ReferenceRow]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ReferenceDataError(f"{source}: empty file") from None
    if [h.strip() for h in header] != REFERENCE_HEADER:
        raise ReferenceDataError(f"{source}:1: expected header {','.join(REFERENCE_HEADER)}, got {header}")
    rows: list[ReferenceRow] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, fields in enumerate(reader, start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != 4:
            raise ReferenceDataError(f"{source}:{lineno}: expected 4 fields, got {len(fields)}")
        try:
            values = [int(f) for f in fields]
        except ValueError:
            raise ReferenceDataError(f"{source}:{lineno}: non-integer field in {fields}") from None
        try:
            row = ReferenceRow(*values)
        except ReferenceDataError as exc:
            raise ReferenceDataError(f"{source}:{lineno}: {exc} (row {','.join(fields)})") from None
        key = (row.q, row.genus)
        if key in seen:
            raise ReferenceDataError(f"{source}:{lineno}: duplicate key q={row.q}, genus={row.genus} "
                                     f"(first seen on line {seen[key]})")
        seen[key] = lineno
        rows.append(row)
    return rows


def load_reference(path: str | Path) -> list[ReferenceRow]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ReferenceDataError(f"{path}: {exc.strerror}") from None
    return parse_reference(text, str(path))


def bundled_reference() -> list[ReferenceRow]:
    """The published max-known / upper-bound columns for q = 2, 3 shipped with the package."""
    text = resources.files("dsheaf").joinpath("data/reference_q2_q3.csv").read_text(encoding="utf-8")
    return parse_reference(text, "bundled reference_q2_q3.csv")


# -- comparison table ----------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    r_degrees: tuple[int, int]
    genus: int
    supersingular: int
    max_known: int | None = None
    upper_bound: int | None = None


def _realizable(field: FieldSpec, degrees: Sequence[int], o: Place) -> bool:
    for d in set(degrees):
        available = count_places_of_degree(field, d) - (1 if o.degree == d else 0)
        if available < degrees.count(d):
            return False
    return True


def comparison_table(
    field: FieldSpec,
    o: Place,
    reference: Iterable[ReferenceRow] | None = None,
    max_genus: int = 50,
) -> list[TableRow]:
    """One row per realisable #R = 2 degree pair with genus <= max_genus, ordered by (min, max) degree."""
    q = field.q
    ref = {(r.q, r.genus): r for r in reference or ()}
    wp_max = q * (q - 1) * 2

    def genus_floor(a: int, b: int) -> Fraction:
        return 1 + Fraction((q**a - 1) * (q**b - 1) - wp_max, q * q - 1)

    rows = []
    a = 1
    while genus_floor(a, a) <= max_genus:
        b = a
        while genus_floor(a, b) <= max_genus:
            if _realizable(field, [a, b], o):
                R = Discriminant.from_degrees(field, (a, b), avoid=[o])
                g = genus(R)
                if g <= max_genus:
                    hit = ref.get((q, g))
                    rows.append(TableRow(
                        (a, b), g, supersingular_count(R, o),
                        hit.max_known if hit else None,
                        hit.upper_bound if hit else None,
                    ))
            b += 1
        a += 1
    return rows


def _cell(x) -> str:
    return "-" if x is None else str(x)


def render_table(rows: Sequence[TableRow], q: int, o: str, fmt: str = "md", with_reference: bool = False) -> str:
    if fmt == "json":
        payload = [
            {"q": q, "o": o, "r_degrees": list(r.r_degrees), "genus": r.genus,
             "supersingular": r.supersingular,
             **({"max_known": r.max_known, "upper_bound": r.upper_bound} if with_reference else {})}
            for r in rows
        ]
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["q", "o", "d1", "d2", "genus", "supersingular"]
        if with_reference:
            header += ["max_known", "upper_bound"]
        w.writerow(header)
        for r in rows:
            line = [q, o, *r.r_degrees, r.genus, r.supersingular]
            if with_reference:
                line += ["" if r.max_known is None else r.max_known,
                         "" if r.upper_bound is None else r.upper_bound]
            w.writerow(line)
        return buf.getvalue()
    if fmt != "md":
        raise ValueError(f"unknown format {fmt!r}")
    header = ["R", "genus", "supersingular"]
    if with_reference:
        header += ["max_known", "upper_bound"]
    lines = [f"q={q}, o={o}", "| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for r in rows:
        cells = [f"({r.r_degrees[0]},{r.r_degrees[1]})", str(r.genus), str(r.supersingular)]
        if with_reference:
            cells += [_cell(r.max_known), _cell(r.upper_bound)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


# -- invariant reports -------------------------------------------------------

REPORT_COLUMNS = ["q", "r_degrees", "r_polys", "o", "mass", "class_number", "supersingular",
                  "extra_autos", "genus", "chi0", "ratio", "ratio_decimal"]


def reports_to_json(reports: Sequence[InvariantReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"


def reports_from_json(text: str) -> list[InvariantReport]:
    data = json.loads(text)
    if isinstance(data, dict):
        data = [data]
    return [InvariantReport.from_dict(d) for d in data]


def _flat(report: InvariantReport) -> list[str]:
    d = report.to_dict()
    out = []
    for col in REPORT_COLUMNS:
        v = d[col]
        if isinstance(v, list):
            v = ";".join(str(x) for x in v)
        out.append("" if v is None else str(v))
    return out


def render_reports(reports: Sequence[InvariantReport], fmt: str = "md") -> str:
    if fmt == "json":
        return reports_to_json(reports)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for r in reports:
            w.writerow(_flat(r))
        return buf.getvalue()
    if fmt != "md":
        raise ValueError(f"unknown format {fmt!r}")
    lines = ["| " + " | ".join(REPORT_COLUMNS) + " |", "|" + "---|" * len(REPORT_COLUMNS)]
    for r in reports:
        lines.append("| " + " | ".join(c or "-" for c in _flat(r)) + " |")
    return "\n".join(lines) + "\n"
