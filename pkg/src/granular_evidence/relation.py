"""Parent relations: individuals with set-valued (granular) attribute columns."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import Frame, Granule, GranularDistribution, check_same_frame
from .errors import (
    ConflictingRelation,
    EmptyGranule,
    InvalidRelation,
    UnknownColumn,
    UnknownElement,
)


@dataclass(frozen=True)
class Row:
    id: str
    cells: tuple[Granule, ...]


class GranularRelation:
    """Immutable relation of rows x named granular columns over one frame.

    Rows carry no weight field; duplicate rows simply count twice.
    """

    __slots__ = ("_frame", "_columns", "_rows", "_col_index")

    def __init__(self, frame: Frame, columns: Sequence[str], rows: Iterable[tuple[str, Sequence[Granule]]]):
        columns = tuple(columns)
        if not columns:
            raise InvalidRelation("relation needs at least one column")
        if len(set(columns)) != len(columns):
            raise InvalidRelation(f"duplicate column names in {list(columns)}")
        built = []
        seen_ids = set()
        for row_id, cells in rows:
            cells = tuple(cells)
            if row_id in seen_ids:
                raise InvalidRelation(f"duplicate row id {row_id!r}")
            seen_ids.add(row_id)
            if len(cells) != len(columns):
                raise InvalidRelation(
                    f"row {row_id!r} has {len(cells)} cells for {len(columns)} columns"
                )
            for cell in cells:
                check_same_frame(frame, cell.frame)
            built.append(Row(row_id, cells))
        if not built:
            raise InvalidRelation("relation needs at least one row")
        self._frame = frame
        self._columns = columns
        self._rows = tuple(built)
        self._col_index = {name: k for k, name in enumerate(columns)}

    @classmethod
    def from_labels(
        cls, frame: Frame, columns: Sequence[str], rows: Iterable[tuple[str, Sequence[Iterable[str]]]]
    ) -> "GranularRelation":
        """Build from label sets instead of granules."""
        converted = []
        for row_id, cells in rows:
            try:
                converted.append((row_id, [frame.granule(c) for c in cells]))
            except (EmptyGranule, UnknownElement) as exc:
                raise type(exc)(f"row {row_id!r}: {exc}") from None
        return cls(frame, columns, converted)

    @property
    def frame(self) -> Frame:
        return self._frame

    @property
    def columns(self) -> tuple[str, ...]:
        return self._columns

    @property
    def rows(self) -> tuple[Row, ...]:
        return self._rows

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GranularRelation):
            return NotImplemented
        return (self._frame, self._columns, self._rows) == (other._frame, other._columns, other._rows)

    def __repr__(self) -> str:
        return f"GranularRelation(columns={list(self._columns)}, rows={len(self._rows)})"

    def column_index(self, name: str) -> int:
        try:
            return self._col_index[name]
        except KeyError:
            raise UnknownColumn(f"no column {name!r}; columns are {list(self._columns)}") from None

    def column(self, name: str) -> tuple[Granule, ...]:
        k = self.column_index(name)
        return tuple(row.cells[k] for row in self._rows)

    def with_rows(self, rows: Iterable[Row]) -> "GranularRelation":
        return GranularRelation(self._frame, self._columns, ((r.id, r.cells) for r in rows))

    def to_dict(self) -> dict:
        out_rows = []
        for row in self._rows:
            item = {"id": row.id}
            for name, cell in zip(self._columns, row.cells):
                item[name] = list(cell.labels)
            out_rows.append(item)
        return {"universe": list(self._frame.elements), "columns": list(self._columns), "rows": out_rows}


def relation_from_dict(data: Mapping) -> GranularRelation:
    try:
        universe, columns, rows = data["universe"], data["columns"], data["rows"]
    except (KeyError, TypeError):
        raise InvalidRelation("relation JSON needs 'universe', 'columns' and 'rows'") from None
    if not isinstance(columns, list) or not isinstance(rows, list):
        raise InvalidRelation("'columns' and 'rows' must be lists")
    if "id" in columns:
        raise InvalidRelation("'id' is reserved and cannot be a column name")
    frame = Frame(universe)
    parsed = []
    for k, row in enumerate(rows):
        if not isinstance(row, Mapping) or "id" not in row:
            raise InvalidRelation(f"row {k} needs an 'id'")
        missing = [c for c in columns if c not in row]
        if missing:
            raise InvalidRelation(f"row {row['id']!r} lacks cells for {missing}")
        parsed.append((str(row["id"]), [row[c] for c in columns]))
    return GranularRelation.from_labels(frame, columns, parsed)


def dumps_relation(rel: GranularRelation, **kwargs) -> str:
    return json.dumps(rel.to_dict(), **kwargs)


def loads_relation(text: str) -> GranularRelation:
    return relation_from_dict(json.loads(text))


def summarize(rel: GranularRelation, column: str) -> GranularDistribution:
    """Relative count of each distinct cell value in ``column``."""
    counts = Counter(cell.mask for cell in rel.column(column))
    total = len(rel)
    return GranularDistribution.from_masks(rel.frame, {m: Fraction(c, total) for m, c in counts.items()})


@dataclass(frozen=True)
class ConflictReport:
    """Outcome of :func:`conflict_free`; ``offending`` lists row ids in row order."""

    offending: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.offending


def conflict_free(rel: GranularRelation, col_x: str, col_y: str) -> ConflictReport:
    kx, ky = rel.column_index(col_x), rel.column_index(col_y)
    return ConflictReport(tuple(r.id for r in rel.rows if not r.cells[kx].mask & r.cells[ky].mask))


def project_conflict(rel: GranularRelation, col_x: str, col_y: str, out_column: str) -> GranularRelation:
    """Append a column holding the per-row intersection of two columns."""
    report = conflict_free(rel, col_x, col_y)
    if not report.ok:
        raise ConflictingRelation(report.offending)
    if out_column in rel.columns:
        raise InvalidRelation(f"column {out_column!r} already exists")
    kx, ky = rel.column_index(col_x), rel.column_index(col_y)
    rows = [
        (r.id, r.cells + (Granule(rel.frame, r.cells[kx].mask & r.cells[ky].mask),))
        for r in rel.rows
    ]
    return GranularRelation(rel.frame, rel.columns + (out_column,), rows)
