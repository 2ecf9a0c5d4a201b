"""Plain-text field snapshots.

Line 1 is `MARANGONI-FIELD v1 <field> <nx> <ny> <lx> <ly> <t>`,
then `ny` rows of `nx` values, bottom row first,
17 significant digits so binary64 values round-trip exactly.
"""
from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, Final

import msgspec
import numpy as np

from marangoni.exceptions import (
    SnapshotMagicError,
    SnapshotShapeError,
    SnapshotValueError,
)

if TYPE_CHECKING:
    from marangoni.marangoni_types import FloatArray

SNAPSHOT_MAGIC: Final = "MARANGONI-FIELD v1"
HEADER_TOKENS: Final = 8


def format_float(value: float) -> str:
    """Lossless, locale-independent decimal form."""
    return f"{value:.17g}"


class SnapshotHeader(msgspec.Struct, frozen=True):
    """First line of a snapshot file."""

    field_name: str
    nx: int
    ny: int
    lx: float
    ly: float
    t: float

    def render(self: SnapshotHeader) -> str:
        return " ".join(
            (
                SNAPSHOT_MAGIC,
                self.field_name,
                str(self.nx),
                str(self.ny),
                format_float(self.lx),
                format_float(self.ly),
                format_float(self.t),
            ),
        )


def write_snapshot(
    values: FloatArray,
    header: SnapshotHeader,
    path: str | Path,
) -> None:
    """Write `(nx, ny)` values under `header`.

    ### Raises:
    - `SnapshotShapeError`: if values don't match the header shape.
    """
    if values.shape != (header.nx, header.ny):
        shape_err_msg: Final = (
            f"values have shape {values.shape}, "
            f"header says ({header.nx}, {header.ny})"
        )
        raise SnapshotShapeError(shape_err_msg)

    lines: Final = [header.render()]
    lines.extend(
        " ".join(format_float(value) for value in values[:, j])
        for j in range(header.ny)
    )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_header(line: str) -> SnapshotHeader:
    tokens: Final = line.split()
    if " ".join(tokens[:2]) != SNAPSHOT_MAGIC:
        magic_err_msg: Final = (
            f"line 1: expected magic {SNAPSHOT_MAGIC!r}, "
            f"got {' '.join(tokens[:2])!r}"
        )
        raise SnapshotMagicError(magic_err_msg)
    if len(tokens) != HEADER_TOKENS:
        header_err_msg: Final = (
            f"line 1: header needs {HEADER_TOKENS} fields, got {len(tokens)}"
        )
        raise SnapshotValueError(header_err_msg)
    try:
        return SnapshotHeader(
            field_name=tokens[2],
            nx=int(tokens[3]),
            ny=int(tokens[4]),
            lx=float(tokens[5]),
            ly=float(tokens[6]),
            t=float(tokens[7]),
        )
    except ValueError as exc:
        value_err_msg: Final = f"line 1: {exc}"
        raise SnapshotValueError(value_err_msg) from exc


def read_snapshot(path: str | Path) -> tuple[SnapshotHeader, FloatArray]:
    """Read a snapshot written by `write_snapshot`.

    ### Returns:
    header and the `(nx, ny)` array, bit-identical to what was written.

    ### Raises:
    - `SnapshotMagicError`: wrong or missing magic.
    - `SnapshotShapeError`: wrong number of rows or columns.
    - `SnapshotValueError`: non-numeric token.
    """
    lines: Final = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        empty_err_msg: Final = "line 1: empty snapshot file"
        raise SnapshotMagicError(empty_err_msg)

    header: Final = _parse_header(lines[0])
    rows: Final = lines[1:]
    while rows and not rows[-1].strip():
        rows.pop()
    if len(rows) != header.ny:
        rows_err_msg: Final = (
            f"expected {header.ny} rows, found {len(rows)} "
            f"(last line {len(rows) + 1})"
        )
        raise SnapshotShapeError(rows_err_msg)

    values: Final = np.empty((header.nx, header.ny))
    for j, row in enumerate(rows):
        line_number = j + 2
        tokens = row.split()
        if len(tokens) != header.nx:
            cols_err_msg = (
                f"line {line_number}: expected {header.nx} values, "
                f"found {len(tokens)}"
            )
            raise SnapshotShapeError(cols_err_msg)
        for i, token in enumerate(tokens):
            try:
                values[i, j] = float(token)
            except ValueError as exc:
                token_err_msg = (
                    f"line {line_number}: non-numeric token {token!r}"
                )
                raise SnapshotValueError(token_err_msg) from exc
    return header, values
