"""Text formats shared by the library and the command line.

Matrix CSV: one row per line, comma-separated base-10 entries, no header.
Matrix text: ``n=<dim>`` followed by ``row <i>: e1 e2 ... en`` lines (1-based i).
"""

import re
from typing import Optional, cast

from app.errors import FormatError
from app.models import CheckReport, IntMatrix, Seq, SmithForm
from app.pascal_service import PascalService, SequenceKind

_INTEGER = re.compile(r"[+-]?\d+")
_ROW_LINE = re.compile(r"row\s+(\d+):(.*)")
_NAMED_SEQUENCE = re.compile(r"(sets|delta)|(stirling-partition|stirling-cycle|surjections):(\d+)")


def _parse_int(token: str) -> int:
    token = token.strip()
    if not _INTEGER.fullmatch(token):
        raise FormatError(f"not an integer: {token!r}")
    return int(token)


def _content_lines(text: str) -> list[str]:
    return [line.strip() for line in text.splitlines() if line.strip()]


def matrix_to_csv(a: IntMatrix) -> str:
    return "\n".join(",".join(str(e) for e in a.row(i)) for i in range(a.n))


def matrix_from_csv(text: str) -> IntMatrix:
    rows = [[_parse_int(cell) for cell in line.split(",")] for line in _content_lines(text)]
    if not rows:
        raise FormatError("empty matrix")
    if any(len(row) != len(rows) for row in rows):
        raise FormatError(f"expected {len(rows)} entries in each of {len(rows)} rows")
    return IntMatrix.from_rows(rows)


def matrix_to_text(a: IntMatrix) -> str:
    lines = [f"n={a.n}"]
    lines.extend(f"row {i + 1}: " + " ".join(str(e) for e in a.row(i)) for i in range(a.n))
    return "\n".join(lines)


def matrix_from_text(text: str) -> IntMatrix:
    lines = _content_lines(text)
    if not lines or not lines[0].startswith("n="):
        raise FormatError("matrix text must start with 'n=<dim>'")
    n = _parse_int(lines[0][2:])
    if n < 1 or len(lines) != n + 1:
        raise FormatError(f"expected {n} row lines after 'n={n}'")
    rows: list[list[int]] = []
    for expected, line in enumerate(lines[1:], start=1):
        found = _ROW_LINE.fullmatch(line)
        if found is None or int(found.group(1)) != expected:
            raise FormatError(f"expected 'row {expected}: ...', got {line!r}")
        row = [_parse_int(token) for token in found.group(2).split()]
        if len(row) != n:
            raise FormatError(f"row {expected} has {len(row)} entries, expected {n}")
        rows.append(row)
    return IntMatrix.from_rows(rows)


def format_matrix(a: IntMatrix, fmt: str) -> str:
    match fmt:
        case "csv":
            return matrix_to_csv(a)
        case "text":
            return matrix_to_text(a)
    raise FormatError(f"unknown matrix format {fmt!r}")


def parse_sequence(text: str, length: int) -> Seq:
    """Literal ``0,1,1,1`` or a named form: sets, delta, stirling-partition:r, stirling-cycle:r, surjections:r.

    Named forms are generated with ``length`` terms; literals keep their own length.
    """
    text = text.strip()
    named = _NAMED_SEQUENCE.fullmatch(text)
    if named is not None:
        if named.group(1):
            return PascalService.named_sequence(cast(SequenceKind, named.group(1)), length)
        return PascalService.named_sequence(cast(SequenceKind, named.group(2)), length, int(named.group(3)))
    if not text:
        raise FormatError("empty sequence literal")
    return Seq(terms=tuple(_parse_int(token) for token in text.split(",")), label="literal")


def format_sequence(c: Seq) -> str:
    return ",".join(str(t) for t in c.terms)


def format_smith_form(form: SmithForm, verified: Optional[bool] = None) -> str:
    lines = ["diag: " + " ".join(str(d) for d in form.diagonal)]
    if form.transforms is not None:
        lines.append("U:")
        lines.append(matrix_to_text(form.transforms.u))
        lines.append("V:")
        lines.append(matrix_to_text(form.transforms.v))
    if verified is not None:
        lines.append(f"verified: {str(verified).lower()}")
    return "\n".join(lines)


def format_report(report: CheckReport) -> str:
    """``check=<id> n=.. r=.. m=.. p=.. passed=<bool> [witness=(i,j): lhs=.. rhs=..]``.

    Parameters that do not apply are left out. Sequence checks give a single position
    ``(k)``; a witness without any position prints ``(*)``.
    """
    parts = [f"check={report.check_id}"]
    for name in ("n", "r", "m", "p"):
        value = getattr(report, name)
        if value is not None:
            parts.append(f"{name}={value}")
    parts.append(f"passed={str(report.passed).lower()}")
    w = report.witness
    if w is not None:
        if w.row is not None and w.col is not None:
            position = f"({w.row},{w.col})"
        elif w.row is not None:
            position = f"({w.row})"
        else:
            position = "(*)"
        parts.append(f"witness={position}: lhs={w.lhs} rhs={w.rhs}")
    return " ".join(parts)

