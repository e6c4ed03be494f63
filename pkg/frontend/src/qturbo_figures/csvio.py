"""Input parsing for the simulator's documented file formats.

Files are recognized by their exact header line (comment lines starting
with `#` are skipped).  A file whose header matches no known format, or
a known file with malformed rows, raises a descriptive error naming the
file — figures are never silently built from misread data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

SWEEP = "sweep"
EXIT = "exit"
TRAJECTORY = "trajectory"
GOODPUT = "goodput"
BOUND = "bound"
SWITCH = "switch"

_HEADERS = {
    "rate,k,p,frames,qubit_errors,qubit_total,qber,ci_low,ci_high,mean_iterations": SWEEP,
    "curve,p_or_rate,I_A,I_E,I_A_norm,I_E_norm,samples": EXIT,
    "iteration,stage,I,I_norm": TRAJECTORY,
    "rate,p,qber,goodput": GOODPUT,
    "p,capacity": BOUND,
}

# Columns that hold labels rather than numbers, per table kind.
_LABEL_COLUMNS = {
    SWEEP: {"rate"},
    EXIT: {"curve", "p_or_rate"},
    TRAJECTORY: {"stage"},
    GOODPUT: {"rate"},
    BOUND: set(),
}


class InputError(ValueError):
    """A problem with an input file, described well enough to fix it."""


@dataclass(frozen=True)
class Table:
    kind: str
    path: Path
    columns: tuple[str, ...]
    rows: tuple[dict[str, str], ...]


def _read_switch(path: Path) -> Table:
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: not valid JSON ({err})") from None
    if not isinstance(payload, dict) or "requirements" not in payload:
        raise InputError(
            f"{path}: expected a switch-table JSON object with a "
            "'requirements' list"
        )
    return Table(SWITCH, path, ("payload",), ({"payload": json.dumps(payload)},))


def read_input(path: str | Path) -> Table:
    """Parse one input file into a typed table."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"input file not found: {path}")
    if path.suffix == ".json":
        return _read_switch(path)

    header = None
    rows: list[dict[str, str]] = []
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line
            kind = _HEADERS.get(header)
            if kind is None:
                known = "\n  ".join(sorted(_HEADERS))
                raise InputError(
                    f"{path}: unrecognized header {header!r}; expected one of:\n  {known}"
                )
            columns = tuple(header.split(","))
            continue
        values = line.split(",")
        if len(values) != len(columns):
            raise InputError(
                f"{path}:{line_no}: row has {len(values)} fields, "
                f"header {header!r} has {len(columns)}"
            )
        labels = _LABEL_COLUMNS[_HEADERS[header]]
        for column, value in zip(columns, values):
            if column not in labels:
                try:
                    float(value)
                except ValueError:
                    raise InputError(
                        f"{path}:{line_no}: column {column!r} holds "
                        f"{value!r}, which is not a number"
                    ) from None
        rows.append(dict(zip(columns, values)))
    if header is None:
        raise InputError(f"{path}: no header line found")
    return Table(_HEADERS[header], path, columns, tuple(rows))


def read_inputs(paths: list) -> dict[str, list[Table]]:
    """Parse every input and group the tables by kind."""
    grouped: dict[str, list[Table]] = {}
    for path in paths:
        table = read_input(path)
        grouped.setdefault(table.kind, []).append(table)
    return grouped


def require(grouped: dict[str, list[Table]], kind: str, figure: str) -> list[Table]:
    tables = grouped.get(kind, [])
    if not tables:
        have = ", ".join(sorted(grouped)) or "nothing"
        raise InputError(
            f"the {figure} figure needs at least one {kind} file among "
            f"--in inputs (got: {have})"
        )
    return tables


def switch_payload(table: Table) -> dict:
    return json.loads(table.rows[0]["payload"])
