"""Game specification files and CSV serialization.

A spec file is either flat ``key = value`` text (``#`` starts a comment)::

    # convex Prisoner's Dilemma
    R = 21
    S = 1
    T = 22
    P = 20
    p_a = 0.8
    label = convex PD

or a JSON object with the same keys.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidGameError, SpecFileError
from .game import GameInstance, PayoffMatrix

NUMERIC_KEYS = ("R", "S", "T", "P", "p_a")
METADATA_KEYS = ("label", "name", "description", "notes", "source")


@dataclass(frozen=True)
class GameSpec:
    game: GameInstance
    metadata: dict[str, str] = field(default_factory=dict)


def _to_float(raw, key: str, line: int | None) -> float:
    if isinstance(raw, bool):
        raise SpecFileError(f"expected a number, got {raw!r}", line=line, field=key)
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise SpecFileError(f"expected a number, got {raw!r}", line=line, field=key)
    if not math.isfinite(value):
        raise SpecFileError(f"value must be finite, got {raw!r}", line=line, field=key)
    return value


def _build(values: dict[str, float], metadata: dict[str, str], lines: dict[str, int]) -> GameSpec:
    for key in ("R", "S", "T", "P"):
        if key not in values:
            raise SpecFileError("missing required payoff", field=key)
    try:
        matrix = PayoffMatrix(values["R"], values["S"], values["T"], values["P"])
        game = GameInstance(matrix, values.get("p_a", 0.0))
    except InvalidGameError as exc:
        raise SpecFileError(str(exc), line=lines.get(exc.field), field=exc.field) from None
    return GameSpec(game, metadata)


def parse_spec_text(text: str) -> GameSpec:
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    values: dict[str, float] = {}
    metadata: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SpecFileError(f"expected 'key = value', got {raw!r}", line=lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key in lines:
            raise SpecFileError("duplicate key", line=lineno, field=key)
        lines[key] = lineno
        if key in NUMERIC_KEYS:
            values[key] = _to_float(value.split("#", 1)[0].strip(), key, lineno)
        elif key in METADATA_KEYS:
            metadata[key] = value
        else:
            raise SpecFileError("unknown key", line=lineno, field=key)
    return _build(values, metadata, lines)


def _parse_json(text: str) -> GameSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise SpecFileError("top-level JSON value must be an object")
    values: dict[str, float] = {}
    metadata: dict[str, str] = {}
    for key, raw in doc.items():
        if key in NUMERIC_KEYS:
            values[key] = _to_float(raw, key, None)
        elif key in METADATA_KEYS:
            metadata[key] = str(raw)
        else:
            raise SpecFileError("unknown key", field=key)
    return _build(values, metadata, {})


def load_spec(path: str | Path) -> GameSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_spec_text(text)


def format_number(value) -> str:
    """17 significant digits, enough to round-trip any double."""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value + 0.0, ".17g")  # drops the sign of -0.0
    return str(value)


def write_csv(columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row[c]) for c in columns])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse CSV written by :func:`write_csv`; numeric cells become int or float."""

    def convert(cell: str):
        for cast in (int, float):
            try:
                return cast(cell)
            except ValueError:
                pass
        return cell

    reader = csv.DictReader(io.StringIO(text))
    return [{k: convert(v) for k, v in row.items()} for row in reader]
