"""File formats: the .trn adjacency-matrix text format, its JSON mirror,
orderings, assignments, and input digests."""

from __future__ import annotations

import hashlib
import json
import os
from typing import Union

from .core import Tournament


def tournament_to_text(t: Tournament) -> str:
    lines = [f"tournament {t.n}"]
    for u in range(t.n):
        lines.append("".join("1" if t.rows[u] >> v & 1 else "0" for v in range(t.n)))
    return "\n".join(lines) + "\n"


def tournament_from_text(text: str) -> Tournament:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("line 1: empty input")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "tournament":
        raise ValueError(f"line 1: expected 'tournament <n>', got {lines[0]!r}")
    try:
        n = int(header[1])
    except ValueError:
        raise ValueError(f"line 1: bad vertex count {header[1]!r}") from None
    if len(lines) - 1 != n:
        raise ValueError(f"expected {n} matrix rows, found {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        row = line.strip()
        if len(row) != n:
            raise ValueError(f"line {i}: expected {n} entries, got {len(row)}")
        bits = 0
        for j, ch in enumerate(row):
            if ch == "1":
                bits |= 1 << j
            elif ch != "0":
                raise ValueError(f"line {i}, column {j + 1}: invalid character {ch!r}")
        rows.append(bits)
    return Tournament(n, tuple(rows))


def tournament_to_json_dict(t: Tournament) -> dict:
    return {
        "n": t.n,
        "rows": ["".join("1" if t.rows[u] >> v & 1 else "0" for v in range(t.n)) for u in range(t.n)],
    }


def tournament_from_json_dict(data: dict) -> Tournament:
    n = int(data["n"])
    raw_rows = data["rows"]
    if len(raw_rows) != n:
        raise ValueError(f"expected {n} rows, got {len(raw_rows)}")
    rows = []
    for i, raw in enumerate(raw_rows):
        cells = list(raw) if isinstance(raw, str) else raw
        if len(cells) != n:
            raise ValueError(f"row {i}: expected {n} entries, got {len(cells)}")
        bits = 0
        for j, cell in enumerate(cells):
            if int(cell):
                bits |= 1 << j
        rows.append(bits)
    return Tournament(n, tuple(rows))


def load_tournament(path: Union[str, os.PathLike]) -> Tournament:
    """Read a tournament from .trn text or its JSON mirror (sniffed)."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    stripped = text.lstrip()
    try:
        if stripped.startswith("{"):
            return tournament_from_json_dict(json.loads(text))
        return tournament_from_text(text)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def save_tournament(
    t: Tournament, path: Union[str, os.PathLike], *, fmt: str = "auto"
) -> None:
    if fmt == "auto":
        fmt = "json" if str(path).endswith(".json") else "trn"
    if fmt == "json":
        payload = json.dumps(tournament_to_json_dict(t), indent=1) + "\n"
    elif fmt == "trn":
        payload = tournament_to_text(t)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(payload)


def parse_ordering(spec: str) -> tuple[int, ...]:
    """An ordering given inline ('4,0,1,3,2'), as a JSON list, or as a path
    to a file holding either."""
    text = spec
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as handle:
            text = handle.read()
    text = text.strip()
    if text.startswith("["):
        return tuple(int(v) for v in json.loads(text))
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def parse_assignment(spec: str) -> tuple[bool, ...]:
    """Comma-separated truth values: '1,0,1'."""
    values = []
    for tok in spec.replace(",", " ").split():
        if tok not in ("0", "1"):
            raise ValueError(f"assignment entries must be 0 or 1, got {tok!r}")
        values.append(tok == "1")
    return tuple(values)


def sha256_file(path: Union[str, os.PathLike]) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_json(path: Union[str, os.PathLike], payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=1)
        handle.write("\n")


def read_json(path: Union[str, os.PathLike]) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)
