"""Deterministic file output: atomic writes, fixed-precision CSV, run metadata."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence


def format_float(value: float) -> str:
    """Fixed 6-decimal rendering; infinities become 'inf'/'-inf'."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        value = 0.0  # avoid '-0.000000'
    return f"{value:.6f}"


def config_hash(config: dict) -> str:
    """Short stable digest of the analysis-relevant configuration."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def meta_lines(version: str, cfg_hash: str, min_support: float | None) -> list[str]:
    support = format_float(min_support) if min_support is not None else "n/a"
    return [f"werlens {version}", f"config_hash={cfg_hash}", f"min_support={support}"]


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write-then-rename so partial runs never corrupt prior outputs."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence[str]],
    comments: Sequence[str] = (),
) -> None:
    """UTF-8 comma-separated output with LF line endings and '#' comment lines."""
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    atomic_write_text(path, buf.getvalue())


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Read a CSV written by write_csv, skipping '#' comment lines."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    parsed = list(csv.reader(lines))
    if not parsed:
        raise ValueError(f"{path}: no header row")
    return parsed[0], parsed[1:]
