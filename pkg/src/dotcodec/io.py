"""File formats: center CSVs, the SFLD binary field format, PNG export.

SFLD layout: magic bytes ``SFLD``, one version byte (1), height then width
as little-endian uint32, then height * width little-endian IEEE-754
float32 values in row-major order. Center sets are UTF-8 CSV with a
``row,col`` header and one 0-indexed integer pair per line; grid
dimensions travel out-of-band.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np
from PIL import Image

from .geometry import CenterSet

SFLD_MAGIC = b"SFLD"
SFLD_VERSION = 1
_HEADER = struct.Struct("<4sBII")


def fmt_value(value) -> str:
    """Deterministic text form for CSV and manifest values."""
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def write_field(path, field: np.ndarray) -> None:
    """Write a 2D map as an SFLD file (values stored as float32)."""
    field = np.asarray(field)
    if field.ndim != 2:
        raise ValueError("field must be 2D")
    height, width = field.shape
    data = field.astype("<f4").tobytes(order="C")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(SFLD_MAGIC, SFLD_VERSION, height, width))
        fh.write(data)


def read_field(path) -> np.ndarray:
    """Read an SFLD file back as a float64 array."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated SFLD header")
    magic, version, height, width = _HEADER.unpack_from(raw)
    if magic != SFLD_MAGIC:
        raise ValueError(f"{path}: not an SFLD file")
    if version != SFLD_VERSION:
        raise ValueError(f"{path}: unsupported SFLD version {version}")
    expected = _HEADER.size + 4 * height * width
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, found {len(raw)}")
    values = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size)
    return values.reshape(height, width).astype(np.float64)


def write_centers_csv(path, labels: CenterSet) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "col"])
        for row, col in labels.centers:
            writer.writerow([int(row), int(col)])


def read_centers_csv(path, height: int | None = None, width: int | None = None) -> CenterSet:
    """Read a row,col CSV; dimensions default to the tightest fitting grid."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["row", "col"]:
            raise ValueError(f"{path}: expected a 'row,col' header")
        points = [(int(r[0]), int(r[1])) for r in reader if r]
    if height is None:
        height = max((p[0] for p in points), default=0) + 1
    if width is None:
        width = max((p[1] for p in points), default=0) + 1
    return CenterSet(height, width, np.asarray(points, dtype=np.int64).reshape(-1, 2))


def export_png(path, field: np.ndarray) -> None:
    """16-bit grayscale render, field max mapped to 65535. Lossy; viewing only."""
    field = np.asarray(field, dtype=np.float64)
    if field.ndim != 2:
        raise ValueError("field must be 2D")
    peak = field.max() if field.size else 0.0
    if peak > 0:
        scaled = np.clip(np.round(field / peak * 65535.0), 0, 65535)
    else:
        scaled = np.zeros_like(field)
    image = Image.fromarray(scaled.astype(np.uint16))
    image.save(path, format="PNG")


def write_manifest(path, sections: dict[str, dict]) -> None:
    """Write a flat key = value manifest with one [section] per group.

    The format round-trips through configparser, so a benchmark manifest
    doubles as a config that reproduces the run.
    """
    lines = []
    for section, values in sections.items():
        lines.append(f"[{section}]")
        for key, value in values.items():
            lines.append(f"{key} = {fmt_value(value)}")
        lines.append("")
    Path(path).write_text("\n".join(lines), encoding="utf-8")
