"""Invert coded maps back to raw labels.

Center recovery is circular-window local-maximum detection with a
deterministic tie rule; cell counting is plain integration of a unit-mass
density map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .geometry import CenterSet

THRESHOLD_MODES = ("absolute", "relative_to_max")


@dataclass(frozen=True)
class DecodeSpec:
    """Local-maximum detection parameters.

    nms_radius is the Euclidean radius of the suppression window.
    threshold is either an absolute field value or, in relative_to_max
    mode, a fraction of the field maximum; detections must exceed it
    strictly.
    """

    nms_radius: float = 8.0
    threshold_mode: str = "relative_to_max"
    threshold: float = 0.1

    def __post_init__(self):
        if not self.nms_radius > 0:
            raise ValueError("nms_radius must be positive")
        if self.threshold_mode not in THRESHOLD_MODES:
            raise ValueError(f"unknown threshold_mode {self.threshold_mode!r}")
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0")
        if self.threshold_mode == "relative_to_max" and self.threshold > 1:
            raise ValueError("relative threshold must be in [0, 1]")


def disk_footprint(radius: float) -> np.ndarray:
    """Boolean window of lattice offsets within Euclidean radius."""
    r = int(math.floor(radius))
    ax = np.arange(-r, r + 1)
    yy, xx = np.meshgrid(ax, ax, indexing="ij")
    return yy * yy + xx * xx <= radius * radius


def detect_local_maxima(field: np.ndarray, spec: DecodeSpec = DecodeSpec()) -> CenterSet:
    """Recover center candidates as dominant pixels of the map.

    A pixel is kept when its value exceeds the resolved threshold and is
    >= every value within nms_radius. Equal-valued candidates that touch
    (8-connected plateaus) collapse to their smallest (row, col) pixel, so
    symmetric discrete peaks yield exactly one detection. The result is
    sorted by (row, col).
    """
    field = np.asarray(field, dtype=np.float64)
    height, width = field.shape
    if spec.threshold_mode == "relative_to_max":
        resolved = spec.threshold * field.max()
    else:
        resolved = spec.threshold
    window_max = ndimage.maximum_filter(field, footprint=disk_footprint(spec.nms_radius),
                                        mode="constant", cval=-np.inf)
    candidates = (field == window_max) & (field > resolved)
    if not candidates.any():
        return CenterSet(height, width, np.empty((0, 2), dtype=np.int64))
    peaks = []
    eight = np.ones((3, 3), dtype=bool)
    for value in np.unique(field[candidates]):
        labeled, count = ndimage.label(candidates & (field == value), structure=eight)
        for component in range(1, count + 1):
            rows, cols = np.nonzero(labeled == component)
            peaks.append((int(rows[0]), int(cols[0])))  # row-major order: lexicographic min
    peaks.sort()
    return CenterSet(height, width, np.array(peaks, dtype=np.int64))


def count_by_integration(field: np.ndarray) -> float:
    """Total map mass; equals the cell count for unit-mass density codings."""
    return float(np.asarray(field).sum())
