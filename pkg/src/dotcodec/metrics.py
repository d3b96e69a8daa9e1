"""Coding-quality criteria and the squared-L2 map distance.

Entropy measures how evenly a coding spreads its nonzero values (a proxy
for how well a regressor can learn the map); reversibility measures what
fraction of the coded mass sits on, or near, the true centers (a proxy for
how robustly the map inverts back to dot labels).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CenterSet, dilate_disk, dot_mask


@dataclass(frozen=True)
class CodingQuality:
    entropy_bits: float
    reversibility: float
    reversibility_dilated: float
    bin_count: int
    dilation_diameter: float


def coding_entropy(field: np.ndarray, bin_count: int = 8) -> float:
    """Shannon entropy (bits) of the strictly positive coded values.

    The positives are histogrammed over bin_count equal-width bins
    spanning (0, max]; zero pixels are excluded as background. Returns 0
    for fields with no positive values or a single distinct one. Bins
    scale with the maximum, so the result is invariant under positive
    rescaling of the field.
    """
    if bin_count < 2:
        raise ValueError("bin_count must be >= 2")
    field = np.asarray(field)
    positive = field[field > 0]
    if positive.size == 0:
        return 0.0
    vmax = positive.max()
    if positive.min() == vmax:
        return 0.0
    edges = np.linspace(0.0, vmax, bin_count + 1)
    hist, _ = np.histogram(positive, bins=edges)
    p = hist[hist > 0] / positive.size
    return float(-(p * np.log2(p)).sum())


def reversibility(field: np.ndarray, mask: np.ndarray) -> float:
    """Fraction of the total coding mass inside the mask, in [0, 1]."""
    field = np.asarray(field)
    mask = np.asarray(mask, dtype=bool)
    if field.shape != mask.shape:
        raise ValueError(f"shape mismatch: field {field.shape} vs mask {mask.shape}")
    total = field.sum()
    if not total > 0:
        raise ValueError("reversibility is undefined for a zero-total field")
    return float(field[mask].sum() / total)


def reversibility_dilated(field: np.ndarray, labels: CenterSet,
                          diameter: float = 5.0) -> float:
    """Reversibility against the disk-dilated dot mask (default diameter 5)."""
    return reversibility(field, dilate_disk(labels, diameter))


def coding_quality(field: np.ndarray, labels: CenterSet, *,
                   bin_count: int = 8,
                   dilation_diameter: float = 5.0) -> CodingQuality:
    """Entropy plus raw and dilated reversibility of one coded map."""
    return CodingQuality(
        entropy_bits=coding_entropy(field, bin_count),
        reversibility=reversibility(field, dot_mask(labels)),
        reversibility_dilated=reversibility_dilated(field, labels, dilation_diameter),
        bin_count=bin_count,
        dilation_diameter=dilation_diameter,
    )


def l2_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of squared per-pixel differences between two maps."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float((diff * diff).sum())
