"""Target-map encoders for cell-center dot labels.

Five schemes. "dot" is the raw labels themselves. "gaussian" and
"rectangle" are density maps made by stamping a kernel on every center;
with unit-mass normalization each cell contributes total mass 1 even when
its kernel is truncated by the image border, so integrating the map counts
cells. "proximity" maps each pixel through a reciprocal decay of the
distance to its nearest center, peaking at 1 on the centers. "repel" does
the same but first inflates the distance by how contested the pixel is
between its two nearest centers, which carves a valley between neighboring
cells and keeps their peaks separable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import CenterSet, distance_fields

SCHEMES = ("dot", "gaussian", "rectangle", "proximity", "repel")
NORMALIZATIONS = ("raw", "peak_one", "unit_mass")


@dataclass(frozen=True)
class CodingSpec:
    """Encoder parameters for all five schemes.

    Parameters irrelevant to the selected scheme are ignored but must
    still be valid. Defaults correspond to an average cell radius of 8
    pixels; use from_cell_radius for other cell sizes.

    alpha, radius_cutoff
        Decay rate and support cutoff of the proximity/repel reciprocal
        decay 1 / (1 + alpha * d), applied while d < radius_cutoff.
    sigma
        Gaussian kernel width; the kernel is truncated at 3 sigma.
    kernel_size
        Side of the square box kernel; odd so kernels center on a pixel.
    normalization
        "raw" stamps the kernel as-is (continuous-density samples for
        gaussian, 1/k^2 box weights for rectangle), "unit_mass" rescales
        every stamped kernel so its in-bounds mass is exactly 1, and
        "peak_one" rescales the finished map to maximum 1 (visualization
        only). proximity and repel already peak at 1 and ignore the mode.
    """

    scheme: str
    alpha: float = 0.8
    radius_cutoff: float = 16.0
    sigma: float = 4.0
    kernel_size: int = 17
    normalization: str = "unit_mass"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.radius_cutoff > 0:
            raise ValueError("radius_cutoff must be positive")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise ValueError("kernel_size must be an odd positive integer")

    @classmethod
    def from_cell_radius(cls, scheme: str, cell_radius: float, *,
                         alpha: float = 0.8,
                         normalization: str = "unit_mass") -> "CodingSpec":
        """Derive cutoff, sigma and kernel size from an average cell radius.

        radius_cutoff = 2 * radius, sigma = radius / 2 and
        kernel_size = 2 * round(radius) + 1.
        """
        return cls(scheme=scheme, alpha=alpha,
                   radius_cutoff=2.0 * cell_radius,
                   sigma=cell_radius / 2.0,
                   kernel_size=2 * int(round(cell_radius)) + 1,
                   normalization=normalization)

    def with_scheme(self, scheme: str) -> "CodingSpec":
        return replace(self, scheme=scheme)


def encode_dot(labels: CenterSet) -> np.ndarray:
    """1 at each center pixel, 0 elsewhere."""
    field = np.zeros((labels.height, labels.width))
    if len(labels):
        field[labels.centers[:, 0], labels.centers[:, 1]] = 1.0
    return field


def _decay_map(dist: np.ndarray, alpha: float, cutoff: float) -> np.ndarray:
    out = np.zeros(dist.shape)
    inside = dist < cutoff
    out[inside] = 1.0 / (1.0 + alpha * dist[inside])
    return out


def encode_proximity(labels: CenterSet, spec: CodingSpec) -> np.ndarray:
    """Reciprocal decay of the nearest-center distance, 1 at centers.

    Value is 1 / (1 + alpha * dist1) where dist1 < radius_cutoff, 0
    beyond the cutoff.
    """
    dist1, _ = distance_fields(labels)
    return _decay_map(dist1, spec.alpha, spec.radius_cutoff)


def encode_repel(labels: CenterSet, spec: CodingSpec) -> np.ndarray:
    """Proximity-style decay of a contested-distance measure.

    The nearest distance is inflated to dist1 * (1 + dist1/dist2)^2 before
    the decay, so pixels midway between two cells are pushed toward zero
    while the centers keep value 1. With a single center dist2 is infinite
    and the result equals encode_proximity pixel for pixel.
    """
    if len(labels) == 0:
        return np.zeros((labels.height, labels.width))
    dist1, dist2 = distance_fields(labels)
    # dist2 is +inf with one center, making the ratio exactly 0.
    contested = dist1 * (1.0 + dist1 / dist2) ** 2
    return _decay_map(contested, spec.alpha, spec.radius_cutoff)


def _gaussian_kernel(sigma: float) -> np.ndarray:
    """Isotropic Gaussian density sampled on the lattice, truncated at 3 sigma."""
    radius = max(1, math.ceil(3.0 * sigma))
    ax = np.arange(-radius, radius + 1, dtype=np.float64)
    yy, xx = np.meshgrid(ax, ax, indexing="ij")
    return np.exp(-(yy ** 2 + xx ** 2) / (2.0 * sigma * sigma)) / (2.0 * math.pi * sigma * sigma)


def _box_kernel(size: int) -> np.ndarray:
    return np.full((size, size), 1.0 / (size * size))


def _stamp(labels: CenterSet, kernel: np.ndarray, unit_mass: bool) -> np.ndarray:
    """Add one kernel copy per center, cropped at the borders.

    With unit_mass each copy is rescaled by its in-bounds sum so every
    cell contributes total mass 1 regardless of truncation.
    """
    field = np.zeros((labels.height, labels.width))
    radius = kernel.shape[0] // 2
    for row, col in labels.centers:
        r0, r1 = max(row - radius, 0), min(row + radius + 1, labels.height)
        c0, c1 = max(col - radius, 0), min(col + radius + 1, labels.width)
        crop = kernel[r0 - row + radius:r1 - row + radius,
                      c0 - col + radius:c1 - col + radius]
        weight = 1.0 / crop.sum() if unit_mass else 1.0
        field[r0:r1, c0:c1] += weight * crop
    return field


def _peak_one(field: np.ndarray) -> np.ndarray:
    peak = field.max() if field.size else 0.0
    return field / peak if peak > 0 else field


def _encode_kernel(labels: CenterSet, kernel: np.ndarray, normalization: str) -> np.ndarray:
    if normalization == "unit_mass":
        return _stamp(labels, kernel, unit_mass=True)
    field = _stamp(labels, kernel, unit_mass=False)
    return _peak_one(field) if normalization == "peak_one" else field


def encode_gaussian(labels: CenterSet, spec: CodingSpec) -> np.ndarray:
    """Dot labels convolved with a truncated Gaussian kernel (zero padding)."""
    return _encode_kernel(labels, _gaussian_kernel(spec.sigma), spec.normalization)


def encode_rectangle(labels: CenterSet, spec: CodingSpec) -> np.ndarray:
    """Dot labels filtered with a k x k moving-average box (zero padding).

    kernel_size 1 reproduces encode_dot.
    """
    return _encode_kernel(labels, _box_kernel(spec.kernel_size), spec.normalization)


_ENCODERS = {
    "dot": lambda labels, spec: encode_dot(labels),
    "gaussian": encode_gaussian,
    "rectangle": encode_rectangle,
    "proximity": encode_proximity,
    "repel": encode_repel,
}


def encode(labels: CenterSet, spec: CodingSpec) -> np.ndarray:
    """Encode labels with the scheme selected by the spec."""
    return _ENCODERS[spec.scheme](labels, spec)
