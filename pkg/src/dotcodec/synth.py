"""Seeded synthetic scenes and prediction-error perturbation.

Scenes are label-only point patterns: a configurable fraction of the cells
is laid out as tight pairs (closer than one cell diameter) to exercise the
crowded regime, everything else keeps at least a diameter of clearance.
perturb() emulates an imperfect regressor output by blurring an ideal
coding and adding pixel noise.

All randomness comes from numpy's default_rng (PCG64) seeded explicitly,
so identical specs reproduce identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage


@dataclass(frozen=True)
class SceneSpec:
    """Synthetic scene layout parameters.

    crowded_fraction of the cells are placed as near-pairs with spacing in
    [min_spacing, 2 * cell_radius); all other inter-cell distances are at
    least max(min_spacing, 2 * cell_radius), so exactly the paired cells
    have a neighbor closer than one cell diameter.
    """

    height: int
    width: int
    n_cells: int
    min_spacing: float
    crowded_fraction: float = 0.0
    cell_radius: float = 8.0
    seed: int = 0

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValueError("grid dimensions must be positive")
        if self.n_cells < 0:
            raise ValueError("n_cells must be >= 0")
        if not self.min_spacing > 0:
            raise ValueError("min_spacing must be positive")
        if not 0.0 <= self.crowded_fraction <= 1.0:
            raise ValueError("crowded_fraction must be in [0, 1]")
        if not self.cell_radius > 0:
            raise ValueError("cell_radius must be positive")


@dataclass(frozen=True)
class PerturbSpec:
    """Blur plus additive-noise perturbation of a coded map."""

    blur_sigma: float = 0.0
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.blur_sigma) and self.blur_sigma >= 0):
            raise ValueError("blur_sigma must be finite and >= 0")
        if not (math.isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise ValueError("noise_sigma must be finite and >= 0")


def _min_sq_dist(points: list[tuple[int, int]], candidate: tuple[int, int]) -> float:
    if not points:
        return math.inf
    arr = np.asarray(points, dtype=np.float64)
    dr = arr[:, 0] - candidate[0]
    dc = arr[:, 1] - candidate[1]
    return float((dr * dr + dc * dc).min())


def generate_scene(spec: SceneSpec):
    """Place n_cells centers by seeded rejection sampling.

    Near-pairs are placed first (anchor plus a partner at a random angle
    and spacing), then the remaining singles; every candidate that
    violates a spacing or bounds constraint is rejected and redrawn. The
    total attempt budget is 1000 * n_cells; exhausting it raises an error
    naming the constraint that could not be met. Centers are returned in
    (row, col) order.
    """
    from .geometry import CenterSet  # local import to keep module load cheap

    rng = np.random.default_rng(spec.seed)
    n_pairs = int(round(spec.crowded_fraction * spec.n_cells / 2.0))
    if n_pairs > 0 and not spec.min_spacing < 2.0 * spec.cell_radius:
        raise ValueError("crowded pairs need min_spacing < 2 * cell_radius")
    clear = max(spec.min_spacing, 2.0 * spec.cell_radius)
    clear_sq = clear * clear
    points: list[tuple[int, int]] = []
    budget = 1000 * max(spec.n_cells, 1)

    def draw_point() -> tuple[int, int]:
        return int(rng.integers(spec.height)), int(rng.integers(spec.width))

    pairs_placed = 0
    while pairs_placed < n_pairs:
        budget -= 1
        if budget < 0:
            raise ValueError(
                f"retry budget exhausted placing crowded pair {pairs_placed + 1} of "
                f"{n_pairs}: could not keep pair spacing in "
                f"[{spec.min_spacing}, {2.0 * spec.cell_radius}) with {clear} px clearance")
        anchor = draw_point()
        if _min_sq_dist(points, anchor) < clear_sq:
            continue
        spacing = rng.uniform(spec.min_spacing, 2.0 * spec.cell_radius)
        angle = rng.uniform(0.0, 2.0 * math.pi)
        partner = (int(round(anchor[0] + spacing * math.sin(angle))),
                   int(round(anchor[1] + spacing * math.cos(angle))))
        if not (0 <= partner[0] < spec.height and 0 <= partner[1] < spec.width):
            continue
        gap = math.dist(anchor, partner)
        if not spec.min_spacing <= gap < 2.0 * spec.cell_radius:
            continue  # lattice rounding pushed the pair outside the crowded band
        if _min_sq_dist(points, partner) < clear_sq:
            continue
        points.extend([anchor, partner])
        pairs_placed += 1

    singles_needed = spec.n_cells - 2 * n_pairs
    singles_placed = 0
    while singles_placed < singles_needed:
        budget -= 1
        if budget < 0:
            raise ValueError(
                f"retry budget exhausted placing cell {len(points) + 1} of "
                f"{spec.n_cells}: could not keep {clear} px clearance on a "
                f"{spec.height}x{spec.width} grid")
        candidate = draw_point()
        if _min_sq_dist(points, candidate) < clear_sq:
            continue
        points.append(candidate)
        singles_placed += 1

    points.sort()
    centers = np.asarray(points, dtype=np.int64).reshape(-1, 2)
    return CenterSet(spec.height, spec.width, centers)


def perturb(field: np.ndarray, spec: PerturbSpec) -> np.ndarray:
    """Blur, add Gaussian pixel noise, clamp at zero.

    The blur is an isotropic Gaussian truncated at 3 sigma with zero
    padding, so the mass of interior-supported fields is preserved. Noise
    is zero-mean i.i.d. per pixel, seeded by the spec. Both stages are
    skipped when their sigma is 0.
    """
    out = np.asarray(field, dtype=np.float64).copy()
    if spec.blur_sigma > 0:
        out = ndimage.gaussian_filter(out, sigma=spec.blur_sigma,
                                      mode="constant", cval=0.0, truncate=3.0)
    if spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        out += rng.normal(0.0, spec.noise_sigma, size=out.shape)
    return np.maximum(out, 0.0)
