"""Center-set geometry: exact distance fields and disk dilation.

Cell centers live on an integer pixel lattice. Everything downstream
(codings, reversibility masks, matching) consumes either the center list
itself or the Euclidean distances from each pixel to its nearest and
second-nearest center, so those two fields are computed exactly here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree


@dataclass(frozen=True, eq=False)
class CenterSet:
    """Cell-center dot labels on a fixed pixel grid.

    Parameters
    ----------
    height, width : int
        Grid dimensions in pixels, both >= 1.
    centers : array-like
        (n, 2) integer (row, col) coordinates, all in bounds, no
        duplicates. May be empty.
    """

    height: int
    width: int
    centers: np.ndarray

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValueError("grid dimensions must be positive")
        pts = np.asarray(self.centers, dtype=np.int64).reshape(-1, 2).copy()
        if pts.size:
            rows, cols = pts[:, 0], pts[:, 1]
            if rows.min() < 0 or rows.max() >= self.height \
                    or cols.min() < 0 or cols.max() >= self.width:
                raise ValueError("center coordinates out of bounds")
            if len(np.unique(pts, axis=0)) != len(pts):
                raise ValueError("duplicate center coordinates")
        pts.setflags(write=False)
        object.__setattr__(self, "centers", pts)

    def __len__(self) -> int:
        return len(self.centers)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CenterSet)
                and self.height == other.height
                and self.width == other.width
                and np.array_equal(self.centers, other.centers))

    def sorted(self) -> "CenterSet":
        """Copy with centers in (row, col) lexicographic order."""
        if len(self) == 0:
            return self
        order = np.lexsort((self.centers[:, 1], self.centers[:, 0]))
        return CenterSet(self.height, self.width, self.centers[order])


def dot_mask(labels: CenterSet) -> np.ndarray:
    """Boolean map that is True exactly at center pixels."""
    mask = np.zeros((labels.height, labels.width), dtype=bool)
    if len(labels):
        mask[labels.centers[:, 0], labels.centers[:, 1]] = True
    return mask


def distance_fields(labels: CenterSet) -> tuple[np.ndarray, np.ndarray]:
    """Euclidean distance from every pixel to its nearest and second-nearest center.

    Returns
    -------
    dist1, dist2 : float64 arrays of shape (height, width)
        dist1 is +inf when there are no centers, dist2 is +inf when there
        are fewer than two. dist1 <= dist2 holds everywhere and dist1 is 0
        exactly at center pixels.

    Distances are exact: coordinates are integers, so the squared sums are
    exact in float64 and the square roots are correctly rounded. A KD-tree
    only accelerates the neighbor lookup; results are identical to
    exhaustive search.
    """
    shape = (labels.height, labels.width)
    n = len(labels)
    if n == 0:
        return np.full(shape, np.inf), np.full(shape, np.inf)
    tree = cKDTree(labels.centers.astype(np.float64))
    rows, cols = np.indices(shape)
    query = np.column_stack([rows.ravel(), cols.ravel()]).astype(np.float64)
    if n == 1:
        dist1 = tree.query(query, k=1, workers=-1)[0].reshape(shape)
        dist2 = np.full(shape, np.inf)
    else:
        dist = tree.query(query, k=2, workers=-1)[0]
        dist1 = dist[:, 0].reshape(shape)
        dist2 = dist[:, 1].reshape(shape)
    return dist1, dist2


def dilate_disk(labels: CenterSet, diameter: float) -> np.ndarray:
    """Dilate the dot labels with a closed Euclidean disk.

    The mask is True at pixel p iff some center lies within diameter/2 of
    p. diameter 1 reproduces the raw dot mask.
    """
    if diameter < 1:
        raise ValueError("dilation diameter must be >= 1")
    dist1, _ = distance_fields(labels)
    return dist1 <= diameter / 2.0
