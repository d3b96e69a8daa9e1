"""Detection scoring: greedy closest-pair matching and F1.

Matching repeatedly extracts the globally closest unmatched
(detection, truth) pair, so every point is paired at most once and the
pairing is independent of input order up to exact distance ties, which a
lexicographic index rule resolves deterministically. Thresholding happens
after matching: a pair counts as a hit only if its distance is within the
match threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CenterSet

# Average cell radius per dataset tag, used as the default match threshold.
DATASET_MATCH_RADIUS = {"dg": 8.0, "adip": 11.0, "hbm": 15.0, "vgg": 11.0}

Pair = tuple[int, int, float]


@dataclass(frozen=True)
class MatchReport:
    """Matching outcome plus the derived detection scores.

    pairs holds (detection index, truth index, distance) for every greedy
    match, including those beyond the threshold. f1_standard is
    2PR/(P+R); f1_paper_literal is PR/(P+R), exactly half of it whenever
    P + R > 0, kept for comparability with the halved harmonic-mean
    convention some evaluation scripts use.
    """

    pairs: tuple[Pair, ...]
    unmatched_detections: int
    unmatched_ground_truth: int
    precision: float
    recall: float
    f1_standard: float
    f1_paper_literal: float
    threshold: float

    @property
    def n_detections(self) -> int:
        return len(self.pairs) + self.unmatched_detections

    @property
    def n_ground_truth(self) -> int:
        return len(self.pairs) + self.unmatched_ground_truth


def greedy_match(detections: CenterSet, truth: CenterSet) -> list[Pair]:
    """Pair detections with ground truth by repeated closest-pair extraction.

    Each round removes the globally closest unmatched pair until one side
    is exhausted; ties break toward the smallest detection index, then the
    smallest truth index. Returns min(|detections|, |truth|) pairs.
    """
    n_det, n_gt = len(detections), len(truth)
    if n_det == 0 or n_gt == 0:
        return []
    diff = detections.centers[:, None, :] - truth.centers[None, :, :]
    distances = np.sqrt((diff * diff).sum(axis=2).astype(np.float64))
    work = distances.copy()
    pairs: list[Pair] = []
    for _ in range(min(n_det, n_gt)):
        flat = int(np.argmin(work))  # first minimum in row-major order = index tie-break
        i, j = divmod(flat, n_gt)
        pairs.append((i, j, float(distances[i, j])))
        work[i, :] = np.inf
        work[:, j] = np.inf
    return pairs


def score(detections: CenterSet, truth: CenterSet, threshold: float) -> MatchReport:
    """Match greedily, then score pairs within the distance threshold.

    Precision is hits / |detections| and recall hits / |truth|. An empty
    side scores 0; two empty sides count as a perfect match by convention
    (P = R = f1_standard = 1).
    """
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    pairs = greedy_match(detections, truth)
    hits = sum(1 for _, _, d in pairs if d <= threshold)
    n_det, n_gt = len(detections), len(truth)
    if n_det == 0 and n_gt == 0:
        precision = recall = 1.0
    else:
        precision = hits / n_det if n_det else 0.0
        recall = hits / n_gt if n_gt else 0.0
    if precision + recall > 0:
        literal = precision * recall / (precision + recall)
    else:
        literal = 0.0
    return MatchReport(
        pairs=tuple(pairs),
        unmatched_detections=n_det - len(pairs),
        unmatched_ground_truth=n_gt - len(pairs),
        precision=precision,
        recall=recall,
        f1_standard=2.0 * literal,
        f1_paper_literal=literal,
        threshold=float(threshold),
    )
