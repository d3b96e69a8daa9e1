"""dotcodec: codings for cell-center dot labels and their inversion.

Encode sparse center labels into dense target maps (dot, Gaussian,
rectangle, proximity, repel), score a coding's entropy and reversibility,
recover centers and counts from coded maps, and evaluate recovered centers
with greedy closest-pair F1 matching.
"""

__version__ = "0.1.0"

from .decode import DecodeSpec, count_by_integration, detect_local_maxima
from .encoders import (CodingSpec, encode, encode_dot, encode_gaussian,
                       encode_proximity, encode_rectangle, encode_repel)
from .evaluate import DATASET_MATCH_RADIUS, MatchReport, greedy_match, score
from .geometry import CenterSet, dilate_disk, distance_fields, dot_mask
from .metrics import (CodingQuality, coding_entropy, coding_quality,
                      l2_distance, reversibility, reversibility_dilated)
from .synth import PerturbSpec, SceneSpec, generate_scene, perturb

__all__ = [
    "__version__",
    "CenterSet", "distance_fields", "dilate_disk", "dot_mask",
    "CodingSpec", "encode", "encode_dot", "encode_gaussian",
    "encode_proximity", "encode_rectangle", "encode_repel",
    "CodingQuality", "coding_entropy", "coding_quality",
    "reversibility", "reversibility_dilated", "l2_distance",
    "DecodeSpec", "detect_local_maxima", "count_by_integration",
    "MatchReport", "greedy_match", "score", "DATASET_MATCH_RADIUS",
    "SceneSpec", "PerturbSpec", "generate_scene", "perturb",
]
