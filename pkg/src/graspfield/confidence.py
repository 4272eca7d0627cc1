"""Point grasp-confidence field and binary point labels.

Each positive grasp contributes 1 - dis/d_th to every point closer than
d_th to its center. Points whose accumulated confidence exceeds c_t are
labeled positive; the boundary value is negative. The field is what the
point segmentation stage learns to predict.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .geometry import Grasp, PointCloud
from .losses import cross_entropy

DEFAULT_DISTANCE_THRESHOLD = 0.02
DEFAULT_CONFIDENCE_THRESHOLD = 0.6

# 27-cell neighborhood stencil; with cell size d_th, any center within
# d_th of a point lies in one of these cells relative to the point's.
_STENCIL = np.array(
    [(i, j, k) for i in (-1, 0, 1) for j in (-1, 0, 1) for k in (-1, 0, 1)],
    dtype=np.int64,
)


@dataclass(frozen=True)
class ConfidenceField:
    """Per-point confidence values with their binarized labels."""

    values: np.ndarray
    labels: np.ndarray
    confidence_threshold: float
    distance_threshold: float

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if values.ndim != 1 or labels.shape != values.shape:
            raise DataError("values and labels must be aligned 1-d arrays")
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise DataError("confidence values must be finite and >= 0")
        if self.distance_threshold <= 0.0:
            raise DataError("distance_threshold must be positive")
        expect = values > self.confidence_threshold
        if not np.array_equal(labels.astype(bool), expect):
            raise DataError("labels inconsistent with values and confidence_threshold")
        values.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.values)


def _bucket_keys(coords: np.ndarray, cell: float) -> np.ndarray:
    return np.floor(coords / cell).astype(np.int64)


def confidence_field(
    cloud: PointCloud,
    positives: list[Grasp],
    distance_threshold: float = DEFAULT_DISTANCE_THRESHOLD,
    confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> ConfidenceField:
    """Accumulate c_pc over the positive grasp set and binarize.

    Per point: sum of (1 - dis/d_th) over grasp centers with dis < d_th,
    0 contribution otherwise. A uniform grid with cell size d_th keeps
    the pairing near-linear; contributions are added in grasp order so
    results match a plain double loop bit for bit in practice.
    """
    if distance_threshold <= 0.0:
        raise DataError("distance_threshold must be positive")
    values = np.zeros(len(cloud), dtype=np.float64)
    if positives:
        centers = np.stack([g.center for g in positives])
        grasp_cells = _bucket_keys(centers, distance_threshold)
        buckets: dict[tuple, list[int]] = {}
        for gi, key in enumerate(map(tuple, grasp_cells)):
            buckets.setdefault(key, []).append(gi)

        point_cells = _bucket_keys(cloud.points, distance_threshold)
        point_groups: dict[tuple, list[int]] = {}
        for pi, key in enumerate(map(tuple, point_cells)):
            point_groups.setdefault(key, []).append(pi)

        for key, pidx in point_groups.items():
            cand: list[int] = []
            for off in _STENCIL:
                cand.extend(buckets.get((key[0] + off[0], key[1] + off[1], key[2] + off[2]), ()))
            if not cand:
                continue
            cand.sort()
            diff = cloud.points[pidx][:, None, :] - centers[cand][None, :, :]
            dis = np.sqrt(np.einsum("pgi,pgi->pg", diff, diff))
            sigma = np.where(dis < distance_threshold, 1.0 - dis / distance_threshold, 0.0)
            values[pidx] += sigma.sum(axis=1)
    labels = (values > confidence_threshold).astype(np.int64)
    return ConfidenceField(values, labels, confidence_threshold, distance_threshold)


def segmentation_loss(scores: np.ndarray, labels: np.ndarray) -> float:
    """Mean two-class cross-entropy of predicted point scores.

    ``scores`` holds per-point probability pairs (negative, positive)
    summing to 1 within 1e-6; ``labels`` holds the true class per point.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if scores.ndim != 2 or scores.shape[1] != 2:
        raise DataError("scores must be an (N, 2) probability array")
    return cross_entropy(scores, labels) / len(scores)


def segment_positive(field, cloud: PointCloud | None = None) -> np.ndarray:
    """Indices of points considered graspable.

    Accepts either a ground-truth :class:`ConfidenceField` (positive
    label wins) or a predicted (N, 2) score array (positive column
    strictly greater; ties excluded). Ascending order.
    """
    if isinstance(field, ConfidenceField):
        if cloud is not None and len(field) != len(cloud):
            raise DataError("field and cloud sizes differ")
        mask = field.labels == 1
    else:
        scores = np.asarray(field, dtype=np.float64)
        if scores.ndim != 2 or scores.shape[1] != 2:
            raise DataError("expected a ConfidenceField or an (N, 2) score array")
        if cloud is not None and len(scores) != len(cloud):
            raise DataError("field and cloud sizes differ")
        mask = scores[:, 1] > scores[:, 0]
    return np.nonzero(mask)[0]
