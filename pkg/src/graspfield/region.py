"""Grasp-region selection: farthest point sampling over the positive
points, then a fixed-size ball query around each sampled center.

Regions have exactly ``size`` members so downstream consumers get
fixed-dimensional input; sparse neighborhoods are padded by resampling
with replacement, dense ones subsampled without replacement. The center
point itself is always a member.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .confidence import ConfidenceField, segment_positive
from .errors import DataError
from .geometry import PointCloud, derive_seed


@dataclass(frozen=True)
class GraspRegion:
    """A sampled center point plus exactly ``len(member_indices)``
    neighbors within ``radius`` of it (duplicates mark padding)."""

    center_index: int
    member_indices: np.ndarray
    radius: float

    def __post_init__(self):
        members = np.ascontiguousarray(self.member_indices, dtype=np.int64)
        if members.ndim != 1 or members.size == 0:
            raise DataError("member_indices must be a non-empty 1-d array")
        if self.radius <= 0.0:
            raise DataError("radius must be positive")
        if self.center_index not in members:
            raise DataError("center must be a region member")
        members.setflags(write=False)
        object.__setattr__(self, "member_indices", members)
        object.__setattr__(self, "center_index", int(self.center_index))

    def __len__(self) -> int:
        return len(self.member_indices)


def farthest_point_sampling(cloud: PointCloud, subset, k: int, seed) -> np.ndarray:
    """Greedy max-min selection of k indices from ``subset``.

    Starts at a seeded random subset element, then repeatedly adds the
    subset point whose distance to the nearest chosen point is largest
    (ties to the lowest index). When k >= |subset| every subset index is
    returned, still in greedy order, so any prefix of the result equals
    a smaller-k run with the same seed.
    """
    subset = np.unique(np.asarray(subset, dtype=np.int64))
    if subset.size == 0:
        raise DataError("no positive points")
    if np.any(subset < 0) or np.any(subset >= len(cloud)):
        raise DataError("subset index out of range")
    if k < 1:
        raise DataError("k must be >= 1")
    rng = np.random.default_rng(seed)
    pts = cloud.points[subset]
    k = min(k, subset.size)

    chosen = [int(rng.integers(subset.size))]
    best = np.linalg.norm(pts - pts[chosen[0]], axis=1)
    for _ in range(k - 1):
        best[chosen] = -1.0  # never re-pick
        nxt = int(np.argmax(best))  # argmax takes the lowest index on ties
        chosen.append(nxt)
        best = np.minimum(best, np.linalg.norm(pts - pts[nxt], axis=1))
    return subset[chosen]


def ball_query(cloud: PointCloud, center_index: int, radius: float, size: int, seed) -> GraspRegion:
    """Fixed-size neighborhood of a center point.

    Gathers every index within ``radius`` (inclusive) of the center,
    then subsamples without replacement down to ``size`` (center kept)
    or pads with replacement up to it. Members are sorted ascending.
    """
    if radius <= 0.0:
        raise DataError("radius must be positive")
    if size < 1:
        raise DataError("size must be >= 1")
    center_index = int(center_index)
    if not 0 <= center_index < len(cloud):
        raise DataError("center_index out of range")
    dist = np.linalg.norm(cloud.points - cloud.points[center_index], axis=1)
    inside = np.nonzero(dist <= radius)[0]

    rng = np.random.default_rng(seed)
    if inside.size > size:
        others = inside[inside != center_index]
        pick = rng.choice(others, size=size - 1, replace=False) if size > 1 else np.empty(0, np.int64)
        members = np.concatenate(([center_index], pick))
    elif inside.size < size:
        pad = rng.choice(inside, size=size - inside.size, replace=True)
        members = np.concatenate((inside, pad))
    else:
        members = inside
    return GraspRegion(center_index, np.sort(members), radius)


def extract_regions(
    cloud: PointCloud,
    field,
    k1: int,
    radius: float,
    size: int,
    seed: int,
) -> list[GraspRegion]:
    """Pick min(k1, positives) region centers by farthest point sampling
    and ball-query each one.

    ``field`` is a ground-truth :class:`ConfidenceField` or a predicted
    (N, 2) score array; see :func:`segment_positive`. Per-center query
    seeds derive from (seed, center index), so the result is independent
    of evaluation order.
    """
    positives = segment_positive(field, cloud)
    if positives.size == 0:
        raise DataError("no positive points")
    centers = farthest_point_sampling(cloud, positives, k1, derive_seed(seed, 0))
    return [
        ball_query(cloud, c, radius, size, derive_seed(seed, 1, int(c)))
        for c in centers
    ]
