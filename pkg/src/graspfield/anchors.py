"""Anchor-based encoding of grasp proposals.

A small set of reference orientations (anchors) discretizes the sphere.
A ground-truth grasp at a region center is encoded as the nearest anchor's
index plus residuals: center offset in gripper-scale units, orientation
difference vector, and the approach angle itself (the anchors carry a zero
assigned angle). Decoding inverts the construction, so a proposal head
only has to classify the anchor and regress small corrections.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .confidence import DEFAULT_DISTANCE_THRESHOLD
from .errors import DataError, GraspFieldWarning
from .geometry import Grasp, PointCloud, canonical_orientation, nearest_center
from .losses import cross_entropy, smooth_l1
from .region import extract_regions

DEFAULT_ANCHOR_COUNT = 8
PROPOSAL_WEIGHTS = (0.2, 10.0, 5.0, 1.0)  # class, center, orientation, angle

_MIN_ANCHOR_ANGLE = math.radians(10.0)


@dataclass(frozen=True)
class AnchorSet:
    """Reference orientations; every anchor carries assigned angle 0."""

    orientations: np.ndarray
    assigned_angle: float = 0.0

    def __post_init__(self):
        ori = np.ascontiguousarray(self.orientations, dtype=np.float64)
        if ori.ndim != 2 or ori.shape[1] != 3 or ori.shape[0] < 2:
            raise DataError("orientations must be an (M, 3) array with M >= 2")
        norms = np.linalg.norm(ori, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise DataError("anchor orientations must be unit length")
        dots = np.clip(ori @ ori.T, -1.0, 1.0)
        np.fill_diagonal(dots, -1.0)
        if math.acos(float(dots.max())) <= _MIN_ANCHOR_ANGLE:
            raise DataError("anchor orientations must be pairwise distinct (> 10 deg apart)")
        ori.setflags(write=False)
        object.__setattr__(self, "orientations", ori)

    def __len__(self) -> int:
        return len(self.orientations)


def build_anchors(count: int = DEFAULT_ANCHOR_COUNT) -> AnchorSet:
    """Equiangular anchor construction.

    count=8 gives the normalized cube corners (every nearest-neighbor
    angle ~70.53 deg); count=6 gives the positive and negative world
    axes. No other count admits an equal-angle layout on the sphere.
    """
    if count == 8:
        corners = np.array(list(itertools.product((-1.0, 1.0), repeat=3)))
        return AnchorSet(corners / math.sqrt(3.0))
    if count == 6:
        return AnchorSet(np.concatenate((np.eye(3), -np.eye(3))))
    raise DataError("no equiangular construction")


def nearest_anchor(anchors: AnchorSet, orientation) -> int:
    """Index of the anchor at minimal angle to ``orientation`` (lowest
    index on ties). Invariant under positive rescaling of the input."""
    r = np.asarray(orientation, dtype=np.float64)
    n = np.linalg.norm(r)
    if n < 1e-12:
        raise DataError("cannot classify a zero-length orientation")
    return int(np.argmax(anchors.orientations @ (r / n)))


@dataclass(frozen=True)
class ProposalTarget:
    """Encoded regression target for one region center.

    center is the region's anchor point p_a in the cloud frame; residuals
    are relative to it and to the classified anchor orientation.
    """

    center: np.ndarray
    anchor_class: int
    res_center: np.ndarray
    res_orientation: np.ndarray
    res_angle: float

    def __post_init__(self):
        center = np.ascontiguousarray(self.center, dtype=np.float64)
        res_c = np.ascontiguousarray(self.res_center, dtype=np.float64)
        res_o = np.ascontiguousarray(self.res_orientation, dtype=np.float64)
        if center.shape != (3,) or res_c.shape != (3,) or res_o.shape != (3,):
            raise DataError("center and residual vectors must be 3-vectors")
        if not (np.all(np.isfinite(center)) and np.all(np.isfinite(res_c)) and np.all(np.isfinite(res_o))):
            raise DataError("target values must be finite")
        if self.anchor_class < 0:
            raise DataError("anchor_class must be a valid index")
        if np.linalg.norm(res_o) > 2.0 + 1e-9:
            raise DataError("orientation residual exceeds the unit-difference bound")
        if not -math.pi / 2 - 1e-12 <= self.res_angle <= math.pi / 2 + 1e-12:
            raise DataError("res_angle out of [-pi/2, pi/2]")
        for arr in (center, res_c, res_o):
            arr.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "res_center", res_c)
        object.__setattr__(self, "res_orientation", res_o)
        object.__setattr__(self, "anchor_class", int(self.anchor_class))
        object.__setattr__(self, "res_angle", float(self.res_angle))


def encode_proposal(center, gt: Grasp, anchors: AnchorSet, scale: float) -> ProposalTarget:
    """Encode a ground-truth grasp relative to a region center.

    The gt orientation is sign-canonicalized first (the fingertip line is
    headless); grasps produced by this package's sampler already are.
    """
    if scale <= 0.0:
        raise DataError("scale must be positive")
    center = np.asarray(center, dtype=np.float64)
    r = canonical_orientation(gt.orientation)
    cls = nearest_anchor(anchors, r)
    return ProposalTarget(
        center=center,
        anchor_class=cls,
        res_center=(gt.center - center) / scale,
        res_orientation=r - anchors.orientations[cls],
        res_angle=gt.angle,
    )


def decode_proposal(
    center,
    anchor_class: int,
    res_center,
    res_orientation,
    res_angle: float,
    anchors: AnchorSet,
    scale: float,
) -> Grasp:
    """Invert :func:`encode_proposal` for a target or a raw prediction.

    Out-of-range angles are clamped to [-pi/2, pi/2] with a warning;
    a residual that cancels the anchor is rejected.
    """
    if scale <= 0.0:
        raise DataError("scale must be positive")
    if not 0 <= anchor_class < len(anchors):
        raise DataError("anchor_class must be a valid index")
    center = np.asarray(center, dtype=np.float64)
    p = np.asarray(res_center, dtype=np.float64) * scale + center
    v = np.asarray(res_orientation, dtype=np.float64) + anchors.orientations[anchor_class]
    norm = np.linalg.norm(v)
    if norm < 1e-9:
        raise DataError("degenerate orientation")
    angle = float(res_angle)
    if abs(angle) > math.pi / 2:
        warnings.warn("approach angle clamped to [-pi/2, pi/2]", GraspFieldWarning, stacklevel=2)
        angle = math.copysign(math.pi / 2, angle)
    return Grasp(p, v / norm, angle)


def build_proposal_targets(
    cloud: PointCloud,
    field,
    positives: list[Grasp],
    anchors: AnchorSet,
    scale: float,
    k1: int,
    radius: float,
    size: int,
    seed: int,
    match_distance: float = DEFAULT_DISTANCE_THRESHOLD,
) -> list[tuple[int, ProposalTarget]]:
    """Region extraction plus target encoding for one labeled cloud.

    Each region center is matched to the nearest positive grasp center;
    the match must lie strictly within ``match_distance`` (points labeled
    from these grasps always satisfy that) or the region is dropped.
    Returns (point index, target) pairs in region order.
    """
    if not positives:
        raise DataError("no positive grasps")
    regions = extract_regions(cloud, field, k1, radius, size, seed)
    out: list[tuple[int, ProposalTarget]] = []
    for reg in regions:
        p_a = cloud.points[reg.center_index]
        gi, dist = nearest_center(positives, p_a)
        if dist >= match_distance:
            continue  # labels did not come from these grasps; nothing to regress
        out.append((reg.center_index, encode_proposal(p_a, positives[gi], anchors, scale)))
    return out


def proposal_loss(
    class_probs,
    res_center_pred,
    res_orientation_pred,
    res_angle_pred,
    targets: list[ProposalTarget],
    weights=PROPOSAL_WEIGHTS,
) -> dict[str, float]:
    """Weighted proposal loss over the encoded region targets.

    Sum of the anchor-classification cross-entropy and elementwise smooth
    L1 over the three residual groups, each weighted then normalized by
    the target count. Returns the total and the per-term breakdown.
    """
    n = len(targets)
    if n == 0:
        raise DataError("no targets")
    w_cls, w_center, w_orient, w_angle = (float(w) for w in weights)
    probs = np.asarray(class_probs, dtype=np.float64)
    classes = np.array([t.anchor_class for t in targets], dtype=np.int64)
    ce = cross_entropy(probs, classes)

    def _gap(pred, truth, name):
        pred = np.asarray(pred, dtype=np.float64)
        truth = np.asarray(truth, dtype=np.float64)
        if pred.shape != truth.shape:
            raise DataError(f"{name} predictions must have shape {truth.shape}")
        return float(smooth_l1(pred - truth).sum())

    center_gap = _gap(res_center_pred, np.stack([t.res_center for t in targets]), "center")
    orient_gap = _gap(res_orientation_pred, np.stack([t.res_orientation for t in targets]), "orientation")
    angle_gap = _gap(res_angle_pred, np.array([t.res_angle for t in targets]), "angle")

    parts = {
        "classification": w_cls * ce / n,
        "center": w_center * center_gap / n,
        "orientation": w_orient * orient_gap / n,
        "angle": w_angle * angle_gap / n,
    }
    parts["total"] = sum(parts.values())
    return parts
