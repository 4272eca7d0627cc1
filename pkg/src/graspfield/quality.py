"""Physics-based grasp quality: the binary antipodal (force-closure) score,
the binary collision score, and their combination.

Both tests work directly on point clouds (no meshes). A grasp collides iff
some object point lies strictly inside one of the gripper solids; the open
region between the fingers is never a collision. The antipodal test checks
that both contact forces lie inside their friction cones, folding the
surface-normal sign so that raw estimated normals with ambiguous
orientation score the same either way. Grasps whose jaws sweep no object
points simply get antipodal score 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .geometry import Grasp, GraspFrame, GripperModel, PointCloud, grasp_frame

DEFAULT_MU = 0.6
DEFAULT_CONTACT_TOL = 0.005

_UNIT_TOL = 1e-6


@dataclass(frozen=True)
class ContactPair:
    """Two opposing contacts: positions, surface normals, and unit force
    directions along the closing line pointing into the object."""

    point_a: np.ndarray
    point_b: np.ndarray
    normal_a: np.ndarray
    normal_b: np.ndarray
    force_a: np.ndarray
    force_b: np.ndarray

    def __post_init__(self):
        for name in ("point_a", "point_b", "normal_a", "normal_b", "force_a", "force_b"):
            v = np.array(getattr(self, name), dtype=np.float64, copy=True)
            if v.shape != (3,) or not np.isfinite(v).all():
                raise DataError(f"{name} must be a finite 3-vector")
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        for name in ("normal_a", "normal_b", "force_a", "force_b"):
            if abs(np.linalg.norm(getattr(self, name)) - 1.0) > _UNIT_TOL:
                raise DataError(f"{name} must be unit length")
        if np.array_equal(self.point_a, self.point_b):
            raise DataError("contact points must be distinct")


def _local_coords(cloud: PointCloud, frame: GraspFrame) -> np.ndarray:
    return (cloud.points - frame.origin) @ frame.rotation


def find_contacts(
    obj: PointCloud,
    g: Grasp,
    gripper: GripperModel,
    tol: float = DEFAULT_CONTACT_TOL,
) -> ContactPair | None:
    """Close the jaws along the grasp Y axis and report the first-touch
    contact on each side, or None when either jaw sweeps empty space.

    The sweep volume of each finger is half of the closing box, with its
    X/Z cross-section inflated by ``tol`` to absorb sensor discreteness.
    The contact on each side is the point the finger reaches first, i.e.
    the one with extreme Y coordinate.
    """
    if obj.normals is None:
        raise DataError("normals required to extract contacts")
    frame = grasp_frame(g)
    local = _local_coords(obj, frame)
    hx = gripper.finger_length / 2.0 + tol
    hz = gripper.finger_height / 2.0 + tol
    hw = gripper.max_opening / 2.0
    in_section = (np.abs(local[:, 0]) <= hx) & (np.abs(local[:, 2]) <= hz)
    y = local[:, 1]
    side_a = np.nonzero(in_section & (y >= 0.0) & (y <= hw))[0]
    side_b = np.nonzero(in_section & (y <= 0.0) & (y >= -hw))[0]
    if side_a.size == 0 or side_b.size == 0:
        return None
    ia = side_a[np.argmax(y[side_a])]
    ib = side_b[np.argmin(y[side_b])]
    if ia == ib:
        return None
    return ContactPair(
        obj.points[ia],
        obj.points[ib],
        obj.normals[ia],
        obj.normals[ib],
        -frame.y_axis,
        frame.y_axis,
    )


def antipodal_score(contacts: ContactPair, mu: float = DEFAULT_MU) -> int:
    """1 iff both contact forces lie inside their friction cones.

    The cone half-angle is arctan(mu); the contact angle alpha between the
    surface normal and the force direction is folded into [0, pi/2] so the
    test is insensitive to the normal's sign.
    """
    if mu <= 0.0:
        raise DataError("mu must be positive")
    beta = math.atan(mu)
    for n, f in ((contacts.normal_a, contacts.force_a), (contacts.normal_b, contacts.force_b)):
        cos_alpha = min(abs(float(np.dot(n, f))), 1.0)
        if math.acos(cos_alpha) > beta:
            return 0
    return 1


def collision_score(obj: PointCloud, g: Grasp, gripper: GripperModel) -> int:
    """1 iff no object point lies strictly inside any gripper solid (the
    two open fingers and the base) placed at the grasp pose."""
    if len(obj) == 0:
        return 1
    local = _local_coords(obj, grasp_frame(g))
    for lo, hi in gripper.collision_boxes():
        inside = ((local > lo) & (local < hi)).all(axis=1)
        if inside.any():
            return 0
    return 1


def score_grasp(
    obj: PointCloud,
    g: Grasp,
    gripper: GripperModel,
    mu: float = DEFAULT_MU,
    tol: float = DEFAULT_CONTACT_TOL,
) -> Grasp:
    """Attach (antipodal, collision, combined) scores to a grasp.

    The combined score is min of the two components; unreachable grasps
    (no contacts) get antipodal score 0 rather than an error.
    """
    contacts = find_contacts(obj, g, gripper, tol=tol)
    sa = 0 if contacts is None else antipodal_score(contacts, mu)
    sc = collision_score(obj, g, gripper)
    return g.with_scores(sa, sc)
