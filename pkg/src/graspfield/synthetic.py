"""Synthetic object clouds with analytic normals.

Deterministic fixtures for demos and tests: no randomness, no mesh
assets. Normals are exact (face or radial), which keeps the physics
checks free of estimation noise.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DataError
from .geometry import PointCloud


def _face_grid(half_a: float, half_b: float, spacing: float) -> np.ndarray:
    """Cell-centered 2D grid covering [-half_a, half_a] x [-half_b, half_b]."""
    na = max(1, int(round(2.0 * half_a / spacing)))
    nb = max(1, int(round(2.0 * half_b / spacing)))
    a = (np.arange(na) + 0.5) / na * 2.0 * half_a - half_a
    b = (np.arange(nb) + 0.5) / nb * 2.0 * half_b - half_b
    aa, bb = np.meshgrid(a, b, indexing="ij")
    return np.column_stack((aa.ravel(), bb.ravel()))


def box_cloud(half_extents=(0.03, 0.025, 0.015), spacing: float = 0.002) -> PointCloud:
    """Axis-aligned box surface centered at the origin.

    Face samples are cell-centered, so no point lies on an edge and every
    normal is the exact face normal. Default size fits the default
    gripper opening from any side, and its thin dimension keeps grasp
    centers within the default confidence distance of the surface.
    """
    hx, hy, hz = (float(h) for h in half_extents)
    if min(hx, hy, hz) <= 0.0 or spacing <= 0.0:
        raise DataError("half_extents and spacing must be positive")
    pts, nrm = [], []
    for axis, (ha, hb, hc) in enumerate(((hy, hz, hx), (hx, hz, hy), (hx, hy, hz))):
        grid = _face_grid(ha, hb, spacing)
        for sign in (-1.0, 1.0):
            face = np.empty((len(grid), 3))
            others = [a for a in range(3) if a != axis]
            face[:, others[0]] = grid[:, 0]
            face[:, others[1]] = grid[:, 1]
            face[:, axis] = sign * hc
            normal = np.zeros((len(grid), 3))
            normal[:, axis] = sign
            pts.append(face)
            nrm.append(normal)
    return PointCloud(np.concatenate(pts), normals=np.concatenate(nrm))


def sphere_cloud(radius: float = 0.05, count: int = 2000) -> PointCloud:
    """Fibonacci-spiral sphere surface with exact radial normals."""
    if radius <= 0.0 or count < 1:
        raise DataError("radius and count must be positive")
    i = np.arange(count, dtype=np.float64)
    golden = math.pi * (3.0 - math.sqrt(5.0))
    z = 1.0 - (2.0 * i + 1.0) / count
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = golden * i
    normals = np.column_stack((rho * np.cos(phi), rho * np.sin(phi), z))
    return PointCloud(radius * normals, normals=normals)


def plane_grid(half_size: float = 0.1, spacing: float = 0.005, z: float = 0.0) -> PointCloud:
    """Horizontal square grid with +Z normals."""
    if half_size <= 0.0 or spacing <= 0.0:
        raise DataError("half_size and spacing must be positive")
    grid = _face_grid(half_size, half_size, spacing)
    pts = np.column_stack((grid[:, 0], grid[:, 1], np.full(len(grid), float(z))))
    normals = np.tile((0.0, 0.0, 1.0), (len(grid), 1))
    return PointCloud(pts, normals=normals)


def cylinder_cloud(radius: float = 0.025, height: float = 0.08, spacing: float = 0.003) -> PointCloud:
    """Open cylinder wall around Z with exact outward normals."""
    if radius <= 0.0 or height <= 0.0 or spacing <= 0.0:
        raise DataError("radius, height and spacing must be positive")
    n_around = max(3, int(round(2.0 * math.pi * radius / spacing)))
    n_up = max(1, int(round(height / spacing)))
    phi = 2.0 * math.pi * np.arange(n_around) / n_around
    z = (np.arange(n_up) + 0.5) / n_up * height - height / 2.0
    pp, zz = np.meshgrid(phi, z, indexing="ij")
    normals = np.column_stack((np.cos(pp.ravel()), np.sin(pp.ravel()), np.zeros(pp.size)))
    pts = normals * radius
    pts[:, 2] = zz.ravel()
    return PointCloud(pts, normals=normals)
