"""Grasp region extraction: farthest point sampling plus ball query.

Region centers spread over the positively labeled points; each region
gathers a fixed-size neighborhood for downstream regression. Run:

    python3 demos/05_grasp_regions.py
"""

import numpy as np

from graspfield import (
    GripperModel,
    box_cloud,
    build_positive_set,
    confidence_field,
    extract_regions,
)


def main():
    obj = box_cloud()
    gripper = GripperModel()
    positives = build_positive_set(obj, gripper, per_object=100, seed=1)
    field = confidence_field(obj, positives, 0.02, 0.6)
    print(f"{int(field.labels.sum())} positive points of {len(obj)}")

    radius = gripper.region_radius
    regions = extract_regions(obj, field, k1=16, radius=radius, size=64, seed=0)
    print(f"extracted {len(regions)} regions, radius {radius} m, 64 points each")

    centers = np.stack([obj.points[r.center_index] for r in regions])
    spacing = []
    for i, c in enumerate(centers):
        others = np.delete(centers, i, axis=0)
        spacing.append(np.linalg.norm(others - c, axis=1).min())
    print(f"nearest-neighbor spacing between centers: min {min(spacing):.4f} m")

    r0 = regions[0]
    member_pts = obj.points[r0.member_indices]
    dist = np.linalg.norm(member_pts - obj.points[r0.center_index], axis=1)
    print("\nfirst region:")
    print(f"  center index {r0.center_index}, members {len(r0.member_indices)}")
    print(f"  all members within the radius: {bool((dist <= radius).all())}")
    distinct = len(set(r0.member_indices.tolist()))
    print(f"  distinct members {distinct} (smaller than 64 would mean padding by repetition)")

    # centers are chosen greedily: the first k of a larger extraction match
    more = extract_regions(obj, field, k1=32, radius=radius, size=64, seed=0)
    prefix = all(a.center_index == b.center_index for a, b in zip(regions, more))
    print(f"\nFPS prefix property (16 centers are the first of 32): {prefix}")


if __name__ == "__main__":
    main()
