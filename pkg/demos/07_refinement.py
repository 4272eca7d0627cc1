"""Refinement stage: closing-area points, refinability, labels, codec.

Proposals with enough points between the fingers are selected; each gets
a 0/1 label against its nearest ground-truth grasp and, when positive,
residuals that carry the proposal onto it. Run:

    python3 demos/07_refinement.py
"""

import numpy as np

from graspfield import (
    Grasp,
    GripperModel,
    box_cloud,
    build_positive_set,
    build_refinement_targets,
    closing_area,
    decode_refinement,
    nearest_center,
    refinement_label,
    select_refinable,
)


def main():
    obj = box_cloud()
    gripper = GripperModel()
    positives = build_positive_set(obj, gripper, per_object=30, seed=2)

    g = positives[0]
    indices, local = closing_area(obj, g, gripper)
    print(f"closing area of the first positive: {len(indices)} points between the fingers")
    print(f"local coordinate bounds: {np.abs(local).max(axis=0).round(4)}")
    print(f"closing box half extents: {gripper.closing_half_extents().round(4)}")

    # perturb the positives a little to play the role of network proposals
    rng = np.random.default_rng(7)
    proposals = [
        Grasp(p.center + rng.uniform(-0.004, 0.004, 3), p.orientation, p.angle)
        for p in positives
    ]
    keep = select_refinable(proposals, obj, gripper, min_points=50)
    print(f"\n{len(keep)} of {len(proposals)} proposals have more than 50 closing points")

    labels = [refinement_label(proposals[i], positives[i]) for i in keep]
    print(f"labels against their source grasps: {sum(labels)} positive of {len(labels)}")

    targets = build_refinement_targets(proposals, obj, positives, gripper, gripper.scale, 50)
    n_pos = sum(t.label for t in targets)
    print(f"build_refinement_targets: {len(targets)} targets, {n_pos} positive")

    t = next(t for t in targets if t.label == 1)
    proposal = proposals[t.proposal_index]
    refined = decode_refinement(proposal, t.res_center, t.res_orientation, t.res_angle, gripper.scale)
    gt = positives[nearest_center(positives, proposal.center)[0]]
    print("\ndecoding the first positive target:")
    print(f"  proposal center error before: {np.linalg.norm(proposal.center - gt.center):.2e} m")
    print(f"  refined  center error after:  {np.linalg.norm(refined.center - gt.center):.2e} m")


if __name__ == "__main__":
    main()
