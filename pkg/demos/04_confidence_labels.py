"""Point grasp confidence: accumulated closeness to positive grasp centers.

Each point collects sum(1 - d/d_th) over grasp centers within d_th;
points above the confidence threshold are labeled positive. Run:

    python3 demos/04_confidence_labels.py
"""

import numpy as np

from graspfield import (
    GripperModel,
    box_cloud,
    build_positive_set,
    confidence_field,
    segmentation_loss,
)


def main():
    obj = box_cloud()
    positives = build_positive_set(obj, GripperModel(), per_object=30, seed=1)
    field = confidence_field(obj, positives, 0.02, 0.6)

    values = field.values
    print(f"{len(obj)} points, {len(positives)} positive grasps")
    print(f"confidence range: [{values.min():.3f}, {values.max():.3f}]")
    print(f"confidence quartiles: {np.percentile(values, [25, 50, 75]).round(3)}")
    n_pos = int(field.labels.sum())
    print(f"positive points (confidence > 0.6): {n_pos} ({100.0 * n_pos / len(obj):.1f}%)")

    # a stricter threshold shrinks the positive set monotonically
    for ct in (0.6, 1.5, 3.0):
        strict = confidence_field(obj, positives, 0.02, ct)
        print(f"  threshold {ct}: {int(strict.labels.sum())} positive points")

    # the segmentation loss drives a 2-class point classifier toward labels
    labels = field.labels
    perfect = np.column_stack([1.0 - labels, labels]).astype(float)
    uniform = np.full((len(obj), 2), 0.5)
    print(f"\nsegmentation loss, perfect predictions: {segmentation_loss(perfect, labels):.4f}")
    print(f"segmentation loss, uniform predictions: {segmentation_loss(uniform, labels):.4f} (= ln 2)")


if __name__ == "__main__":
    main()
