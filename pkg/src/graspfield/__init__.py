"""Region-based grasp detection pipeline: geometry, physics scoring,
candidate sampling, confidence labeling, region extraction, target
codecs, and evaluation metrics for parallel-jaw grasping on point clouds.
"""

from .anchors import (
    PROPOSAL_WEIGHTS,
    AnchorSet,
    ProposalTarget,
    build_anchors,
    build_proposal_targets,
    decode_proposal,
    encode_proposal,
    nearest_anchor,
    proposal_loss,
)
from .confidence import (
    DEFAULT_CONFIDENCE_THRESHOLD,
    DEFAULT_DISTANCE_THRESHOLD,
    ConfidenceField,
    confidence_field,
    segment_positive,
    segmentation_loss,
)
from .config import Config, load_config
from .dataset import generate_dataset, ring_camera, subsample_cloud
from .errors import (
    ConfigError,
    DataError,
    GraspFieldError,
    GraspFieldWarning,
    UngraspableError,
    VerificationError,
)
from .fileio import (
    load_cloud,
    load_grasps,
    load_labels,
    load_pose,
    load_proposal_targets,
    load_refine_targets,
    save_cloud_binary,
    save_cloud_text,
    save_grasps,
    save_labels,
    save_pose,
    save_proposal_targets,
    save_refine_targets,
)
from .geometry import (
    Grasp,
    GraspFrame,
    GripperModel,
    PointCloud,
    RigidTransform,
    canonical_orientation,
    derive_seed,
    estimate_normals,
    from_grasp_frame,
    grasp_frame,
    nearest_center,
    points_in_box,
    to_grasp_frame,
    transform_grasp,
)
from .losses import cross_entropy, smooth_l1
from .metrics import (
    EvalReport,
    compare_reports,
    evaluate,
    load_report,
    save_report,
    summarize_scores,
)
from .quality import (
    DEFAULT_CONTACT_TOL,
    DEFAULT_MU,
    ContactPair,
    antipodal_score,
    collision_score,
    find_contacts,
    score_grasp,
)
from .refine import (
    REFINE_WEIGHTS,
    RefineTarget,
    build_refinement_targets,
    closing_area,
    decode_refinement,
    encode_refinement,
    refinement_label,
    refinement_loss,
    select_refinable,
)
from .region import GraspRegion, ball_query, extract_regions, farthest_point_sampling
from .sampling import OrthoCamera, build_positive_set, render_single_view, sample_candidates
from .synthetic import box_cloud, cylinder_cloud, plane_grid, sphere_cloud

__version__ = "0.1.0"

__all__ = [
    "AnchorSet",
    "Config",
    "ConfidenceField",
    "ConfigError",
    "ContactPair",
    "DataError",
    "DEFAULT_CONFIDENCE_THRESHOLD",
    "DEFAULT_CONTACT_TOL",
    "DEFAULT_DISTANCE_THRESHOLD",
    "DEFAULT_MU",
    "EvalReport",
    "Grasp",
    "GraspFieldError",
    "GraspFieldWarning",
    "GraspFrame",
    "GraspRegion",
    "GripperModel",
    "OrthoCamera",
    "PointCloud",
    "PROPOSAL_WEIGHTS",
    "ProposalTarget",
    "REFINE_WEIGHTS",
    "RefineTarget",
    "RigidTransform",
    "UngraspableError",
    "VerificationError",
    "antipodal_score",
    "ball_query",
    "box_cloud",
    "build_anchors",
    "build_positive_set",
    "build_proposal_targets",
    "build_refinement_targets",
    "canonical_orientation",
    "closing_area",
    "collision_score",
    "compare_reports",
    "confidence_field",
    "cross_entropy",
    "cylinder_cloud",
    "decode_proposal",
    "decode_refinement",
    "derive_seed",
    "encode_proposal",
    "encode_refinement",
    "estimate_normals",
    "evaluate",
    "extract_regions",
    "farthest_point_sampling",
    "find_contacts",
    "from_grasp_frame",
    "generate_dataset",
    "grasp_frame",
    "load_cloud",
    "load_config",
    "load_grasps",
    "load_labels",
    "load_pose",
    "load_proposal_targets",
    "load_refine_targets",
    "load_report",
    "nearest_anchor",
    "nearest_center",
    "plane_grid",
    "points_in_box",
    "proposal_loss",
    "refinement_label",
    "refinement_loss",
    "render_single_view",
    "ring_camera",
    "sample_candidates",
    "save_cloud_binary",
    "save_cloud_text",
    "save_grasps",
    "save_labels",
    "save_pose",
    "save_proposal_targets",
    "save_refine_targets",
    "save_report",
    "score_grasp",
    "segment_positive",
    "segmentation_loss",
    "select_refinable",
    "smooth_l1",
    "sphere_cloud",
    "subsample_cloud",
    "summarize_scores",
    "to_grasp_frame",
    "transform_grasp",
]
