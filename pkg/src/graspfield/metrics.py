"""Grasp-set evaluation ratios.

Predicted grasps are transformed into the object frame and re-scored by
the physics checks; the report counts how many pass the antipodal test,
the collision test, and both. Ratios derive from the counts, so they can
be re-computed exactly from any stored report.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .geometry import Grasp, GripperModel, PointCloud, RigidTransform, transform_grasp
from .quality import DEFAULT_CONTACT_TOL, DEFAULT_MU, score_grasp

REPORT_HEADER = "k3,kT,kT_a,kT_c,vgr,vagr,vcgr"
SCORE_HEADER = "index,sa,sc,sg"


@dataclass(frozen=True)
class EvalReport:
    """Per-grasp scores plus the derived pass counts.

    scores is a (k3, 3) 0/1 table with columns (antipodal, collision,
    combined); the combined column must equal the minimum of the other
    two, which is what makes vgr <= min(vagr, vcgr) structural.
    """

    scores: np.ndarray

    def __post_init__(self):
        scores = np.ascontiguousarray(self.scores, dtype=np.int64)
        if scores.ndim != 2 or scores.shape[1] != 3 or scores.shape[0] == 0:
            raise DataError("scores must be a non-empty (k3, 3) table")
        if not np.all((scores == 0) | (scores == 1)):
            raise DataError("scores must be 0 or 1")
        if not np.array_equal(scores[:, 2], np.minimum(scores[:, 0], scores[:, 1])):
            raise DataError("combined score must equal min(antipodal, collision)")
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)

    @property
    def k3(self) -> int:
        return len(self.scores)

    @property
    def kT_a(self) -> int:
        return int(self.scores[:, 0].sum())

    @property
    def kT_c(self) -> int:
        return int(self.scores[:, 1].sum())

    @property
    def kT(self) -> int:
        return int(self.scores[:, 2].sum())

    @property
    def vagr(self) -> float:
        return self.kT_a / self.k3

    @property
    def vcgr(self) -> float:
        return self.kT_c / self.k3

    @property
    def vgr(self) -> float:
        return self.kT / self.k3


def summarize_scores(scores) -> EvalReport:
    """Build a report from a per-grasp (antipodal, collision, combined)
    score table."""
    return EvalReport(np.asarray(scores))


def evaluate(
    predicted: list[Grasp],
    object_pose: RigidTransform,
    obj: PointCloud,
    gripper: GripperModel,
    mu: float = DEFAULT_MU,
    tol: float = DEFAULT_CONTACT_TOL,
) -> EvalReport:
    """Score a predicted grasp set against an object model.

    ``object_pose`` maps world coordinates into the object frame; every
    grasp is transformed by it and re-scored against the object cloud
    (which must carry normals).
    """
    if not predicted:
        raise DataError("no grasps to evaluate")
    rows = []
    for g in predicted:
        scored = score_grasp(obj, transform_grasp(g, object_pose), gripper, mu=mu, tol=tol)
        rows.append((scored.score_antipodal, scored.score_collision, scored.score))
    return summarize_scores(rows)


def compare_reports(named_reports: list[tuple[str, EvalReport]]) -> str:
    """Aligned comparison table, best VGR first (ties by name).

    Ratios print with 4 decimals; the counts that produced them are
    included so rows can be re-derived exactly.
    """
    if not named_reports:
        raise DataError("no reports to compare")
    rows = sorted(named_reports, key=lambda nr: (-nr[1].vgr, nr[0]))
    header = ("name", "k3", "kT", "kT_a", "kT_c", "vgr", "vagr", "vcgr")
    table = [header]
    for name, rep in rows:
        table.append(
            (
                str(name),
                str(rep.k3),
                str(rep.kT),
                str(rep.kT_a),
                str(rep.kT_c),
                f"{rep.vgr:.4f}",
                f"{rep.vagr:.4f}",
                f"{rep.vcgr:.4f}",
            )
        )
    widths = [max(len(row[c]) for row in table) for c in range(len(header))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table)


def save_report(path, report: EvalReport) -> None:
    """Report file: a summary row (counts + 4-decimal ratios) followed by
    the per-grasp score table."""
    path = Path(path)
    lines = [REPORT_HEADER]
    lines.append(
        f"{report.k3},{report.kT},{report.kT_a},{report.kT_c},"
        f"{report.vgr:.4f},{report.vagr:.4f},{report.vcgr:.4f}"
    )
    lines.append(SCORE_HEADER)
    for i, (sa, sc, sg) in enumerate(report.scores):
        lines.append(f"{i},{sa},{sc},{sg}")
    path.write_text("\n".join(lines) + "\n")


def load_report(path) -> EvalReport:
    """Rebuild a report from its per-grasp table, cross-checking the
    stored counts."""
    path = Path(path)
    lines = [ln.strip() for ln in path.read_text().splitlines() if ln.strip()]
    if len(lines) < 4 or lines[0] != REPORT_HEADER or lines[2] != SCORE_HEADER:
        raise DataError(f"{path}: malformed report file")
    counts = lines[1].split(",")
    scores = []
    for ln in lines[3:]:
        parts = ln.split(",")
        if len(parts) != 4:
            raise DataError(f"{path}: malformed score row '{ln}'")
        scores.append([int(parts[1]), int(parts[2]), int(parts[3])])
    report = summarize_scores(scores)
    stored = (int(counts[0]), int(counts[1]), int(counts[2]), int(counts[3]))
    if stored != (report.k3, report.kT, report.kT_a, report.kT_c):
        raise DataError(f"{path}: stored counts disagree with the score table")
    return report
