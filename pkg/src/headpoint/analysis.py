"""Fitts-law evaluation with the standard-deviation method.

Selection coordinates are projected onto the axis between consecutive
target centers; the effective width is 4.133 times the sample standard
deviation of those projections, the effective index of difficulty is
log2(A/W_e + 1), and throughput is ID_e over the mean movement time in
seconds. Also provides box-plot summary statistics and the covariance
eigenvector analysis of selection point clouds.
"""

from __future__ import annotations

import logging
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .trials import TrialRecord

log = logging.getLogger(__name__)

WE_COEFF = 4.133  # effective width multiplier on the projection std dev


class AnalysisError(ValueError):
    pass


def project_onto_axis(prev_center, target_center, point) -> float:
    """Signed projection of (point - target_center) onto the trial axis.

    The axis is the unit vector from prev_center to target_center; positive
    values overshoot the target along the movement direction.
    """
    ax = target_center[0] - prev_center[0]
    ay = target_center[1] - prev_center[1]
    norm = math.hypot(ax, ay)
    if norm == 0.0:
        raise AnalysisError("degenerate trial axis: zero amplitude")
    return ((point[0] - target_center[0]) * ax + (point[1] - target_center[1]) * ay) / norm


def effective_width(projections) -> tuple:
    """(S_x, W_e) from at least two axis projections; n-1 denominator."""
    arr = np.asarray(list(projections), dtype=float)
    if arr.size < 2:
        raise AnalysisError("effective width needs at least 2 projections")
    s_x = float(np.std(arr, ddof=1))
    return s_x, WE_COEFF * s_x


def effective_id(a_mean: float, w_e: float) -> float:
    """ID_e = log2(A/W_e + 1), in bits."""
    if w_e <= 0.0:
        raise AnalysisError("W_e must be positive (inject noise for synthetic data)")
    if a_mean < 0.0:
        raise AnalysisError("amplitude must be non-negative")
    return math.log2(a_mean / w_e + 1.0)


def throughput(id_e: float, mt_mean_s: float) -> float:
    """TP = ID_e / MT, bits per second."""
    if mt_mean_s <= 0.0:
        raise AnalysisError("movement time must be positive")
    return id_e / mt_mean_s


@dataclass(frozen=True)
class SequenceStats:
    n_trials: int
    s_x: float        # pt
    w_e: float        # pt
    a_mean: float     # pt
    id_e: float       # bits
    mt_mean_s: float  # seconds
    tp: float         # bits/second


def _stats_for_group(records) -> SequenceStats:
    projections = [
        project_onto_axis(r.prev_center, r.target_center, r.selection_point)
        for r in records
    ]
    s_x, w_e = effective_width(projections)
    a_mean = float(np.mean([r.amplitude_a for r in records]))
    mt_mean_s = float(np.mean([r.movement_time_ms for r in records])) / 1000.0
    id_e = effective_id(a_mean, w_e)
    return SequenceStats(
        n_trials=len(records), s_x=s_x, w_e=w_e, a_mean=a_mean,
        id_e=id_e, mt_mean_s=mt_mean_s, tp=throughput(id_e, mt_mean_s),
    )


def sequence_stats(groups, grouping: str = "per-motion-sequence") -> list:
    """Fitts quantities per trial group.

    groups is an iterable of TrialRecord lists, one per motion sequence
    (one full test run by one participant at one distance). With
    grouping="whole-test" all records are pooled into a single group.
    Groups with fewer than 2 trials are skipped with a diagnostic.
    """
    groups = [list(g) for g in groups]
    if grouping == "whole-test":
        groups = [[r for g in groups for r in g]]
    elif grouping != "per-motion-sequence":
        raise AnalysisError(f"unknown grouping {grouping!r}")
    out = []
    for i, g in enumerate(groups):
        if len(g) < 2:
            log.warning("skipping group %d: only %d trial(s)", i, len(g))
            continue
        out.append(_stats_for_group(g))
    return out


@dataclass(frozen=True)
class BoxStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float


def box_stats(values) -> BoxStats:
    """Box/whisker summary: quartiles by linear interpolation (inclusive
    median method), whiskers at the sample min/max."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        raise AnalysisError("box_stats needs a non-empty sample")
    q1, med, q3 = np.percentile(arr, [25.0, 50.0, 75.0])
    return BoxStats(
        min=float(arr.min()), q1=float(q1), median=float(med),
        q3=float(q3), max=float(arr.max()), mean=float(arr.mean()),
    )


@dataclass(frozen=True)
class EigenStats:
    mean: tuple          # (x, y)
    cov: tuple           # (cxx, cxy, cyy)
    eigenvalues: tuple   # descending
    eigenvectors: tuple  # ((v1x, v1y), (v2x, v2y)), unit length


def _fix_sign(vx, vy):
    if vx < 0.0 or (vx == 0.0 and vy < 0.0):
        return -vx, -vy
    return vx, vy


def covariance_eigen(points) -> EigenStats:
    """Sample covariance (n-1) of 2D points and its closed-form eigenpairs.

    Eigenvalues descend; eigenvectors are unit length with the x component
    made non-negative (tiebreak: non-negative y).
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise AnalysisError("covariance_eigen needs at least 2 two-dimensional points")
    mean = pts.mean(axis=0)
    centered = pts - mean
    n = pts.shape[0]
    cxx = float(centered[:, 0] @ centered[:, 0]) / (n - 1)
    cyy = float(centered[:, 1] @ centered[:, 1]) / (n - 1)
    cxy = float(centered[:, 0] @ centered[:, 1]) / (n - 1)

    half_tr = (cxx + cyy) / 2.0
    disc = math.hypot((cxx - cyy) / 2.0, cxy)
    l1, l2 = half_tr + disc, half_tr - disc

    if cxy != 0.0:
        v1 = (l1 - cyy, cxy)
        norm = math.hypot(*v1)
        v1 = (v1[0] / norm, v1[1] / norm)
    elif cxx >= cyy:
        v1 = (1.0, 0.0)
    else:
        v1 = (0.0, 1.0)
    v1 = _fix_sign(*v1)
    v2 = _fix_sign(-v1[1], v1[0])
    return EigenStats(
        mean=(float(mean[0]), float(mean[1])),
        cov=(cxx, cxy, cyy),
        eigenvalues=(l1, l2),
        eigenvectors=(v1, v2),
    )


# ---------------------------------------------------------------------------
# CSV output (fixed formatting for byte-stable golden files)
# ---------------------------------------------------------------------------

TRIALS_HEADER = "participant,distance,layout,trial_index,target,amplitude_pt,mt_ms,sel_x,sel_y,proj_pt"
SEQUENCES_HEADER = "participant,distance,layout,n_trials,Sx_pt,We_pt,A_mean_pt,IDe_bits,MT_s,TP_bps"
EIGEN_HEADER = "layout,target,mean_x,mean_y,cov_xx,cov_xy,cov_yy,eig1,eig2,v1x,v1y"
BOXES_HEADER = "layout,distance,metric,min,q1,median,q3,max,mean"


def fmt(x) -> str:
    """Real numbers with 6 significant digits (round-half-even)."""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


def write_csv(path, header: str, rows):
    """Comma-separated, UTF-8, LF line endings; atomic replace on close."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(header + "\n")
            for row in rows:
                f.write(",".join(fmt(v) for v in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
