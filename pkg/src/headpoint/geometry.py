"""Virtual-stylus pointer geometry.

A tracked head is described by a 4x4 world transform. A ray is spawned at
the transformed head center along the transformed stylus direction
(initially -z), intersected with the screen plane at z=0, and the
intersection is mapped through NDC to screen points. The inverse mapping
(screen point -> head pose) drives the synthetic generator and round-trip
tests.

The core math is written elementwise so the same code path handles a single
pose and a batch of poses (shape (n, 4, 4)); replaying a stored trace and
streaming poses one at a time therefore produce bit-identical cursors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

AFFINE_TOL = 1e-9       # bottom row must be (0,0,0,1) within this
ROTATION_TOL = 1e-6     # orthonormality / determinant tolerance
RAY_EPS = 1e-9          # |d.z| below this means no usable intersection


class PoseError(ValueError):
    """Raised when a world transform violates the pose invariants."""


def validate_transforms(w: np.ndarray) -> None:
    """Check pose invariants for one transform (4,4) or a batch (n,4,4).

    Bottom row must equal (0,0,0,1) within AFFINE_TOL and the upper-left
    3x3 block must be a proper rotation within ROTATION_TOL. Raises
    PoseError identifying the first offending frame.
    """
    w = np.asarray(w, dtype=float)
    batched = w.ndim == 3
    if not batched:
        w = w[None]
    if w.shape[1:] != (4, 4):
        raise PoseError(f"expected 4x4 transform(s), got shape {w.shape}")
    if not np.isfinite(w).all():
        bad = int(np.argwhere(~np.isfinite(w).reshape(len(w), -1).all(axis=1))[0, 0])
        raise PoseError(f"non-finite matrix entry in frame {bad}")

    expect = np.array([0.0, 0.0, 0.0, 1.0])
    err = np.abs(w[:, 3, :] - expect).max(axis=1)
    if (err > AFFINE_TOL).any():
        bad = int(np.argmax(err > AFFINE_TOL))
        raise PoseError(f"frame {bad}: bottom row is not (0,0,0,1) (err={err[bad]:.3g})")

    r = w[:, :3, :3]
    gram = r @ r.transpose(0, 2, 1)
    ortho_err = np.abs(gram - np.eye(3)).reshape(len(w), -1).max(axis=1)
    det = np.linalg.det(r)
    bad_mask = (ortho_err > ROTATION_TOL) | (np.abs(det - 1.0) > ROTATION_TOL)
    if bad_mask.any():
        bad = int(np.argmax(bad_mask))
        raise PoseError(
            f"frame {bad}: rotation block not orthonormal with det +1 "
            f"(ortho err={ortho_err[bad]:.3g}, det={det[bad]:.9f})"
        )


@dataclass(frozen=True)
class Pose:
    """Timestamped head transform. t in milliseconds, w a 4x4 world matrix."""

    t: float
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        validate_transforms(w)
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class HeadModel:
    """Initial head center (homogeneous) and stylus direction in object space."""

    p0: tuple = (0.0, 0.0, 0.0, 1.0)
    d0: tuple = (0.0, 0.0, -1.0)

    def __post_init__(self):
        if len(self.p0) != 4 or self.p0[3] != 1.0:
            raise ValueError("p0 must be homogeneous with w=1")
        if len(self.d0) != 3:
            raise ValueError("d0 must be a 3-vector")


@dataclass(frozen=True)
class ScreenGeometry:
    """Screen plane at z=0; NDC (0,0) at the top-left corner.

    meters_per_ndc_* give the physical extent of the plane region mapped to
    NDC [0,1]^2; they act as the pointing sensitivity gain.
    """

    width_pt: float = 375.0
    height_pt: float = 812.0
    meters_per_ndc_x: float = 0.3
    meters_per_ndc_y: float = 0.3 * 812.0 / 375.0

    def __post_init__(self):
        if self.width_pt <= 0 or self.height_pt <= 0:
            raise ValueError("screen size must be positive")
        if self.meters_per_ndc_x <= 0 or self.meters_per_ndc_y <= 0:
            raise ValueError("meters_per_ndc must be positive")

    @property
    def center(self) -> tuple:
        return (self.width_pt / 2.0, self.height_pt / 2.0)


DEFAULT_SCREEN = ScreenGeometry()


@dataclass(frozen=True)
class ScreenPoint:
    x: float
    y: float
    in_bounds: bool = True


class SmoothingFilter:
    """Optional per-axis exponential moving average. alpha=1 is pass-through."""

    def __init__(self, alpha: float = 1.0):
        if not (0.0 < alpha <= 1.0):
            raise ValueError("alpha must be in (0, 1]")
        self.alpha = alpha
        self.state: ScreenPoint | None = None

    def smooth(self, point: ScreenPoint) -> ScreenPoint:
        if self.state is None:
            out = point
        else:
            a = self.alpha
            out = ScreenPoint(
                a * point.x + (1.0 - a) * self.state.x,
                a * point.y + (1.0 - a) * self.state.y,
                point.in_bounds,
            )
        self.state = out
        return out

    def reset(self):
        self.state = None


# ---------------------------------------------------------------------------
# elementwise core (scalar or batch)
# ---------------------------------------------------------------------------

def transform_rays(w: np.ndarray, head: HeadModel):
    """Transform head origin and stylus direction by (..., 4, 4) matrices.

    The origin gets the full affine transform; the direction only the 3x3
    linear block (directions are never translated).
    Returns ((px,py,pz), (dx,dy,dz)) component arrays.
    """
    p0x, p0y, p0z, p0w = (float(v) for v in head.p0)
    d0x, d0y, d0z = (float(v) for v in head.d0)
    px = w[..., 0, 0] * p0x + w[..., 0, 1] * p0y + w[..., 0, 2] * p0z + w[..., 0, 3] * p0w
    py = w[..., 1, 0] * p0x + w[..., 1, 1] * p0y + w[..., 1, 2] * p0z + w[..., 1, 3] * p0w
    pz = w[..., 2, 0] * p0x + w[..., 2, 1] * p0y + w[..., 2, 2] * p0z + w[..., 2, 3] * p0w
    dx = w[..., 0, 0] * d0x + w[..., 0, 1] * d0y + w[..., 0, 2] * d0z
    dy = w[..., 1, 0] * d0x + w[..., 1, 1] * d0y + w[..., 1, 2] * d0z
    dz = w[..., 2, 0] * d0x + w[..., 2, 1] * d0y + w[..., 2, 2] * d0z
    return (px, py, pz), (dx, dy, dz)


def intersect_rays(p, d, screen: ScreenGeometry = DEFAULT_SCREEN):
    """Ray/plane intersection b = p + d*t with t = -p.z/d.z, mapped to NDC.

    Returns (ndc_x, ndc_y, valid) arrays; entries with |d.z| <= RAY_EPS or
    t < 0 are marked invalid (callers hold the last cursor position).
    NDC is not clamped here.
    """
    px, py, pz = p
    dx, dy, dz = d
    dz = np.asarray(dz, dtype=float)
    usable = np.abs(dz) > RAY_EPS
    t = -np.asarray(pz, dtype=float) / np.where(usable, dz, 1.0)
    valid = usable & (t >= 0.0)
    bx = px + dx * t
    by = py + dy * t
    ndc_x = 0.5 + bx / screen.meters_per_ndc_x
    ndc_y = 0.5 - by / screen.meters_per_ndc_y
    return ndc_x, ndc_y, valid


def ndc_to_screen_arrays(ndc_x, ndc_y, screen: ScreenGeometry = DEFAULT_SCREEN):
    """Viewport transform with clamping. Returns (x, y, in_bounds) arrays."""
    ndc_x = np.asarray(ndc_x, dtype=float)
    ndc_y = np.asarray(ndc_y, dtype=float)
    in_bounds = (ndc_x >= 0.0) & (ndc_x <= 1.0) & (ndc_y >= 0.0) & (ndc_y <= 1.0)
    x = np.clip(ndc_x, 0.0, 1.0) * screen.width_pt
    y = np.clip(ndc_y, 0.0, 1.0) * screen.height_pt
    return x, y, in_bounds


def pointer_path(w: np.ndarray, head: HeadModel = HeadModel(),
                 screen: ScreenGeometry = DEFAULT_SCREEN):
    """Map a batch of transforms (n,4,4) to raw cursor arrays.

    Returns (x, y, in_bounds, valid); invalid frames (degenerate rays) carry
    unusable coordinates and must be replaced by the caller's hold-last rule.
    """
    p, d = transform_rays(w, head)
    ndc_x, ndc_y, valid = intersect_rays(p, d, screen)
    x, y, in_bounds = ndc_to_screen_arrays(ndc_x, ndc_y, screen)
    return x, y, in_bounds, valid


# ---------------------------------------------------------------------------
# scalar API
# ---------------------------------------------------------------------------

def update_ray(head: HeadModel, pose: Pose):
    """Ray origin and direction for one pose, as two (3,) arrays."""
    p, d = transform_rays(pose.w, head)
    return (np.array([float(p[0]), float(p[1]), float(p[2])]),
            np.array([float(d[0]), float(d[1]), float(d[2])]))


def intersect_screen(p, d, screen: ScreenGeometry = DEFAULT_SCREEN):
    """NDC intersection of a single ray, or None if the ray misses the plane."""
    ndc_x, ndc_y, valid = intersect_rays(
        (float(p[0]), float(p[1]), float(p[2])),
        (float(d[0]), float(d[1]), float(d[2])),
        screen,
    )
    if not bool(valid):
        return None
    return float(ndc_x), float(ndc_y)


def ndc_to_screen(ndc, screen: ScreenGeometry = DEFAULT_SCREEN) -> ScreenPoint:
    x, y, in_bounds = ndc_to_screen_arrays(float(ndc[0]), float(ndc[1]), screen)
    return ScreenPoint(float(x), float(y), bool(in_bounds))


def pointer_from_pose(head: HeadModel, pose: Pose,
                      screen: ScreenGeometry = DEFAULT_SCREEN,
                      filter: SmoothingFilter | None = None) -> ScreenPoint:
    """Full head-to-cursor composition for one pose.

    Degenerate rays hold the last smoothed point (screen center before any
    history exists) and leave the filter state untouched.
    """
    x, y, in_bounds, valid = pointer_path(pose.w[None], head, screen)
    if not bool(valid[0]):
        if filter is not None and filter.state is not None:
            return filter.state
        cx, cy = screen.center
        return ScreenPoint(cx, cy, True)
    point = ScreenPoint(float(x[0]), float(y[0]), bool(in_bounds[0]))
    if filter is not None:
        point = filter.smooth(point)
    return point


# ---------------------------------------------------------------------------
# inverse mapping
# ---------------------------------------------------------------------------

def transforms_for_screen_points(xs, ys, head_position,
                                 screen: ScreenGeometry = DEFAULT_SCREEN) -> np.ndarray:
    """Build transforms whose forward mapping lands on the given points.

    Rotation is yaw about y composed with pitch about x (zero roll);
    translation is head_position (z > 0). Accepts scalars or arrays and
    returns (..., 4, 4).
    """
    hx, hy, hz = (float(v) for v in head_position)
    if hz <= 0.0:
        raise ValueError("head must be in front of the screen (z > 0)")
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    bx = (xs / screen.width_pt - 0.5) * screen.meters_per_ndc_x
    by = (0.5 - ys / screen.height_pt) * screen.meters_per_ndc_y
    ux = bx - hx
    uy = by - hy
    uz = -hz
    norm = np.sqrt(ux * ux + uy * uy + uz * uz)
    ux, uy, uz = ux / norm, uy / norm, uz / norm

    sp = uy                      # pitch: sin
    cp = np.sqrt(1.0 - sp * sp)  # head in front keeps |pitch| < 90 deg
    yaw = np.arctan2(-ux, -uz)
    sy, cy = np.sin(yaw), np.cos(yaw)

    w = np.zeros(np.shape(xs) + (4, 4))
    w[..., 0, 0] = cy
    w[..., 0, 1] = sy * sp
    w[..., 0, 2] = sy * cp
    w[..., 1, 1] = cp
    w[..., 1, 2] = -sp
    w[..., 2, 0] = -sy
    w[..., 2, 1] = cy * sp
    w[..., 2, 2] = cy * cp
    w[..., 0, 3] = hx
    w[..., 1, 3] = hy
    w[..., 2, 3] = hz
    w[..., 3, 3] = 1.0
    return w


def pose_for_screen_point(target: ScreenPoint, head_position,
                          screen: ScreenGeometry = DEFAULT_SCREEN,
                          t: float = 0.0) -> Pose:
    """Inverse of pointer_from_pose (alpha=1) for one in-bounds target."""
    if not (0.0 <= target.x <= screen.width_pt and 0.0 <= target.y <= screen.height_pt):
        raise ValueError(f"target ({target.x}, {target.y}) is out of bounds")
    w = transforms_for_screen_points(target.x, target.y, head_position, screen)
    return Pose(t=t, w=w)
