"""Deterministic synthetic head-motion traces.

For each target in a sequence the cursor follows a minimum-jerk path from
its current position to the target center, then holds on the target with
seeded Gaussian cursor noise long enough for the dwell engine to fire a
selection. Every cursor sample is inverse-mapped to a head pose at the
configured depth, so the generated trace exercises the full
geometry -> dwell -> trials pipeline and its expectations are exact in
cursor space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DEFAULT_SCREEN, transforms_for_screen_points
from .trials import DISTANCE_DEPTH_M, Layout, default_sequence
from .traces import Trace

MIN_MOVE_MS = 200.0  # floor so adjacent targets never get a zero-length hop


class SynthError(ValueError):
    pass


@dataclass(frozen=True)
class MotionParams:
    head_depth_m: float = DISTANCE_DEPTH_M["mid"]
    move_ms_per_pt: float = 1.5
    dwell_hold_ms: float = 1200.0
    noise_sigma_pt: float = 4.0
    anisotropy_angle_deg: float | None = None
    anisotropy_ratio: float = 1.0
    frame_interval_ms: float = 16.0
    seed: int = 0

    def __post_init__(self):
        if self.move_ms_per_pt <= 0 or self.dwell_hold_ms <= 0 or self.frame_interval_ms <= 0:
            raise SynthError("durations must be positive")
        if self.noise_sigma_pt < 0:
            raise SynthError("noise sigma must be non-negative")
        if self.anisotropy_ratio < 1.0:
            raise SynthError("anisotropy ratio must be >= 1")


def min_jerk(s, e, duration_ms, t_ms):
    """Minimum-jerk interpolation s -> e at time t in [0, duration]."""
    tau = np.asarray(t_ms, dtype=float) / float(duration_ms)
    shape = tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau))
    return s + (e - s) * shape


def trial_rng(seed: int, participant: str, distance: str, trial: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, participant, distance, trial)
    so any single trial regenerates identically in isolation."""
    ss = np.random.SeedSequence(
        entropy=int(seed) & (2**63 - 1),
        spawn_key=tuple(participant.encode()) + tuple(distance.encode()) + (int(trial),),
    )
    return np.random.Generator(np.random.Philox(ss))


def anisotropic_noise(rng: np.random.Generator, n: int, sigma: float,
                      angle_deg: float | None = None, ratio: float = 1.0) -> np.ndarray:
    """(n, 2) Gaussian offsets; major axis std sigma at angle_deg, minor
    axis std sigma/ratio. angle_deg=None means isotropic."""
    raw = rng.standard_normal((int(n), 2))
    raw[:, 0] *= sigma
    raw[:, 1] *= sigma / ratio
    if angle_deg is None:
        return raw
    a = math.radians(angle_deg)
    c, s = math.cos(a), math.sin(a)
    rot = np.array([[c, -s], [s, c]])
    return raw @ rot.T


def _move_frame_count(amplitude: float, params: MotionParams) -> int:
    duration = max(MIN_MOVE_MS, params.move_ms_per_pt * amplitude)
    return max(1, math.ceil(duration / params.frame_interval_ms))


def _hold_frame_count(params: MotionParams) -> int:
    return max(1, math.ceil(params.dwell_hold_ms / params.frame_interval_ms))


def expected_frame_count(layout: Layout, sequence, params: MotionParams) -> int:
    """Exact trace length for the given plan (including the start frame)."""
    cur = layout.screen.center
    total = 1
    hold = _hold_frame_count(params)
    for label in sequence:
        target = layout.center_of(label)
        amp = math.hypot(target[0] - cur[0], target[1] - cur[1])
        total += _move_frame_count(amp, params) + hold
        cur = target
    return total


def cursor_track(layout: Layout, sequence, params: MotionParams,
                 participant: str = "p00", distance: str = "mid"):
    """Deterministic cursor samples (t_ms, x, y) acquiring the sequence."""
    half_w = min(w.rect[2] for w in layout.targets) / 2.0
    half_h = min(w.rect[3] for w in layout.targets) / 2.0
    if params.noise_sigma_pt >= min(half_w, half_h) / 3.0:
        raise SynthError(
            f"noise sigma {params.noise_sigma_pt} pt too large for "
            f"{min(half_w, half_h)} pt target half-size; the sequence may not complete"
        )

    dt = params.frame_interval_ms
    hold = _hold_frame_count(params)
    cur = layout.screen.center
    xs = [cur[0]]
    ys = [cur[1]]
    clip = 3.0 * params.noise_sigma_pt
    for trial, label in enumerate(sequence):
        target = layout.center_of(label)
        amp = math.hypot(target[0] - cur[0], target[1] - cur[1])
        m = _move_frame_count(amp, params)
        duration = max(MIN_MOVE_MS, params.move_ms_per_pt * amp)
        t_local = np.minimum(np.arange(1, m + 1) * dt, duration)
        xs.extend(min_jerk(cur[0], target[0], duration, t_local))
        ys.extend(min_jerk(cur[1], target[1], duration, t_local))

        rng = trial_rng(params.seed, participant, distance, trial)
        noise = anisotropic_noise(rng, hold, params.noise_sigma_pt,
                                  params.anisotropy_angle_deg, params.anisotropy_ratio)
        # clipped at 3 sigma so the hold never leaves the target rect
        noise = np.clip(noise, -clip, clip)
        xs.extend(target[0] + noise[:, 0])
        ys.extend(target[1] + noise[:, 1])
        cur = target

    n = len(xs)
    t = np.arange(n, dtype=float) * dt
    return t, np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)


def synth_trace(layout: Layout, params: MotionParams, sequence=None,
                participant: str = "p00", distance: str = "mid",
                select_kind: str = "glance",
                glance_ms: float = 1000.0, gaze_ms: float = 2000.0) -> Trace:
    """Generate a pose trace that completes the sequence under the dwell
    engine; reproducible byte-for-byte for a fixed seed."""
    if sequence is None:
        sequence = default_sequence(layout.name)
    if params.dwell_hold_ms < (glance_ms if select_kind == "glance" else gaze_ms):
        raise SynthError("dwell_hold_ms shorter than the selection threshold")
    t, xs, ys = cursor_track(layout, sequence, params, participant, distance)
    head = (0.0, 0.0, params.head_depth_m)
    w = transforms_for_screen_points(xs, ys, head, layout.screen)
    meta = {
        "participant": participant,
        "distance": distance,
        "layout": layout.name,
        "select_kind": select_kind,
        "glance_ms": glance_ms,
        "gaze_ms": gaze_ms,
        "alpha": 1.0,
        "head_depth_m": params.head_depth_m,
        "seed": params.seed,
        "screen": {
            "width_pt": layout.screen.width_pt,
            "height_pt": layout.screen.height_pt,
            "meters_per_ndc_x": layout.screen.meters_per_ndc_x,
            "meters_per_ndc_y": layout.screen.meters_per_ndc_y,
        },
    }
    return Trace(meta=meta, t=t, w=w)
