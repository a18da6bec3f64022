"""Offline replay: feed a stored pose trace through the full pipeline.

Poses are converted to cursor points in one vectorized pass (the same
elementwise arithmetic the streaming service applies frame by frame, so the
two paths agree bit-for-bit), then run through the dwell engine and the
trial session.
"""

from __future__ import annotations

import numpy as np

from .dwell import DwellEngine, WidgetRegistry
from .geometry import HeadModel, Pose, ScreenGeometry, ScreenPoint, SmoothingFilter, \
    pointer_from_pose, pointer_path
from .traces import EventLog, Trace
from .trials import Session, SessionConfig, build_layout


class ReplayError(ValueError):
    pass


def screen_from_meta(meta: dict) -> ScreenGeometry:
    s = meta.get("screen", {})
    return ScreenGeometry(
        width_pt=s.get("width_pt", 375.0),
        height_pt=s.get("height_pt", 812.0),
        meters_per_ndc_x=s.get("meters_per_ndc_x", 0.3),
        meters_per_ndc_y=s.get("meters_per_ndc_y", 0.3 * 812.0 / 375.0),
    )


def config_from_meta(meta: dict) -> SessionConfig:
    screen = screen_from_meta(meta)
    layout = build_layout(
        meta["layout"], screen,
        glance_ms=meta.get("glance_ms", 1000.0),
        gaze_ms=meta.get("gaze_ms", 2000.0),
    )
    return SessionConfig(
        participant_id=meta.get("participant", "anonymous"),
        distance_mode=meta.get("distance", "mid"),
        layout=layout,
        select_kind=meta.get("select_kind", "glance"),
        glance_ms=meta.get("glance_ms", 1000.0),
        gaze_ms=meta.get("gaze_ms", 2000.0),
        alpha=meta.get("alpha", 1.0),
    )


def build_engine(config: SessionConfig) -> DwellEngine:
    screen = config.layout.screen
    registry = WidgetRegistry(screen.width_pt, screen.height_pt)
    for widget in config.layout.targets:
        registry.register(widget)
    return DwellEngine(registry)


def cursor_stream(trace: Trace, config: SessionConfig):
    """Cursor points for every trace frame, with the hold-last rule applied.

    alpha=1 uses the vectorized path; smoothed sessions fall back to the
    sequential filter.
    """
    screen = config.layout.screen
    head = HeadModel()
    if config.alpha == 1.0:
        x, y, in_bounds, valid = pointer_path(trace.w, head, screen)
        if not valid.all():
            cx, cy = screen.center
            lx, ly, lb = cx, cy, True
            x, y, in_bounds = x.copy(), y.copy(), in_bounds.copy()
            for i in range(len(trace)):
                if valid[i]:
                    lx, ly, lb = x[i], y[i], in_bounds[i]
                else:
                    x[i], y[i], in_bounds[i] = lx, ly, lb
        return [ScreenPoint(float(x[i]), float(y[i]), bool(in_bounds[i]))
                for i in range(len(trace))]
    filt = SmoothingFilter(config.alpha)
    points = []
    for i in range(len(trace)):
        pose = Pose(t=float(trace.t[i]), w=trace.w[i])
        points.append(pointer_from_pose(head, pose, screen, filt))
    return points


def replay(trace: Trace, config: SessionConfig | None = None) -> EventLog:
    """Run a trace end to end; returns the full event/trial log."""
    if config is None:
        config = config_from_meta(trace.meta)
    else:
        for key, value in (("participant", config.participant_id),
                           ("distance", config.distance_mode),
                           ("layout", config.layout.name)):
            if key in trace.meta and trace.meta[key] != value:
                raise ReplayError(
                    f"trace metadata {key}={trace.meta[key]!r} does not match "
                    f"session config {value!r}"
                )
    if len(trace) == 0:
        raise ReplayError("empty trace")

    engine = build_engine(config)
    session = Session(config)
    session.begin(float(trace.t[0]))
    points = cursor_stream(trace, config)

    log = EventLog(meta=dict(trace.meta))
    for i in range(len(trace)):
        events = engine.process_frame(float(trace.t[i]), points[i])
        for event in events:
            log.add_event(event)
            if session.phase == "running":
                record = session.advance(event)
                if record is not None:
                    log.add_trial(record)
    log.meta["complete"] = session.complete
    log.meta["ignored_selections"] = session.ignored_selections
    return log
