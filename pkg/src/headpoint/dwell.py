"""Dwell-based selection engine.

Each widget runs a small hover state machine over the cursor stream:
entering a rect starts a dwell timer, holding past glance_ms fires a glance
selection, holding past gaze_ms fires a gaze selection, and after gaze the
widget stays silent until the pointer exits and re-enters (re-entry rule,
the anti-repeat debounce). Leaving a rect always resets the timer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import ScreenPoint

EVENT_KINDS = ("enter", "progress", "glance", "gaze", "exit")
_KIND_ORDER = {k: i for i, k in enumerate(EVENT_KINDS)}

_IDLE = "idle"
_HOVERING = "hovering"
_FIRED = "fired-awaiting-exit"


class DwellError(ValueError):
    """Registration or frame-stream contract violation."""


@dataclass(frozen=True)
class Widget:
    """Axis-aligned hoverable target. rect = (x, y, width, height) in pt."""

    id: str
    rect: tuple
    glance_ms: float = 1000.0
    gaze_ms: float = 2000.0   # math.inf disables the gaze event
    enabled: bool = True
    label: str = ""

    def __post_init__(self):
        x, y, w, h = self.rect
        if w <= 0 or h <= 0:
            raise DwellError(f"widget {self.id!r}: non-positive rect size")
        if self.glance_ms > self.gaze_ms:
            raise DwellError(f"widget {self.id!r}: glance_ms must be <= gaze_ms")
        object.__setattr__(self, "rect", (float(x), float(y), float(w), float(h)))
        if not self.label:
            object.__setattr__(self, "label", self.id)

    def contains(self, px: float, py: float) -> bool:
        # closed on left/top edges, open on right/bottom
        x, y, w, h = self.rect
        return x <= px < x + w and y <= py < y + h


@dataclass(frozen=True)
class GazeEvent:
    t: float
    widget_id: str
    kind: str
    cursor: ScreenPoint
    progress: float = 0.0


def _rects_overlap(a, b) -> bool:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    return ax < bx + bw and bx < ax + aw and ay < by + bh and by < ay + ah


class WidgetRegistry:
    """Disjoint widget set with hit testing against the screen bounds."""

    def __init__(self, width_pt: float, height_pt: float):
        self.width_pt = float(width_pt)
        self.height_pt = float(height_pt)
        self.widgets: dict[str, Widget] = {}

    def register(self, widget: Widget):
        if widget.id in self.widgets:
            raise DwellError(f"duplicate widget id {widget.id!r}")
        x, y, w, h = widget.rect
        if x < 0 or y < 0 or x + w > self.width_pt or y + h > self.height_pt:
            raise DwellError(f"widget {widget.id!r} rect extends outside the screen")
        for other in self.widgets.values():
            if _rects_overlap(widget.rect, other.rect):
                raise DwellError(f"widget {widget.id!r} overlaps {other.id!r}")
        self.widgets[widget.id] = widget

    def hit_test(self, cursor: ScreenPoint):
        """Id of the enabled widget containing the cursor, or None."""
        for wid, widget in self.widgets.items():
            if widget.enabled and widget.contains(cursor.x, cursor.y):
                return wid
        return None


class _State:
    __slots__ = ("phase", "hover_start", "glance_emitted", "gaze_emitted")

    def __init__(self):
        self.reset()

    def reset(self):
        self.phase = _IDLE
        self.hover_start = None
        self.glance_emitted = False
        self.gaze_emitted = False


class DwellEngine:
    """Per-session hover state machine over a registry of widgets.

    Frames must arrive with non-decreasing timestamps; the event stream is a
    deterministic function of (registry, frame stream). Events within one
    frame are ordered by (widget id, kind order).
    """

    def __init__(self, registry: WidgetRegistry):
        self.registry = registry
        self._states = {wid: _State() for wid in registry.widgets}
        self._inside: str | None = None
        self._last_t: float | None = None

    def register_widget(self, widget: Widget):
        self.registry.register(widget)
        self._states[widget.id] = _State()

    def widget_state(self, widget_id: str):
        st = self._states[widget_id]
        return st.phase, st.hover_start

    def reset(self):
        for st in self._states.values():
            st.reset()
        self._inside = None

    def process_frame(self, t: float, cursor: ScreenPoint) -> list[GazeEvent]:
        if self._last_t is not None and t < self._last_t:
            raise DwellError(f"non-monotone frame timestamp {t} < {self._last_t}")
        self._last_t = t

        hit = self.registry.hit_test(cursor)
        events: list[GazeEvent] = []

        prev = self._inside
        if prev is not None and prev != hit:
            st = self._states.get(prev)
            if st is not None and st.phase != _IDLE:
                events.append(GazeEvent(t, prev, "exit", cursor))
                st.reset()

        if hit is not None:
            widget = self.registry.widgets[hit]
            st = self._states[hit]
            if st.phase == _IDLE:
                events.append(GazeEvent(t, hit, "enter", cursor))
                st.phase = _HOVERING
                st.hover_start = t
            if st.phase == _HOVERING:
                elapsed = t - st.hover_start
                progress = min(1.0, elapsed / widget.glance_ms)
                events.append(GazeEvent(t, hit, "progress", cursor, progress))
                if not st.glance_emitted and elapsed >= widget.glance_ms:
                    events.append(GazeEvent(t, hit, "glance", cursor, progress))
                    st.glance_emitted = True
                if not st.gaze_emitted and elapsed >= widget.gaze_ms:
                    events.append(GazeEvent(t, hit, "gaze", cursor, progress))
                    st.gaze_emitted = True
                    st.phase = _FIRED
            # _FIRED widgets emit nothing until the pointer exits

        self._inside = hit
        events.sort(key=lambda e: (e.t, e.widget_id, _KIND_ORDER[e.kind]))
        return events
