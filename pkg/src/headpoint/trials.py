"""Target-acquisition test protocol.

Two layouts: Numbers (keypad-style digits packed around the screen center)
and Alphabets (15 equal targets on a 3x5 grid spanning the screen). A
session walks a fixed label sequence; each correct selection closes a
TrialRecord carrying the movement amplitude and movement time used by the
Fitts-law analysis. Wrong-target selections are ignored (the dwell design
has no error rate) but counted for diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dwell import GazeEvent, Widget
from .geometry import DEFAULT_SCREEN, ScreenGeometry

# desired Numbers order; exercises vertical, horizontal and diagonal moves
NUMBERS_SEQUENCE = tuple("12345678901928376405")

ALPHABET_LABELS = tuple(chr(ord("A") + i) for i in range(15))  # A..O

# nominal head depths: interval midpoints 13 / 17 / 21 inches, in meters
DISTANCE_DEPTH_M = {"near": 0.3302, "mid": 0.4318, "far": 0.5334}
DISTANCE_ORDER = ("near", "mid", "far")
LAYOUT_ORDER = ("numbers", "alphabets")

PHASES = ("welcome", "practice", "test1", "test2", "summary")


class TrialError(ValueError):
    """Layout construction or session protocol violation."""


@dataclass(frozen=True)
class Layout:
    name: str
    screen: ScreenGeometry
    targets: tuple  # of Widget, id == label

    def target(self, label: str) -> Widget:
        for w in self.targets:
            if w.id == label:
                return w
        raise KeyError(label)

    def center_of(self, label: str):
        x, y, w, h = self.target(label).rect
        return (x + w / 2.0, y + h / 2.0)

    @property
    def labels(self):
        return tuple(w.id for w in self.targets)


def _check_fit(name, rects, screen):
    for label, (x, y, w, h) in rects:
        if x < 0 or y < 0 or x + w > screen.width_pt or y + h > screen.height_pt:
            raise TrialError(
                f"{name} layout does not fit the {screen.width_pt}x{screen.height_pt} screen "
                f"(target {label!r})"
            )


def build_layout(name: str, screen: ScreenGeometry = DEFAULT_SCREEN,
                 target_size: float | None = None, gap: float | None = None,
                 glance_ms: float = 1000.0, gaze_ms: float = 2000.0) -> Layout:
    """Deterministic geometry for the two test layouts.

    numbers: 90x90 pt targets with 12 pt gaps by default, the 1-9 block
    centered on the screen so "5" sits exactly at the center and "0"
    directly below "8". alphabets: 110x110 pt targets on a 3x5 grid with
    uniform gaps/margins filling the screen.
    """
    cx, cy = screen.center
    rects = []
    if name == "numbers":
        size = 90.0 if target_size is None else float(target_size)
        g = 12.0 if gap is None else float(gap)
        pitch = size + g
        for i, digit in enumerate("123456789"):
            col, row = i % 3, i // 3
            x = cx + (col - 1) * pitch - size / 2.0
            y = cy + (row - 1) * pitch - size / 2.0
            rects.append((digit, (x, y, size, size)))
        rects.append(("0", (cx - size / 2.0, cy + 2 * pitch - size / 2.0, size, size)))
    elif name == "alphabets":
        size = 110.0 if target_size is None else float(target_size)
        gx = (screen.width_pt - 3 * size) / 4.0
        gy = (screen.height_pt - 5 * size) / 6.0
        if gx <= 0 or gy <= 0:
            raise TrialError("alphabets targets overflow the screen")
        for i, label in enumerate(ALPHABET_LABELS):
            col, row = i % 3, i // 3
            x = gx + col * (size + gx)
            y = gy + row * (size + gy)
            rects.append((label, (x, y, size, size)))
    else:
        raise TrialError(f"unknown layout {name!r}")

    _check_fit(name, rects, screen)
    targets = tuple(
        Widget(id=label, rect=rect, glance_ms=glance_ms, gaze_ms=gaze_ms)
        for label, rect in rects
    )
    return Layout(name=name, screen=screen, targets=targets)


def default_sequence(layout_name: str):
    if layout_name == "numbers":
        return NUMBERS_SEQUENCE
    if layout_name == "alphabets":
        return ALPHABET_LABELS
    raise TrialError(f"unknown layout {layout_name!r}")


def layout_document(layout: Layout) -> dict:
    """Structured dump of a layout for UI consumption and golden tests."""
    return {
        "name": layout.name,
        "screen": {"width_pt": layout.screen.width_pt, "height_pt": layout.screen.height_pt},
        "targets": [
            {"id": w.id, "label": w.label, "rect": list(w.rect)}
            for w in layout.targets
        ],
    }


@dataclass(frozen=True)
class SessionConfig:
    participant_id: str
    distance_mode: str
    layout: Layout
    select_kind: str = "glance"
    glance_ms: float = 1000.0
    gaze_ms: float = 2000.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.distance_mode not in DISTANCE_DEPTH_M:
            raise TrialError(f"unknown distance mode {self.distance_mode!r}")
        if self.select_kind not in ("glance", "gaze"):
            raise TrialError(f"select_kind must be glance or gaze")

    @property
    def head_depth_m(self) -> float:
        return DISTANCE_DEPTH_M[self.distance_mode]


@dataclass(frozen=True)
class TrialRecord:
    index: int
    target_label: str
    target_center: tuple
    prev_center: tuple
    selection_point: tuple
    amplitude_a: float
    movement_time_ms: float
    t_select: float


class Session:
    """One test run: a layout plus its label sequence.

    Selections arrive as GazeEvents; only the configured select kind on the
    currently expected target closes a trial. The first trial's movement
    time is anchored at begin() and its amplitude at the screen center.
    """

    def __init__(self, config: SessionConfig, sequence=None, practice: bool = False):
        self.config = config
        self.layout = config.layout
        self.sequence = tuple(sequence) if sequence is not None else default_sequence(self.layout.name)
        for label in self.sequence:
            self.layout.target(label)  # raises KeyError on unknown labels
        self.practice = practice
        self.phase = "pending"
        self.records: list[TrialRecord] = []
        self.ignored_selections = 0
        self._index = 0
        self._prev_center = None
        self._prev_t = None

    def begin(self, t_ms: float):
        self.phase = "running"
        self.records = []
        self.ignored_selections = 0
        self._index = 0
        self._prev_center = self.layout.screen.center
        self._prev_t = float(t_ms)

    @property
    def complete(self) -> bool:
        return self.phase == "complete"

    @property
    def expected_label(self):
        if self._index < len(self.sequence):
            return self.sequence[self._index]
        return None

    @property
    def next_label(self):
        if self._index + 1 < len(self.sequence):
            return self.sequence[self._index + 1]
        return None

    def advance(self, event: GazeEvent):
        """Consume one event; returns a TrialRecord when a trial closes."""
        if self.phase != "running":
            raise TrialError("session is not in a test phase")
        if event.widget_id not in self.layout.labels:
            raise TrialError(f"event from widget {event.widget_id!r} outside the layout")
        if event.kind != self.config.select_kind:
            return None
        if event.widget_id != self.expected_label:
            self.ignored_selections += 1
            return None
        if self.practice:
            return None

        target_center = self.layout.center_of(event.widget_id)
        dx = target_center[0] - self._prev_center[0]
        dy = target_center[1] - self._prev_center[1]
        record = TrialRecord(
            index=self._index,
            target_label=event.widget_id,
            target_center=target_center,
            prev_center=self._prev_center,
            selection_point=(event.cursor.x, event.cursor.y),
            amplitude_a=math.hypot(dx, dy),
            movement_time_ms=event.t - self._prev_t,
            t_select=event.t,
        )
        self.records.append(record)
        self._index += 1
        self._prev_center = target_center
        self._prev_t = event.t
        if self._index >= len(self.sequence):
            self.phase = "complete"
        return record

    def log(self) -> list[TrialRecord]:
        if not self.complete:
            raise TrialError("session is incomplete")
        return list(self.records)


class StudyFlow:
    """Five-screen session flow: welcome, practice, test1, test2, summary."""

    def __init__(self, participant_id: str, distance_mode: str,
                 screen: ScreenGeometry = DEFAULT_SCREEN, select_kind: str = "glance",
                 glance_ms: float = 1000.0, gaze_ms: float = 2000.0, alpha: float = 1.0):
        def cfg(layout_name):
            return SessionConfig(
                participant_id=participant_id, distance_mode=distance_mode,
                layout=build_layout(layout_name, screen, glance_ms=glance_ms, gaze_ms=gaze_ms),
                select_kind=select_kind, glance_ms=glance_ms, gaze_ms=gaze_ms, alpha=alpha,
            )
        self.screen = screen
        self.test1 = Session(cfg("numbers"))
        self.test2 = Session(cfg("alphabets"))
        self.phase = "welcome"

    @property
    def current_session(self):
        if self.phase == "test1":
            return self.test1
        if self.phase == "test2":
            return self.test2
        return None

    def advance_phase(self, t_ms: float) -> str:
        i = PHASES.index(self.phase)
        if i + 1 >= len(PHASES):
            raise TrialError("study flow already in summary phase")
        self.phase = PHASES[i + 1]
        session = self.current_session
        if session is not None:
            session.begin(t_ms)
        return self.phase
