"""Line-oriented trace and event-log files.

Both formats are plain UTF-8 text for diff-ability: a magic+version line, a
``meta`` line carrying a JSON header, then one record per line. Reals are
serialized as shortest round-trip decimals, so load(save(x)) is bit-exact
and replays of a stored trace are byte-stable.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .dwell import GazeEvent
from .geometry import ScreenPoint, validate_transforms
from .trials import TrialRecord

TRACE_MAGIC = "headpoint-trace"
EVENTS_MAGIC = "headpoint-events"
FORMAT_VERSION = 1


class TraceFormatError(ValueError):
    pass


@dataclass
class Trace:
    """Session metadata plus frame timestamps (n,) and transforms (n,4,4)."""

    meta: dict
    t: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.w = np.asarray(self.w, dtype=float)
        if self.t.ndim != 1 or self.w.shape != (len(self.t), 4, 4):
            raise TraceFormatError("trace arrays must be (n,) and (n,4,4)")

    def __len__(self):
        return len(self.t)

    def __eq__(self, other):
        return (isinstance(other, Trace) and self.meta == other.meta
                and np.array_equal(self.t, other.t) and np.array_equal(self.w, other.w))


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _atomic_writer(path):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    return fd, tmp


def save_trace(trace: Trace, path):
    fd, tmp = _atomic_writer(path)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(f"{TRACE_MAGIC} v{FORMAT_VERSION}\n")
            f.write("meta " + _dumps(trace.meta) + "\n")
            flat = trace.w.reshape(len(trace), 16).tolist()
            ts = trace.t.tolist()
            for t, row in zip(ts, flat):
                entries = " ".join(repr(v) for v in row)
                f.write(f"frame {t!r} {entries}\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _check_header(line, lineno, magic, path):
    parts = line.strip().split()
    if len(parts) != 2 or parts[0] != magic or not parts[1].startswith("v"):
        raise TraceFormatError(f"{path}:{lineno}: not a {magic} file")
    try:
        version = int(parts[1][1:])
    except ValueError:
        raise TraceFormatError(f"{path}:{lineno}: malformed version {parts[1]!r}")
    if version != FORMAT_VERSION:
        raise TraceFormatError(f"{path}:{lineno}: unsupported version {version}")


def load_trace(path) -> Trace:
    meta = None
    ts: list[float] = []
    frames: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if lineno == 1:
                _check_header(line, lineno, TRACE_MAGIC, path)
                continue
            if not line:
                continue
            tag, _, rest = line.partition(" ")
            if tag == "meta":
                try:
                    meta = json.loads(rest)
                except json.JSONDecodeError as exc:
                    raise TraceFormatError(f"{path}:{lineno}: bad meta JSON: {exc}")
            elif tag == "frame":
                parts = rest.split()
                if len(parts) != 17:
                    raise TraceFormatError(
                        f"{path}:{lineno}: frame needs t plus 16 matrix entries, got {len(parts)}"
                    )
                try:
                    values = [float(v) for v in parts]
                except ValueError as exc:
                    raise TraceFormatError(f"{path}:{lineno}: {exc}")
                ts.append(values[0])
                frames.append(values[1:])
            else:
                raise TraceFormatError(f"{path}:{lineno}: unknown record {tag!r}")
    if meta is None:
        raise TraceFormatError(f"{path}: missing meta record")
    t = np.asarray(ts, dtype=float)
    w = np.asarray(frames, dtype=float).reshape(len(ts), 4, 4)
    if len(t) > 1 and (np.diff(t) < 0).any():
        bad = int(np.argmax(np.diff(t) < 0)) + 1
        raise TraceFormatError(f"{path}: non-monotone timestamp at frame {bad}")
    validate_transforms(w)
    return Trace(meta=meta, t=t, w=w)


# ---------------------------------------------------------------------------
# event logs
# ---------------------------------------------------------------------------

@dataclass
class EventLog:
    """Replay output: gaze events and trial records in emission order."""

    meta: dict
    items: list = field(default_factory=list)  # ("event", GazeEvent) | ("trial", TrialRecord)

    def add_event(self, event: GazeEvent):
        self.items.append(("event", event))

    def add_trial(self, record: TrialRecord):
        self.items.append(("trial", record))

    @property
    def events(self) -> list:
        return [x for tag, x in self.items if tag == "event"]

    @property
    def trials(self) -> list:
        return [x for tag, x in self.items if tag == "trial"]


def event_to_dict(e: GazeEvent) -> dict:
    return {
        "t": e.t, "widget": e.widget_id, "kind": e.kind, "progress": e.progress,
        "x": e.cursor.x, "y": e.cursor.y, "in_bounds": e.cursor.in_bounds,
    }


def event_from_dict(d: dict) -> GazeEvent:
    return GazeEvent(
        t=d["t"], widget_id=d["widget"], kind=d["kind"], progress=d["progress"],
        cursor=ScreenPoint(d["x"], d["y"], d["in_bounds"]),
    )


def trial_to_dict(r: TrialRecord) -> dict:
    return {
        "index": r.index, "target": r.target_label,
        "target_center": list(r.target_center), "prev_center": list(r.prev_center),
        "selection": list(r.selection_point), "amplitude_pt": r.amplitude_a,
        "mt_ms": r.movement_time_ms, "t_select": r.t_select,
    }


def trial_from_dict(d: dict) -> TrialRecord:
    return TrialRecord(
        index=d["index"], target_label=d["target"],
        target_center=tuple(d["target_center"]), prev_center=tuple(d["prev_center"]),
        selection_point=tuple(d["selection"]), amplitude_a=d["amplitude_pt"],
        movement_time_ms=d["mt_ms"], t_select=d["t_select"],
    )


def save_events(log: EventLog, path):
    fd, tmp = _atomic_writer(path)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(f"{EVENTS_MAGIC} v{FORMAT_VERSION}\n")
            f.write("meta " + _dumps(log.meta) + "\n")
            for tag, item in log.items:
                payload = event_to_dict(item) if tag == "event" else trial_to_dict(item)
                f.write(f"{tag} " + _dumps(payload) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_events(path) -> EventLog:
    meta = None
    items = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if lineno == 1:
                _check_header(line, lineno, EVENTS_MAGIC, path)
                continue
            if not line:
                continue
            tag, _, rest = line.partition(" ")
            try:
                payload = json.loads(rest)
            except json.JSONDecodeError as exc:
                raise TraceFormatError(f"{path}:{lineno}: bad JSON: {exc}")
            if tag == "meta":
                meta = payload
            elif tag == "event":
                items.append(("event", event_from_dict(payload)))
            elif tag == "trial":
                items.append(("trial", trial_from_dict(payload)))
            else:
                raise TraceFormatError(f"{path}:{lineno}: unknown record {tag!r}")
    if meta is None:
        raise TraceFormatError(f"{path}: missing meta record")
    return EventLog(meta=meta, items=items)
