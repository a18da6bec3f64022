"""WebSocket session service: the transport for live UIs.

One session per connection. Inbound frames are UTF-8 JSON objects:
{"type":"hello", ...config}, {"type":"pose","t":ms,"m":[16 reals]},
{"type":"end"}. Outbound: cursor, event, trial, phase and error messages,
emitted strictly in processing order. Streaming a stored trace through a
connection reproduces the offline replay log field-for-field because both
paths share the same per-frame pipeline.
"""

from __future__ import annotations

import json

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .dwell import DwellError
from .geometry import HeadModel, Pose, PoseError, ScreenGeometry, SmoothingFilter, \
    pointer_from_pose
from .replay import build_engine, config_from_meta
from .traces import event_to_dict, trial_to_dict
from .trials import Session, StudyFlow, TrialError, layout_document

HELLO_DEFAULTS = {
    "participant": "anonymous",
    "distance": "mid",
    "layout": "numbers",
    "select_kind": "glance",
    "glance_ms": 1000.0,
    "gaze_ms": 2000.0,
    "alpha": 1.0,
    "mode": "test",
}


class _TestRunner:
    """Single-layout session; mirrors replay frame for frame."""

    def __init__(self, hello: dict):
        meta = dict(HELLO_DEFAULTS)
        meta.update({k: v for k, v in hello.items() if k != "type"})
        self.config = config_from_meta(meta)
        self.engine = build_engine(self.config)
        self.session = Session(self.config)
        self.filter = SmoothingFilter(self.config.alpha)
        self.head = HeadModel()
        self.started = False

    def initial_messages(self):
        return [self._phase_message("test", self.config.layout, self.session.sequence)]

    def _phase_message(self, name, layout=None, sequence=None):
        msg = {"type": "phase", "name": name}
        if layout is not None:
            msg["layout"] = layout_document(layout)
        if sequence is not None:
            msg["sequence"] = list(sequence)
        return msg

    def process_pose(self, t: float, pose: Pose):
        out = []
        if not self.started:
            self.session.begin(t)
            self.started = True
        cursor = pointer_from_pose(self.head, pose, self.config.layout.screen, self.filter)
        out.append({"type": "cursor", "t": t, "x": cursor.x, "y": cursor.y})
        for event in self.engine.process_frame(t, cursor):
            out.append({"type": "event", **event_to_dict(event)})
            if self.session.phase == "running":
                record = self.session.advance(event)
                if record is not None:
                    out.append({"type": "trial", **trial_to_dict(record)})
                    if self.session.complete:
                        out.append(self._summary_message())
        return out

    def _summary_message(self):
        recs = self.session.records
        elapsed = recs[-1].t_select - (recs[0].t_select - recs[0].movement_time_ms) if recs else 0.0
        return {
            "type": "phase", "name": "summary",
            "tests": [{"layout": self.config.layout.name,
                       "n_trials": len(recs), "elapsed_ms": elapsed}],
        }


class _StudyRunner:
    """Five-screen flow driven purely by dwell selections on flow buttons."""

    def __init__(self, hello: dict):
        opts = dict(HELLO_DEFAULTS)
        opts.update({k: v for k, v in hello.items() if k != "type"})
        self.flow = StudyFlow(
            participant_id=opts["participant"], distance_mode=opts["distance"],
            select_kind=opts["select_kind"], glance_ms=opts["glance_ms"],
            gaze_ms=opts["gaze_ms"], alpha=opts["alpha"],
        )
        self.select_kind = opts["select_kind"]
        self.filter = SmoothingFilter(opts["alpha"])
        self.head = HeadModel()
        self.screen = self.flow.screen
        self._summaries = []
        self._enter_phase(self.flow.phase)

    def _flow_button(self, wid):
        from .dwell import Widget
        cx = self.screen.width_pt / 2.0
        return Widget(id=wid, rect=(cx - 70.0, self.screen.height_pt - 90.0, 140.0, 60.0),
                      glance_ms=self.flow.test1.config.glance_ms,
                      gaze_ms=self.flow.test1.config.gaze_ms)

    def _enter_phase(self, phase):
        from .dwell import DwellEngine, WidgetRegistry
        registry = WidgetRegistry(self.screen.width_pt, self.screen.height_pt)
        session = self.flow.current_session
        layout = None
        sequence = None
        if phase == "welcome":
            registry.register(self._flow_button("start"))
        elif phase == "practice":
            for widget in self.flow.test1.layout.targets:
                registry.register(widget)
            registry.register(self._flow_button("continue"))
            layout = self.flow.test1.layout
        elif phase in ("test1", "test2"):
            for widget in session.layout.targets:
                registry.register(widget)
            layout = session.layout
            sequence = session.sequence
        self.engine = DwellEngine(registry)
        self._phase_layout = layout
        self._phase_sequence = sequence

    def initial_messages(self):
        return [self._phase_message()]

    def _phase_message(self):
        msg = {"type": "phase", "name": self.flow.phase}
        if self._phase_layout is not None:
            msg["layout"] = layout_document(self._phase_layout)
        if self._phase_sequence is not None:
            msg["sequence"] = list(self._phase_sequence)
        if self.flow.phase == "summary":
            msg["tests"] = self._summaries
        return msg

    def process_pose(self, t: float, pose: Pose):
        out = []
        cursor = pointer_from_pose(self.head, pose, self.screen, self.filter)
        out.append({"type": "cursor", "t": t, "x": cursor.x, "y": cursor.y})
        advance = False
        for event in self.engine.process_frame(t, cursor):
            out.append({"type": "event", **event_to_dict(event)})
            if event.kind != self.select_kind:
                continue
            if self.flow.phase == "welcome" and event.widget_id == "start":
                advance = True
            elif self.flow.phase == "practice" and event.widget_id == "continue":
                advance = True
            elif self.flow.phase in ("test1", "test2"):
                session = self.flow.current_session
                record = session.advance(event)
                if record is not None:
                    out.append({"type": "trial", **trial_to_dict(record)})
                if session.complete:
                    self._summaries.append({
                        "layout": session.layout.name,
                        "n_trials": len(session.records),
                        "elapsed_ms": session.records[-1].t_select
                        - (session.records[0].t_select - session.records[0].movement_time_ms),
                    })
                    advance = True
        if advance:
            self.flow.advance_phase(t)
            self._enter_phase(self.flow.phase)
            out.append(self._phase_message())
        return out


def create_app() -> FastAPI:
    app = FastAPI(title="headpoint session service")

    @app.websocket("/session")
    async def session_socket(ws: WebSocket):
        await ws.accept()

        async def send(msg):
            await ws.send_text(json.dumps(msg))

        runner = None
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict) or "type" not in msg:
                        raise ValueError("message must be an object with a type field")
                except ValueError as exc:
                    await send({"type": "error", "message": f"malformed frame: {exc}"})
                    continue

                kind = msg["type"]
                if runner is None:
                    if kind != "hello":
                        await send({"type": "error",
                                    "message": "first message must be hello"})
                        await ws.close()
                        return
                    try:
                        mode = msg.get("mode", "test")
                        runner = _StudyRunner(msg) if mode == "study" else _TestRunner(msg)
                    except (TrialError, ValueError) as exc:
                        await send({"type": "error", "message": str(exc)})
                        await ws.close()
                        return
                    for out in runner.initial_messages():
                        await send(out)
                    continue

                if kind == "pose":
                    try:
                        t = float(msg["t"])
                        m = np.asarray(msg["m"], dtype=float).reshape(4, 4)
                        pose = Pose(t=t, w=m)
                        outputs = runner.process_pose(t, pose)
                    except (KeyError, ValueError, PoseError, DwellError, TrialError) as exc:
                        await send({"type": "error", "message": str(exc)})
                        continue
                    for out in outputs:
                        await send(out)
                elif kind == "end":
                    await ws.close()
                    return
                elif kind == "hello":
                    await send({"type": "error", "message": "session already started"})
                else:
                    await send({"type": "error",
                                "message": f"unknown message type {kind!r}"})
        except WebSocketDisconnect:
            return

    return app


app = create_app()
