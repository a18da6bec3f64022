"""End-to-end acceptance suite.

Each test checks one release criterion at its stated tolerance and prints a
PASS line (run with -s to see them).
"""

import json
import math
import os
import time

import numpy as np
import pytest
from starlette.testclient import TestClient

from headpoint.analysis import covariance_eigen, effective_id, effective_width, throughput
from headpoint.cli import main as cli_main
from headpoint.dwell import DwellEngine, Widget, WidgetRegistry
from headpoint.geometry import (
    DEFAULT_SCREEN,
    HeadModel,
    ScreenPoint,
    intersect_rays,
    pointer_path,
    transform_rays,
    transforms_for_screen_points,
)
from headpoint.replay import replay
from headpoint.service import create_app
from headpoint.synth import MotionParams, anisotropic_noise, synth_trace, trial_rng
from headpoint.traces import event_to_dict, trial_to_dict
from headpoint.trials import build_layout

HEAD_DEPTHS = (0.3302, 0.4318, 0.5334)


def report(name):
    print(f"PASS: {name}")


def test_geometry_round_trip():
    rng = np.random.default_rng(2026)
    head = HeadModel()
    start = time.perf_counter()
    for depth in HEAD_DEPTHS:
        xs = rng.uniform(0.0, 375.0, 1000)
        ys = rng.uniform(0.0, 812.0, 1000)
        w = transforms_for_screen_points(xs, ys, (0.0, 0.0, depth))
        x, y, in_bounds, valid = pointer_path(w, head)
        assert valid.all() and in_bounds.all()
        assert np.abs(x - xs).max() < 1e-9
        assert np.abs(y - ys).max() < 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    report(f"geometry round trip: 1000 targets x 3 depths < 1e-9 pt in {elapsed:.3f}s")


def test_distance_sensitivity_law():
    worst = 0.0
    for deg in np.linspace(-30.0, 30.0, 121):
        if abs(deg) < 1e-12:
            continue
        a = math.radians(deg)
        for z in HEAD_DEPTHS:
            w = np.eye(4)
            w[0, 0] = w[2, 2] = math.cos(a)
            w[0, 2] = math.sin(a)
            w[2, 0] = -math.sin(a)
            w[2, 3] = z
            # recover b.x in meters from the screen mapping
            p, d = transform_rays(w[None], HeadModel())
            ndc_x, ndc_y, ok = intersect_rays(p, d, DEFAULT_SCREEN)
            bx = (float(ndc_x[0]) - 0.5) * DEFAULT_SCREEN.meters_per_ndc_x
            expected = -z * math.tan(a)
            worst = max(worst, abs(bx - expected) / abs(expected))
    assert worst < 1e-12
    report(f"distance sensitivity |b.x| = z*tan(yaw), max rel err {worst:.2e}")


def test_dwell_timing_and_reentry():
    registry = WidgetRegistry(375.0, 812.0)
    registry.register(Widget(id="a", rect=(100.0, 100.0, 90.0, 90.0)))
    engine = DwellEngine(registry)
    inside = ScreenPoint(145.0, 145.0)
    events = []
    for i in range(200):
        events.extend(engine.process_frame(i * 16.0, inside))
    glance = [e for e in events if e.kind == "glance"]
    gaze = [e for e in events if e.kind == "gaze"]
    assert [e.t for e in glance] == [1008.0]  # first 16 ms frame >= 1000
    assert [e.t for e in gaze] == [2000.0]    # first frame >= 2000

    # re-entry rule over a long random cursor walk
    registry = WidgetRegistry(375.0, 812.0)
    registry.register(Widget(id="a", rect=(100.0, 100.0, 90.0, 90.0)))
    registry.register(Widget(id="b", rect=(220.0, 300.0, 90.0, 90.0)))
    engine = DwellEngine(registry)
    rng = np.random.default_rng(13)
    x, y = 145.0, 145.0
    selectable = {"a": True, "b": True}
    repeats = 0
    for i in range(100_000):
        x = min(374.9, max(0.0, x + rng.normal(0.0, 3.0)))
        y = min(811.9, max(0.0, y + rng.normal(0.0, 3.0)))
        for e in engine.process_frame(i * 16.0, ScreenPoint(x, y)):
            if e.kind == "exit":
                selectable[e.widget_id] = True
            elif e.kind == "glance":
                if not selectable[e.widget_id]:
                    repeats += 1
                selectable[e.widget_id] = False
    assert repeats == 0
    report("dwell timing: glance at 1008 ms, gaze at 2000 ms; "
           "0 repeat selections in 1e5 random frames")


def test_fitts_oracle():
    vals = np.array([-10.0, 10.0, -10.0, 10.0])
    scaled = vals * (10.0 / np.std(vals, ddof=1))
    s_x, w_e = effective_width(scaled)
    assert abs(s_x - 10.0) < 1e-9
    assert abs(w_e - 41.33) < 1e-9
    assert abs(effective_id(41.33, 41.33) - 1.0) < 1e-9
    assert abs(effective_id(100.0, 25.0) - math.log2(5.0)) < 1e-9
    assert abs(math.log2(5.0) - 2.32193) < 5e-6  # stated rounding of log2(5)
    assert abs(throughput(math.log2(5.0), 1.0) - math.log2(5.0)) < 1e-9
    report("Fitts oracle: W_e=41.33 @ S_x=10; ID_e=1 @ A=W_e; ID_e=log2(5) @ A/W_e=4")


def test_estimator_convergence():
    rng = np.random.default_rng(777)
    projections = rng.normal(0.0, 10.0, 10_000)
    s_x, w_e = effective_width(projections)
    assert abs(w_e - 41.33) / 41.33 < 0.05

    # closed-form synthetic study: A=100 pt, MT=1 s, sigma=10 noise
    a_mean = 100.0
    id_e = effective_id(a_mean, w_e)
    tp = throughput(id_e, 1.0)
    assert abs(tp - 1.77394) / 1.77394 < 0.02
    report(f"estimator convergence: W_e={w_e:.3f} (within 5% of 41.33), "
           f"TP={tp:.4f} (within 2% of 1.77394)")


@pytest.fixture(scope="module")
def study_run(tmp_path_factory):
    def run(tag):
        root = tmp_path_factory.mktemp(f"study_{tag}")
        traces = root / "traces"
        events = root / "events"
        csvs = root / "csv"
        events.mkdir()
        start = time.perf_counter()
        assert cli_main(["synth", "--participants", "27", "--seed", "7",
                         "--out", str(traces)]) == 0
        for name in sorted(os.listdir(traces)):
            assert cli_main(["replay", "--trace", str(traces / name),
                             "--out", str(events / (name[:-6] + ".events"))]) == 0
        assert cli_main(["analyze", "--events", str(events), "--out", str(csvs)]) == 0
        return csvs, time.perf_counter() - start
    return run


def test_study_structure_reproduction(study_run):
    csvs, elapsed = study_run("a")
    trials = (csvs / "trials.csv").read_text().splitlines()
    sequences = (csvs / "sequences.csv").read_text().splitlines()
    assert len(trials) - 1 == 2835   # 27 participants x 3 distances x (20+15)
    assert len(sequences) - 1 == 162  # 27 x 3 x 2
    assert elapsed < 60.0

    csvs2, _ = study_run("b")
    for name in ("trials.csv", "sequences.csv", "eigen.csv", "boxes.csv"):
        assert (csvs / name).read_bytes() == (csvs2 / name).read_bytes()
    report(f"study structure: 2835 trial rows, 162 sequence rows, "
           f"byte-identical reruns, pipeline {elapsed:.1f}s")


def test_eigen_recovery():
    layout = build_layout("alphabets")
    worst = 0.0
    for trial, label in enumerate(layout.labels):
        rng = trial_rng(5, "eigen", "mid", trial)
        center = layout.center_of(label)
        noise = anisotropic_noise(rng, 1000, 8.0, angle_deg=30.0, ratio=4.0)
        pts = np.asarray(center) + noise
        out = covariance_eigen(pts)
        angle = math.degrees(math.atan2(out.eigenvectors[0][1], out.eigenvectors[0][0]))
        worst = max(worst, abs(angle - 30.0))
        c = np.array([[out.cov[0], out.cov[1]], [out.cov[1], out.cov[2]]])
        assert abs(sum(out.eigenvalues) - c.trace()) < 1e-9
    assert worst < 3.0
    report(f"eigen recovery: principal axis within {worst:.2f} deg of 30 deg, "
           "eigenvalue sum = covariance trace < 1e-9")


def test_service_offline_equivalence():
    trace = synth_trace(build_layout("numbers"),
                        MotionParams(seed=31, noise_sigma_pt=3.0),
                        participant="p01", distance="near")
    offline = replay(trace)
    expected = []
    for tag, item in offline.items:
        if tag == "event":
            expected.append({"type": "event", **event_to_dict(item)})
        else:
            expected.append({"type": "trial", **trial_to_dict(item)})

    meta = trace.meta
    hello = {"type": "hello", "mode": "test", "participant": meta["participant"],
             "distance": meta["distance"], "layout": meta["layout"],
             "select_kind": meta["select_kind"], "glance_ms": meta["glance_ms"],
             "gaze_ms": meta["gaze_ms"], "alpha": meta["alpha"],
             "screen": meta["screen"]}
    client = TestClient(create_app())
    got = []
    with client.websocket_connect("/session") as ws:
        ws.send_text(json.dumps(hello))
        ws.receive_text()  # phase
        for i in range(len(trace)):
            ws.send_text(json.dumps({"type": "pose", "t": trace.t[i],
                                     "m": trace.w[i].reshape(16).tolist()}))
        ws.send_text(json.dumps({"type": "end"}))
        while True:
            try:
                msg = json.loads(ws.receive_text())
            except Exception:
                break
            if msg["type"] in ("event", "trial"):
                got.append(msg)
    assert got == expected
    report(f"service/offline equivalence: {len(expected)} records match field-for-field")
