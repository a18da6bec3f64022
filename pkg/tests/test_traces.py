import numpy as np
import pytest

from headpoint.replay import ReplayError, config_from_meta, replay
from headpoint.synth import MotionParams, synth_trace
from headpoint.traces import (
    EventLog,
    Trace,
    TraceFormatError,
    load_events,
    load_trace,
    save_events,
    save_trace,
)
from headpoint.trials import NUMBERS_SEQUENCE, build_layout


@pytest.fixture(scope="module")
def numbers_trace():
    return synth_trace(build_layout("numbers"), MotionParams(seed=42, noise_sigma_pt=3.0),
                       participant="p01", distance="mid")


class TestTraceRoundTrip:
    def test_lossless(self, numbers_trace, tmp_path):
        path = tmp_path / "a.trace"
        save_trace(numbers_trace, path)
        loaded = load_trace(path)
        assert loaded == numbers_trace

    def test_truncated_frame_reports_line(self, numbers_trace, tmp_path):
        path = tmp_path / "b.trace"
        save_trace(numbers_trace, path)
        lines = path.read_text().splitlines()
        lines[5] = lines[5].rsplit(" ", 3)[0]  # drop entries from frame on line 6
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(TraceFormatError, match=":6:"):
            load_trace(path)

    def test_unknown_version(self, numbers_trace, tmp_path):
        path = tmp_path / "c.trace"
        save_trace(numbers_trace, path)
        text = path.read_text().replace("headpoint-trace v1", "headpoint-trace v9", 1)
        path.write_text(text)
        with pytest.raises(TraceFormatError, match="version"):
            load_trace(path)

    def test_corrupt_pose_identified(self, numbers_trace, tmp_path):
        t = numbers_trace.t.copy()
        w = numbers_trace.w.copy()
        w[100, 0, 0] = 5.0
        path = tmp_path / "d.trace"
        with pytest.raises(Exception, match="frame 100"):
            save_trace(Trace(meta=numbers_trace.meta, t=t, w=w), path)
            load_trace(path)

    def test_non_monotone_rejected(self, numbers_trace, tmp_path):
        t = numbers_trace.t.copy()
        t[10] = t[9] - 5.0
        path = tmp_path / "e.trace"
        save_trace(Trace(meta=numbers_trace.meta, t=t, w=numbers_trace.w), path)
        with pytest.raises(TraceFormatError, match="non-monotone"):
            load_trace(path)


class TestReplay:
    def test_numbers_trace_yields_20_trials(self, numbers_trace):
        log = replay(numbers_trace)
        assert len(log.trials) == 20
        assert [r.target_label for r in log.trials] == list(NUMBERS_SEQUENCE)
        assert log.meta["complete"] is True

    def test_replay_deterministic(self, numbers_trace):
        a = replay(numbers_trace)
        b = replay(numbers_trace)
        assert a.items == b.items

    def test_noise_free_selections_at_centers(self):
        layout = build_layout("numbers")
        trace = synth_trace(layout, MotionParams(seed=0, noise_sigma_pt=0.0))
        log = replay(trace)
        for rec in log.trials:
            assert abs(rec.selection_point[0] - rec.target_center[0]) < 1e-6
            assert abs(rec.selection_point[1] - rec.target_center[1]) < 1e-6

    def test_alphabets_trace_yields_15_trials(self):
        layout = build_layout("alphabets")
        trace = synth_trace(layout, MotionParams(seed=9, noise_sigma_pt=3.0))
        log = replay(trace)
        assert len(log.trials) == 15

    def test_metadata_mismatch_rejected(self, numbers_trace):
        config = config_from_meta(dict(numbers_trace.meta, layout="alphabets"))
        with pytest.raises(ReplayError):
            replay(numbers_trace, config)

    def test_trial_mt_positive_increasing_t(self, numbers_trace):
        log = replay(numbers_trace)
        ts = [r.t_select for r in log.trials]
        assert ts == sorted(ts)
        assert all(r.movement_time_ms > 0 for r in log.trials)


class TestEventLogIO:
    def test_round_trip(self, numbers_trace, tmp_path):
        log = replay(numbers_trace)
        path = tmp_path / "log.events"
        save_events(log, path)
        loaded = load_events(path)
        assert loaded.meta == log.meta
        assert loaded.items == log.items

    def test_byte_stable(self, numbers_trace, tmp_path):
        p1, p2 = tmp_path / "l1.events", tmp_path / "l2.events"
        save_events(replay(numbers_trace), p1)
        save_events(replay(numbers_trace), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_bad_json_reports_line(self, numbers_trace, tmp_path):
        path = tmp_path / "bad.events"
        save_events(replay(numbers_trace), path)
        lines = path.read_text().splitlines()
        lines[3] = "event {broken"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(TraceFormatError, match=":4:"):
            load_events(path)
