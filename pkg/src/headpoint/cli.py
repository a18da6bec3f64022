"""Command-line harness: synthetic studies, replay, analysis, service.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .analysis import (
    BOXES_HEADER,
    EIGEN_HEADER,
    SEQUENCES_HEADER,
    TRIALS_HEADER,
    AnalysisError,
    box_stats,
    covariance_eigen,
    project_onto_axis,
    sequence_stats,
    write_csv,
)
from .geometry import ScreenGeometry
from .replay import ReplayError, replay
from .synth import MotionParams, SynthError, synth_trace
from .traces import TraceFormatError, load_events, load_trace, save_events, save_trace
from .trials import (
    DISTANCE_DEPTH_M,
    DISTANCE_ORDER,
    LAYOUT_ORDER,
    TrialError,
    build_layout,
    layout_document,
)

USAGE_ERROR = 1
DATA_ERROR = 2

SCREEN_PROFILE_ENV = "HEADPOINT_SCREEN_PROFILE"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def parse_screen(spec: str | None) -> ScreenGeometry:
    """Screen profile 'WxH' from a flag or the HEADPOINT_SCREEN_PROFILE env var."""
    if spec is None:
        spec = os.environ.get(SCREEN_PROFILE_ENV)
    if spec is None:
        return ScreenGeometry()
    try:
        w, h = spec.lower().split("x")
        return ScreenGeometry(width_pt=float(w), height_pt=float(h))
    except ValueError:
        raise _UsageError(f"bad screen profile {spec!r}; expected WIDTHxHEIGHT")


def build_parser() -> _Parser:
    parser = _Parser(prog="headpoint", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate synthetic study traces")
    p.add_argument("--participants", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layout", choices=("numbers", "alphabets", "both"), default="both")
    p.add_argument("--distance", choices=("near", "mid", "far", "all"), default="all")
    p.add_argument("--out", required=True, help="output directory for .trace files")
    p.add_argument("--noise-sigma", type=float, default=4.0)
    p.add_argument("--hold-ms", type=float, default=1200.0)
    p.add_argument("--move-ms-per-pt", type=float, default=1.5)
    p.add_argument("--frame-ms", type=float, default=16.0)
    p.add_argument("--glance-ms", type=float, default=1000.0)
    p.add_argument("--gaze-ms", type=float, default=2000.0)
    p.add_argument("--screen", default=None)

    p = sub.add_parser("replay", help="replay a trace into an event log")
    p.add_argument("--trace", required=True)
    p.add_argument("--out", required=True, help="output .events file")

    p = sub.add_parser("analyze", help="compute Fitts statistics from event logs")
    p.add_argument("--events", required=True, help="directory of .events files")
    p.add_argument("--out", required=True, help="output directory for CSV files")
    p.add_argument("--pooled", action="store_true",
                   help="also pool projections across participants per (distance, layout)")

    p = sub.add_parser("serve", help="run the streaming session service")
    p.add_argument("--listen", default="127.0.0.1:8700")

    p = sub.add_parser("layout", help="dump a layout document")
    p.add_argument("--name", choices=("numbers", "alphabets"), required=True)
    p.add_argument("--screen", default=None)
    p.add_argument("--out", default=None)

    return parser


def cmd_synth(args) -> int:
    screen = parse_screen(args.screen)
    distances = DISTANCE_ORDER if args.distance == "all" else (args.distance,)
    layouts = LAYOUT_ORDER if args.layout == "both" else (args.layout,)
    os.makedirs(args.out, exist_ok=True)
    for i in range(1, args.participants + 1):
        participant = f"p{i:02d}"
        for distance in distances:
            for layout_name in layouts:
                layout = build_layout(layout_name, screen,
                                      glance_ms=args.glance_ms, gaze_ms=args.gaze_ms)
                params = MotionParams(
                    head_depth_m=DISTANCE_DEPTH_M[distance],
                    move_ms_per_pt=args.move_ms_per_pt,
                    dwell_hold_ms=args.hold_ms,
                    noise_sigma_pt=args.noise_sigma,
                    frame_interval_ms=args.frame_ms,
                    seed=args.seed,
                )
                trace = synth_trace(layout, params, participant=participant,
                                    distance=distance, glance_ms=args.glance_ms,
                                    gaze_ms=args.gaze_ms)
                path = os.path.join(args.out, f"{participant}_{distance}_{layout_name}.trace")
                save_trace(trace, path)
    return 0


def cmd_replay(args) -> int:
    trace = load_trace(args.trace)
    log = replay(trace)
    save_events(log, args.out)
    return 0


def _sort_key(meta):
    return (
        meta.get("participant", ""),
        DISTANCE_ORDER.index(meta.get("distance", "mid")),
        LAYOUT_ORDER.index(meta.get("layout", "numbers")),
    )


def cmd_analyze(args) -> int:
    paths = sorted(
        os.path.join(args.events, name)
        for name in os.listdir(args.events)
        if name.endswith(".events")
    )
    if not paths:
        raise TraceFormatError(f"no .events files in {args.events}")
    logs = sorted((load_events(p) for p in paths), key=lambda log: _sort_key(log.meta))

    trial_rows = []
    seq_rows = []
    eigen_points: dict[tuple, list] = {}
    tp_by_group: dict[tuple, list] = {}
    mt_by_group: dict[tuple, list] = {}
    for log in logs:
        meta = log.meta
        key = (meta["participant"], meta["distance"], meta["layout"])
        trials = log.trials
        for r in trials:
            proj = project_onto_axis(r.prev_center, r.target_center, r.selection_point)
            trial_rows.append(key + (
                r.index, r.target_label, r.amplitude_a, r.movement_time_ms,
                r.selection_point[0], r.selection_point[1], proj,
            ))
            eigen_points.setdefault((meta["layout"], r.target_label), []).append(
                r.selection_point)
        for stats in sequence_stats([trials]):
            seq_rows.append(key + (
                stats.n_trials, stats.s_x, stats.w_e, stats.a_mean,
                stats.id_e, stats.mt_mean_s, stats.tp,
            ))
            group = (meta["layout"], meta["distance"])
            tp_by_group.setdefault(group, []).append(stats.tp)
            mt_by_group.setdefault(group, []).append(stats.mt_mean_s)

    os.makedirs(args.out, exist_ok=True)
    write_csv(os.path.join(args.out, "trials.csv"), TRIALS_HEADER, trial_rows)
    write_csv(os.path.join(args.out, "sequences.csv"), SEQUENCES_HEADER, seq_rows)

    eigen_rows = []
    for layout_name in LAYOUT_ORDER:
        layout = build_layout(layout_name)
        for label in layout.labels:
            pts = eigen_points.get((layout_name, label))
            if pts is None or len(pts) < 2:
                continue
            e = covariance_eigen(pts)
            eigen_rows.append((
                layout_name, label, e.mean[0], e.mean[1],
                e.cov[0], e.cov[1], e.cov[2],
                e.eigenvalues[0], e.eigenvalues[1],
                e.eigenvectors[0][0], e.eigenvectors[0][1],
            ))
    write_csv(os.path.join(args.out, "eigen.csv"), EIGEN_HEADER, eigen_rows)

    box_rows = []
    for layout_name in LAYOUT_ORDER:
        for distance in DISTANCE_ORDER:
            group = (layout_name, distance)
            for metric, values in (("tp_bps", tp_by_group.get(group)),
                                   ("mt_s", mt_by_group.get(group))):
                if not values:
                    continue
                b = box_stats(values)
                box_rows.append((layout_name, distance, metric,
                                 b.min, b.q1, b.median, b.q3, b.max, b.mean))
    write_csv(os.path.join(args.out, "boxes.csv"), BOXES_HEADER, box_rows)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.listen.partition(":")
    if not port:
        raise _UsageError(f"bad --listen {args.listen!r}; expected HOST:PORT")
    uvicorn.run(create_app(), host=host, port=int(port), log_level="info")
    return 0


def cmd_layout(args) -> int:
    screen = parse_screen(args.screen)
    doc = layout_document(build_layout(args.name, screen))
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {
    "synth": cmd_synth,
    "replay": cmd_replay,
    "analyze": cmd_analyze,
    "serve": cmd_serve,
    "layout": cmd_layout,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (TraceFormatError, ReplayError, SynthError, TrialError, AnalysisError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
