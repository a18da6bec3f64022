"""Dwell selection on a two-button screen.

A cursor that rests inside a widget accumulates dwell time: a "glance"
selection fires after 1 s and a "gaze" after 2 s. Leaving the widget
resets it; a selection cannot repeat until the cursor has exited and
re-entered. This script scripts a cursor path by hand and prints the
resulting event stream.

Run: python3 demos/dwell_events.py
"""

from headpoint import DwellEngine, ScreenPoint, Widget, WidgetRegistry

registry = WidgetRegistry(375.0, 812.0)
registry.register(Widget(id="yes", rect=(40.0, 300.0, 120.0, 120.0), label="Yes"))
registry.register(Widget(id="no", rect=(215.0, 300.0, 120.0, 120.0), label="No"))
engine = DwellEngine(registry)

# 16 ms frames: hover "yes" for 1.2 s, wander off, hover "no" for 2.2 s.
path = []
path += [(100.0, 360.0)] * 75    # inside "yes" for 1.2 s
path += [(187.0, 360.0)] * 10    # the gap between the buttons
path += [(275.0, 360.0)] * 140   # inside "no" for 2.24 s

events = []
for i, (x, y) in enumerate(path):
    events.extend(engine.process_frame(i * 16.0, ScreenPoint(x, y)))

for e in events:
    if e.kind == "progress":
        continue  # one per hover frame; too chatty for a demo
    print(f"t={e.t:7.0f} ms  {e.kind:<7} {e.widget_id}")

progress = [e for e in events if e.kind == "progress"]
print(f"\n({len(progress)} progress ticks suppressed; they drive the UI fill ring)")
