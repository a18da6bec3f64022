"""headpoint: hands-free pointing engine.

Head poses stream in as 4x4 world transforms; a virtual-stylus ray is
intersected with the screen plane to drive a cursor, a dwell engine turns
hovering into glance/gaze selections, trial sessions replicate the two
target-acquisition tests, and the analysis module evaluates throughput with
the standard-deviation Fitts-law method.
"""

from .geometry import (
    DEFAULT_SCREEN,
    HeadModel,
    Pose,
    PoseError,
    ScreenGeometry,
    ScreenPoint,
    SmoothingFilter,
    intersect_screen,
    ndc_to_screen,
    pointer_from_pose,
    pointer_path,
    pose_for_screen_point,
    transforms_for_screen_points,
    update_ray,
)
from .dwell import DwellEngine, DwellError, GazeEvent, Widget, WidgetRegistry
from .trials import (
    DISTANCE_DEPTH_M,
    NUMBERS_SEQUENCE,
    Layout,
    Session,
    SessionConfig,
    TrialRecord,
    build_layout,
    layout_document,
)
from .analysis import (
    BoxStats,
    EigenStats,
    SequenceStats,
    box_stats,
    covariance_eigen,
    effective_id,
    effective_width,
    project_onto_axis,
    sequence_stats,
    throughput,
)
from .synth import MotionParams, min_jerk, synth_trace
from .traces import EventLog, Trace, load_events, load_trace, save_events, save_trace
from .replay import replay

__all__ = [name for name in dir() if not name.startswith("_")]
