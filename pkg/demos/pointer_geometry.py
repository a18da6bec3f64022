"""Walk through the head-pose to cursor mapping.

A head pose is a 4x4 world transform. The engine casts a forward ray from
the head through the screen plane (z = 0) and converts the hit point to
screen points. This script builds a few poses by hand, maps them, and then
shows the inverse construction (a transform that lands on a requested
pixel) round-tripping to numerical precision.

Run: python3 demos/pointer_geometry.py
"""

import numpy as np

from headpoint import (
    HeadModel,
    ScreenGeometry,
    pointer_from_pose,
    pointer_path,
    transforms_for_screen_points,
)
from headpoint.geometry import Pose

screen = ScreenGeometry()
head = HeadModel()

print(f"screen: {screen.width_pt:.0f} x {screen.height_pt:.0f} pt")
print()

# A level head straight in front of the screen center maps to the center.
w = np.eye(4)
w[2, 3] = 0.4318  # 17 inches away
cursor = pointer_from_pose(head, Pose(t=0.0, w=w), screen)
print(f"level head at z=0.4318 m -> ({cursor.x:.2f}, {cursor.y:.2f}) pt")

# Turning the head 10 degrees to the left sweeps the cursor left; the
# lateral offset on the plane is z * tan(yaw).
yaw = np.radians(10.0)
w = np.eye(4)
w[0, 0] = w[2, 2] = np.cos(yaw)
w[0, 2] = np.sin(yaw)
w[2, 0] = -np.sin(yaw)
w[2, 3] = 0.4318
cursor = pointer_from_pose(head, Pose(t=0.0, w=w), screen)
print(f"10 deg yaw              -> ({cursor.x:.2f}, {cursor.y:.2f}) pt "
      f"(offset {0.4318 * np.tan(yaw) * 1000:.1f} mm on the plane)")
print()

# The inverse: ask for transforms that land on a grid of pixels, push them
# back through the forward mapping, and measure the error.
rng = np.random.default_rng(42)
xs = rng.uniform(0.0, screen.width_pt, 500)
ys = rng.uniform(0.0, screen.height_pt, 500)
for depth in (0.3302, 0.4318, 0.5334):
    transforms = transforms_for_screen_points(xs, ys, (0.0, 0.0, depth), screen)
    x, y, in_bounds, valid = pointer_path(transforms, head, screen)
    err = max(np.abs(x - xs).max(), np.abs(y - ys).max())
    print(f"depth {depth:.4f} m: 500-point round trip, max error {err:.2e} pt")
