// Pointer-device pose synthesis.
//
// The service maps a 4x4 head transform to a cursor by casting a ray from
// the transform origin along its -z axis onto the screen plane (z = 0) and
// converting the hit point through NDC to screen points. To steer that
// cursor with a mouse we invert the mapping: given the desired screen
// point and a head position, build the yaw/pitch rotation whose forward
// ray lands exactly there. forwardMap implements the service's mapping so
// tests can verify the round trip without a server.

import type { ScreenProfile } from "./protocol.js";

export const DEFAULT_SCREEN: ScreenProfile = {
  width_pt: 375,
  height_pt: 812,
  meters_per_ndc_x: 0.3,
  meters_per_ndc_y: (0.3 * 812) / 375,
};

export type Vec3 = [number, number, number];

/** Row-major 16-element transform whose forward ray hits (x, y) pt. */
export function poseFromPointer(
  x: number,
  y: number,
  headPosition: Vec3,
  screen: ScreenProfile = DEFAULT_SCREEN,
): number[] {
  const [hx, hy, hz] = headPosition;
  if (hz <= 0) throw new Error("head must be in front of the screen (z > 0)");

  // screen point -> plane point in meters (NDC origin is top-left)
  const bx = (x / screen.width_pt - 0.5) * screen.meters_per_ndc_x;
  const by = (0.5 - y / screen.height_pt) * screen.meters_per_ndc_y;

  // unit direction from the head to the plane point
  let ux = bx - hx;
  let uy = by - hy;
  let uz = -hz;
  const norm = Math.sqrt(ux * ux + uy * uy + uz * uz);
  ux /= norm;
  uy /= norm;
  uz /= norm;

  // decompose into yaw about y then pitch about x (zero roll)
  const sp = uy;
  const cp = Math.sqrt(1 - sp * sp);
  const yaw = Math.atan2(-ux, -uz);
  const sy = Math.sin(yaw);
  const cy = Math.cos(yaw);

  return [
    cy, sy * sp, sy * cp, hx,
    0, cp, -sp, hy,
    -sy, cy * sp, cy * cp, hz,
    0, 0, 0, 1,
  ];
}

/**
 * The service's forward mapping (transform -> screen point), for tests.
 * Returns null when the ray misses the plane.
 */
export function forwardMap(
  m: number[],
  screen: ScreenProfile = DEFAULT_SCREEN,
): { x: number; y: number; inBounds: boolean } | null {
  if (m.length !== 16) throw new Error("expected 16 matrix entries");
  const px = m[3];
  const py = m[7];
  const pz = m[11];
  // stylus direction is the rotated -z axis
  const dx = -m[2];
  const dy = -m[6];
  const dz = -m[10];
  if (Math.abs(dz) <= 1e-9) return null;
  const t = -pz / dz;
  if (t < 0) return null;
  const bx = px + dx * t;
  const by = py + dy * t;
  const ndcX = 0.5 + bx / screen.meters_per_ndc_x;
  const ndcY = 0.5 - by / screen.meters_per_ndc_y;
  const inBounds = ndcX >= 0 && ndcX <= 1 && ndcY >= 0 && ndcY <= 1;
  return {
    x: Math.min(Math.max(ndcX, 0), 1) * screen.width_pt,
    y: Math.min(Math.max(ndcY, 0), 1) * screen.height_pt,
    inBounds,
  };
}
