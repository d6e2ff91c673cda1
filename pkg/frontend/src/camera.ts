/** Orbit camera for wireframe scenes.  3D positions are projected
 * orthographically onto the screen basis; 2D scenes pass through. */

export interface Camera {
  yaw: number;
  pitch: number;
  scale: number;
}

export const DEFAULT_CAMERA: Camera = { yaw: 0.5, pitch: 0.35, scale: 1 };

export interface Basis {
  u: [number, number, number];
  v: [number, number, number];
  w: [number, number, number];
}

/** Right-handed orthonormal screen basis: u is screen-x, v screen-y,
 * w points from the scene toward the eye. */
export function basis(cam: Camera): Basis {
  const cy = Math.cos(cam.yaw);
  const sy = Math.sin(cam.yaw);
  const cp = Math.cos(cam.pitch);
  const sp = Math.sin(cam.pitch);
  const w: [number, number, number] = [cp * cy, cp * sy, sp];
  const u: [number, number, number] = [-sy, cy, 0];
  const v: [number, number, number] = [
    w[1] * u[2] - w[2] * u[1],
    w[2] * u[0] - w[0] * u[2],
    w[0] * u[1] - w[1] * u[0],
  ];
  return { u, v, w };
}

export function project(cam: Camera, p: number[]): [number, number] {
  if (p.length === 2) {
    return [p[0]! * cam.scale, p[1]! * cam.scale];
  }
  const { u, v } = basis(cam);
  const x = p[0]! * u[0] + p[1]! * u[1] + p[2]! * u[2];
  const y = p[0]! * v[0] + p[1]! * v[1] + p[2]! * v[2];
  return [x * cam.scale, y * cam.scale];
}

export function rotate(cam: Camera, dyaw: number, dpitch: number): Camera {
  const limit = Math.PI / 2 - 0.01;
  return {
    yaw: cam.yaw + dyaw,
    pitch: Math.max(-limit, Math.min(limit, cam.pitch + dpitch)),
    scale: cam.scale,
  };
}

/** Screen displacement expressed in scene coordinates: the vector a node
 * appears to move by when dragged (dx, dy) pixels.  For a 2D scene this is
 * the plane displacement itself; in 3D it moves within the screen plane. */
export function dragVector(
  cam: Camera,
  dim: 2 | 3,
  dx: number,
  dy: number,
): number[] {
  if (dim === 2) return [dx / cam.scale, dy / cam.scale];
  const { u, v } = basis(cam);
  return [0, 1, 2].map(
    (i) => (dx * u[i]! + dy * v[i]!) / cam.scale,
  );
}
