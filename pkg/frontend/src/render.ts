// Canvas rendering: the scene in a top-down orthographic view plus result
// overlays (density under the scene, one trajectory polyline per agent).

import type { Camera, EditorState } from "./editor.js";
import type { ResultBundle, Scene, Vec2 } from "./types.js";
import { densityImageBytes } from "./colormap.js";
import { rectCorners } from "./scene.js";

export interface Viewport {
  width: number;
  height: number;
}

export function worldToScreen(camera: Camera, view: Viewport, p: Vec2): [number, number] {
  return [
    view.width / 2 + (p.x - camera.center.x) * camera.zoom,
    view.height / 2 - (p.y - camera.center.y) * camera.zoom,
  ];
}

export function screenToWorld(camera: Camera, view: Viewport, sx: number, sy: number): Vec2 {
  return {
    x: camera.center.x + (sx - view.width / 2) / camera.zoom,
    y: camera.center.y - (sy - view.height / 2) / camera.zoom,
  };
}

/** One polyline per agent, in world coordinates. */
export function trajectoryPolylines(bundle: ResultBundle): [number, number][][] {
  return bundle.result.agents.map((agent) => agent.trajectory);
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  state: EditorState,
  view: Viewport,
): void {
  const { scene, camera } = state;
  ctx.fillStyle = "#20242b";
  ctx.fillRect(0, 0, view.width, view.height);

  const toScreen = (p: Vec2) => worldToScreen(camera, view, p);

  // world floor
  const [wx0, wy0] = toScreen({ x: 0, y: scene.world.height });
  ctx.fillStyle = "#f4f2ec";
  ctx.fillRect(wx0, wy0, scene.world.width * camera.zoom, scene.world.height * camera.zoom);

  // density overlay under the objects
  if (state.lastResult && state.overlays.density) {
    drawDensity(ctx, state.lastResult, camera, view);
  }

  // grid lines every 5 m
  ctx.strokeStyle = "rgba(0,0,0,0.08)";
  ctx.lineWidth = 1;
  for (let x = 0; x <= scene.world.width; x += 5) {
    const [sx, sy0] = toScreen({ x, y: 0 });
    const [, sy1] = toScreen({ x, y: scene.world.height });
    ctx.beginPath();
    ctx.moveTo(sx, sy0);
    ctx.lineTo(sx, sy1);
    ctx.stroke();
  }
  for (let y = 0; y <= scene.world.height; y += 5) {
    const [sx0, sy] = toScreen({ x: 0, y });
    const [sx1] = toScreen({ x: scene.world.width, y });
    ctx.beginPath();
    ctx.moveTo(sx0, sy);
    ctx.lineTo(sx1, sy);
    ctx.stroke();
  }

  // obstacles: red for editable, darker red for preset-owned
  for (const o of scene.obstacles) {
    const corners = rectCorners(o).map(([x, y]) => toScreen({ x, y }));
    ctx.beginPath();
    ctx.moveTo(corners[0]![0], corners[0]![1]);
    for (const [sx, sy] of corners.slice(1)) ctx.lineTo(sx, sy);
    ctx.closePath();
    ctx.fillStyle = o.locked ? "#8c2f2f" : "#d04a4a";
    ctx.fill();
    if (state.selection === o.id) {
      ctx.strokeStyle = "#ffd75e";
      ctx.lineWidth = 2;
      ctx.stroke();
    }
  }

  // spawners: blue squares
  for (const sp of scene.spawners) {
    const [sx, sy] = toScreen({ x: sp.origin.x, y: sp.origin.y + sp.height });
    ctx.fillStyle = "#3a6fd8";
    ctx.fillRect(sx, sy, sp.width * camera.zoom, sp.height * camera.zoom);
    ctx.fillStyle = "#ffffff";
    ctx.font = "11px sans-serif";
    ctx.fillText(`${sp.agent_count}`, sx + 3, sy + 12);
    if (state.selection === sp.id) {
      ctx.strokeStyle = "#ffd75e";
      ctx.lineWidth = 2;
      ctx.strokeRect(sx, sy, sp.width * camera.zoom, sp.height * camera.zoom);
    }
    // goal link hint for the selected spawner
    if (state.selection === sp.id && sp.goal_id) {
      const target = scene.goals.find((g) => g.id === sp.goal_id);
      if (target) {
        const [gx, gy] = toScreen(target.center);
        ctx.strokeStyle = "rgba(58,111,216,0.7)";
        ctx.setLineDash([6, 4]);
        ctx.beginPath();
        ctx.moveTo(sx + (sp.width * camera.zoom) / 2, sy + (sp.height * camera.zoom) / 2);
        ctx.lineTo(gx, gy);
        ctx.stroke();
        ctx.setLineDash([]);
      }
    }
  }

  // goals: green circles
  for (const g of scene.goals) {
    const [sx, sy] = toScreen(g.center);
    ctx.beginPath();
    ctx.arc(sx, sy, Math.max(3, g.radius * camera.zoom), 0, Math.PI * 2);
    ctx.fillStyle = "#3fa34d";
    ctx.fill();
    if (state.selection === g.id) {
      ctx.strokeStyle = "#ffd75e";
      ctx.lineWidth = 2;
      ctx.stroke();
    }
  }

  // trajectories on top
  if (state.lastResult && state.overlays.trajectories) {
    ctx.lineWidth = 1;
    ctx.strokeStyle = "#c81e1e";
    for (const line of trajectoryPolylines(state.lastResult)) {
      if (line.length < 2) continue;
      ctx.beginPath();
      const [x0, y0] = toScreen({ x: line[0]![0], y: line[0]![1] });
      ctx.moveTo(x0, y0);
      for (const [x, y] of line.slice(1)) {
        const [sx, sy] = toScreen({ x, y });
        ctx.lineTo(sx, sy);
      }
      ctx.stroke();
    }
  }
}

function drawDensity(
  ctx: CanvasRenderingContext2D,
  bundle: ResultBundle,
  camera: Camera,
  view: Viewport,
): void {
  const d = bundle.density;
  const bytes = densityImageBytes(d.counts, d.cols, d.rows);
  const image = new ImageData(bytes, d.cols, d.rows);
  const off = new OffscreenCanvas(d.cols, d.rows);
  const offCtx = off.getContext("2d")!;
  offCtx.putImageData(image, 0, 0);
  const [sx, sy] = worldToScreen(camera, view, { x: 0, y: d.rows * d.cell_size });
  const w = d.cols * d.cell_size * camera.zoom;
  const h = d.rows * d.cell_size * camera.zoom;
  ctx.imageSmoothingEnabled = false;
  ctx.save();
  // density row 0 sits at world y=0, i.e. the bottom: flip vertically
  ctx.translate(sx, sy + h);
  ctx.scale(1, -1);
  ctx.drawImage(off, 0, 0, w, h);
  ctx.restore();
}
