// Preset geometry mirror. The service serves the same tables from
// GET /api/presets; refreshPresetTables() can overwrite the mirror at
// startup so the two can never drift.

import type { ObstacleRect, PresetInstance, PresetKind, Scene, Vec2 } from "./types.js";
import { nextId } from "./scene.js";

export interface PresetWall {
  dx: number;
  dy: number;
  width: number;
  height: number;
  rotation: number;
}

export const PRESET_TABLES: Record<PresetKind, PresetWall[]> = {
  corridor: [
    { dx: 0, dy: 3, width: 12, height: 2, rotation: 0 },
    { dx: 0, dy: -3, width: 12, height: 2, rotation: 0 },
  ],
  bottleneck: [
    { dx: -4.75, dy: 0, width: 8, height: 2, rotation: 0 },
    { dx: 4.75, dy: 0, width: 8, height: 2, rotation: 0 },
  ],
  four_pillars: [
    { dx: -5, dy: -5, width: 3, height: 3, rotation: 0 },
    { dx: -5, dy: 5, width: 3, height: 3, rotation: 0 },
    { dx: 5, dy: -5, width: 3, height: 3, rotation: 0 },
    { dx: 5, dy: 5, width: 3, height: 3, rotation: 0 },
  ],
  t_junction: [
    { dx: 0, dy: 3, width: 16, height: 2, rotation: 0 },
    { dx: -5, dy: -3, width: 6, height: 2, rotation: 0 },
    { dx: 5, dy: -3, width: 6, height: 2, rotation: 0 },
    { dx: -3, dy: -6.5, width: 2, height: 5, rotation: 0 },
    { dx: 3, dy: -6.5, width: 2, height: 5, rotation: 0 },
  ],
  crossing: [
    { dx: -5, dy: -5, width: 6, height: 6, rotation: 0 },
    { dx: -5, dy: 5, width: 6, height: 6, rotation: 0 },
    { dx: 5, dy: -5, width: 6, height: 6, rotation: 0 },
    { dx: 5, dy: 5, width: 6, height: 6, rotation: 0 },
  ],
};

export const PRESET_KINDS = Object.keys(PRESET_TABLES) as PresetKind[];

/** Replace the mirror with the tables the service reports. */
export function refreshPresetTables(catalog: { kinds: { kind: string; walls: PresetWall[] }[] }): void {
  for (const entry of catalog.kinds) {
    if (entry.kind in PRESET_TABLES) {
      PRESET_TABLES[entry.kind as PresetKind] = entry.walls;
    }
  }
}

export function instantiatePreset(
  scene: Scene,
  kind: PresetKind,
  anchor: Vec2,
): { instance: PresetInstance; walls: ObstacleRect[] } {
  const pid = nextId(scene, "p");
  const walls = PRESET_TABLES[kind].map((w, i) => ({
    id: `${pid}_w${i}`,
    center: { x: anchor.x + w.dx, y: anchor.y + w.dy },
    width: w.width,
    height: w.height,
    rotation: w.rotation,
    locked: true,
  }));
  return {
    instance: { id: pid, kind, anchor: { ...anchor }, obstacle_ids: walls.map((w) => w.id) },
    walls,
  };
}

/** Every wall corner must stay inside the world for placement to be legal. */
export function presetFits(scene: Scene, kind: PresetKind, anchor: Vec2): boolean {
  for (const w of PRESET_TABLES[kind]) {
    const cx = anchor.x + w.dx;
    const cy = anchor.y + w.dy;
    const rad = (w.rotation * Math.PI) / 180;
    const c = Math.cos(rad);
    const s = Math.sin(rad);
    for (const [lx, ly] of [
      [-w.width / 2, -w.height / 2],
      [w.width / 2, -w.height / 2],
      [w.width / 2, w.height / 2],
      [-w.width / 2, w.height / 2],
    ] as [number, number][]) {
      const px = cx + c * lx - s * ly;
      const py = cy + s * lx + c * ly;
      if (px < 0 || px > scene.world.width || py < 0 || py > scene.world.height) return false;
    }
  }
  return true;
}
