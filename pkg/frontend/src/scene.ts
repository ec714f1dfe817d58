// Scene construction, canonical serialization (byte-compatible with the
// service's format), structural parsing, and the client-side limits mirror.

import type {
  Goal,
  ObstacleRect,
  PresetInstance,
  Scene,
  SpawnerArea,
  ValidationIssue,
  Vec2,
  WorldExtents,
} from "./types.js";

export const SCENE_VERSION = "1";
export const DEFAULT_WORLD: WorldExtents = { width: 30, height: 30 };
export const SPAWNER_SIDE = 2.0;
export const GOAL_RADIUS = 0.5;
export const DEFAULT_OBSTACLE_SIDE = 2.0;
export const DEFAULT_AGENT_COUNT = 1;

// Mirrors the service-side SceneLimits defaults.
export const LIMITS = {
  maxAgentsPerSpawner: 10,
  maxAgentsTotal: 100,
  obstacleMinSide: 2.0,
  obstacleMaxSide: 20.0,
};

export function emptyScene(): Scene {
  return {
    version: SCENE_VERSION,
    world: { ...DEFAULT_WORLD },
    spawners: [],
    goals: [],
    obstacles: [],
    presets: [],
  };
}

export function normalizeRotation(deg: number): number {
  return ((deg % 360) + 360) % 360;
}

export function nextId(scene: Scene, prefix: "s" | "g" | "o" | "p"): string {
  const used = new Set<string>();
  for (const s of scene.spawners) used.add(s.id);
  for (const g of scene.goals) used.add(g.id);
  for (const o of scene.obstacles) used.add(o.id);
  for (const p of scene.presets) used.add(p.id);
  let n = 1;
  while (used.has(`${prefix}${n}`)) n += 1;
  return `${prefix}${n}`;
}

export function rectCorners(o: ObstacleRect): [number, number][] {
  const theta = (o.rotation * Math.PI) / 180;
  const c = Math.cos(theta);
  const s = Math.sin(theta);
  const hx = o.width / 2;
  const hy = o.height / 2;
  const local: [number, number][] = [
    [-hx, -hy],
    [hx, -hy],
    [hx, hy],
    [-hx, hy],
  ];
  return local.map(([lx, ly]) => [o.center.x + c * lx - s * ly, o.center.y + s * lx + c * ly]);
}

export function insideWorld(world: WorldExtents, p: Vec2): boolean {
  return p.x >= 0 && p.x <= world.width && p.y >= 0 && p.y <= world.height;
}

export function totalAgents(scene: Scene): number {
  return scene.spawners.reduce((acc, s) => acc + s.agent_count, 0);
}

/** Client-side mirror of the service validation (used to gate Run/Create). */
export function validateSceneClient(scene: Scene): ValidationIssue[] {
  const issues: ValidationIssue[] = [];
  const err = (object_id: string | null, message: string) =>
    issues.push({ severity: "error", object_id, message });

  const goalIds = new Set(scene.goals.map((g) => g.id));
  for (const sp of scene.spawners) {
    if (sp.agent_count > LIMITS.maxAgentsPerSpawner) {
      err(sp.id, `agent_count ${sp.agent_count} exceeds ${LIMITS.maxAgentsPerSpawner}`);
    }
    if (
      sp.origin.x < 0 ||
      sp.origin.y < 0 ||
      sp.origin.x + sp.width > scene.world.width ||
      sp.origin.y + sp.height > scene.world.height
    ) {
      err(sp.id, "spawner area extends outside world extents");
    }
    if (sp.goal_id === null) err(sp.id, "spawner has no goal");
    else if (!goalIds.has(sp.goal_id)) err(sp.id, `spawner references missing goal '${sp.goal_id}'`);
  }

  const total = totalAgents(scene);
  if (total > LIMITS.maxAgentsTotal) err(null, `total agents ${total} exceed ${LIMITS.maxAgentsTotal}`);

  for (const g of scene.goals) {
    if (!insideWorld(scene.world, g.center)) err(g.id, "goal center outside world extents");
  }

  for (const o of scene.obstacles) {
    if (!o.locked) {
      const small = Math.min(o.width, o.height);
      const large = Math.max(o.width, o.height);
      if (small < LIMITS.obstacleMinSide) err(o.id, `side ${small} below ${LIMITS.obstacleMinSide} m minimum`);
      if (large > LIMITS.obstacleMaxSide) err(o.id, `side ${large} above ${LIMITS.obstacleMaxSide} m maximum`);
    }
    for (const [cx, cy] of rectCorners(o)) {
      if (cx < 0 || cx > scene.world.width || cy < 0 || cy > scene.world.height) {
        err(o.id, "obstacle footprint extends outside world extents");
        break;
      }
    }
  }
  return issues;
}

// -- canonical serialization --------------------------------------------------

// Python's repr: integral floats carry a trailing ".0", everything else uses
// the shortest round-trip decimal (which String() also produces).
function fmtFloat(v: number): string {
  if (Number.isInteger(v) && Math.abs(v) < 1e15) {
    return Object.is(v, -0) ? "-0.0" : `${v.toFixed(1)}`;
  }
  return String(v);
}

function fmtInt(v: number): string {
  return String(v);
}

function fmtString(v: string): string {
  return JSON.stringify(v);
}

// A tiny typed JSON tree lets floats and integers format differently, and
// the emitter reproduces two-space-indent layout byte for byte.
type CNode =
  | { t: "str"; v: string }
  | { t: "float"; v: number }
  | { t: "int"; v: number }
  | { t: "bool"; v: boolean }
  | { t: "null" }
  | { t: "obj"; entries: [string, CNode][] }
  | { t: "arr"; items: CNode[] };

const F = (v: number): CNode => ({ t: "float", v });
const I = (v: number): CNode => ({ t: "int", v });
const S = (v: string): CNode => ({ t: "str", v });

function emit(node: CNode, depth: number): string {
  switch (node.t) {
    case "str":
      return fmtString(node.v);
    case "float":
      return fmtFloat(node.v);
    case "int":
      return fmtInt(node.v);
    case "bool":
      return node.v ? "true" : "false";
    case "null":
      return "null";
    case "obj": {
      if (node.entries.length === 0) return "{}";
      const pad = "  ".repeat(depth + 1);
      const body = node.entries
        .map(([k, v]) => `${pad}${fmtString(k)}: ${emit(v, depth + 1)}`)
        .join(",\n");
      return `{\n${body}\n${"  ".repeat(depth)}}`;
    }
    case "arr": {
      if (node.items.length === 0) return "[]";
      const pad = "  ".repeat(depth + 1);
      const body = node.items.map((v) => `${pad}${emit(v, depth + 1)}`).join(",\n");
      return `[\n${body}\n${"  ".repeat(depth)}]`;
    }
  }
}

function vecNode(v: Vec2): CNode {
  return { t: "obj", entries: [["x", F(v.x)], ["y", F(v.y)]] };
}

function sortById<T extends { id: string }>(items: T[]): T[] {
  return [...items].sort((a, b) => (a.id < b.id ? -1 : a.id > b.id ? 1 : 0));
}

/** Canonical scene JSON, byte-identical to the service's serializer. */
export function serializeScene(scene: Scene): string {
  const doc: CNode = {
    t: "obj",
    entries: [
      ["version", S(scene.version)],
      ["world", { t: "obj", entries: [["width", F(scene.world.width)], ["height", F(scene.world.height)]] }],
      [
        "spawners",
        {
          t: "arr",
          items: sortById(scene.spawners).map((s): CNode => ({
            t: "obj",
            entries: [
              ["id", S(s.id)],
              ["origin", vecNode(s.origin)],
              ["width", F(s.width)],
              ["height", F(s.height)],
              ["agent_count", I(s.agent_count)],
              ["goal_id", s.goal_id === null ? { t: "null" } : S(s.goal_id)],
            ],
          })),
        },
      ],
      [
        "goals",
        {
          t: "arr",
          items: sortById(scene.goals).map((g): CNode => ({
            t: "obj",
            entries: [
              ["id", S(g.id)],
              ["center", vecNode(g.center)],
              ["radius", F(g.radius)],
            ],
          })),
        },
      ],
      [
        "obstacles",
        {
          t: "arr",
          items: sortById(scene.obstacles).map((o): CNode => ({
            t: "obj",
            entries: [
              ["id", S(o.id)],
              ["center", vecNode(o.center)],
              ["width", F(o.width)],
              ["height", F(o.height)],
              ["rotation", F(o.rotation)],
              ["locked", { t: "bool", v: o.locked }],
            ],
          })),
        },
      ],
      [
        "presets",
        {
          t: "arr",
          items: sortById(scene.presets).map((p): CNode => ({
            t: "obj",
            entries: [
              ["id", S(p.id)],
              ["kind", S(p.kind)],
              ["anchor", vecNode(p.anchor)],
              ["obstacle_ids", { t: "arr", items: p.obstacle_ids.map(S) }],
            ],
          })),
        },
      ],
    ],
  };
  return emit(doc, 0) + "\n";
}

// -- structural parsing ---------------------------------------------------------

export type ParseOutcome = { ok: true; scene: Scene } | { ok: false; error: string };

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function readVec(v: unknown, path: string): Vec2 {
  if (!isRecord(v) || typeof v.x !== "number" || typeof v.y !== "number") {
    throw new Error(`${path}: expected {x, y}`);
  }
  if (!Number.isFinite(v.x) || !Number.isFinite(v.y)) throw new Error(`${path}: non-finite coordinates`);
  return { x: v.x, y: v.y };
}

function readArray(v: unknown, path: string): unknown[] {
  if (v === undefined) return [];
  if (!Array.isArray(v)) throw new Error(`${path}: expected an array`);
  return v;
}

/** Parse a scene document the way the service would (structure, ids, refs). */
export function parseScene(text: string): ParseOutcome {
  try {
    const raw: unknown = JSON.parse(text);
    if (!isRecord(raw)) throw new Error("scene: expected an object");
    if (raw.version !== SCENE_VERSION) {
      throw new Error(`unsupported scene version '${String(raw.version)}'`);
    }
    if (!isRecord(raw.world) || typeof raw.world.width !== "number" || typeof raw.world.height !== "number") {
      throw new Error("scene.world: expected {width, height}");
    }
    if (!(raw.world.width > 0) || !(raw.world.height > 0)) throw new Error("scene.world: extents must be positive");

    const scene = emptyScene();
    scene.world = { width: raw.world.width, height: raw.world.height };

    for (const [i, sd] of readArray(raw.spawners, "scene.spawners").entries()) {
      const path = `scene.spawners[${i}]`;
      if (!isRecord(sd)) throw new Error(`${path}: expected an object`);
      if (typeof sd.id !== "string") throw new Error(`${path}.id: expected a string`);
      if (typeof sd.agent_count !== "number" || !Number.isInteger(sd.agent_count) || sd.agent_count < 1) {
        throw new Error(`${path}.agent_count: expected a positive integer`);
      }
      if (typeof sd.width !== "number" || typeof sd.height !== "number") throw new Error(`${path}: bad size`);
      const goal_id = sd.goal_id === undefined || sd.goal_id === null ? null : sd.goal_id;
      if (goal_id !== null && typeof goal_id !== "string") throw new Error(`${path}.goal_id: expected string or null`);
      scene.spawners.push({
        id: sd.id,
        origin: readVec(sd.origin, `${path}.origin`),
        width: sd.width,
        height: sd.height,
        agent_count: sd.agent_count,
        goal_id,
      });
    }

    for (const [i, gd] of readArray(raw.goals, "scene.goals").entries()) {
      const path = `scene.goals[${i}]`;
      if (!isRecord(gd) || typeof gd.id !== "string" || typeof gd.radius !== "number") {
        throw new Error(`${path}: expected {id, center, radius}`);
      }
      scene.goals.push({ id: gd.id, center: readVec(gd.center, `${path}.center`), radius: gd.radius });
    }

    for (const [i, od] of readArray(raw.obstacles, "scene.obstacles").entries()) {
      const path = `scene.obstacles[${i}]`;
      if (!isRecord(od) || typeof od.id !== "string" || typeof od.width !== "number" || typeof od.height !== "number") {
        throw new Error(`${path}: expected {id, center, width, height}`);
      }
      const rotation = od.rotation === undefined ? 0 : od.rotation;
      if (typeof rotation !== "number") throw new Error(`${path}.rotation: expected a number`);
      const locked = od.locked === undefined ? false : od.locked;
      if (typeof locked !== "boolean") throw new Error(`${path}.locked: expected a boolean`);
      scene.obstacles.push({
        id: od.id,
        center: readVec(od.center, `${path}.center`),
        width: od.width,
        height: od.height,
        rotation: normalizeRotation(rotation),
        locked,
      });
    }

    const kinds = new Set(["corridor", "bottleneck", "four_pillars", "t_junction", "crossing"]);
    for (const [i, pd] of readArray(raw.presets, "scene.presets").entries()) {
      const path = `scene.presets[${i}]`;
      if (!isRecord(pd) || typeof pd.id !== "string" || typeof pd.kind !== "string" || !kinds.has(pd.kind)) {
        throw new Error(`${path}: expected {id, kind, anchor, obstacle_ids}`);
      }
      const ids = readArray(pd.obstacle_ids, `${path}.obstacle_ids`);
      if (!ids.every((v): v is string => typeof v === "string")) {
        throw new Error(`${path}.obstacle_ids: expected strings`);
      }
      scene.presets.push({
        id: pd.id,
        kind: pd.kind as PresetInstance["kind"],
        anchor: readVec(pd.anchor, `${path}.anchor`),
        obstacle_ids: ids,
      });
    }

    for (const coll of [scene.spawners, scene.goals, scene.obstacles, scene.presets] as { id: string }[][]) {
      const seen = new Set<string>();
      for (const item of coll) {
        if (seen.has(item.id)) throw new Error(`duplicate id '${item.id}'`);
        seen.add(item.id);
      }
    }
    const goalIds = new Set(scene.goals.map((g) => g.id));
    for (const sp of scene.spawners) {
      if (sp.goal_id !== null && !goalIds.has(sp.goal_id)) {
        throw new Error(`spawner '${sp.id}' references missing goal '${sp.goal_id}'`);
      }
    }
    const obstacleIds = new Set(scene.obstacles.map((o) => o.id));
    for (const pr of scene.presets) {
      for (const oid of pr.obstacle_ids) {
        if (!obstacleIds.has(oid)) throw new Error(`preset '${pr.id}' references missing obstacle '${oid}'`);
      }
    }
    return { ok: true, scene };
  } catch (exc) {
    return { ok: false, error: exc instanceof Error ? exc.message : String(exc) };
  }
}
