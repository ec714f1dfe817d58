// Editor state and the object/general action layer.
//
// Objects: agent spawn areas, goals, obstacles, presets. Object actions:
// create, remove, move, edit — with the gating rules: goals and presets have
// no editing options, preset-owned (locked) obstacles reject edit, move and
// remove individually (the preset instance moves or goes as a whole).

import type { ObstacleRect, PresetKind, ResultBundle, Scene, Vec2 } from "./types.js";
import {
  DEFAULT_AGENT_COUNT,
  DEFAULT_OBSTACLE_SIDE,
  GOAL_RADIUS,
  SPAWNER_SIDE,
  emptyScene,
  nextId,
  normalizeRotation,
  parseScene,
  serializeScene,
  validateSceneClient,
} from "./scene.js";
import { instantiatePreset, presetFits } from "./presets.js";

export type ObjectKind = "agents" | "goals" | "obstacles" | "presets";
export type ObjectAction = "create" | "remove" | "move" | "edit";

export interface Camera {
  center: Vec2;
  zoom: number; // pixels per meter
  speed: number; // pan speed in meters per keypress
}

export interface EditorState {
  scene: Scene;
  selectedTool: ObjectKind;
  selectedAction: ObjectAction;
  selection: string | null;
  camera: Camera;
  lastResult: ResultBundle | null;
  pendingJob: string | null;
  message: string | null;
  overlays: { density: boolean; trajectories: boolean };
}

export function initialState(): EditorState {
  return {
    scene: emptyScene(),
    selectedTool: "agents",
    selectedAction: "create",
    selection: null,
    camera: { center: { x: 15, y: 15 }, zoom: 20, speed: 1.0 },
    lastResult: null,
    pendingJob: null,
    message: null,
    overlays: { density: true, trajectories: true },
  };
}

function withMessage(state: EditorState, message: string): EditorState {
  return { ...state, message };
}

function cloneScene(scene: Scene): Scene {
  return {
    version: scene.version,
    world: { ...scene.world },
    spawners: scene.spawners.map((s) => ({ ...s, origin: { ...s.origin } })),
    goals: scene.goals.map((g) => ({ ...g, center: { ...g.center } })),
    obstacles: scene.obstacles.map((o) => ({ ...o, center: { ...o.center } })),
    presets: scene.presets.map((p) => ({ ...p, anchor: { ...p.anchor }, obstacle_ids: [...p.obstacle_ids] })),
  };
}

export type ObjectRef =
  | { kind: "spawner"; id: string }
  | { kind: "goal"; id: string }
  | { kind: "obstacle"; id: string }
  | { kind: "preset"; id: string };

export function findObject(scene: Scene, id: string): ObjectRef | null {
  if (scene.spawners.some((s) => s.id === id)) return { kind: "spawner", id };
  if (scene.goals.some((g) => g.id === id)) return { kind: "goal", id };
  if (scene.obstacles.some((o) => o.id === id)) return { kind: "obstacle", id };
  if (scene.presets.some((p) => p.id === id)) return { kind: "preset", id };
  return null;
}

function lockedObstacle(scene: Scene, id: string): ObstacleRect | undefined {
  return scene.obstacles.find((o) => o.id === id && o.locked);
}

/** Fields the edit panel offers for an object; empty means not editable. */
export function editableFields(scene: Scene, id: string): string[] {
  const ref = findObject(scene, id);
  if (!ref) return [];
  switch (ref.kind) {
    case "spawner":
      return ["agent_count", "goal_id"];
    case "obstacle":
      return lockedObstacle(scene, id) ? [] : ["width", "height", "rotation"];
    default:
      return []; // goals and presets have no editing options
  }
}

export interface CreatePayload {
  position: Vec2;
  presetKind?: PresetKind;
}

export interface EditPayload {
  agent_count?: number;
  goal_id?: string | null;
  width?: number;
  height?: number;
  rotation?: number;
}

export function applyObjectAction(
  state: EditorState,
  action: ObjectAction,
  target: { kind?: ObjectKind; id?: string },
  payload?: CreatePayload | EditPayload | { position: Vec2 },
): EditorState {
  switch (action) {
    case "create":
      return createObject(state, target.kind ?? state.selectedTool, payload as CreatePayload);
    case "remove":
      return removeObject(state, target.id ?? "");
    case "move":
      return moveObject(state, target.id ?? "", (payload as { position: Vec2 }).position);
    case "edit":
      return editObject(state, target.id ?? "", (payload ?? {}) as EditPayload);
  }
}

function createObject(state: EditorState, kind: ObjectKind, payload: CreatePayload): EditorState {
  const scene = cloneScene(state.scene);
  const p = payload.position;
  switch (kind) {
    case "agents": {
      const origin = { x: p.x - SPAWNER_SIDE / 2, y: p.y - SPAWNER_SIDE / 2 };
      if (
        origin.x < 0 ||
        origin.y < 0 ||
        origin.x + SPAWNER_SIDE > scene.world.width ||
        origin.y + SPAWNER_SIDE > scene.world.height
      ) {
        return withMessage(state, "spawner would extend outside the world");
      }
      const id = nextId(scene, "s");
      scene.spawners.push({
        id,
        origin,
        width: SPAWNER_SIDE,
        height: SPAWNER_SIDE,
        agent_count: DEFAULT_AGENT_COUNT,
        goal_id: null,
      });
      return { ...state, scene, selection: id, message: null };
    }
    case "goals": {
      if (p.x < 0 || p.x > scene.world.width || p.y < 0 || p.y > scene.world.height) {
        return withMessage(state, "goal must lie inside the world");
      }
      const id = nextId(scene, "g");
      scene.goals.push({ id, center: { ...p }, radius: GOAL_RADIUS });
      return { ...state, scene, selection: id, message: null };
    }
    case "obstacles": {
      const half = DEFAULT_OBSTACLE_SIDE / 2;
      if (p.x - half < 0 || p.x + half > scene.world.width || p.y - half < 0 || p.y + half > scene.world.height) {
        return withMessage(state, "obstacle would extend outside the world");
      }
      const id = nextId(scene, "o");
      scene.obstacles.push({
        id,
        center: { ...p },
        width: DEFAULT_OBSTACLE_SIDE,
        height: DEFAULT_OBSTACLE_SIDE,
        rotation: 0,
        locked: false,
      });
      return { ...state, scene, selection: id, message: null };
    }
    case "presets": {
      const kindName = payload.presetKind;
      if (!kindName) return withMessage(state, "choose a preset kind first");
      if (!presetFits(scene, kindName, p)) {
        return withMessage(state, `preset '${kindName}' would extend outside the world`);
      }
      const { instance, walls } = instantiatePreset(scene, kindName, p);
      scene.presets.push(instance);
      scene.obstacles.push(...walls);
      return { ...state, scene, selection: instance.id, message: null };
    }
  }
}

function removeObject(state: EditorState, id: string): EditorState {
  const scene = cloneScene(state.scene);
  if (lockedObstacle(scene, id)) {
    return withMessage(state, "preset obstacles cannot be removed individually; remove the preset");
  }
  const ref = findObject(scene, id);
  if (!ref) return withMessage(state, `no object '${id}'`);
  switch (ref.kind) {
    case "spawner":
      scene.spawners = scene.spawners.filter((s) => s.id !== id);
      break;
    case "goal":
      scene.goals = scene.goals.filter((g) => g.id !== id);
      for (const sp of scene.spawners) if (sp.goal_id === id) sp.goal_id = null;
      break;
    case "obstacle":
      scene.obstacles = scene.obstacles.filter((o) => o.id !== id);
      break;
    case "preset": {
      const preset = scene.presets.find((p) => p.id === id)!;
      const owned = new Set(preset.obstacle_ids);
      scene.obstacles = scene.obstacles.filter((o) => !owned.has(o.id));
      scene.presets = scene.presets.filter((p) => p.id !== id);
      break;
    }
  }
  const selection = state.selection === id ? null : state.selection;
  return { ...state, scene, selection, message: null };
}

function moveObject(state: EditorState, id: string, position: Vec2): EditorState {
  const scene = cloneScene(state.scene);
  if (lockedObstacle(scene, id)) {
    return withMessage(state, "preset obstacles cannot be moved individually; move the preset");
  }
  const ref = findObject(scene, id);
  if (!ref) return withMessage(state, `no object '${id}'`);
  switch (ref.kind) {
    case "spawner": {
      const sp = scene.spawners.find((s) => s.id === id)!;
      sp.origin = { x: position.x - sp.width / 2, y: position.y - sp.height / 2 };
      break;
    }
    case "goal": {
      const g = scene.goals.find((x) => x.id === id)!;
      g.center = { ...position };
      break;
    }
    case "obstacle": {
      const o = scene.obstacles.find((x) => x.id === id)!;
      o.center = { ...position };
      break;
    }
    case "preset": {
      const preset = scene.presets.find((p) => p.id === id)!;
      const dx = position.x - preset.anchor.x;
      const dy = position.y - preset.anchor.y;
      preset.anchor = { ...position };
      const owned = new Set(preset.obstacle_ids);
      for (const o of scene.obstacles) {
        if (owned.has(o.id)) o.center = { x: o.center.x + dx, y: o.center.y + dy };
      }
      break;
    }
  }
  return { ...state, scene, message: null };
}

function editObject(state: EditorState, id: string, payload: EditPayload): EditorState {
  const fields = editableFields(state.scene, id);
  if (fields.length === 0) {
    const ref = findObject(state.scene, id);
    if (ref?.kind === "goal") return withMessage(state, "goals have no editing options");
    if (ref?.kind === "preset") return withMessage(state, "presets have no editing options");
    if (ref?.kind === "obstacle") return withMessage(state, "preset obstacles cannot be edited");
    return withMessage(state, `no object '${id}'`);
  }
  const illegal = Object.keys(payload).filter((k) => !fields.includes(k));
  if (illegal.length) {
    return withMessage(state, `field(s) ${illegal.join(", ")} not editable on '${id}'`);
  }

  const scene = cloneScene(state.scene);
  const ref = findObject(scene, id)!;
  if (ref.kind === "spawner") {
    const sp = scene.spawners.find((s) => s.id === id)!;
    if (payload.agent_count !== undefined) {
      if (!Number.isInteger(payload.agent_count) || payload.agent_count < 1) {
        return withMessage(state, "agent_count must be a positive integer");
      }
      sp.agent_count = payload.agent_count;
    }
    if (payload.goal_id !== undefined) {
      if (payload.goal_id !== null && !scene.goals.some((g) => g.id === payload.goal_id)) {
        return withMessage(state, `no goal '${payload.goal_id}'`);
      }
      sp.goal_id = payload.goal_id;
    }
  } else {
    const o = scene.obstacles.find((x) => x.id === id)!;
    if (payload.width !== undefined) o.width = payload.width;
    if (payload.height !== undefined) o.height = payload.height;
    if (payload.rotation !== undefined) o.rotation = normalizeRotation(payload.rotation);
    if (!(o.width > 0 && o.height > 0)) return withMessage(state, "obstacle size must be positive");
  }
  return { ...state, scene, message: null };
}

// -- general actions -------------------------------------------------------------

export function saveScene(state: EditorState): string {
  return serializeScene(state.scene);
}

export function loadScene(state: EditorState, text: string): EditorState {
  const outcome = parseScene(text);
  if (!outcome.ok) {
    // scene stays untouched on a failed load
    return withMessage(state, `load failed: ${outcome.error}`);
  }
  return { ...state, scene: outcome.scene, selection: null, lastResult: null, message: null };
}

export function resetScene(state: EditorState): EditorState {
  return { ...state, scene: emptyScene(), selection: null, lastResult: null, message: null };
}

export function isRunnable(state: EditorState): boolean {
  return validateSceneClient(state.scene).every((i) => i.severity !== "error");
}

// W pans up (world +y), A left, S down, D right, scaled by camera.speed.
export function panCamera(state: EditorState, key: "w" | "a" | "s" | "d"): EditorState {
  const delta = { w: [0, 1], a: [-1, 0], s: [0, -1], d: [1, 0] }[key];
  const camera = {
    ...state.camera,
    center: {
      x: state.camera.center.x + delta[0]! * state.camera.speed,
      y: state.camera.center.y + delta[1]! * state.camera.speed,
    },
  };
  return { ...state, camera };
}

export function zoomCamera(state: EditorState, wheelDelta: number): EditorState {
  const factor = wheelDelta < 0 ? 1.1 : 1 / 1.1;
  const zoom = Math.min(200, Math.max(2, state.camera.zoom * factor));
  return { ...state, camera: { ...state.camera, zoom } };
}

export function setCameraSpeed(state: EditorState, speed: number): EditorState {
  if (!(speed > 0)) return withMessage(state, "camera speed must be positive");
  return { ...state, camera: { ...state.camera, speed } };
}
