// Scene and result types mirroring the service's JSON documents.

export interface Vec2 {
  x: number;
  y: number;
}

export interface WorldExtents {
  width: number;
  height: number;
}

export interface SpawnerArea {
  id: string;
  origin: Vec2; // lower-left corner
  width: number;
  height: number;
  agent_count: number;
  goal_id: string | null;
}

export interface Goal {
  id: string;
  center: Vec2;
  radius: number;
}

export interface ObstacleRect {
  id: string;
  center: Vec2;
  width: number;
  height: number;
  rotation: number; // degrees counterclockwise in [0, 360)
  locked: boolean;
}

export type PresetKind = "corridor" | "bottleneck" | "four_pillars" | "t_junction" | "crossing";

export interface PresetInstance {
  id: string;
  kind: PresetKind;
  anchor: Vec2;
  obstacle_ids: string[];
}

export interface Scene {
  version: string;
  world: WorldExtents;
  spawners: SpawnerArea[];
  goals: Goal[];
  obstacles: ObstacleRect[];
  presets: PresetInstance[];
}

export interface ValidationIssue {
  severity: "error" | "warning";
  object_id: string | null;
  message: string;
}

export interface DensityDoc {
  cell_size: number;
  cols: number;
  rows: number;
  counts: number[][];
}

export interface SummaryDoc {
  simulation_time_s: number;
  agents_total: number;
  agents_arrived: number;
  distance_avg: number;
  distance_max: number;
}

export interface AgentResultDoc {
  id: number;
  spawner_id: string;
  goal_id: string;
  arrived: boolean;
  spawn_step: number;
  trajectory: [number, number][];
}

export interface ResultDoc {
  scene: unknown;
  config: Record<string, number>;
  simulation_time_s: number;
  steps_executed: number;
  all_arrived: boolean;
  agents: AgentResultDoc[];
}

export interface ResultBundle {
  result: ResultDoc;
  density: DensityDoc;
  summary: SummaryDoc;
}
