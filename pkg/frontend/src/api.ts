// Service client: submit a scene, poll the job at a fixed interval, fetch
// the result bundle when done. At most one job is in flight per editor.

import type { EditorState } from "./editor.js";
import type { ResultBundle, ValidationIssue } from "./types.js";
import { serializeScene } from "./scene.js";

export interface ApiOptions {
  baseUrl?: string;
  fetchImpl?: typeof fetch;
  pollMs?: number;
  maxPolls?: number;
  onUpdate?: (state: EditorState) => void;
}

export type RunOutcome =
  | { kind: "done"; state: EditorState }
  | { kind: "rejected"; state: EditorState; issues: ValidationIssue[] }
  | { kind: "failed"; state: EditorState; error: string };

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Submit the current scene, poll GET /api/jobs/{id} once a second, and fetch
 * the bundle when the job lands. The editor state is returned updated, never
 * replaced: a rejection or failure keeps the scene intact and sets a visible
 * message.
 */
export async function runAndPoll(state: EditorState, options: ApiOptions = {}): Promise<RunOutcome> {
  const base = options.baseUrl ?? "http://127.0.0.1:8000";
  const doFetch = options.fetchImpl ?? fetch;
  const pollMs = options.pollMs ?? 1000;
  const maxPolls = options.maxPolls ?? 600;
  const notify = options.onUpdate ?? (() => {});

  if (state.pendingJob !== null) {
    return {
      kind: "failed",
      state: { ...state, message: `a simulation is already pending (job ${state.pendingJob})` },
      error: "pending job",
    };
  }

  const submitted = await doFetch(`${base}/api/simulations`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ scene: JSON.parse(serializeScene(state.scene)) }),
  });
  if (submitted.status === 422) {
    const body = (await submitted.json()) as { report?: { issues: ValidationIssue[] }; message?: string };
    const issues = body.report?.issues ?? [];
    const message = issues.length
      ? `scene rejected: ${issues.map((i) => `${i.object_id ?? "scene"}: ${i.message}`).join("; ")}`
      : `scene rejected: ${body.message ?? "invalid"}`;
    return { kind: "rejected", state: { ...state, message }, issues };
  }
  if (submitted.status !== 202) {
    return {
      kind: "failed",
      state: { ...state, message: `submit failed with HTTP ${submitted.status}` },
      error: `HTTP ${submitted.status}`,
    };
  }
  const jobId = ((await submitted.json()) as { job_id: string }).job_id;
  let current: EditorState = { ...state, pendingJob: jobId, message: `running job ${jobId}` };
  notify(current);

  for (let polls = 0; polls < maxPolls; polls += 1) {
    const statusResponse = await doFetch(`${base}/api/jobs/${jobId}`);
    if (!statusResponse.ok) {
      current = { ...current, pendingJob: null, message: `job ${jobId} vanished` };
      return { kind: "failed", state: current, error: "job not found" };
    }
    const status = (await statusResponse.json()) as { state: string; error: string | null };
    if (status.state === "failed") {
      current = { ...current, pendingJob: null, message: `simulation failed: ${status.error ?? "unknown"}` };
      return { kind: "failed", state: current, error: status.error ?? "unknown" };
    }
    if (status.state === "done") {
      const resultResponse = await doFetch(`${base}/api/jobs/${jobId}/result`);
      if (!resultResponse.ok) {
        current = { ...current, pendingJob: null, message: "result fetch failed" };
        return { kind: "failed", state: current, error: `HTTP ${resultResponse.status}` };
      }
      const bundle = (await resultResponse.json()) as ResultBundle;
      current = {
        ...current,
        pendingJob: null,
        lastResult: bundle,
        message: `done in ${bundle.summary.simulation_time_s.toFixed(1)} simulated seconds`,
      };
      return { kind: "done", state: current };
    }
    notify(current);
    await sleep(pollMs);
  }
  current = { ...current, pendingJob: null, message: "polling timed out" };
  return { kind: "failed", state: current, error: "timeout" };
}

export async function fetchPresetCatalog(
  options: ApiOptions = {},
): Promise<{ kinds: { kind: string; walls: { dx: number; dy: number; width: number; height: number; rotation: number }[] }[] } | null> {
  const base = options.baseUrl ?? "http://127.0.0.1:8000";
  const doFetch = options.fetchImpl ?? fetch;
  try {
    const response = await doFetch(`${base}/api/presets`);
    if (!response.ok) return null;
    return (await response.json()) as {
      kinds: { kind: string; walls: { dx: number; dy: number; width: number; height: number; rotation: number }[] }[];
    };
  } catch {
    return null;
  }
}
