import { describe, expect, it } from "vitest";

import { runAndPoll } from "../src/api.js";
import { applyObjectAction, initialState, type EditorState } from "../src/editor.js";
import type { ResultBundle } from "../src/types.js";

function runnableState(): EditorState {
  let state = initialState();
  state = applyObjectAction(state, "create", { kind: "goals" }, { position: { x: 20, y: 15 } });
  state = applyObjectAction(state, "create", { kind: "agents" }, { position: { x: 5, y: 15 } });
  state = applyObjectAction(state, "edit", { id: "s1" }, { goal_id: "g1" });
  return state;
}

const BUNDLE: ResultBundle = {
  result: {
    scene: {},
    config: { seed: 0 },
    simulation_time_s: 12.3,
    steps_executed: 123,
    all_arrived: true,
    agents: [
      { id: 0, spawner_id: "s1", goal_id: "g1", arrived: true, spawn_step: 0, trajectory: [[5, 15], [6, 15]] },
    ],
  },
  density: { cell_size: 0.5, cols: 2, rows: 1, counts: [[1, 1]] },
  summary: { simulation_time_s: 12.3, agents_total: 1, agents_arrived: 1, distance_avg: 1.0, distance_max: 1.0 },
};

type Exchange = { match: (url: string, method: string) => boolean; status: number; body: unknown };

function fakeFetch(script: Exchange[]): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const next = script.shift();
    if (!next || !next.match(url, method)) {
      throw new Error(`unexpected request ${method} ${url}`);
    }
    return new Response(JSON.stringify(next.body), {
      status: next.status,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
}

describe("run flow", () => {
  it("submits, polls until done, and lands the three metrics", async () => {
    const fetchImpl = fakeFetch([
      { match: (u, m) => m === "POST" && u.endsWith("/api/simulations"), status: 202, body: { job_id: "j1" } },
      { match: (u) => u.endsWith("/api/jobs/j1"), status: 200, body: { state: "queued", error: null } },
      { match: (u) => u.endsWith("/api/jobs/j1"), status: 200, body: { state: "running", error: null } },
      { match: (u) => u.endsWith("/api/jobs/j1"), status: 200, body: { state: "done", error: null } },
      { match: (u) => u.endsWith("/api/jobs/j1/result"), status: 200, body: BUNDLE },
    ]);
    const outcome = await runAndPoll(runnableState(), { fetchImpl, pollMs: 1 });
    expect(outcome.kind).toBe("done");
    const summary = outcome.state.lastResult!.summary;
    expect(summary.simulation_time_s).toBe(12.3);
    expect(summary.agents_arrived).toBe(1);
    expect(summary.distance_max).toBe(1.0);
    expect(outcome.state.pendingJob).toBeNull();
  });

  it("a 422 shows the validation report and keeps the editor state", async () => {
    const before = runnableState();
    const fetchImpl = fakeFetch([
      {
        match: (u, m) => m === "POST" && u.endsWith("/api/simulations"),
        status: 422,
        body: {
          error: "validation",
          report: { ok: false, issues: [{ severity: "error", object_id: "s1", message: "agent_count 11 exceeds 10" }] },
        },
      },
    ]);
    const outcome = await runAndPoll(before, { fetchImpl, pollMs: 1 });
    expect(outcome.kind).toBe("rejected");
    if (outcome.kind !== "rejected") throw new Error("unreachable");
    expect(outcome.issues[0]!.message).toContain("exceeds 10");
    expect(outcome.state.scene).toEqual(before.scene);
    expect(outcome.state.lastResult).toBeNull();
    expect(outcome.state.message).toContain("exceeds 10");
  });

  it("a failed job reports the stored error and clears the pending slot", async () => {
    const fetchImpl = fakeFetch([
      { match: (u, m) => m === "POST" && u.endsWith("/api/simulations"), status: 202, body: { job_id: "j2" } },
      { match: (u) => u.endsWith("/api/jobs/j2"), status: 200, body: { state: "failed", error: "UnreachableGoalError: spawner 's1'" } },
    ]);
    const outcome = await runAndPoll(runnableState(), { fetchImpl, pollMs: 1 });
    expect(outcome.kind).toBe("failed");
    expect(outcome.state.message).toContain("UnreachableGoalError");
    expect(outcome.state.pendingJob).toBeNull();
  });

  it("refuses a second run while one job is pending", async () => {
    const busy = { ...runnableState(), pendingJob: "j9" };
    const outcome = await runAndPoll(busy, {
      fetchImpl: (() => {
        throw new Error("must not fetch");
      }) as unknown as typeof fetch,
    });
    expect(outcome.kind).toBe("failed");
    expect(outcome.state.message).toContain("already pending");
  });
});
