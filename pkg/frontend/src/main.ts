// DOM wiring: toolbar layout with general actions on top, object actions at
// the bottom-left, objects at the bottom-right, the canvas in the middle,
// and the three result metrics next to the run button.

import { fetchPresetCatalog, runAndPoll } from "./api.js";
import {
  applyObjectAction,
  editableFields,
  findObject,
  initialState,
  isRunnable,
  loadScene,
  panCamera,
  resetScene,
  saveScene,
  setCameraSpeed,
  zoomCamera,
  type EditorState,
  type ObjectAction,
  type ObjectKind,
} from "./editor.js";
import { PRESET_KINDS, refreshPresetTables } from "./presets.js";
import { drawScene, screenToWorld } from "./render.js";
import type { PresetKind, Vec2 } from "./types.js";

const SERVICE_URL = (window as { CROWDLAB_SERVICE_URL?: string }).CROWDLAB_SERVICE_URL ?? "http://127.0.0.1:8000";

let state: EditorState = initialState();

const canvas = document.getElementById("world") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const messageLine = document.getElementById("message")!;
const metricsLine = document.getElementById("metrics")!;
const editPanel = document.getElementById("edit-panel")!;
const presetPicker = document.getElementById("preset-kind") as HTMLSelectElement;

function setState(next: EditorState): void {
  state = next;
  redraw();
}

function redraw(): void {
  canvas.width = canvas.clientWidth;
  canvas.height = canvas.clientHeight;
  drawScene(ctx, state, { width: canvas.width, height: canvas.height });
  messageLine.textContent = state.message ?? "";
  renderMetrics();
  renderEditPanel();
  document.querySelectorAll<HTMLButtonElement>("[data-tool]").forEach((b) => {
    b.classList.toggle("active", b.dataset.tool === state.selectedTool);
  });
  document.querySelectorAll<HTMLButtonElement>("[data-action]").forEach((b) => {
    b.classList.toggle("active", b.dataset.action === state.selectedAction);
  });
  (document.getElementById("run") as HTMLButtonElement).disabled =
    !isRunnable(state) || state.pendingJob !== null;
}

function renderMetrics(): void {
  if (!state.lastResult) {
    metricsLine.textContent = state.pendingJob ? `running ${state.pendingJob}...` : "no results yet";
    return;
  }
  const s = state.lastResult.summary;
  metricsLine.textContent =
    `simulation time ${s.simulation_time_s.toFixed(1)} s | ` +
    `arrived ${s.agents_arrived}/${s.agents_total} | ` +
    `distance avg ${s.distance_avg.toFixed(1)} m, max ${s.distance_max.toFixed(1)} m`;
}

function renderEditPanel(): void {
  editPanel.innerHTML = "";
  if (!state.selection) return;
  const id = state.selection;
  const fields = editableFields(state.scene, id);
  const title = document.createElement("div");
  title.className = "panel-title";
  title.textContent = `${id}${fields.length ? "" : " (not editable)"}`;
  editPanel.appendChild(title);

  for (const field of fields) {
    const label = document.createElement("label");
    label.textContent = field;
    let input: HTMLInputElement | HTMLSelectElement;
    if (field === "goal_id") {
      input = document.createElement("select");
      const none = document.createElement("option");
      none.value = "";
      none.textContent = "(no goal)";
      input.appendChild(none);
      for (const g of state.scene.goals) {
        const option = document.createElement("option");
        option.value = g.id;
        option.textContent = g.id;
        input.appendChild(option);
      }
      const spawner = state.scene.spawners.find((s) => s.id === id);
      input.value = spawner?.goal_id ?? "";
      input.addEventListener("change", () => {
        setState(applyObjectAction(state, "edit", { id }, { goal_id: input.value === "" ? null : input.value }));
      });
      // highlight the linked goal while hovering the selector
      input.addEventListener("mouseenter", () => {
        const spawnerNow = state.scene.spawners.find((s) => s.id === id);
        if (spawnerNow?.goal_id) setState({ ...state, selection: id });
      });
    } else {
      input = document.createElement("input");
      input.type = "number";
      const spawner = state.scene.spawners.find((s) => s.id === id);
      const obstacle = state.scene.obstacles.find((o) => o.id === id);
      const current =
        field === "agent_count"
          ? spawner?.agent_count
          : field === "width"
            ? obstacle?.width
            : field === "height"
              ? obstacle?.height
              : obstacle?.rotation;
      input.value = String(current ?? "");
      input.addEventListener("change", () => {
        const value = Number(input.value);
        setState(applyObjectAction(state, "edit", { id }, { [field]: value }));
      });
    }
    label.appendChild(input);
    editPanel.appendChild(label);
  }
}

function pickObject(p: Vec2): string | null {
  const { scene } = state;
  for (const sp of scene.spawners) {
    if (p.x >= sp.origin.x && p.x <= sp.origin.x + sp.width && p.y >= sp.origin.y && p.y <= sp.origin.y + sp.height) {
      return sp.id;
    }
  }
  for (const g of scene.goals) {
    const d = Math.hypot(p.x - g.center.x, p.y - g.center.y);
    if (d <= Math.max(g.radius, 0.4)) return g.id;
  }
  for (const o of scene.obstacles) {
    const theta = (-o.rotation * Math.PI) / 180;
    const dx = p.x - o.center.x;
    const dy = p.y - o.center.y;
    const lx = Math.cos(theta) * dx - Math.sin(theta) * dy;
    const ly = Math.sin(theta) * dx + Math.cos(theta) * dy;
    if (Math.abs(lx) <= o.width / 2 && Math.abs(ly) <= o.height / 2) {
      const owner = scene.presets.find((pr) => pr.obstacle_ids.includes(o.id));
      return owner ? owner.id : o.id;
    }
  }
  return null;
}

canvas.addEventListener("click", (event) => {
  const rect = canvas.getBoundingClientRect();
  const world = screenToWorld(state.camera, { width: canvas.width, height: canvas.height },
    event.clientX - rect.left, event.clientY - rect.top);
  switch (state.selectedAction) {
    case "create":
      setState(
        applyObjectAction(state, "create", { kind: state.selectedTool }, {
          position: world,
          presetKind: presetPicker.value as PresetKind,
        }),
      );
      break;
    case "remove": {
      const id = pickObject(world);
      if (id) setState(applyObjectAction(state, "remove", { id }));
      break;
    }
    case "move": {
      if (state.selection) {
        setState(applyObjectAction(state, "move", { id: state.selection }, { position: world }));
      } else {
        const id = pickObject(world);
        setState({ ...state, selection: id, message: id ? `moving ${id}: click a destination` : null });
      }
      break;
    }
    case "edit": {
      const id = pickObject(world);
      setState({ ...state, selection: id, message: null });
      break;
    }
  }
});

window.addEventListener("keydown", (event) => {
  const key = event.key.toLowerCase();
  if (key === "w" || key === "a" || key === "s" || key === "d") {
    if (document.activeElement instanceof HTMLInputElement) return;
    setState(panCamera(state, key));
  }
});

canvas.addEventListener("wheel", (event) => {
  event.preventDefault();
  setState(zoomCamera(state, event.deltaY));
});

document.querySelectorAll<HTMLButtonElement>("[data-tool]").forEach((button) => {
  button.addEventListener("click", () => {
    setState({ ...state, selectedTool: button.dataset.tool as ObjectKind });
  });
});

document.querySelectorAll<HTMLButtonElement>("[data-action]").forEach((button) => {
  button.addEventListener("click", () => {
    setState({ ...state, selectedAction: button.dataset.action as ObjectAction, selection: null });
  });
});

document.getElementById("save")!.addEventListener("click", () => {
  const blob = new Blob([saveScene(state)], { type: "application/json" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = "scene.json";
  link.click();
  URL.revokeObjectURL(link.href);
});

document.getElementById("load")!.addEventListener("click", () => {
  const input = document.createElement("input");
  input.type = "file";
  input.accept = "application/json";
  input.addEventListener("change", async () => {
    const file = input.files?.[0];
    if (file) setState(loadScene(state, await file.text()));
  });
  input.click();
});

document.getElementById("reset")!.addEventListener("click", () => {
  setState(resetScene(state));
});

document.getElementById("run")!.addEventListener("click", () => {
  void (async () => {
    const outcome = await runAndPoll(state, {
      baseUrl: SERVICE_URL,
      onUpdate: (s) => setState(s),
    });
    setState(outcome.state);
  })();
});

document.getElementById("camera-speed")!.addEventListener("change", (event) => {
  setState(setCameraSpeed(state, Number((event.target as HTMLInputElement).value)));
});

document.getElementById("toggle-density")!.addEventListener("change", (event) => {
  setState({ ...state, overlays: { ...state.overlays, density: (event.target as HTMLInputElement).checked } });
});

document.getElementById("toggle-trajectories")!.addEventListener("change", (event) => {
  setState({
    ...state,
    overlays: { ...state.overlays, trajectories: (event.target as HTMLInputElement).checked },
  });
});

for (const kind of PRESET_KINDS) {
  const option = document.createElement("option");
  option.value = kind;
  option.textContent = kind.replace("_", " ");
  presetPicker.appendChild(option);
}

void (async () => {
  const catalog = await fetchPresetCatalog({ baseUrl: SERVICE_URL });
  if (catalog) refreshPresetTables(catalog);
})();

window.addEventListener("resize", redraw);
redraw();
