/** Browser entry point: form + raw DQL editor on the left, 3D viewer on
 * the right, delta strip and trim ledger below. Everything displayed is a
 * field of a server payload. */

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";
import { HttpPipelineApi, ScenePayload } from "./api";
import { defaultForm, DqlForm, parseDqlSubset, serializeDqlForm } from "./dql";
import { buildSceneGraph, isolateFloor, SceneGraph, SchemaMismatch } from "./scene";
import { SchemeId, ViewController } from "./state";

const API_BASE = (window as any).MEDBUILD_API ?? "http://127.0.0.1:8000";

// 200 m x 150 m default site, entered in meters, sent in millimeters
const DEFAULT_SITE: [number, number][] = [
  [0, 0],
  [200000, 0],
  [200000, 150000],
  [0, 150000],
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function labeled(label: string, input: HTMLElement): HTMLElement {
  const wrap = el("label", "field");
  wrap.append(el("span", "field-label", label), input);
  return wrap;
}

function numberInput(value: number | null, step = "any"): HTMLInputElement {
  const input = el("input");
  input.type = "number";
  input.step = step;
  if (value !== null) input.value = String(value);
  return input;
}

function fmt(value: number): string {
  return value.toLocaleString("en-US", { maximumFractionDigits: 1 });
}

function signed(value: number): string {
  return (value > 0 ? "+" : "") + fmt(value);
}

class ViewerPanel {
  readonly root: HTMLElement;
  private readonly renderer: THREE.WebGLRenderer;
  private readonly scene = new THREE.Scene();
  private readonly camera: THREE.PerspectiveCamera;
  private readonly controls: OrbitControls;
  private readonly raycaster = new THREE.Raycaster();
  private readonly tooltip: HTMLElement;
  private readonly badge: HTMLElement;
  private readonly floorSelect: HTMLSelectElement;
  private graph: SceneGraph | null = null;

  constructor() {
    this.root = el("div", "viewer");
    this.badge = el("div", "badge", "0 modules");
    this.tooltip = el("div", "tooltip");
    this.tooltip.style.display = "none";
    this.floorSelect = el("select", "floor-select");
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setSize(720, 540);
    this.camera = new THREE.PerspectiveCamera(50, 720 / 540, 0.1, 5000);
    this.camera.position.set(120, 140, 160);
    this.controls = new OrbitControls(this.camera, this.renderer.domElement);
    this.scene.background = new THREE.Color(0xf4f4f0);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 0.8);
    sun.position.set(1, 2, 1.5);
    this.scene.add(sun);
    this.scene.add(new THREE.GridHelper(400, 40, 0xcccccc, 0xe2e2e2));
    this.root.append(this.badge, this.floorSelect, this.renderer.domElement, this.tooltip);
    this.renderer.domElement.addEventListener("pointermove", (e) => this.hover(e));
    this.floorSelect.addEventListener("change", () => {
      if (!this.graph) return;
      const value = this.floorSelect.value;
      isolateFloor(this.graph, value === "all" ? null : Number(value));
    });
    const animate = () => {
      requestAnimationFrame(animate);
      this.controls.update();
      this.renderer.render(this.scene, this.camera);
    };
    animate();
  }

  show(payload: ScenePayload, banner: (message: string | null) => void): void {
    if (this.graph) this.scene.remove(this.graph.group);
    this.graph = null;
    try {
      this.graph = buildSceneGraph(payload);
    } catch (error) {
      if (error instanceof SchemaMismatch) {
        banner(`scene format not supported (schema ${error.got})`);
        this.badge.textContent = "0 modules";
        return;
      }
      throw error;
    }
    banner(null);
    this.scene.add(this.graph.group);
    this.badge.textContent = `${this.graph.moduleCount} modules`;
    this.floorSelect.replaceChildren(new Option("all floors", "all"));
    for (const floor of this.graph.floors) {
      this.floorSelect.add(new Option(`floor ${floor}`, String(floor)));
    }
  }

  private hover(event: PointerEvent): void {
    if (!this.graph) return;
    const rect = this.renderer.domElement.getBoundingClientRect();
    const pointer = new THREE.Vector2(
      ((event.clientX - rect.left) / rect.width) * 2 - 1,
      (-(event.clientY - rect.top) / rect.height) * 2 + 1,
    );
    this.raycaster.setFromCamera(pointer, this.camera);
    const hits = this.raycaster
      .intersectObjects(this.graph.group.children)
      .filter((h) => h.object.visible);
    if (hits.length === 0) {
      this.tooltip.style.display = "none";
      return;
    }
    const data = hits[0].object.userData;
    this.tooltip.textContent = `${data.room} — ${data.department} (floor ${data.floor})`;
    this.tooltip.style.display = "block";
    this.tooltip.style.left = `${event.clientX - rect.left + 12}px`;
    this.tooltip.style.top = `${event.clientY - rect.top + 12}px`;
  }
}

class App {
  private readonly controller: ViewController;
  private readonly viewer = new ViewerPanel();
  private readonly errorBox = el("div", "error-box");
  private readonly bannerBox = el("div", "banner");
  private readonly deltaBox = el("div", "delta-strip");
  private readonly summaryBox = el("div", "summary");
  private readonly ledgerBox = el("div", "ledger");
  private readonly rawEditor = el("textarea", "raw-editor");
  private readonly siteEditor = el("textarea", "site-editor");
  private readonly seedInput = numberInput(7, "1");
  private form: DqlForm = defaultForm();
  private fields = new Map<string, HTMLInputElement>();

  constructor(root: HTMLElement) {
    this.controller = new ViewController(new HttpPipelineApi(API_BASE), {
      dql: serializeDqlForm(this.form),
      siteVertices: DEFAULT_SITE,
      seed: 7,
    });
    this.controller.onChange(() => this.render());
    root.append(this.buildLayout());
    this.syncRawFromForm();
    const fromUrl = new URLSearchParams(window.location.search).get("run");
    if (fromUrl) void this.controller.loadRun(fromUrl);
  }

  private buildLayout(): HTMLElement {
    const layout = el("div", "layout");
    const panel = el("div", "panel");
    const addField = (key: keyof DqlForm, label: string) => {
      const input = numberInput(this.form[key] as number | null);
      input.addEventListener("change", () => {
        const value = input.value === "" ? null : Number(input.value);
        (this.form as any)[key] = value;
        this.syncRawFromForm();
      });
      this.fields.set(key, input);
      panel.append(labeled(label, input));
    };
    addField("population", "Population");
    addField("growthRate", "Growth rate (%/yr)");
    addField("budget", "Budget (M USD)");
    addField("gdp", "GDP per capita");
    addField("maternalHealth", "Maternal health index");
    addField("fertility", "Fertility rate");
    addField("fac", "Facility coverage (0-1)");
    addField("water", "Water access (0-1)");
    addField("infra", "Infrastructure (0-1)");
    panel.append(labeled("Seed", this.seedInput));
    this.seedInput.addEventListener("change", () =>
      this.controller.setSeed(Number(this.seedInput.value)),
    );

    const advanced = el("details", "advanced");
    advanced.append(el("summary", undefined, "Advanced: raw DQL"));
    this.rawEditor.rows = 5;
    this.rawEditor.addEventListener("change", () => {
      this.controller.setDql(this.rawEditor.value);
      this.form = parseDqlSubset(this.rawEditor.value);
      this.syncFieldsFromForm();
    });
    advanced.append(this.rawEditor);
    panel.append(advanced);

    const siteDetails = el("details", "site");
    siteDetails.append(el("summary", undefined, "Site polygon (meters, one x,y per line)"));
    this.siteEditor.rows = 5;
    this.siteEditor.value = DEFAULT_SITE.map(([x, y]) => `${x / 1000}, ${y / 1000}`).join("\n");
    this.siteEditor.addEventListener("change", () => this.readSite());
    siteDetails.append(this.siteEditor);
    panel.append(siteDetails);

    const runButton = el("button", "run", "Run pipeline");
    runButton.addEventListener("click", () => void this.controller.submit());
    panel.append(runButton, this.errorBox);

    const schemeBar = el("div", "scheme-bar");
    for (const id of ["S1", "S2"] as SchemeId[]) {
      const button = el("button", "scheme", id);
      button.addEventListener("click", () => this.controller.selectScheme(id));
      schemeBar.append(button);
    }

    const right = el("div", "right");
    right.append(schemeBar, this.bannerBox, this.viewer.root, this.summaryBox,
      this.deltaBox, this.ledgerBox);
    layout.append(panel, right);
    return layout;
  }

  private readSite(): void {
    const vertices: [number, number][] = [];
    for (const line of this.siteEditor.value.split("\n")) {
      const parts = line.split(",").map((p) => Number(p.trim()));
      if (parts.length === 2 && parts.every(Number.isFinite)) {
        vertices.push([parts[0] * 1000, parts[1] * 1000]);
      }
    }
    if (vertices.length >= 3) this.controller.setSite(vertices);
  }

  private syncRawFromForm(): void {
    this.rawEditor.value = serializeDqlForm(this.form);
    this.controller.setDql(this.rawEditor.value);
  }

  private syncFieldsFromForm(): void {
    for (const [key, input] of this.fields) {
      const value = (this.form as any)[key];
      input.value = value === null ? "" : String(value);
    }
  }

  private render(): void {
    const state = this.controller.state;
    this.errorBox.replaceChildren();
    if (state.lastError) {
      const head = el("div", "error-head",
        `${state.lastError.stage} error: ${state.lastError.message}`);
      this.errorBox.append(head);
      for (const violation of state.lastError.violations) {
        this.errorBox.append(
          el("div", "error-item", `${violation.path ?? ""} ${violation.message}`),
        );
      }
    }
    if (!state.run) return;
    const program = state.run.outputs.program;
    this.summaryBox.textContent =
      `${program.level} — ${program.beds.target_total} beds — ` +
      `${fmt(program.totals.net_area)} m² net — ` +
      `$${fmt(program.cost.estimated)} of $${fmt(program.cost.budget)}` +
      ` — run ${state.run.run_id}`;

    const delta = this.controller.delta();
    this.deltaBox.replaceChildren();
    if (delta) {
      this.deltaBox.append(
        el("span", "delta", `beds ${signed(delta.beds)}`),
        el("span", "delta", `area ${signed(delta.netArea)} m²`),
        el("span", "delta", `cost ${signed(delta.cost)}`),
        el("span", "delta", `trims ${signed(delta.trimCount)}`),
      );
    }

    const highlight = new Set(this.controller.newlyTrimmed());
    this.ledgerBox.replaceChildren(el("div", "ledger-head", "Trim ledger"));
    if (program.trim_log.length === 0) {
      this.ledgerBox.append(el("div", "ledger-item", "no trims"));
    }
    for (const action of program.trim_log) {
      const item = el("div",
        highlight.has(action.target) ? "ledger-item new" : "ledger-item",
        `${action.target}: ${action.kind} ${action.before} → ${action.after}`);
      this.ledgerBox.append(item);
    }

    const scene = state.run.outputs.scenes[state.selectedScheme];
    if (scene) {
      this.viewer.show(scene, (message) => {
        this.bannerBox.textContent = message ?? "";
      });
    }
  }
}

new App(document.getElementById("app")!);
