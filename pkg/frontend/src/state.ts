/** Session state: current inputs, last run payload, scheme selection and
 * the before/after delta. One pipeline request in flight at a time; a new
 * submission cancels and replaces the previous one. */

import { ApiError, PipelineApi, PipelineRunPayload, Violation } from "./api";

export type SchemeId = "S1" | "S2";

export interface InputState {
  dql: string;
  siteVertices: [number, number][]; // millimeters
  seed: number;
}

export interface StageError {
  stage: string;
  message: string;
  violations: Violation[];
}

export interface DeltaStrip {
  beds: number;
  netArea: number;
  cost: number;
  trimCount: number;
}

export interface ViewState {
  inputs: InputState;
  run: PipelineRunPayload | null;
  previousRun: PipelineRunPayload | null;
  selectedScheme: SchemeId;
  lastError: StageError | null;
  pending: boolean;
}

export class ViewController {
  readonly state: ViewState;
  private inflight: AbortController | null = null;
  private listeners: (() => void)[] = [];

  constructor(private readonly api: PipelineApi, inputs: InputState) {
    this.state = {
      inputs,
      run: null,
      previousRun: null,
      selectedScheme: "S1",
      lastError: null,
      pending: false,
    };
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  setDql(dql: string): void {
    this.state.inputs.dql = dql;
  }

  setSeed(seed: number): void {
    this.state.inputs.seed = seed;
  }

  setSite(vertices: [number, number][]): void {
    this.state.inputs.siteVertices = vertices;
  }

  /** Swap the visible scheme; purely local, no re-run. */
  selectScheme(id: SchemeId): void {
    this.state.selectedScheme = id;
    this.notify();
  }

  /** Run the pipeline with the current inputs. On failure the previous run
   * (and with it the rendered scene) is retained untouched. */
  async submit(): Promise<void> {
    if (this.inflight) this.inflight.abort();
    const controller = new AbortController();
    this.inflight = controller;
    this.state.pending = true;
    this.notify();
    try {
      const run = await this.api.postPipeline(
        {
          dql: this.state.inputs.dql,
          site: { vertices: this.state.inputs.siteVertices },
          seed: this.state.inputs.seed,
        },
        controller.signal,
      );
      if (controller !== this.inflight) return; // replaced meanwhile
      this.state.previousRun = this.state.run;
      this.state.run = run;
      this.state.lastError = null;
    } catch (error) {
      if (controller !== this.inflight) return;
      if (error instanceof ApiError) {
        this.state.lastError = {
          stage: error.stage,
          message: error.message,
          violations: error.violations,
        };
      } else if ((error as Error).name !== "AbortError") {
        this.state.lastError = {
          stage: "service",
          message: String(error),
          violations: [],
        };
      }
    } finally {
      if (controller === this.inflight) {
        this.inflight = null;
        this.state.pending = false;
        this.notify();
      }
    }
  }

  async loadRun(runId: string): Promise<void> {
    const run = await this.api.getRun(runId);
    this.state.previousRun = this.state.run;
    this.state.run = run;
    this.state.inputs = {
      dql: run.inputs.dql,
      siteVertices: run.inputs.site.vertices,
      seed: run.inputs.seed,
    };
    this.state.lastError = null;
    this.notify();
  }

  /** Before/after differences, straight from the two server payloads. */
  delta(): DeltaStrip | null {
    const current = this.state.run;
    const previous = this.state.previousRun;
    if (!current || !previous) return null;
    const a = current.outputs.program;
    const b = previous.outputs.program;
    return {
      beds: a.beds.target_total - b.beds.target_total,
      netArea: a.totals.net_area - b.totals.net_area,
      cost: a.cost.estimated - b.cost.estimated,
      trimCount: a.trim_log.length - b.trim_log.length,
    };
  }

  /** Trim targets present now but absent in the previous run; used to
   * highlight what a budget cut removed. */
  newlyTrimmed(): string[] {
    const current = this.state.run;
    const previous = this.state.previousRun;
    if (!current) return [];
    const before = new Set(
      (previous?.outputs.program.trim_log ?? []).map((t) => t.target),
    );
    const seen = new Set<string>();
    const out: string[] = [];
    for (const t of current.outputs.program.trim_log) {
      if (!before.has(t.target) && !seen.has(t.target)) {
        seen.add(t.target);
        out.push(t.target);
      }
    }
    return out;
  }
}
