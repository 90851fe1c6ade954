/** Typed client for the planning service. All numbers displayed in the UI
 * come straight from these payloads; nothing is recomputed client-side. */

export interface Violation {
  severity?: string;
  path?: string;
  message: string;
}

export interface TrimAction {
  target: string;
  kind: "quantity" | "area";
  before: number;
  after: number;
  saved: number;
}

export interface RoomPayload {
  name: string;
  quantity: number;
  unit_area: number;
  priority: string;
}

export interface DepartmentPayload {
  name: string;
  beds: number;
  rooms: RoomPayload[];
}

export interface ProgramPayload {
  level: string;
  score: number;
  primary_extension: boolean;
  beds: {
    projected_population: number;
    theoretical_total: number;
    effective_existing: number;
    net_base: number;
    additions: [string, number][];
    target_total: number;
  };
  departments: DepartmentPayload[];
  totals: { rooms: number; net_area: number; gross_area: number };
  cost: { estimated: number; budget: number; feasible: boolean };
  trim_log: TrimAction[];
}

export interface SceneModulePayload {
  origin: [number, number, number];
  size: [number, number, number];
  room: string;
  department: string;
  floor: number;
}

export interface ScenePayload {
  schema_version: number;
  floors: { index: number; usable_area: number; capacity: number; allocated_modules: number }[];
  modules: SceneModulePayload[];
  unallocated: { room: string; department: string; unit_area: number; priority: string; modules: number }[];
  metadata: Record<string, unknown>;
}

export interface PipelineOutputs {
  config_hash: string;
  soft_violations: Violation[];
  program: ProgramPayload;
  schemes: unknown;
  typologies: Record<string, string>;
  scenes: Record<string, ScenePayload>;
}

export interface PipelineRunPayload {
  run_id: string;
  inputs: { dql: string; site: { vertices: [number, number][] }; seed: number };
  outputs: PipelineOutputs;
  config_hash: string;
  created_at: number;
}

export interface PipelineRequest {
  dql: string;
  site: { vertices: [number, number][] };
  seed: number;
}

export class ApiError extends Error {
  readonly stage: string;
  readonly violations: Violation[];

  constructor(stage: string, message: string, violations: Violation[] = []) {
    super(message);
    this.stage = stage;
    this.violations = violations;
  }
}

export interface PipelineApi {
  postPipeline(body: PipelineRequest, signal?: AbortSignal): Promise<PipelineRunPayload>;
  getRun(runId: string): Promise<PipelineRunPayload>;
}

async function raiseApiError(response: Response): Promise<never> {
  let stage = "service";
  let message = `HTTP ${response.status}`;
  let violations: Violation[] = [];
  try {
    const body = await response.json();
    if (body && body.detail) {
      stage = body.detail.stage ?? stage;
      message = body.detail.message ?? message;
      violations = body.detail.violations ?? [];
    }
  } catch {
    // non-JSON error body; keep the HTTP status message
  }
  throw new ApiError(stage, message, violations);
}

export class HttpPipelineApi implements PipelineApi {
  constructor(private readonly baseUrl: string) {}

  async postPipeline(body: PipelineRequest, signal?: AbortSignal): Promise<PipelineRunPayload> {
    const response = await fetch(`${this.baseUrl}/api/pipeline`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    if (!response.ok) await raiseApiError(response);
    return response.json();
  }

  async getRun(runId: string): Promise<PipelineRunPayload> {
    const response = await fetch(`${this.baseUrl}/api/runs/${encodeURIComponent(runId)}`);
    if (!response.ok) await raiseApiError(response);
    return response.json();
  }
}
