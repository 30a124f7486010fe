// Typed client for the editor HTTP API.  All spans on the wire are byte
// offsets into UTF-8 text; JavaScript strings index UTF-16 code units,
// so callers convert with byteOffset/byteSpan before sending.

export interface DiagnosticInfo {
  severity: string;
  code: string;
  message: string;
  start: number | null;
  end: number | null;
  line: number | null;
  col: number | null;
}

export interface ParamInfo {
  name: string;
  label: string | null;
  type: string;
  kind: string;
  span: { start: number; end: number } | null;
  origin: string;
  cardinality: number | null;
  preview: string[] | null;
}

export interface StateInfo {
  revision: number;
  seed: number;
  plan_text: string;
  diagnostics: DiagnosticInfo[];
  params: ParamInfo[];
  files: string[];
  job_count: number | null;
  job_count_error: string | null;
}

export interface EditSpan {
  start: number;
  end: number;
  text: string;
}

export interface ParameterizeRequest {
  name: string;
  type: string;
  domain: string;
  label?: string;
  file?: string;
  start?: number;
  end?: number;
  if_revision?: number;
}

export interface ComputeResult {
  value: number;
  text: string;
  canonical: string;
}

const encoder = new TextEncoder();

export function byteOffset(text: string, charIndex: number): number {
  return encoder.encode(text.slice(0, charIndex)).length;
}

export function byteSpan(
  text: string,
  charStart: number,
  charEnd: number,
): { start: number; end: number } {
  const start = byteOffset(text, charStart);
  return { start, end: start + encoder.encode(text.slice(charStart, charEnd)).length };
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string | null,
    message: string,
    public diagnostics: DiagnosticInfo[] = [],
  ) {
    super(message);
  }
}

export class RevisionConflictError extends Error {
  constructor(public revision: number) {
    super(`revision is ${revision}`);
  }
}

async function toError(resp: Response): Promise<Error> {
  let body: Record<string, unknown> = {};
  try {
    body = (await resp.json()) as Record<string, unknown>;
  } catch {
    // Non-JSON error body; fall through with what we have.
  }
  if (resp.status === 409 && typeof body.revision === "number") {
    return new RevisionConflictError(body.revision);
  }
  return new ApiError(
    resp.status,
    typeof body.code === "string" ? body.code : null,
    typeof body.message === "string" ? body.message : `HTTP ${resp.status}`,
    Array.isArray(body.diagnostics) ? (body.diagnostics as DiagnosticInfo[]) : [],
  );
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await fetch(this.base + path, init);
    if (!resp.ok) throw await toError(resp);
    return (await resp.json()) as T;
  }

  state(): Promise<StateInfo> {
    return this.request("GET", "/api/state");
  }

  async events(since: number, timeout = 25): Promise<number> {
    const out = await this.request<{ revision: number }>(
      "GET",
      `/api/events?since=${since}&timeout=${timeout}`,
    );
    return out.revision;
  }

  async setPlan(text: string, ifRevision?: number): Promise<number> {
    const out = await this.request<{ revision: number }>("POST", "/api/plan", {
      text,
      if_revision: ifRevision ?? null,
    });
    return out.revision;
  }

  async editPlan(edits: EditSpan[], ifRevision?: number): Promise<number> {
    const out = await this.request<{ revision: number }>("POST", "/api/edit", {
      edits,
      if_revision: ifRevision ?? null,
    });
    return out.revision;
  }

  async setSeed(seed: number, ifRevision?: number): Promise<number> {
    const out = await this.request<{ revision: number }>("POST", "/api/seed", {
      seed,
      if_revision: ifRevision ?? null,
    });
    return out.revision;
  }

  async parameterize(req: ParameterizeRequest): Promise<number> {
    const out = await this.request<{ revision: number }>(
      "POST",
      "/api/parameterize",
      req,
    );
    return out.revision;
  }

  async getFile(name: string): Promise<string> {
    const out = await this.request<{ name: string; text: string }>(
      "GET",
      `/api/file/${encodeURI(name)}`,
    );
    return out.text;
  }

  async putFile(name: string, text: string, ifRevision?: number): Promise<number> {
    const out = await this.request<{ revision: number }>(
      "PUT",
      `/api/file/${encodeURI(name)}`,
      { text, if_revision: ifRevision ?? null },
    );
    return out.revision;
  }

  async deleteFile(name: string): Promise<number> {
    const out = await this.request<{ revision: number }>(
      "DELETE",
      `/api/file/${encodeURI(name)}`,
    );
    return out.revision;
  }

  compute(expr: string): Promise<ComputeResult> {
    return this.request("POST", "/api/compute", { expr });
  }

  async save(path: string): Promise<void> {
    await this.request("POST", "/api/save", { path });
  }

  async open(path: string): Promise<number> {
    const out = await this.request<{ revision: number }>("POST", "/api/open", {
      path,
    });
    return out.revision;
  }
}
