/**
 * Typed client for the photofit HTTP API. The fetch implementation is
 * injectable so tests can intercept every request; the client itself
 * never fabricates data, it only forwards what the service returns.
 */

export type Schema = Record<string, Record<string, string[]>>;

export interface ComponentSummary {
  id: string;
  kind: string;
  params: Record<string, string>;
  source: string;
  width: number;
  height: number;
}

export interface SessionSnapshot {
  id: string;
  status: "Describing" | "Selecting" | "Assembled" | "Tuned";
  description: Record<string, Record<string, string>>;
  warnings: Record<string, string[]>;
  candidates: Record<string, string[]>;
  selections: Record<string, string>;
  anchor: { row: number; col: number } | null;
  placements: Record<
    string,
    { top_row: number; left_col: number; height: number; width: number }
  > | null;
  offsets: Record<string, number[]>;
  stages: string[];
  threshold: number;
}

export type Stage = "blind" | "masked" | "tuned";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = `${resp.status}`;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body; keep the status text */
      }
      throw new ApiError(resp.status, detail);
    }
    return resp;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.request(path, init);
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.json<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? "{}" : JSON.stringify(body),
    });
  }

  getSchema(): Promise<Schema> {
    return this.json<Schema>("/schema");
  }

  listComponents(
    kind: string,
    params: Record<string, string> = {},
  ): Promise<ComponentSummary[]> {
    const q = new URLSearchParams({ kind, ...params });
    return this.json<{ components: ComponentSummary[] }>(
      `/components?${q.toString()}`,
    ).then((body) => body.components);
  }

  /** Raw PGM bytes exactly as served. */
  async fetchComponentImage(recordId: string): Promise<Uint8Array> {
    const resp = await this.request(`/components/${recordId}/image`);
    return new Uint8Array(await resp.arrayBuffer());
  }

  createSession(): Promise<SessionSnapshot> {
    return this.post<SessionSnapshot>("/sessions");
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.json<SessionSnapshot>(`/sessions/${id}`);
  }

  putDescription(
    id: string,
    description: Record<string, Record<string, string>>,
  ): Promise<SessionSnapshot> {
    return this.json<SessionSnapshot>(`/sessions/${id}/description`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(description),
    });
  }

  postSelection(id: string, kind: string, recordId: string): Promise<SessionSnapshot> {
    return this.post<SessionSnapshot>(`/sessions/${id}/selection`, {
      kind,
      record_id: recordId,
    });
  }

  postAssemble(id: string): Promise<SessionSnapshot> {
    return this.post<SessionSnapshot>(`/sessions/${id}/assemble`);
  }

  postTune(id: string, threshold?: number): Promise<SessionSnapshot> {
    return this.post<SessionSnapshot>(
      `/sessions/${id}/tune`,
      threshold === undefined ? {} : { threshold },
    );
  }

  postNudge(
    id: string,
    kind: string,
    dRow: number,
    dCol: number,
  ): Promise<SessionSnapshot> {
    return this.post<SessionSnapshot>(`/sessions/${id}/nudge`, {
      kind,
      d_row: dRow,
      d_col: dCol,
    });
  }

  /** Raw PGM bytes of a computed stage, exactly as served. */
  async fetchStageImage(id: string, stage: Stage): Promise<Uint8Array> {
    const resp = await this.request(`/sessions/${id}/image/${stage}`);
    return new Uint8Array(await resp.arrayBuffer());
  }
}
