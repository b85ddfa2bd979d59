// Thin client over the tutoring service's /v1 HTTP API.  This module is
// the frontend's only connection to the engine.

export interface Choice {
  template_id: string;
  name: string;
  help_text: string;
}

export interface SessionFigure {
  points: Record<string, [number, number]>;
  segments: [string, string, string][]; // a, b, kind
}

export interface SessionState {
  phase: "choosing_template" | "drawing_construction" | "proof_complete";
  depth: number;
  max_depth: number;
  history: string;
  choices: Choice[];
  figure: SessionFigure;
  snap_radius: number;
}

export interface Feedback {
  tier: "minimal" | "highlight" | "reveal";
  message: string;
  highlights: [string, string][];
  reveal: [number, number][][];
}

export interface OpResponse {
  state: SessionState;
  verdict?: "correct" | "incorrect";
  feedback?: Feedback | null;
  error?: string;
}

async function asJson<T>(res: Response): Promise<T> {
  const body = (await res.json()) as T & { error?: string };
  if (!res.ok) {
    throw new Error(body.error ?? `HTTP ${res.status}`);
  }
  return body;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private post<T>(path: string, body?: unknown): Promise<T> {
    return fetch(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    }).then((r) => asJson<T>(r));
  }

  createSession(problem: unknown, seed: number) {
    return this.post<{ session_id: string; state: SessionState }>(
      "/v1/sessions", { problem, seed });
  }

  chooseTemplate(sid: string, templateId: string) {
    return this.post<OpResponse>(
      `/v1/sessions/${sid}/template`, { template_id: templateId });
  }

  submitConstruction(sid: string, strokes: [number, number][][]) {
    return this.post<OpResponse>(
      `/v1/sessions/${sid}/construction`, { strokes });
  }

  backtrack(sid: string) {
    return this.post<OpResponse>(`/v1/sessions/${sid}/backtrack`);
  }

  state(sid: string) {
    return fetch(`${this.base}/v1/sessions/${sid}`)
      .then((r) => asJson<{ state: SessionState }>(r));
  }

  proof(sid: string) {
    return fetch(`${this.base}/v1/sessions/${sid}/proof`)
      .then((r) => asJson<{ proof: string[] }>(r));
  }
}
