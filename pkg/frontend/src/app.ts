// Interactive tutoring page: load a problem, pick templates, draw
// auxiliary strokes, follow feedback, read the finished proof.

import { ApiClient, Feedback, SessionState } from "./api.js";
import { fitView, renderFigure, toFigure, View } from "./render.js";
import { snapStroke, XY } from "./snap.js";

interface Ui {
  svg: SVGSVGElement;
  choices: HTMLElement;
  feedback: HTMLElement;
  history: HTMLElement;
  proof: HTMLElement;
  status: HTMLElement;
  submit: HTMLButtonElement;
  clear: HTMLButtonElement;
  back: HTMLButtonElement;
  problemInput: HTMLTextAreaElement;
  start: HTMLButtonElement;
}

export class App {
  private api: ApiClient;
  private sid: string | null = null;
  private state: SessionState | null = null;
  private view: View | null = null;
  private strokes: [XY, XY][] = [];
  private dragStart: XY | null = null;

  constructor(private ui: Ui, api?: ApiClient) {
    this.api = api ?? new ApiClient();
    ui.start.addEventListener("click", () => void this.start());
    ui.submit.addEventListener("click", () => void this.submit());
    ui.clear.addEventListener("click", () => this.clearStrokes());
    ui.back.addEventListener("click", () => void this.backtrack());
    ui.svg.addEventListener("pointerdown", (e) => this.penDown(e));
    ui.svg.addEventListener("pointerup", (e) => this.penUp(e));
  }

  private setStatus(text: string) {
    this.ui.status.textContent = text;
  }

  async start(): Promise<void> {
    let problem: unknown;
    try {
      problem = JSON.parse(this.ui.problemInput.value);
    } catch {
      this.setStatus("problem is not valid JSON");
      return;
    }
    try {
      const res = await this.api.createSession(problem, 0);
      this.sid = res.session_id;
      this.apply(res.state);
      this.setStatus("session started - choose a template");
    } catch (err) {
      this.setStatus(String(err));
    }
  }

  apply(state: SessionState, feedback?: Feedback | null): void {
    this.state = state;
    this.view = fitView(state.figure);
    this.ui.history.textContent = state.history || "(no attempts yet)";
    this.redraw(feedback?.highlights ?? []);
    this.renderChoices(state);
    this.renderFeedback(feedback ?? null);
    if (state.phase === "proof_complete") {
      void this.showProof();
    }
  }

  private redraw(highlights: [string, string][] = []): void {
    if (!this.state || !this.view) return;
    renderFigure(this.ui.svg, this.state.figure, this.view, this.strokes,
      highlights);
  }

  private renderChoices(state: SessionState): void {
    this.ui.choices.innerHTML = "";
    for (const c of state.choices) {
      const btn = document.createElement("button");
      btn.textContent = c.name;
      btn.title = c.help_text;
      btn.dataset.template = c.template_id;
      btn.addEventListener("click", () => void this.choose(c.template_id));
      this.ui.choices.appendChild(btn);
    }
    const drawing = state.phase === "drawing_construction";
    this.ui.submit.disabled = !drawing;
    this.ui.clear.disabled = !drawing;
  }

  private renderFeedback(fb: Feedback | null): void {
    this.ui.feedback.textContent = fb ? `[${fb.tier}] ${fb.message}` : "";
  }

  async choose(templateId: string): Promise<void> {
    if (!this.sid) return;
    try {
      const res = await this.api.chooseTemplate(this.sid, templateId);
      this.apply(res.state);
      this.setStatus("draw the auxiliary strokes, then submit");
    } catch (err) {
      this.setStatus(String(err));
    }
  }

  private penDown(e: PointerEvent): void {
    if (this.state?.phase !== "drawing_construction" || !this.view) return;
    this.dragStart = toFigure(this.view, this.eventXY(e));
  }

  private penUp(e: PointerEvent): void {
    if (!this.dragStart || !this.state || !this.view) return;
    const end = toFigure(this.view, this.eventXY(e));
    try {
      this.strokes.push(snapStroke(
        this.state.figure, [this.dragStart, end],
        this.state.snap_radius));
      this.redraw();
    } catch (err) {
      this.setStatus(String(err));
    }
    this.dragStart = null;
  }

  private eventXY(e: PointerEvent): XY {
    const rect = this.ui.svg.getBoundingClientRect();
    const scale = 480 / rect.width;
    return [(e.clientX - rect.left) * scale,
      (e.clientY - rect.top) * scale];
  }

  clearStrokes(): void {
    this.strokes = [];
    this.redraw();
  }

  async submit(): Promise<void> {
    if (!this.sid || this.strokes.length === 0) return;
    const strokes = this.strokes.map(
      ([a, b]) => [a, b] as [number, number][]);
    try {
      const res = await this.api.submitConstruction(this.sid, strokes);
      if (res.verdict === "correct") {
        this.strokes = [];
        this.setStatus("construction accepted");
      } else {
        this.setStatus("not accepted - see the feedback");
      }
      this.apply(res.state, res.feedback);
    } catch (err) {
      this.setStatus(String(err));
    }
  }

  async backtrack(): Promise<void> {
    if (!this.sid) return;
    try {
      const res = await this.api.backtrack(this.sid);
      this.strokes = [];
      this.apply(res.state);
      this.setStatus("backed up one step");
    } catch (err) {
      this.setStatus(String(err));
    }
  }

  private async showProof(): Promise<void> {
    if (!this.sid) return;
    const res = await this.api.proof(this.sid);
    this.ui.proof.textContent = res.proof.join("\n");
    this.setStatus("proof complete");
  }
}

export function mount(doc: Document): App {
  const byId = <T extends HTMLElement>(id: string) =>
    doc.getElementById(id) as T;
  return new App({
    svg: doc.getElementById("figure") as unknown as SVGSVGElement,
    choices: byId("choices"),
    feedback: byId("feedback"),
    history: byId("history"),
    proof: byId("proof"),
    status: byId("status"),
    submit: byId<HTMLButtonElement>("submit"),
    clear: byId<HTMLButtonElement>("clear"),
    back: byId<HTMLButtonElement>("back"),
    problemInput: byId<HTMLTextAreaElement>("problem-input"),
    start: byId<HTMLButtonElement>("start"),
  });
}

if (typeof document !== "undefined" && document.getElementById("figure")) {
  mount(document);
}
