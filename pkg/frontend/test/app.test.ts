// @vitest-environment jsdom
// Application flow against a stubbed API client.
import fs from "node:fs";
import path from "node:path";
import { beforeEach, describe, expect, it, vi } from "vitest";

import type {
  ApiClient, Feedback, OpResponse, SessionState,
} from "../src/api.js";
import { App, mount } from "../src/app.js";

const STATE: SessionState = {
  phase: "choosing_template",
  depth: 0,
  max_depth: 3,
  history: "",
  choices: [
    { template_id: "t1", name: "Template one", help_text: "h1" },
    { template_id: "t2", name: "Template two", help_text: "h2" },
  ],
  figure: {
    points: { A: [0, 0], B: [4, 0], C: [1, 3] },
    segments: [["A", "B", "given"], ["B", "C", "given"],
      ["A", "C", "given"]],
  },
  snap_radius: 0.2,
};

function dom(): void {
  document.body.innerHTML = `
    <svg id="figure" xmlns="http://www.w3.org/2000/svg"></svg>
    <textarea id="problem-input"></textarea>
    <button id="start"></button><div id="status"></div>
    <div id="choices"></div>
    <button id="submit"></button><button id="clear"></button>
    <button id="back"></button>
    <div id="feedback"></div><div id="history"></div><div id="proof"></div>`;
}

function fakeApi(overrides: Partial<ApiClient> = {}): ApiClient {
  return {
    createSession: vi.fn(async () => ({ session_id: "s1", state: STATE })),
    chooseTemplate: vi.fn(async (): Promise<OpResponse> => ({
      state: { ...STATE, phase: "drawing_construction", choices: [] },
    })),
    submitConstruction: vi.fn(async (): Promise<OpResponse> => ({
      state: STATE, verdict: "incorrect",
      feedback: {
        tier: "minimal", message: "Not quite - try again.",
        highlights: [], reveal: [],
      } as Feedback,
    })),
    backtrack: vi.fn(async (): Promise<OpResponse> => ({ state: STATE })),
    state: vi.fn(),
    proof: vi.fn(async () => ({ proof: ["1. done"] })),
    ...overrides,
  } as unknown as ApiClient;
}

describe("App", () => {
  beforeEach(dom);

  it("starts a session and lists the offered templates", async () => {
    const app = mountWith(fakeApi());
    (document.getElementById("problem-input") as HTMLTextAreaElement)
      .value = "{}";
    await app.start();
    const buttons = Array.from(
      document.querySelectorAll("#choices button"));
    expect(buttons.map((b) => b.textContent))
      .toEqual(["Template one", "Template two"]);
    // template metadata is name + help only; nothing marks the answer
    for (const b of buttons) {
      expect(Object.keys((b as HTMLElement).dataset)).toEqual(["template"]);
    }
  });

  it("shows feedback after a rejected construction", async () => {
    const api = fakeApi();
    const app = mountWith(api);
    app.apply(STATE);
    const res = await api.submitConstruction("s1", []);
    app.apply(res.state, res.feedback);
    expect(document.getElementById("feedback")!.textContent)
      .toContain("[minimal]");
  });

  it("rejects malformed problem JSON without calling the API", async () => {
    const api = fakeApi();
    const app = mountWith(api);
    (document.getElementById("problem-input") as HTMLTextAreaElement)
      .value = "{nope";
    await app.start();
    expect(api.createSession).not.toHaveBeenCalled();
    expect(document.getElementById("status")!.textContent)
      .toContain("not valid JSON");
  });

  it("fetches the proof once the session completes", async () => {
    const api = fakeApi();
    const app = mountWith(api);
    // reach a state with a session id first
    (document.getElementById("problem-input") as HTMLTextAreaElement)
      .value = "{}";
    await app.start();
    app.apply({ ...STATE, phase: "proof_complete", choices: [] });
    await new Promise((r) => setTimeout(r, 0));
    expect(api.proof).toHaveBeenCalled();
    expect(document.getElementById("proof")!.textContent)
      .toContain("1. done");
  });
});

describe("solution secrecy", () => {
  it("the client never reads an is_solution flag", () => {
    const src = path.join(__dirname, "..", "src");
    for (const file of fs.readdirSync(src)) {
      const text = fs.readFileSync(path.join(src, file), "utf8");
      expect(text.includes("is_solution"), file).toBe(false);
      expect(text.includes("isSolution"), file).toBe(false);
    }
  });
});

function mountWith(api: ApiClient): App {
  const byId = (id: string) => document.getElementById(id) as HTMLElement;
  return new App({
    svg: document.getElementById("figure") as unknown as SVGSVGElement,
    choices: byId("choices"),
    feedback: byId("feedback"),
    history: byId("history"),
    proof: byId("proof"),
    status: byId("status"),
    submit: byId("submit") as HTMLButtonElement,
    clear: byId("clear") as HTMLButtonElement,
    back: byId("back") as HTMLButtonElement,
    problemInput: byId("problem-input") as HTMLTextAreaElement,
    start: byId("start") as HTMLButtonElement,
  }, api);
}
