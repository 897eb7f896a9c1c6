/**
 * DOM behavior of the wired app: session lifecycle, the one-in-flight lock,
 * error toasts with retry, suggestion clicks, checklist and results rendering.
 * The client is stubbed; wire parsing is covered by api.contract.test.ts.
 */

import { beforeEach, describe, expect, it, vi } from "vitest";
import { ApiError } from "../src/api";
import { initApp, parseSessionRoute } from "../src/app";
import type {
  MessageReply,
  PetelProgress,
  ResultsPayload,
  SessionRecord,
  UploadReply,
} from "../src/types";

const UPLOAD_REPLY: UploadReply = {
  reply: "The table tracks study habits against the final result.",
  state: "data_visualization",
  summary: {
    summary: "A table of students.",
    columns: [
      { name: "study_hours", description: "Hours studied per week." },
      { name: "final_result", description: "Whether the student passed." },
    ],
    row: "study_hours=2, final_result=fail",
    trend: "More hours studied goes with more passing.",
  },
  suggestions: [
    { task: "classification", rationale: "Classification: predict whether a student passes.", example_formulation: "" },
    { task: "regression", rationale: "Regression: predict the exam score.", example_formulation: "" },
  ],
};

const RESULTS: ResultsPayload = {
  recommended: "logistic_regression",
  rationale: "logistic_regression scored highest on accuracy.",
  ranked_by: "accuracy",
  ranking: ["logistic_regression", "decision_tree_classifier"],
  methods: [
    { method: "decision_tree_classifier", status: "ok", metrics: { accuracy: 0.5 } },
    { method: "logistic_regression", status: "ok", metrics: { accuracy: 0.625 } },
  ],
};

const RECORD: SessionRecord = {
  session_id: "s1",
  state: "model_training",
  turn_count: 10,
  created_at: 1786699125.0,
  dataset: "student",
  petel: {
    problem_type: "classification",
    problem_target: "final_result equal pass",
    features: ["study_hours"],
    validation_method: null,
  },
  last_summary: "A table of students.",
  snapshot: null,
};

function reply(state: string, progress: PetelProgress = { filled: [], missing: [] }): MessageReply {
  return { reply: `assistant speaking in ${state}`, state, petel_progress: progress };
}

function makeClient() {
  return {
    createSession: vi.fn(() => Promise.resolve({ session_id: "s1", state: "data_visualization" })),
    uploadDataset: vi.fn(() => Promise.resolve(structuredClone(UPLOAD_REPLY))),
    sendMessage: vi.fn(() => Promise.resolve(reply("task_selection"))),
    getSession: vi.fn(() => Promise.resolve(structuredClone(RECORD))),
    getResults: vi.fn(() => Promise.resolve(structuredClone(RESULTS))),
  };
}

const flush = () => new Promise<void>((resolve) => setTimeout(resolve, 0));

function submitText(root: HTMLElement, text: string): void {
  const input = root.querySelector<HTMLInputElement>(".chat-input input");
  const form = root.querySelector<HTMLFormElement>("form.chat-input");
  if (!input || !form) throw new Error("chat input not rendered");
  input.value = text;
  form.dispatchEvent(new Event("submit", { cancelable: true }));
}

function messages(root: HTMLElement): Array<{ role: string; text: string }> {
  return [...root.querySelectorAll<HTMLElement>(".chat-messages li")].map((li) => ({
    role: li.classList.contains("chat-user") ? "user" : "assistant",
    text: li.textContent ?? "",
  }));
}

let root: HTMLElement;

beforeEach(() => {
  document.body.replaceChildren();
  root = document.createElement("div");
  document.body.appendChild(root);
});

describe("parseSessionRoute", () => {
  it("extracts the id from /session/{id} with or without a trailing slash", () => {
    expect(parseSessionRoute("/session/65bfc21aa89a")).toBe("65bfc21aa89a");
    expect(parseSessionRoute("/session/65bfc21aa89a/")).toBe("65bfc21aa89a");
  });

  it("returns null for everything else", () => {
    expect(parseSessionRoute("/")).toBeNull();
    expect(parseSessionRoute("/session/")).toBeNull();
    expect(parseSessionRoute("/session/a b")).toBeNull();
    expect(parseSessionRoute("/sessions/abc")).toBeNull();
  });
});

describe("session boot", () => {
  it("creates a session on load and shows the opening state", async () => {
    const client = makeClient();
    const started = vi.fn();
    const app = initApp(root, client, { onSessionStarted: started });
    await app.ready;

    expect(client.createSession).toHaveBeenCalledTimes(1);
    expect(app.sessionId()).toBe("s1");
    expect(started).toHaveBeenCalledWith("s1");
    expect(root.querySelector(".state-badge")?.textContent).toBe("data_visualization");
  });
});

describe("sending messages", () => {
  it("ignores empty input entirely", async () => {
    const client = makeClient();
    const app = initApp(root, client);
    await app.ready;

    submitText(root, "   ");
    await app.sendUtterance("   ");
    await flush();

    expect(client.sendMessage).not.toHaveBeenCalled();
    expect(messages(root)).toEqual([]);
  });

  it("renders both sides of the exchange and updates badge and checklist", async () => {
    const client = makeClient();
    client.sendMessage.mockResolvedValueOnce(
      reply("task_formulation", { filled: ["problem_target"], missing: ["features"] }),
    );
    const app = initApp(root, client);
    await app.ready;

    submitText(root, "predict the final result");
    await flush();

    expect(client.sendMessage).toHaveBeenCalledWith("s1", "predict the final result");
    expect(messages(root)).toEqual([
      { role: "user", text: "predict the final result" },
      { role: "assistant", text: "assistant speaking in task_formulation" },
    ]);
    expect(root.querySelector(".state-badge")?.textContent).toBe("task_formulation");

    const slots = [...root.querySelectorAll<HTMLElement>(".slot-list li")];
    expect(slots.map((el) => el.dataset.slot)).toEqual(["problem_target", "features"]);
    expect(slots[0]?.classList.contains("slot-filled")).toBe(true);
    expect(slots[1]?.classList.contains("slot-missing")).toBe(true);
  });

  it("allows only one in-flight message and re-enables the input afterwards", async () => {
    const client = makeClient();
    let release!: (value: MessageReply) => void;
    client.sendMessage.mockImplementationOnce(
      () => new Promise<MessageReply>((resolve) => (release = resolve)),
    );
    const app = initApp(root, client);
    await app.ready;

    submitText(root, "first");
    const input = root.querySelector<HTMLInputElement>(".chat-input input");
    expect(input?.disabled).toBe(true);

    submitText(root, "second");
    await app.sendUtterance("third");
    expect(client.sendMessage).toHaveBeenCalledTimes(1);

    release(reply("task_selection"));
    await flush();
    expect(input?.disabled).toBe(false);
  });

  it("turns a gateway failure into a toast whose retry re-sends the same utterance", async () => {
    const client = makeClient();
    client.sendMessage.mockRejectedValueOnce(
      new ApiError(502, "scripted transcript has no entries left"),
    );
    const app = initApp(root, client);
    await app.ready;

    submitText(root, "train the model");
    await flush();

    const toast = document.querySelector(".toast");
    expect(toast?.textContent).toContain("scripted transcript has no entries left");
    const retry = toast?.querySelector<HTMLButtonElement>(".toast-retry");
    expect(retry).not.toBeNull();

    retry?.click();
    await flush();

    expect(client.sendMessage).toHaveBeenCalledTimes(2);
    expect(client.sendMessage).toHaveBeenLastCalledWith("s1", "train the model");
    expect(document.querySelector(".toast")).toBeNull();
    expect(messages(root).at(-1)).toEqual({
      role: "assistant",
      text: "assistant speaking in task_selection",
    });
  });

  it("shows a plain toast without retry for a non-gateway failure", async () => {
    const client = makeClient();
    client.sendMessage.mockRejectedValueOnce(new ApiError(404, "no session 's1'"));
    const app = initApp(root, client);
    await app.ready;

    submitText(root, "hello");
    await flush();

    const toast = document.querySelector(".toast");
    expect(toast?.textContent).toContain("no session 's1'");
    expect(toast?.querySelector(".toast-retry")).toBeNull();
  });
});

describe("dataset upload", () => {
  it("renders the summary card and clickable suggestions from the reply", async () => {
    const client = makeClient();
    const app = initApp(root, client);
    await app.ready;

    await app.uploadCsv("student", "study_hours,final_result\n2,fail\n");
    await flush();

    expect(client.uploadDataset).toHaveBeenCalledWith(
      "s1",
      "student",
      "study_hours,final_result\n2,fail\n",
    );
    expect(root.querySelector(".summary-text")?.textContent).toBe("A table of students.");
    expect(root.querySelectorAll(".summary-columns dt")).toHaveLength(2);
    expect(root.querySelector(".summary-row")?.textContent).toContain("study_hours=2");
    expect(messages(root).at(-1)?.text).toContain("tracks study habits");

    const buttons = [...root.querySelectorAll<HTMLButtonElement>(".suggestions button.suggestion")];
    expect(buttons.map((b) => b.dataset.task)).toEqual(["classification", "regression"]);
  });

  it("clicking a suggestion sends its rationale as the next utterance", async () => {
    const client = makeClient();
    const app = initApp(root, client);
    await app.ready;
    await app.uploadCsv("student", "a,b\n1,2\n");
    await flush();

    root.querySelector<HTMLButtonElement>(".suggestions button.suggestion")?.click();
    await flush();

    expect(client.sendMessage).toHaveBeenCalledWith(
      "s1",
      "Classification: predict whether a student passes.",
    );
    expect(messages(root).at(-2)).toEqual({
      role: "user",
      text: "Classification: predict whether a student passes.",
    });
  });

  it("reads a file dropped on the drop zone and uploads it under its stem name", async () => {
    const client = makeClient();
    const app = initApp(root, client);
    await app.ready;

    const csv = "study_hours,final_result\n2,fail\n";
    const drop = root.querySelector(".drop-zone");
    if (!drop) throw new Error("drop zone not rendered");

    const over = new Event("dragover", { cancelable: true });
    drop.dispatchEvent(over);
    expect(drop.classList.contains("drag-active")).toBe(true);

    const event = new Event("drop", { cancelable: true });
    Object.defineProperty(event, "dataTransfer", {
      value: { files: [new File([csv], "student.csv", { type: "text/csv" })] },
    });
    drop.dispatchEvent(event);
    await flush();
    await flush();

    expect(drop.classList.contains("drag-active")).toBe(false);
    expect(client.uploadDataset).toHaveBeenCalledWith("s1", "student", csv);
  });
});

describe("results", () => {
  it("fetches and renders results when the dialogue reaches model_training", async () => {
    const client = makeClient();
    client.sendMessage.mockResolvedValueOnce(
      reply("model_training", { filled: ["problem_target", "features"], missing: [] }),
    );
    const app = initApp(root, client);
    await app.ready;

    submitText(root, "looks good, run it");
    await flush();

    expect(client.getResults).toHaveBeenCalledWith("s1");
    const panel = root.querySelector<HTMLElement>(".results-panel");
    expect(panel?.hidden).toBe(false);

    const rows = [...root.querySelectorAll<HTMLElement>(".results-table tr")].slice(1);
    expect(rows.map((tr) => tr.dataset.method)).toEqual([
      "logistic_regression",
      "decision_tree_classifier",
    ]);
    expect(rows[0]?.classList.contains("recommended")).toBe(true);
    expect(root.querySelector(".results-rationale")?.textContent).toBe(
      "Recommended: logistic_regression — logistic_regression scored highest on accuracy.",
    );
  });

  it("stays quiet when results are not ready yet", async () => {
    const client = makeClient();
    client.sendMessage.mockResolvedValueOnce(reply("model_training"));
    client.getResults.mockRejectedValueOnce(
      new ApiError(409, "no results yet: the task has not been executed"),
    );
    const app = initApp(root, client);
    await app.ready;

    submitText(root, "run it");
    await flush();

    expect(document.querySelector(".toast")).toBeNull();
    expect(root.querySelector<HTMLElement>(".results-panel")?.hidden).toBe(true);
  });
});

describe("slot values", () => {
  it("click on a filled slot toggles a chip with the value from the session record", async () => {
    const client = makeClient();
    client.sendMessage.mockResolvedValueOnce(
      reply("task_formulation", { filled: ["problem_target"], missing: ["features"] }),
    );
    const app = initApp(root, client);
    await app.ready;

    submitText(root, "predict the final result");
    await flush();

    const slot = root.querySelector<HTMLElement>(".slot-list li.slot-filled");
    expect(slot).not.toBeNull();
    slot?.click();
    await flush();

    expect(client.getSession).toHaveBeenCalledWith("s1");
    const chip = slot?.querySelector<HTMLElement>(".slot-value");
    expect(chip?.hidden).toBe(false);
    expect(chip?.textContent).toBe(JSON.stringify("final_result equal pass"));

    slot?.click();
    expect(chip?.hidden).toBe(true);
  });
});

describe("resume", () => {
  it("restores badge, checklist and results from the stored record", async () => {
    const client = makeClient();
    const app = initApp(root, client, { resumeSessionId: "s1" });
    await app.ready;
    await flush();

    expect(client.createSession).not.toHaveBeenCalled();
    expect(client.getSession).toHaveBeenCalledWith("s1");
    expect(root.querySelector(".state-badge")?.textContent).toBe("model_training");
    expect(messages(root)[0]?.text).toContain("Previously: A table of students.");

    const slots = [...root.querySelectorAll<HTMLElement>(".slot-list li")];
    expect(slots.map((el) => el.dataset.slot)).toEqual([
      "problem_target",
      "features",
      "validation_method",
    ]);
    expect(slots.filter((el) => el.classList.contains("slot-filled"))).toHaveLength(2);

    expect(client.getResults).toHaveBeenCalledWith("s1");
    expect(root.querySelector<HTMLElement>(".results-panel")?.hidden).toBe(false);
  });

  it("offers to start fresh when the session id is unknown", async () => {
    const client = makeClient();
    client.getSession.mockRejectedValueOnce(new ApiError(404, "no session 'zz'"));
    const app = initApp(root, client, { resumeSessionId: "zz" });
    await app.ready;

    const prompt = root.querySelector<HTMLElement>(".session-prompt");
    expect(prompt?.hidden).toBe(false);
    expect(prompt?.textContent).toContain("No session 'zz' exists");
    expect(client.createSession).not.toHaveBeenCalled();

    prompt?.querySelector("button")?.click();
    await flush();

    expect(client.createSession).toHaveBeenCalledTimes(1);
    expect(prompt?.hidden).toBe(true);
    expect(root.querySelector(".state-badge")?.textContent).toBe("data_visualization");
  });
});
