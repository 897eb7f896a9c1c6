/**
 * End-to-end: boots the real session service (scripted provider, strict
 * transcript order), mounts the real app DOM, and walks the full bundled
 * conversation over live HTTP — upload, every scripted utterance, then the
 * rendered training results. Skips when the `convds` CLI is not installed.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { createApiClient } from "../src/api";
import { initApp, type AppController } from "../src/app";

const FIXTURES = resolve(process.cwd(), "..", "src", "convds", "fixtures", "table9");
const PORT = 8746;
const BASE = `http://127.0.0.1:${PORT}`;

const serverAvailable = spawnSync("convds", ["--help"], { stdio: "ignore" }).status === 0;

async function waitFor(check: () => boolean, what: string, timeoutMs = 45_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (check()) {
      return;
    }
    await new Promise((r) => setTimeout(r, 25));
  }
  throw new Error(`timed out waiting for ${what}`);
}

describe.skipIf(!serverAvailable)("full conversation against a live server", () => {
  let child: ChildProcess;
  let dataDir: string;
  let stderr = "";

  beforeAll(async () => {
    dataDir = mkdtempSync(join(tmpdir(), "webui-e2e-"));
    child = spawn("convds", ["serve", "--host", "127.0.0.1", "--port", String(PORT)], {
      env: {
        ...process.env,
        CONVDS_PROVIDER: "scripted",
        CONVDS_SCRIPT: join(FIXTURES, "transcript.jsonl"),
        CONVDS_SCRIPT_STRICT: "1",
        CONVDS_DATA_DIR: dataDir,
      },
      stdio: ["ignore", "ignore", "pipe"],
    });
    child.stderr?.on("data", (chunk: Buffer) => {
      stderr += chunk.toString();
    });

    const deadline = Date.now() + 45_000;
    for (;;) {
      try {
        await fetch(`${BASE}/v1/sessions/nonexistent`);
        break; // any response, even 404, means the server is up
      } catch {
        if (child.exitCode !== null) {
          throw new Error(`server exited early:\n${stderr}`);
        }
        if (Date.now() > deadline) {
          throw new Error(`server never came up:\n${stderr}`);
        }
        await new Promise((r) => setTimeout(r, 100));
      }
    }
  }, 60_000);

  afterAll(() => {
    child?.kill("SIGTERM");
    if (dataDir) {
      rmSync(dataDir, { recursive: true, force: true });
    }
  });

  let root: HTMLElement;
  let app: AppController;

  function assistantCount(): number {
    return root.querySelectorAll(".chat-messages li.chat-assistant").length;
  }

  function inputEnabled(): boolean {
    const input = root.querySelector<HTMLInputElement>(".chat-input input");
    return input !== null && !input.disabled;
  }

  it("creates a session through the real client", async () => {
    root = document.createElement("div");
    document.body.appendChild(root);
    app = initApp(root, createApiClient(BASE));
    await app.ready;

    expect(app.sessionId()).toMatch(/^[0-9a-f]+$/);
    expect(root.querySelector(".state-badge")?.textContent).toBe("data_visualization");
  });

  it("uploads the csv via a drop event and renders the live summary", async () => {
    const csv = readFileSync(join(FIXTURES, "student.csv"), "utf-8");
    const drop = root.querySelector(".drop-zone");
    if (!drop) throw new Error("drop zone not rendered");

    const event = new Event("drop", { cancelable: true });
    Object.defineProperty(event, "dataTransfer", {
      value: { files: [new File([csv], "student.csv", { type: "text/csv" })] },
    });
    drop.dispatchEvent(event);

    await waitFor(() => assistantCount() === 1, "the upload reply");
    await waitFor(inputEnabled, "the input to unlock");

    expect(root.querySelector(".summary-text")?.textContent?.length).toBeGreaterThan(0);
    expect(root.querySelectorAll(".summary-columns dt").length).toBeGreaterThan(0);
    expect(
      root.querySelectorAll(".suggestions button.suggestion").length,
    ).toBeGreaterThan(0);
  });

  it("walks every scripted utterance to the training state", async () => {
    const utterances: string[] = JSON.parse(
      readFileSync(join(FIXTURES, "utterances.json"), "utf-8"),
    );
    const input = root.querySelector<HTMLInputElement>(".chat-input input");
    const form = root.querySelector<HTMLFormElement>("form.chat-input");
    if (!input || !form) throw new Error("chat input not rendered");

    let replies = assistantCount();
    for (const utterance of utterances) {
      await waitFor(inputEnabled, "the input to unlock");
      input.value = utterance;
      form.dispatchEvent(new Event("submit", { cancelable: true }));
      replies += 1;
      await waitFor(() => assistantCount() === replies, `reply #${replies}`);
    }

    await waitFor(inputEnabled, "the final turn to settle");
    expect(root.querySelector(".state-badge")?.textContent).toBe("model_training");
    expect(stderr).not.toContain("Traceback");
  }, 60_000);

  it("shows the checklist fully filled", () => {
    const slots = root.querySelectorAll(".slot-list li");
    expect(slots.length).toBeGreaterThan(0);
    expect(root.querySelectorAll(".slot-list li.slot-missing")).toHaveLength(0);
    expect(root.querySelectorAll(".slot-list li.slot-filled")).toHaveLength(slots.length);
  });

  it("renders the live training results with a highlighted recommendation", async () => {
    await waitFor(
      () => !(root.querySelector<HTMLElement>(".results-panel")?.hidden ?? true),
      "the results panel",
    );

    const recommended = root.querySelector<HTMLElement>(".results-table tr.recommended");
    expect(recommended).not.toBeNull();
    expect(recommended?.dataset.method).toBe("logistic_regression");

    const rows = root.querySelectorAll(".results-table tr");
    expect(rows.length).toBeGreaterThan(2); // header plus several methods
    expect(root.querySelector(".results-rationale")?.textContent).toContain(
      "Recommended: logistic_regression",
    );
  });

  it("resumes the same session in a fresh view with state intact", async () => {
    const id = app.sessionId();
    if (!id) throw new Error("no live session to resume");

    const second = document.createElement("div");
    document.body.appendChild(second);
    const resumed = initApp(second, createApiClient(BASE), { resumeSessionId: id });
    await resumed.ready;
    await waitFor(
      () => second.querySelector(".state-badge")?.textContent === "model_training",
      "the resumed badge",
    );

    const slots = second.querySelectorAll(".slot-list li");
    expect(slots.length).toBeGreaterThan(0);
    expect(second.querySelectorAll(".slot-list li.slot-missing")).toHaveLength(0);
    await waitFor(
      () => !(second.querySelector<HTMLElement>(".results-panel")?.hidden ?? true),
      "the resumed results panel",
    );
  });
});
