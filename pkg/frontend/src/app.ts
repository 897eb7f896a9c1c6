/** Wires the panels to the API client: one session, one in-flight message. */

import { ApiError, type ApiClient } from "./api";
import { createChatView } from "./panels/chat";
import { createDatasetPanel } from "./panels/dataset";
import { createPetelPanel } from "./panels/petel";
import { createResultsPanel } from "./panels/results";
import { createToastStack } from "./toast";
import type { SessionRecord } from "./types";

export interface AppController {
  sessionId(): string | null;
  sendUtterance(text: string): Promise<void>;
  uploadCsv(name: string, csv: string): Promise<void>;
  ready: Promise<void>;
}

export interface AppOptions {
  /** Session id to resume, e.g. parsed from /session/{id}. */
  resumeSessionId?: string;
  /** Called with the new id so the host can update the location. */
  onSessionStarted?: (sessionId: string) => void;
}

export function parseSessionRoute(pathname: string): string | null {
  const match = /^\/session\/([A-Za-z0-9-]+)\/?$/.exec(pathname);
  return match ? (match[1] ?? null) : null;
}

export function initApp(root: HTMLElement, client: ApiClient, options: AppOptions = {}): AppController {
  root.replaceChildren();
  root.className = "app";

  const toasts = createToastStack();
  let sessionId: string | null = null;
  let busy = false;
  let cachedRecord: SessionRecord | null = null;

  const chat = createChatView((text) => void sendUtterance(text));
  const dataset = createDatasetPanel({
    onUpload: (name, csv) => void uploadCsv(name, csv),
    onSuggestion: (text) => void sendUtterance(text),
  });
  const petel = createPetelPanel(async (slot) => {
    if (!sessionId) {
      return null;
    }
    cachedRecord = cachedRecord ?? (await client.getSession(sessionId));
    return cachedRecord.petel ? (cachedRecord.petel[slot] ?? null) : null;
  });
  const results = createResultsPanel();

  const prompt = document.createElement("div");
  prompt.className = "session-prompt";
  prompt.hidden = true;

  const side = document.createElement("div");
  side.className = "side";
  side.append(dataset.el, petel.el, results.el);
  root.append(toasts.el, prompt, chat.el, side);

  function setBusy(value: boolean): void {
    busy = value;
    chat.setBusy(value);
  }

  function report(error: unknown, retry?: () => void): void {
    const message = error instanceof Error ? error.message : String(error);
    const retriable = error instanceof ApiError && error.retriable && retry;
    toasts.show(message, retriable ? { onRetry: retry } : {});
  }

  function showCreatePrompt(reason: string): void {
    prompt.hidden = false;
    prompt.replaceChildren();
    const text = document.createElement("p");
    text.textContent = reason;
    const start = document.createElement("button");
    start.type = "button";
    start.textContent = "Start a new session";
    start.addEventListener("click", () => {
      prompt.hidden = true;
      void start_();
    });
    prompt.append(text, start);
  }

  async function start_(): Promise<void> {
    try {
      const created = await client.createSession();
      sessionId = created.session_id;
      chat.setState(created.state);
      options.onSessionStarted?.(created.session_id);
    } catch (error) {
      report(error, () => void start_());
    }
  }

  async function resume(id: string): Promise<void> {
    try {
      const record = await client.getSession(id);
      sessionId = record.session_id;
      cachedRecord = record;
      chat.setState(record.state);
      if (record.last_summary) {
        chat.addMessage("assistant", `Previously: ${record.last_summary}`);
      }
      if (record.petel) {
        // the progress report covers the fillable slots; problem_type is
        // fixed the moment the task is selected, so it is not a checklist row
        const slots = Object.entries(record.petel).filter(([slot]) => slot !== "problem_type");
        petel.update({
          filled: slots.filter(([, v]) => v !== null).map(([slot]) => slot),
          missing: slots.filter(([, v]) => v === null).map(([slot]) => slot),
        });
      }
      if (record.state === "model_training") {
        await refreshResults();
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        showCreatePrompt(`No session '${id}' exists on this server.`);
        return;
      }
      report(error, () => void resume(id));
    }
  }

  async function refreshResults(): Promise<void> {
    if (!sessionId) {
      return;
    }
    try {
      results.update(await client.getResults(sessionId));
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        return; // nothing trained yet
      }
      report(error);
    }
  }

  async function uploadCsv(name: string, csv: string): Promise<void> {
    if (!sessionId) {
      report(new Error("no session yet — create one first"));
      return;
    }
    if (busy) {
      return;
    }
    setBusy(true);
    try {
      const reply = await client.uploadDataset(sessionId, name, csv);
      cachedRecord = null;
      chat.addMessage("assistant", reply.reply);
      chat.setState(reply.state);
      dataset.showSummary(reply.summary);
      dataset.showSuggestions(reply.suggestions);
    } catch (error) {
      report(error, error instanceof ApiError && error.retriable ? () => void uploadCsv(name, csv) : undefined);
    } finally {
      setBusy(false);
    }
  }

  /** POST one utterance and render the reply; shared by send and retry. */
  async function deliver(text: string): Promise<void> {
    setBusy(true);
    try {
      const reply = await client.sendMessage(sessionId as string, text);
      cachedRecord = null;
      chat.addMessage("assistant", reply.reply);
      chat.setState(reply.state);
      petel.update(reply.petel_progress);
      if (reply.state === "model_training") {
        await refreshResults();
      }
    } catch (error) {
      // a gateway hiccup is retriable with the exact same utterance
      report(error, error instanceof ApiError && error.retriable ? () => void retry(text) : undefined);
    } finally {
      setBusy(false);
    }
  }

  async function retry(text: string): Promise<void> {
    if (busy || !sessionId) {
      return;
    }
    await deliver(text);
  }

  async function sendUtterance(text: string): Promise<void> {
    const trimmed = text.trim();
    if (!trimmed || busy || !sessionId) {
      return;
    }
    chat.addMessage("user", trimmed);
    await deliver(trimmed);
  }

  const ready = options.resumeSessionId ? resume(options.resumeSessionId) : start_();

  return {
    sessionId: () => sessionId,
    sendUtterance,
    uploadCsv,
    ready,
  };
}
