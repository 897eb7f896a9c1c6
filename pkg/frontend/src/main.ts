import { createApiClient } from "./api";
import { initApp, parseSessionRoute } from "./app";
import "./styles.css";

const base = (import.meta.env.VITE_API_BASE as string | undefined) ?? "";
const client = createApiClient(base);
const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}

const resumeSessionId = parseSessionRoute(window.location.pathname) ?? undefined;
initApp(root, client, {
  ...(resumeSessionId ? { resumeSessionId } : {}),
  onSessionStarted: (id) => {
    window.history.pushState({}, "", `/session/${id}`);
  },
});
