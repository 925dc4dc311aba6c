// Browser entry point: mounts the app against the backend named by
// ?api=..., defaulting to the local engine.

import { ApiClient } from "./api";
import { App, AppRoots } from "./app";

function mount(): void {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "http://127.0.0.1:8080";
  const roots: AppRoots = {
    chat: document.getElementById("chat")!,
    suggestions: document.getElementById("suggestions")!,
    graph: document.getElementById("graph")!,
    slider: document.getElementById("slider")!,
    record: document.getElementById("record")!,
    status: document.getElementById("status")!,
    conflicts: document.getElementById("conflicts")!,
  };
  const app = new App(new ApiClient(base), roots);
  void app.start().then(() => app.startUpdateLoop());
}

document.addEventListener("DOMContentLoaded", mount);
