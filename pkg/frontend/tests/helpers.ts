import { ApiClient } from "../src/api";
import { App, AppRoots } from "../src/app";
import { ContractServer } from "./contract-server";

export function mountRoots(): AppRoots {
  document.body.innerHTML = "";
  const make = (id: string) => {
    const div = document.createElement("div");
    div.id = id;
    document.body.appendChild(div);
    return div;
  };
  return {
    chat: make("chat"),
    suggestions: make("suggestions"),
    graph: make("graph"),
    slider: make("slider"),
    record: make("record"),
    status: make("status"),
    conflicts: make("conflicts"),
  };
}

export async function bootApp(): Promise<{ app: App; server: ContractServer }> {
  const server = new ContractServer();
  const app = new App(new ApiClient("http://double.test", server.fetchFn), mountRoots());
  await app.start();
  return { app, server };
}

export function renderedRecordRows(): { id: number; status: string }[] {
  return Array.from(document.querySelectorAll<HTMLElement>(".record-panel li")).map((li) => ({
    id: Number(li.dataset.actionId),
    status: Array.from(li.classList).find((c) => c.startsWith("status-"))!.slice(7),
  }));
}
