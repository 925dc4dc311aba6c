import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { ContractServer } from "./contract-server";

function client(server: ContractServer): ApiClient {
  return new ApiClient("http://double.test", server.fetchFn);
}

describe("api client", () => {
  it("creates sessions and round-trips a chat turn", async () => {
    const api = client(new ContractServer());
    const session = await api.createSession();
    expect(session.token).toMatch(/^double-/);
    const chat = await api.chat(session.token, "Recommend a low-sodium dinner");
    expect(chat.recommendation!.results.length).toBeGreaterThan(0);
    expect(chat.subgraph!.nodes.length).toBeGreaterThan(0);
    expect(chat.query_version).toBe(1);
  });

  it("raises typed errors with the server's code", async () => {
    const api = client(new ContractServer());
    const session = await api.createSession();
    await expect(api.chat(session.token, "  ")).rejects.toMatchObject({
      code: "empty_message",
      status: 422,
    });
    await expect(api.apply(session.token)).rejects.toBeInstanceOf(ApiError);
    await expect(api.stage(session.token, "exclude", "Nothing")).rejects.toMatchObject({
      code: "unknown_node",
    });
  });

  it("exposes the clamp header on graph views", async () => {
    const api = client(new ContractServer());
    const session = await api.createSession();
    await api.chat(session.token, "Recommend a low-sodium dinner");
    const fine = await api.graph(session.token, 2);
    expect(fine.clamped).toBe(false);
    const clamped = await api.graph(session.token, 40);
    expect(clamped.clamped).toBe(true);
    expect(clamped.detail).toBe(4);
  });

  it("duplicate staging maps to duplicate_stage", async () => {
    const api = client(new ContractServer());
    const session = await api.createSession();
    await api.chat(session.token, "Recommend a low-sodium dinner");
    await api.stage(session.token, "exclude", "BlackPepper");
    await expect(api.stage(session.token, "exclude", "BlackPepper"))
      .rejects.toMatchObject({ code: "duplicate_stage" });
  });
});
