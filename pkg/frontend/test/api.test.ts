import { describe, expect, it } from "vitest";

import { ApiError, Client } from "../src/api.js";
import type { ErrorBody } from "../src/types.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function stub(status: number, body?: unknown) {
  const calls: Call[] = [];
  const client = new Client("http://svc", async (url, init) => {
    calls.push({ url, init });
    return new Response(body === undefined ? null : JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  });
  return { calls, client };
}

describe("Client", () => {
  it("uploads a parse graph as a raw body", async () => {
    const { calls, client } = stub(201, { id: "pg-1" });
    expect(await client.uploadPg('{"scenes": []}')).toBe("pg-1");
    expect(calls[0]?.url).toBe("http://svc/pg");
    expect(calls[0]?.init?.method).toBe("POST");
    expect(calls[0]?.init?.body).toBe('{"scenes": []}');
  });

  it("opens a session with the referenced ids", async () => {
    const { calls, client } = stub(201, { id: "session-1" });
    await client.openSession("pg-1", "onto-1");
    expect(JSON.parse(calls[0]?.init?.body as string)).toEqual({
      pg_id: "pg-1",
      ontology_id: "onto-1",
    });
  });

  it("posts questions to the session ask endpoint", async () => {
    const { calls, client } = stub(200, { question_type: "WH_X" });
    await client.ask("session-1", "Why?");
    expect(calls[0]?.url).toBe("http://svc/sessions/session-1/ask");
    expect(JSON.parse(calls[0]?.init?.body as string)).toEqual({ text: "Why?" });
  });

  it("throws ApiError carrying the service error body", async () => {
    const body: ErrorBody = {
      code: "unprocessable",
      message: "not a recognized question",
      detail: { cues: [], forms: [] },
    };
    const { client } = stub(422, body);
    const err = await client.ask("session-1", "hello").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
    expect(err.body).toEqual(body);
  });

  it("treats 204 reset as void", async () => {
    const { calls, client } = stub(204);
    await expect(client.reset("session-1")).resolves.toBeUndefined();
    expect(calls[0]?.url).toBe("http://svc/sessions/session-1/reset");
  });

  it("unwraps the overlay list from overlay/remove", async () => {
    const { calls, client } = stub(200, { overlay: [] });
    expect(await client.removeOverlay("session-1", 2)).toEqual([]);
    expect(JSON.parse(calls[0]?.init?.body as string)).toEqual({ index: 2 });
  });

  it("fetches parse graphs by id", async () => {
    const { calls, client } = stub(200, { scenes: [], nodes: [] });
    await client.fetchPg("pg-7");
    expect(calls[0]?.url).toBe("http://svc/pg/pg-7");
  });
});
