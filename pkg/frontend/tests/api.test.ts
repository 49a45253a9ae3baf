import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, FetchLike } from "../src/api.js";

interface Recorded {
  url: string;
  method: string;
  body: unknown;
}

function recordingClient(
  respond: (url: string, init?: RequestInit) => Response,
): { client: ApiClient; calls: Recorded[] } {
  const calls: Recorded[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    });
    return respond(url, init);
  };
  return { client: new ApiClient("http://svc", fetchImpl), calls };
}

const ok = (body: unknown) =>
  new Response(JSON.stringify(body), {
    status: 200,
    headers: { "content-type": "application/json" },
  });

describe("ApiClient", () => {
  it("fetches the schema from /schema", async () => {
    const payload = { Nose: { Sharpness: ["Sharp"] } };
    const { client, calls } = recordingClient(() => ok(payload));
    expect(await client.getSchema()).toEqual(payload);
    expect(calls).toEqual([{ url: "http://svc/schema", method: "GET", body: undefined }]);
  });

  it("encodes component queries as query parameters", async () => {
    const { client, calls } = recordingClient(() => ok({ components: [] }));
    await client.listComponents("Nose", { Sharpness: "Sharp" });
    expect(calls[0]!.url).toBe("http://svc/components?kind=Nose&Sharpness=Sharp");
  });

  it("returns image bytes untouched", async () => {
    const bytes = new Uint8Array([80, 53, 10, 49, 32, 49, 10, 50, 53, 53, 10, 42]);
    const { client } = recordingClient(
      () => new Response(bytes, { status: 200 }),
    );
    const got = await client.fetchComponentImage("nose-0001");
    expect(Array.from(got)).toEqual(Array.from(bytes));
  });

  it("posts selections and nudges with the wire field names", async () => {
    const { client, calls } = recordingClient(() => ok({ id: "s" }));
    await client.postSelection("s", "Nose", "nose-0001");
    await client.postNudge("s", "Lip", -2, 3);
    expect(calls[0]).toEqual({
      url: "http://svc/sessions/s/selection",
      method: "POST",
      body: { kind: "Nose", record_id: "nose-0001" },
    });
    expect(calls[1]).toEqual({
      url: "http://svc/sessions/s/nudge",
      method: "POST",
      body: { kind: "Lip", d_row: -2, d_col: 3 },
    });
  });

  it("puts the description verbatim", async () => {
    const { client, calls } = recordingClient(() => ok({ id: "s" }));
    const description = { Nose: { Sharpness: "Sharp" } };
    await client.putDescription("s", description);
    expect(calls[0]!.method).toBe("PUT");
    expect(calls[0]!.body).toEqual(description);
  });

  it("sends tune with and without a threshold", async () => {
    const { client, calls } = recordingClient(() => ok({ id: "s" }));
    await client.postTune("s");
    await client.postTune("s", 12);
    expect(calls[0]!.body).toEqual({});
    expect(calls[1]!.body).toEqual({ threshold: 12 });
  });

  it("turns service errors into ApiError with the detail string", async () => {
    const { client } = recordingClient(
      () =>
        new Response(JSON.stringify({ detail: "cannot tune while Selecting" }), {
          status: 409,
          headers: { "content-type": "application/json" },
        }),
    );
    const err = await client.postTune("s").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.message).toBe("cannot tune while Selecting");
  });

  it("copes with non-JSON error bodies", async () => {
    const { client } = recordingClient(() => new Response("boom", { status: 500 }));
    const err = await client.getSchema().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(500);
  });
});
