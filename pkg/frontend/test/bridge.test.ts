import { describe, expect, it } from "vitest";

import { WidgetBridge, type FrameWindowLike } from "../src/bridge.js";
import type { PubFrame } from "../src/rt.js";

class FakeWindow implements FrameWindowLike {
  received: unknown[] = [];
  postMessage(message: unknown): void {
    this.received.push(message);
  }
}

function makeBridge() {
  const published: { topic: string; payload: unknown; widget?: string }[] = [];
  const subscribed: string[] = [];
  const apiCalls: { method: string; path: string; body?: unknown }[] = [];
  const bridge = new WidgetBridge(
    {
      subscribe: (topic: string) => void subscribed.push(topic),
      publish: (topic: string, payload: Record<string, unknown>, widget?: string) =>
        void published.push({ topic, payload, widget }),
    } as never,
    {
      request: async (method: string, path: string, body?: unknown) => {
        apiCalls.push({ method, path, body });
        return { ok: true, status: 200, body: { echoed: path } };
      },
    },
    { space: "demo", learner: "ada" },
  );
  return { bridge, published, subscribed, apiCalls };
}

function pubFrame(topic: string, seq = 1): PubFrame {
  return { kind: "pub", space: "demo", topic, payload: { seq }, publisher: "c1", seq, ts: 0 };
}

describe("WidgetBridge", () => {
  it("sends init context when a frame registers", () => {
    const { bridge } = makeBridge();
    const frame = new FakeWindow();
    bridge.register("i1", "text_reader", frame);
    expect(frame.received[0]).toEqual({
      bridge: "init",
      widget: "text_reader",
      instance: "i1",
      space: "demo",
      learner: "ada",
    });
  });

  it("routes pub frames only to subscribed widget frames", async () => {
    const { bridge } = makeBridge();
    const reader = new FakeWindow();
    const paint = new FakeWindow();
    bridge.register("i1", "text_reader", reader);
    bridge.register("i2", "shared_paint", paint);
    await bridge.onWidgetMessage("i2", { bridge: "iwc", op: "sub", topic: "paint.stroke" });

    bridge.deliver(pubFrame("paint.stroke"));
    bridge.deliver(pubFrame("tag.add"));

    const paintIwc = paint.received.filter((m) => (m as { bridge: string }).bridge === "iwc");
    const readerIwc = reader.received.filter((m) => (m as { bridge: string }).bridge === "iwc");
    expect(paintIwc).toHaveLength(1);
    expect((paintIwc[0] as { topic: string }).topic).toBe("paint.stroke");
    expect(readerIwc).toHaveLength(0);
  });

  it("stamps outgoing publications with the widget id", async () => {
    const { bridge, published } = makeBridge();
    bridge.register("i1", "text_reader", new FakeWindow());
    await bridge.onWidgetMessage("i1", {
      bridge: "iwc", op: "pub", topic: "tag.add", payload: { tag: "kings" },
    });
    expect(published).toEqual([
      { topic: "tag.add", payload: { tag: "kings" }, widget: "text_reader" },
    ]);
  });

  it("registers subscriptions upstream on the realtime client", async () => {
    const { bridge, subscribed } = makeBridge();
    bridge.register("i1", "text_reader", new FakeWindow());
    await bridge.onWidgetMessage("i1", { bridge: "iwc", op: "sub", topic: "tag.add" });
    expect(subscribed).toEqual(["tag.add"]);
  });

  it("proxies api calls and returns results to the calling frame", async () => {
    const { bridge, apiCalls } = makeBridge();
    const frame = new FakeWindow();
    bridge.register("i1", "self_evaluation", frame);
    await bridge.onWidgetMessage("i1", {
      bridge: "api", id: 7, method: "POST", path: "/api/learners/ada/competences",
      body: { kind: "domain" },
    });
    expect(apiCalls).toEqual([
      { method: "POST", path: "/api/learners/ada/competences", body: { kind: "domain" } },
    ]);
    const result = frame.received.find((m) => (m as { bridge: string }).bridge === "api.result");
    expect(result).toEqual({
      bridge: "api.result", id: 7, ok: true, status: 200,
      body: { echoed: "/api/learners/ada/competences" },
    });
  });

  it("ignores messages from unregistered frames", async () => {
    const { bridge, published } = makeBridge();
    await bridge.onWidgetMessage("ghost", { bridge: "iwc", op: "pub", topic: "x", payload: {} });
    expect(published).toEqual([]);
  });
});
