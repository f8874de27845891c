import { describe, expect, it } from "vitest";

import { MessageDeduper, RtClient, type Frame, type PubFrame } from "../src/rt.js";

function pub(publisher: string, topic: string, seq: number, n = seq): PubFrame {
  return {
    kind: "pub",
    space: "s",
    topic,
    payload: { n },
    publisher,
    seq,
    ts: 0,
  };
}

describe("MessageDeduper", () => {
  it("passes an in-order stream through unchanged", () => {
    const dedupe = new MessageDeduper();
    const out = [1, 2, 3].flatMap((seq) => dedupe.accept(pub("p1", "t", seq)));
    expect(out.map((f) => f.seq)).toEqual([1, 2, 3]);
  });

  it("drops exact duplicates", () => {
    const dedupe = new MessageDeduper();
    dedupe.accept(pub("p1", "t", 1));
    expect(dedupe.accept(pub("p1", "t", 1))).toEqual([]);
  });

  it("buffers out-of-order frames until the gap fills", () => {
    const dedupe = new MessageDeduper();
    expect(dedupe.accept(pub("p1", "t", 2))).toEqual([]);
    expect(dedupe.accept(pub("p1", "t", 3))).toEqual([]);
    const released = dedupe.accept(pub("p1", "t", 1));
    expect(released.map((f) => f.seq)).toEqual([1, 2, 3]);
  });

  it("tracks publishers and topics independently", () => {
    const dedupe = new MessageDeduper();
    expect(dedupe.accept(pub("p1", "t", 1)).length).toBe(1);
    expect(dedupe.accept(pub("p2", "t", 1)).length).toBe(1);
    expect(dedupe.accept(pub("p1", "u", 1)).length).toBe(1);
  });
});

class FakeSocket {
  sent: string[] = [];
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: (() => void) | null = null;
  onopen: (() => void) | null = null;
  send(data: string): void {
    this.sent.push(data);
  }
  close(): void {
    this.onclose?.();
  }
  serverPush(frame: Frame): void {
    this.onmessage?.({ data: JSON.stringify(frame) });
  }
}

describe("RtClient", () => {
  it("sends protocol frames and resubscribes on reconnect", () => {
    const sockets: FakeSocket[] = [];
    const client = new RtClient(() => {
      const socket = new FakeSocket();
      sockets.push(socket);
      return socket;
    });
    client.connect();
    sockets[0].onopen?.();
    client.subscribe("paint.stroke");
    client.publish("paint.stroke", { x: 1 }, "shared_paint");
    client.chat("hi");
    expect(sockets[0].sent.map((s) => JSON.parse(s).kind)).toEqual(["sub", "pub", "chat"]);
    expect(JSON.parse(sockets[0].sent[1]).widget).toBe("shared_paint");

    client.connect(); // reconnect re-sends subs
    sockets[1].onopen?.();
    expect(sockets[1].sent.map((s) => JSON.parse(s).kind)).toEqual(["sub"]);
    expect(JSON.parse(sockets[1].sent[0]).topic).toBe("paint.stroke");
  });

  it("delivers deduplicated pubs and tracks presence", () => {
    const socket = new FakeSocket();
    const client = new RtClient(() => socket);
    const seen: Frame[] = [];
    client.onFrame((f) => seen.push(f));
    client.connect();
    socket.onopen?.();

    socket.serverPush({ kind: "presence", space: "s", online: ["ann", "ben"], ts: 0 });
    socket.serverPush(pub("p1", "t", 1));
    socket.serverPush(pub("p1", "t", 1)); // duplicate delivery
    socket.serverPush(pub("p1", "t", 3)); // out of order
    socket.serverPush(pub("p1", "t", 2));

    expect(client.online).toEqual(["ann", "ben"]);
    const pubs = seen.filter((f) => f.kind === "pub") as PubFrame[];
    expect(pubs.map((f) => f.seq)).toEqual([1, 2, 3]);
  });
});
