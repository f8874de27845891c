/** Parent-side bridge between widget iframes and the realtime client.
 *
 * Widgets run in sandboxed iframes and speak a small window-message
 * protocol; the bridge scopes each frame to its instance, forwards pub/sub
 * through the space's realtime channel, and proxies REST calls so bearer
 * tokens never enter widget code.
 *
 * widget -> parent: {bridge: "iwc", op: "sub"|"pub", topic, payload?}
 *                   {bridge: "api", id, method, path, body?}
 *                   {bridge: "ready"}
 * parent -> widget: {bridge: "iwc", topic, payload, publisher, seq}
 *                   {bridge: "api.result", id, ok, status, body}
 *                   {bridge: "init", widget, instance, space, learner}
 */

import type { ApiClient } from "./api.js";
import type { PubFrame, RtClient } from "./rt.js";

export interface FrameWindowLike {
  postMessage(message: unknown, targetOrigin: string): void;
}

interface RegisteredFrame {
  instance: string;
  widget: string;
  window: FrameWindowLike;
  topics: Set<string>;
}

export class WidgetBridge {
  private frames = new Map<string, RegisteredFrame>();

  constructor(
    private rt: Pick<RtClient, "subscribe" | "publish">,
    private api: {
      request: (method: string, path: string, body?: unknown) => Promise<{ ok: boolean; status: number; body: unknown }>;
    },
    private context: { space: string; learner: string },
  ) {}

  register(instance: string, widget: string, frameWindow: FrameWindowLike): void {
    this.frames.set(instance, { instance, widget, window: frameWindow, topics: new Set() });
    frameWindow.postMessage(
      { bridge: "init", widget, instance, space: this.context.space, learner: this.context.learner },
      "*",
    );
  }

  unregister(instance: string): void {
    this.frames.delete(instance);
  }

  /** Handle one window message coming from a widget frame. */
  async onWidgetMessage(instance: string, data: unknown): Promise<void> {
    const frame = this.frames.get(instance);
    if (!frame || typeof data !== "object" || data === null) return;
    const msg = data as Record<string, unknown>;
    if (msg.bridge === "iwc" && msg.op === "sub" && typeof msg.topic === "string") {
      frame.topics.add(msg.topic);
      this.rt.subscribe(msg.topic);
      return;
    }
    if (msg.bridge === "iwc" && msg.op === "pub" && typeof msg.topic === "string") {
      this.rt.publish(msg.topic, (msg.payload as Record<string, unknown>) ?? {}, frame.widget);
      return;
    }
    if (msg.bridge === "api" && typeof msg.path === "string") {
      const result = await this.api.request(
        (msg.method as string) ?? "GET",
        msg.path,
        msg.body,
      );
      frame.window.postMessage(
        { bridge: "api.result", id: msg.id, ok: result.ok, status: result.status, body: result.body },
        "*",
      );
    }
  }

  /** Fan a realtime pub frame out to every widget subscribed to its topic. */
  deliver(frame: PubFrame): void {
    for (const registered of this.frames.values()) {
      if (!registered.topics.has(frame.topic)) continue;
      registered.window.postMessage(
        {
          bridge: "iwc",
          topic: frame.topic,
          payload: frame.payload,
          publisher: frame.publisher,
          seq: frame.seq,
        },
        "*",
      );
    }
  }
}

/** Thin API proxy: reuses the ApiClient's fetch + auth, reports raw results. */
export function apiProxy(api: ApiClient, fetchImpl?: typeof fetch) {
  const doFetch = fetchImpl ?? ((input: string, init?: RequestInit) => fetch(input, init));
  return {
    async request(method: string, path: string, body?: unknown) {
      const headers: Record<string, string> = {};
      if (body !== undefined) headers["Content-Type"] = "application/json";
      if (api.token) headers["Authorization"] = `Bearer ${api.token}`;
      const resp = await doFetch(path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      let parsed: unknown = null;
      try {
        parsed = await resp.json();
      } catch {
        parsed = null;
      }
      return { ok: resp.ok, status: resp.status, body: parsed };
    },
  };
}
