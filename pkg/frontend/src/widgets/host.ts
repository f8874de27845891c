/** Runs inside each widget iframe: speaks the bridge protocol with the
 * parent page and mounts the widget implementation for this page's id. */

import { mountWidget } from "./registry.js";

export interface WidgetContext {
  widget: string;
  instance: string;
  space: string;
  learner: string;
  pub(topic: string, payload: Record<string, unknown>): void;
  sub(topic: string, handler: (payload: Record<string, unknown>, publisher: string) => void): void;
  api<T = unknown>(method: string, path: string, body?: unknown): Promise<T>;
}

function widgetIdFromPath(pathname: string): string {
  const file = pathname.split("/").pop() ?? "";
  return file.replace(/\.html$/, "");
}

export function startHost(): void {
  const topicHandlers = new Map<string, ((payload: Record<string, unknown>, publisher: string) => void)[]>();
  const apiWaiters = new Map<number, (result: { ok: boolean; status: number; body: unknown }) => void>();
  let apiSeq = 0;

  const ctx: WidgetContext = {
    widget: widgetIdFromPath(location.pathname),
    instance: "",
    space: "",
    learner: "",
    pub(topic, payload) {
      parent.postMessage({ bridge: "iwc", op: "pub", topic, payload }, "*");
    },
    sub(topic, handler) {
      const handlers = topicHandlers.get(topic) ?? [];
      handlers.push(handler);
      topicHandlers.set(topic, handlers);
      parent.postMessage({ bridge: "iwc", op: "sub", topic }, "*");
    },
    api<T>(method: string, path: string, body?: unknown): Promise<T> {
      const id = ++apiSeq;
      return new Promise<T>((resolve, reject) => {
        apiWaiters.set(id, (result) => {
          if (result.ok) resolve(result.body as T);
          else reject(new Error(`${method} ${path}: ${result.status}`));
        });
        parent.postMessage({ bridge: "api", id, method, path, body }, "*");
      });
    },
  };

  window.addEventListener("message", (event: MessageEvent) => {
    const data = event.data as Record<string, unknown>;
    if (!data || typeof data !== "object") return;
    if (data.bridge === "init") {
      ctx.instance = String(data.instance ?? "");
      ctx.space = String(data.space ?? "");
      ctx.learner = String(data.learner ?? "");
      mountWidget(ctx.widget, document.getElementById("widget-root")!, ctx);
      return;
    }
    if (data.bridge === "iwc" && typeof data.topic === "string") {
      for (const handler of topicHandlers.get(data.topic) ?? []) {
        handler((data.payload as Record<string, unknown>) ?? {}, String(data.publisher ?? ""));
      }
      return;
    }
    if (data.bridge === "api.result") {
      const waiter = apiWaiters.get(data.id as number);
      apiWaiters.delete(data.id as number);
      waiter?.({ ok: Boolean(data.ok), status: Number(data.status), body: data.body });
    }
  });

  parent.postMessage({ bridge: "ready", widget: ctx.widget }, "*");
}

startHost();
