/** The space view: left panel (activities, widgets, store, members, chat),
 * top bar (share/config/exit/logout), and the arrangeable widget frames. */

import type { ApiClient, SpaceView, WidgetInstance } from "../api.js";
import { WidgetBridge, apiProxy } from "../bridge.js";
import { CELL_HEIGHT, gridToPx, sameRect, snapMove, snapResize } from "../layout.js";
import { RtClient, rtUrl } from "../rt.js";
import { memberRows } from "../viewmodel.js";
import { el, clear } from "../widgets/ui.js";
import { renderPanels } from "./panels.js";
import { renderReflection } from "./reflect.js";

export interface SpacePage {
  refresh(): Promise<void>;
  dispose(): void;
}

export async function renderSpace(
  root: HTMLElement,
  api: ApiClient,
  spaceName: string,
  onExit: () => void,
): Promise<SpacePage> {
  let view: SpaceView;
  try {
    view = await api.loadSpace(spaceName);
  } catch {
    // not found or not yet a member: offer to join/create via the lobby
    view = await api.joinSpace(spaceName).catch(() => api.createSpace(spaceName));
  }
  const learner = api.learner!;
  if (!view.members.includes(learner)) {
    view = await api.joinSpace(spaceName);
  }

  const rt = new RtClient(
    () => new WebSocket(rtUrl(location.origin, api.token!, spaceName)) as never,
  );
  const bridge = new WidgetBridge(rt, apiProxy(api), { space: spaceName, learner });
  const frameWindows = new Map<Window, string>();

  window.addEventListener("message", onWindowMessage);
  function onWindowMessage(event: MessageEvent): void {
    const source = event.source as Window | null;
    if (!source) return;
    const instance = frameWindows.get(source);
    if (instance) void bridge.onWidgetMessage(instance, event.data);
  }

  // -- left panel -------------------------------------------------------------

  const membersList = el("ul", { class: "members" });
  const widgetList = el("ul", { class: "widget-list" });
  const activitiesList = el("ul", { class: "activities" });
  const chatLog = el("ul", { class: "chat-log" });
  const chatInput = el("input", { placeholder: "message the space..." });
  const chatSend = el("button", {}, ["send"]);
  chatSend.addEventListener("click", () => {
    if (chatInput.value.trim()) rt.chat(chatInput.value.trim());
    chatInput.value = "";
  });
  chatInput.addEventListener("keydown", (e) => {
    if (e.key === "Enter") chatSend.click();
  });

  const storeInput = el("input", { placeholder: "search the store (try: to do)" });
  const storeResults = el("ul", { class: "store-results" });
  const bundleList = el("ul", { class: "store-results" });
  void api.bundles().then(({ bundles }) => {
    for (const bundle of bundles) {
      const add = el("button", { class: "link" }, ["add bundle"]);
      add.addEventListener("click", async () => {
        await api.addBundle(spaceName, bundle.id);
        await refresh();
      });
      bundleList.appendChild(el("li", {}, [`${bundle.title} `, add]));
    }
  });
  const storeSearch = el("button", {}, ["search"]);
  storeSearch.addEventListener("click", async () => {
    const { widgets } = await api.searchWidgets(storeInput.value);
    clear(storeResults);
    for (const w of widgets.slice(0, 8)) {
      const add = el("button", { class: "link" }, ["add"]);
      add.addEventListener("click", async () => {
        await api.addWidget(spaceName, w.id);
        await refresh();
      });
      storeResults.appendChild(el("li", {}, [`${w.title} (${w.add_count}×) `, add]));
    }
  });

  // -- main area ----------------------------------------------------------------

  const grid = el("div", { class: "grid" });

  function frameFor(instance: WidgetInstance): HTMLElement {
    const frame = el("div", { class: "frame" });
    const title = el("span", {}, [instance.widget_id]);
    const remove = el("button", { class: "link" }, ["✕"]);
    remove.addEventListener("click", async () => {
      await api.removeWidget(spaceName, instance.instance_id);
      await refresh();
    });
    const header = el("div", { class: "frame-header" }, [title, remove]);
    const iframe = el("iframe", {
      src: `/widgets/${instance.widget_id}.html`,
      sandbox: "allow-scripts",
    });
    iframe.addEventListener("load", () => {
      const frameWindow = iframe.contentWindow;
      if (frameWindow) {
        frameWindows.set(frameWindow, instance.instance_id);
        bridge.register(instance.instance_id, instance.widget_id, frameWindow);
        void api.widgetLoaded(spaceName, instance.instance_id);
      }
    });
    const resizer = el("div", { class: "resizer" });
    frame.append(header, iframe, resizer);

    const place = (rect: typeof instance.layout) => {
      const px = gridToPx(rect, grid.clientWidth || 960);
      frame.style.left = `${px.left}px`;
      frame.style.top = `${px.top}px`;
      frame.style.width = `${px.width}px`;
      frame.style.height = `${px.height}px`;
    };
    place(instance.layout);

    // drag to move, snap to the grid, persist on drop
    let start: { x: number; y: number; rect: typeof instance.layout; resize: boolean } | null = null;
    const onMove = (event: MouseEvent) => {
      if (!start) return;
      const dx = event.clientX - start.x;
      const dy = event.clientY - start.y;
      const next = start.resize
        ? snapResize(start.rect, dx, dy, grid.clientWidth || 960)
        : snapMove(start.rect, dx, dy, grid.clientWidth || 960);
      place(next);
    };
    const onUp = async (event: MouseEvent) => {
      if (!start) return;
      const dx = event.clientX - start.x;
      const dy = event.clientY - start.y;
      const next = start.resize
        ? snapResize(start.rect, dx, dy, grid.clientWidth || 960)
        : snapMove(start.rect, dx, dy, grid.clientWidth || 960);
      const previous = start.rect;
      start = null;
      document.removeEventListener("mousemove", onMove);
      document.removeEventListener("mouseup", onUp);
      place(next);
      if (!sameRect(previous, next)) {
        await api.setLayout(spaceName, instance.instance_id, next);
        instance.layout = next;
      }
    };
    const begin = (event: MouseEvent, resize: boolean) => {
      start = { x: event.clientX, y: event.clientY, rect: { ...instance.layout }, resize };
      document.addEventListener("mousemove", onMove);
      document.addEventListener("mouseup", onUp);
      event.preventDefault();
    };
    header.addEventListener("mousedown", (e) => begin(e, false));
    resizer.addEventListener("mousedown", (e) => begin(e, true));
    return frame;
  }

  function renderMembers(): void {
    clear(membersList);
    for (const row of memberRows(view, rt.online)) {
      membersList.appendChild(
        el("li", {}, [
          el("span", { class: row.online ? "dot online" : "dot offline" }),
          ` ${row.learner}${row.isOwner ? " ★" : ""}`,
        ]),
      );
    }
  }

  function renderView(): void {
    clear(activitiesList);
    for (const activity of view.activities) {
      activitiesList.appendChild(el("li", {}, [activity.name]));
    }
    clear(widgetList);
    clear(grid);
    frameWindows.clear();
    const maxY = Math.max(
      4,
      ...view.activities.flatMap((a) => a.widgets.map((w) => w.layout.y + w.layout.height)),
    );
    grid.style.minHeight = `${(maxY + 1) * CELL_HEIGHT}px`;
    for (const activity of view.activities) {
      for (const instance of activity.widgets) {
        widgetList.appendChild(el("li", {}, [`${instance.widget_id} (${instance.instance_id})`]));
        grid.appendChild(frameFor(instance));
      }
    }
    renderMembers();
  }

  async function refresh(): Promise<void> {
    view = await api.loadSpace(spaceName);
    renderView();
  }

  // -- realtime wiring -------------------------------------------------------------

  rt.onFrame((frame) => {
    if (frame.kind === "presence") {
      renderMembers();
    } else if (frame.kind === "chat") {
      const f = frame as { author: string; text: string };
      chatLog.appendChild(el("li", {}, [el("b", {}, [f.author]), `: ${f.text}`]));
      chatLog.scrollTop = chatLog.scrollHeight;
    } else if (frame.kind === "pub") {
      bridge.deliver(frame as never);
    } else if (frame.kind === "history") {
      const messages = (frame as unknown as { messages: { author: string; text: string }[] }).messages;
      clear(chatLog);
      for (const m of messages) {
        chatLog.appendChild(el("li", {}, [el("b", {}, [m.author]), `: ${m.text}`]));
      }
    }
  });
  rt.connect();
  rt.requestHistory(50);

  // -- top bar ----------------------------------------------------------------------

  const shareButton = el("button", {}, ["share"]);
  shareButton.addEventListener("click", () => {
    void navigator.clipboard?.writeText(`${location.origin}${view.share_url}`);
    shareButton.textContent = "link copied";
    setTimeout(() => (shareButton.textContent = "share"), 1500);
  });
  const configButton = el("button", {}, ["config"]);
  const lintPanel = el("div", { class: "lint hidden" });
  configButton.addEventListener("click", async () => {
    lintPanel.classList.toggle("hidden");
    const { findings } = await api.lint(spaceName, learner);
    clear(lintPanel);
    lintPanel.appendChild(el("h4", {}, ["Design check"]));
    if (!findings.length) {
      lintPanel.appendChild(el("p", {}, ["No advisories: phases covered, size fine."]));
    }
    for (const f of findings) {
      lintPanel.appendChild(el("p", { class: "muted" }, [`${f.code}: ${f.message}`]));
    }
  });
  const exitButton = el("button", {}, ["exit"]);
  exitButton.addEventListener("click", () => {
    dispose();
    onExit();
  });
  const logoutButton = el("button", {}, ["logout"]);
  logoutButton.addEventListener("click", () => {
    api.token = null;
    dispose();
    onExit();
  });

  // -- assemble --------------------------------------------------------------------------

  const panels = el("div", { class: "panels" });
  renderPanels(panels, api, spaceName, refresh);
  const reflection = el("div", { class: "reflection" });
  void renderReflection(reflection, api, learner);

  clear(root);
  root.append(
    el("header", { class: "topbar" }, [
      el("b", {}, [`space: ${spaceName}`]),
      shareButton, configButton, exitButton, logoutButton,
    ]),
    el("div", { class: "space-layout" }, [
      el("aside", { class: "left" }, [
        el("h4", {}, ["Activities"]), activitiesList,
        el("h4", {}, ["Widgets"]), widgetList,
        el("h4", {}, ["Add from store"]),
        el("div", { class: "row" }, [storeInput, storeSearch]),
        storeResults,
        el("h4", {}, ["Bundles"]),
        bundleList,
        el("h4", {}, ["Members"]), membersList,
        el("h4", {}, ["Chat"]), chatLog,
        el("div", { class: "row" }, [chatInput, chatSend]),
      ]),
      el("main", { class: "main" }, [lintPanel, grid, panels, reflection]),
    ]),
  );
  renderView();

  function dispose(): void {
    window.removeEventListener("message", onWindowMessage);
    rt.close();
  }

  return { refresh, dispose };
}
