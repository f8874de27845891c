/** To-Learn List: plan tasks, check them off, and keep the list in the
 * space's shared storage so it survives reloads for every member. */

import type { WidgetContext } from "./host.js";
import { el, clear } from "./ui.js";

interface TodoItem {
  text: string;
  done: boolean;
}

export function mountToLearnList(root: HTMLElement, ctx: WidgetContext): void {
  let items: TodoItem[] = [];
  const list = el("ul", { class: "todo" });
  const storeKey = "to_learn_list";

  const persist = () => {
    void ctx.api("POST", `/api/spaces/${ctx.space}/store`, {
      key: storeKey,
      value: items,
    });
    ctx.pub("todo.update", { items: items as unknown as Record<string, unknown>[] } as never);
  };

  const render = () => {
    clear(list);
    items.forEach((item, index) => {
      const checkbox = el("input", { type: "checkbox" });
      checkbox.checked = item.done;
      checkbox.addEventListener("change", () => {
        items[index].done = checkbox.checked;
        persist();
      });
      const label = el("label", {}, [checkbox, ` ${item.text}`]);
      if (item.done) label.classList.add("done");
      list.appendChild(el("li", {}, [label]));
    });
  };

  ctx.sub("todo.update", (payload) => {
    if (Array.isArray(payload.items)) {
      items = payload.items as unknown as TodoItem[];
      render();
    }
  });

  void ctx
    .api<{ shared_store: Record<string, unknown> }>("GET", `/api/spaces/${ctx.space}`)
    .then((view) => {
      const stored = view.shared_store[storeKey];
      if (Array.isArray(stored)) {
        items = stored as TodoItem[];
        render();
      }
    })
    .catch(() => undefined);

  const input = el("input", { placeholder: "something to learn..." });
  const add = el("button", {}, ["add"]);
  add.addEventListener("click", () => {
    const text = input.value.trim();
    if (!text) return;
    items.push({ text, done: false });
    input.value = "";
    render();
    persist();
  });

  root.append(el("div", { class: "row" }, [input, add]), list);
}
