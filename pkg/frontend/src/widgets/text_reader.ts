/** Text Reader: read prepared paragraphs and tag them; every tag action is
 * published so the evaluation and monitoring widgets can react. */

import type { WidgetContext } from "./host.js";
import { el } from "./ui.js";

const PARAGRAPHS = [
  {
    id: "p1",
    text:
      "The Merovingian dynasty ruled the Frankish kingdom from the fifth to the " +
      "eighth century. Its kings traced their line to Merovech, a half-legendary " +
      "ancestor of Childeric I.",
  },
  {
    id: "p2",
    text:
      "Clovis I united the Frankish tribes under one crown, adopted Christianity, " +
      "and made Paris his seat. His conversion bound the dynasty to the church.",
  },
  {
    id: "p3",
    text:
      "Real power later drifted to the mayors of the palace. After the battle of " +
      "Tertry the mayors ruled in all but name, until the dynasty was deposed.",
  },
];

export function mountTextReader(root: HTMLElement, ctx: WidgetContext): void {
  const tagList = el("ul", { class: "tags" });
  const seen = new Set<string>();

  const renderTag = (paragraph: string, tag: string, mine: boolean) => {
    const key = `${paragraph}:${tag}`;
    if (seen.has(key)) return;
    seen.add(key);
    const item = el("li", {}, [`${tag} (${paragraph})${mine ? "" : " — by a peer"}`]);
    const remove = el("button", { class: "link" }, ["remove"]);
    remove.addEventListener("click", () => {
      ctx.pub("tag.remove", { paragraph, tag });
      seen.delete(key);
      item.remove();
    });
    item.append(" ", remove);
    tagList.appendChild(item);
  };

  ctx.sub("tag.add", (payload) => {
    renderTag(String(payload.paragraph ?? "?"), String(payload.tag ?? ""), false);
  });
  ctx.sub("tag.remove", (payload) => {
    seen.delete(`${payload.paragraph}:${payload.tag}`);
  });

  for (const paragraph of PARAGRAPHS) {
    const input = el("input", { placeholder: "tag this paragraph" });
    const button = el("button", {}, ["tag"]);
    button.addEventListener("click", () => {
      const tag = input.value.trim();
      if (!tag) return;
      ctx.pub("tag.add", { paragraph: paragraph.id, tag });
      renderTag(paragraph.id, tag, true);
      input.value = "";
    });
    root.append(
      el("p", {}, [paragraph.text]),
      el("div", { class: "row" }, [input, button]),
    );
  }
  root.append(el("h4", {}, ["Tags"]), tagList);
}
