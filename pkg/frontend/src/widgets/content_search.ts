/** Media Search: shows the server's content recommendations for the
 * learner's goal concepts; refreshes when a concept is selected elsewhere. */

import type { WidgetContext } from "./host.js";
import { el, clear } from "./ui.js";

interface ContentRec {
  kind: string;
  item_id: string;
  score: number;
  reasons: string[];
}

export function mountContentSearch(root: HTMLElement, ctx: WidgetContext): void {
  const list = el("ol", {});
  const status = el("p", { class: "muted" }, ["no search yet"]);

  const search = async () => {
    try {
      const doc = await ctx.api<{ recommendations: ContentRec[] }>(
        "GET",
        `/api/recommend/content?learner=${encodeURIComponent(ctx.learner)}`,
      );
      clear(list);
      // render in server order: the ranking is the server's, not ours
      for (const rec of doc.recommendations) {
        list.appendChild(
          el("li", {}, [`${rec.item_id} (score ${rec.score}) — ${rec.reasons.join("; ")}`]),
        );
      }
      status.textContent = doc.recommendations.length
        ? `${doc.recommendations.length} learning objects`
        : "nothing matches your goal concepts yet";
    } catch (err) {
      status.textContent = String(err);
    }
  };

  ctx.sub("concept.selected", () => void search());
  const button = el("button", {}, ["search my goal concepts"]);
  button.addEventListener("click", () => void search());

  root.append(button, status, list);
}
