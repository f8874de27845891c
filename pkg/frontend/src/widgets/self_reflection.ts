/** Self-Reflection: the open-learner-model chart; every view emits a
 * feed.access publication so the monitor can count reflection activity. */

import type { WidgetContext } from "./host.js";
import { profileBars } from "../viewmodel.js";
import type { StrategyProfile } from "../api.js";
import { el, clear } from "./ui.js";

export function mountSelfReflection(root: HTMLElement, ctx: WidgetContext): void {
  const chart = el("div", { class: "chart" });
  const status = el("p", { class: "muted" }, []);

  const refresh = async () => {
    ctx.pub("feed.access", { instance: ctx.instance });
    try {
      const profile = await ctx.api<StrategyProfile>("GET", `/api/monitor/${ctx.learner}/profile`);
      clear(chart);
      for (const bar of profileBars(profile)) {
        const fill = el("div", { class: "bar-fill" });
        fill.style.width = `${Math.round(bar.fraction * 100)}%`;
        chart.append(
          el("div", { class: "bar-row" }, [
            el("span", { class: "bar-label" }, [bar.strategy]),
            el("div", { class: "bar-track" }, [fill]),
            el("span", { class: "bar-count" }, [String(bar.count)]),
          ]),
        );
      }
      status.textContent = `${profile.unclassified} actions not yet classified`;
    } catch (err) {
      status.textContent = String(err);
    }
  };

  const button = el("button", {}, ["refresh"]);
  button.addEventListener("click", () => void refresh());
  root.append(el("h4", {}, ["Your strategy profile"]), button, chart, status);
  void refresh();
}
