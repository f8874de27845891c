/** Reflection views: the clustered action sequence with technique pickers
 * (manual assignments feed the monitor) and the strategy bar chart. */

import type { ApiClient } from "../api.js";
import { profileBars, sequenceRows } from "../viewmodel.js";
import { el, clear } from "../widgets/ui.js";

export async function renderReflection(root: HTMLElement, api: ApiClient, learner: string): Promise<void> {
  const sequence = el("ul", { class: "sequence" });
  const chart = el("div", { class: "chart" });
  const status = el("p", { class: "muted" }, []);

  const { techniques } = await api
    .techniques()
    .catch(() => ({ techniques: [] as { id: string; name: string; strategy: string }[] }));

  async function drawChart(): Promise<void> {
    const profile = await api.profile(learner);
    clear(chart);
    for (const bar of profileBars(profile)) {
      const fill = el("div", { class: "bar-fill" });
      fill.style.width = `${Math.round(bar.fraction * 100)}%`;
      chart.append(
        el("div", { class: "bar-row" }, [
          el("span", { class: "bar-label" }, [bar.strategy.replaceAll("_", " ")]),
          el("div", { class: "bar-track" }, [fill]),
          el("span", { class: "bar-count" }, [String(bar.count)]),
        ]),
      );
    }
    status.textContent = `${profile.unclassified} actions unclassified`;
  }

  async function drawSequence(): Promise<void> {
    const { clusters } = await api.clusters(learner);
    clear(sequence);
    for (const row of sequenceRows(clusters)) {
      const picker = el("select", {});
      picker.appendChild(el("option", { value: "" }, ["map to a technique..."]));
      for (const technique of techniques) {
        picker.appendChild(el("option", { value: technique.id }, [technique.name]));
      }
      picker.addEventListener("change", async () => {
        if (!picker.value) return;
        await api.assign(
          learner,
          { verb: row.verb, object_type: row.objectType, widget: row.widget },
          picker.value,
        );
        await drawChart(); // the chart reflects the new assignment without a reload
      });
      sequence.appendChild(
        el("li", {}, [`${row.label} — ${row.occurrences}× `, picker]),
      );
    }
  }

  const refresh = el("button", {}, ["refresh"]);
  refresh.addEventListener("click", () => {
    void drawSequence();
    void drawChart();
  });

  root.append(
    el("section", { class: "panel" }, [
      el("h4", {}, ["Your actions"]),
      refresh,
      sequence,
    ]),
    el("section", { class: "panel" }, [
      el("h4", {}, ["Strategy profile"]),
      chart,
      status,
    ]),
  );
  await drawSequence();
  await drawChart();
}
