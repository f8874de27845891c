/** Recommendation panels: mashup (template) recommender, activity
 * recommender with accept/skip/drill-down, and the content list. All
 * rankings render exactly as the server returned them. */

import type { ApiClient, Recommendation } from "../api.js";
import { rankedRows } from "../viewmodel.js";
import { el, clear } from "../widgets/ui.js";

export function renderPanels(
  root: HTMLElement,
  api: ApiClient,
  space: string,
  onSpaceChanged: () => Promise<void>,
): void {
  const learner = api.learner!;

  // -- mashup recommender -----------------------------------------------------

  const entityButtons = el("div", { class: "row wrap" });
  const rankedList = el("ol", { class: "ranked" });
  void api.templates().then(({ templates }) => {
    for (const template of templates) {
      for (const entity of template.entities) {
        const button = el("button", {}, [entity.replaceAll("_", " ")]);
        button.addEventListener("click", async () => {
          const { recommendations } = await api.recommendWidgets(entity, learner);
          clear(rankedList);
          for (const row of rankedRows(recommendations)) {
            const add = el("button", { class: "link" }, ["add to space"]);
            add.addEventListener("click", async () => {
              await api.acceptWidget(space, row.itemId);
              await onSpaceChanged();
            });
            rankedList.appendChild(
              el("li", {}, [`${row.itemId} (score ${row.score}) `, add]),
            );
          }
          if (!recommendations.length) {
            rankedList.appendChild(el("li", { class: "muted" }, ["no widgets linked"]));
          }
        });
        entityButtons.appendChild(button);
      }
    }
  });

  // -- activity recommender ------------------------------------------------------

  const activityLabel = el("p", {}, ["click next to get a suggestion"]);
  const drillList = el("ul", { class: "drill" });
  let current: Recommendation | null = null;

  const showRecommendation = (rec: Recommendation) => {
    current = rec;
    activityLabel.textContent = `${rec.item_id.replaceAll("_", " ")} — ${rec.reasons.join("; ")}`;
  };

  const nextButton = el("button", {}, ["next activity"]);
  nextButton.addEventListener("click", async () => {
    clear(drillList);
    const { recommendation } = await api.nextActivity(learner);
    showRecommendation(recommendation);
  });

  const outcomeButton = (label: string, outcome: "accepted" | "skipped" | "drill_down") => {
    const button = el("button", {}, [label]);
    button.addEventListener("click", async () => {
      if (!current) return;
      const result = await api.activityOutcome(learner, current.item_id, outcome);
      if (outcome === "drill_down" && result.techniques) {
        clear(drillList);
        for (const technique of result.techniques) {
          const pick = el("button", { class: "link" }, ["do this"]);
          const item = el("li", {}, [
            `${technique.item_id.replaceAll("_", " ")} `,
            ...(technique.reasons.length ? [el("span", { class: "muted" }, [`(${technique.reasons.join("; ")})`])] : []),
            " ",
            pick,
          ]);
          pick.addEventListener("click", async () => {
            await api.activityOutcome(learner, technique.item_id, "accepted");
            activityLabel.textContent = `${technique.item_id.replaceAll("_", " ")}: recorded as applied`;
            clear(drillList);
            current = null;
          });
          drillList.appendChild(item);
        }
      } else {
        activityLabel.textContent =
          outcome === "accepted" ? "accepted — it counts toward your profile" : "skipped for a while";
        current = null;
        clear(drillList);
      }
    });
    return button;
  };

  // -- content panel -----------------------------------------------------------------

  const contentList = el("ol", { class: "ranked" });
  const contentButton = el("button", {}, ["recommend content"]);
  contentButton.addEventListener("click", async () => {
    const { recommendations } = await api.recommendContent(learner);
    clear(contentList);
    for (const row of rankedRows(recommendations)) {
      contentList.appendChild(el("li", {}, [`${row.itemId} (score ${row.score})`]));
    }
    if (!recommendations.length) {
      contentList.appendChild(el("li", { class: "muted" }, ["set a domain goal first"]));
    }
  });

  root.append(
    el("section", { class: "panel" }, [
      el("h4", {}, ["Mashup Recommender"]),
      entityButtons,
      rankedList,
    ]),
    el("section", { class: "panel" }, [
      el("h4", {}, ["Activity Recommender"]),
      el("div", { class: "row" }, [
        nextButton,
        outcomeButton("accept", "accepted"),
        outcomeButton("skip", "skipped"),
        outcomeButton("drill down", "drill_down"),
      ]),
      activityLabel,
      drillList,
    ]),
    el("section", { class: "panel" }, [
      el("h4", {}, ["Content"]),
      contentButton,
      contentList,
    ]),
  );
}
