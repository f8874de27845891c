/** Self-Evaluation: relate collected tags to domain concepts and rate your
 * own proficiency; stores the result as an acquired domain competence. */

import type { WidgetContext } from "./host.js";
import { el } from "./ui.js";

const CONTEXTS: Record<string, string[]> = {
  early_medieval_history: [
    "merovingian_dynasty", "clovis_i", "frankish_kingdom",
    "salic_law", "major_domus", "battle_of_tertry",
  ],
  quadratic_functions: ["parabola", "vertex_form", "discriminant", "roots", "coefficient_effects"],
};

export function mountSelfEvaluation(root: HTMLElement, ctx: WidgetContext): void {
  const tags = el("ul", { class: "tags" });
  ctx.sub("tag.add", (payload) => {
    const tag = String(payload.tag ?? "");
    const item = el("li", {}, []);
    const link = el("button", { class: "link" }, [tag]);
    link.addEventListener("click", () => ctx.pub("concept.selected", { concept: tag }));
    item.appendChild(link);
    tags.appendChild(item);
  });

  const contextSelect = el("select", {});
  const conceptSelect = el("select", {});
  const fillConcepts = () => {
    conceptSelect.replaceChildren(
      ...(CONTEXTS[contextSelect.value] ?? []).map((c) => el("option", { value: c }, [c])),
    );
  };
  contextSelect.replaceChildren(
    ...Object.keys(CONTEXTS).map((v) => el("option", { value: v }, [v])),
  );
  contextSelect.addEventListener("change", fillConcepts);
  fillConcepts();

  const levelSelect = el("select", {});
  for (let level = 1; level <= 8; level++) {
    levelSelect.appendChild(el("option", { value: String(level) }, [`level ${level}`]));
  }

  const status = el("p", { class: "muted" }, []);
  const save = el("button", {}, ["I know this concept"]);
  save.addEventListener("click", async () => {
    const concept = conceptSelect.value;
    try {
      await ctx.api("POST", `/api/learners/${ctx.learner}/competences`, {
        kind: "domain",
        concept,
        context: contextSelect.value,
        level: Number(levelSelect.value),
      });
      status.textContent = `saved: ${concept} at level ${levelSelect.value}`;
      ctx.pub("concept.selected", { concept });
    } catch (err) {
      status.textContent = String(err);
    }
  });

  root.append(
    el("h4", {}, ["Your tags"]),
    tags,
    el("h4", {}, ["Self-evaluate a concept"]),
    el("div", { class: "row" }, [contextSelect, conceptSelect, levelSelect, save]),
    status,
  );
}
