import type { WidgetContext } from "./host.js";
import { mountTextReader } from "./text_reader.js";
import { mountSelfEvaluation } from "./self_evaluation.js";
import { mountContentSearch } from "./content_search.js";
import { mountSelfReflection } from "./self_reflection.js";
import { mountQuestionAnswer } from "./question_answer.js";
import { mountToLearnList } from "./to_learn_list.js";
import { mountFunctionPlotter } from "./function_plotter.js";
import { mountSharedPaint } from "./shared_paint.js";

type Mount = (root: HTMLElement, ctx: WidgetContext) => void;

const REGISTRY: Record<string, Mount> = {
  text_reader: mountTextReader,
  self_evaluation: mountSelfEvaluation,
  content_search: mountContentSearch,
  self_reflection: mountSelfReflection,
  question_answer: mountQuestionAnswer,
  to_learn_list: mountToLearnList,
  function_plotter: mountFunctionPlotter,
  shared_paint: mountSharedPaint,
};

export function mountWidget(widget: string, root: HTMLElement, ctx: WidgetContext): void {
  const mount = REGISTRY[widget];
  if (mount) {
    mount(root, ctx);
    return;
  }
  const notice = document.createElement("p");
  notice.className = "muted";
  notice.textContent = `${widget}: this widget has no local implementation; it still counts as part of your space.`;
  root.appendChild(notice);
}

export const KNOWN_WIDGETS = Object.keys(REGISTRY);
