/** Question and Answer: members ask, answer, and rate within the space. */

import type { WidgetContext } from "./host.js";
import { el } from "./ui.js";

export function mountQuestionAnswer(root: HTMLElement, ctx: WidgetContext): void {
  const thread = el("ul", { class: "qa" });

  ctx.sub("qa.post", (payload) => {
    const kind = payload.kind === "answer" ? "A" : "Q";
    const item = el("li", {}, [`[${kind}] ${payload.text ?? ""}`]);
    const rate = el("button", { class: "link" }, ["+1"]);
    let votes = 0;
    rate.addEventListener("click", () => {
      votes += 1;
      rate.textContent = `+${votes}`;
    });
    item.append(" ", rate);
    thread.appendChild(item);
  });

  const input = el("input", { placeholder: "ask or answer..." });
  const ask = el("button", {}, ["ask"]);
  const answer = el("button", {}, ["answer"]);
  const post = (kind: string) => {
    const text = input.value.trim();
    if (!text) return;
    ctx.pub("qa.post", { kind, text });
    input.value = "";
  };
  ask.addEventListener("click", () => post("question"));
  answer.addEventListener("click", () => post("answer"));

  root.append(el("div", { class: "row" }, [input, ask, answer]), thread);
}
