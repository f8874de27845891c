/** Function Plotter: vary a, b, c and study the parabola; parameter changes
 * are shared so everyone in the space sees the same curve. */

import type { WidgetContext } from "./host.js";
import { el } from "./ui.js";

export function mountFunctionPlotter(root: HTMLElement, ctx: WidgetContext): void {
  const canvas = el("canvas", { width: "320", height: "220" });
  const label = el("p", { class: "muted" }, []);
  const params = { a: 1, b: 0, c: 0 };

  const draw = () => {
    const g = canvas.getContext("2d");
    if (!g) return;
    const { width, height } = canvas;
    g.clearRect(0, 0, width, height);
    g.strokeStyle = "#888";
    g.beginPath();
    g.moveTo(0, height / 2);
    g.lineTo(width, height / 2);
    g.moveTo(width / 2, 0);
    g.lineTo(width / 2, height);
    g.stroke();
    g.strokeStyle = "#0b6";
    g.beginPath();
    for (let px = 0; px <= width; px++) {
      const x = (px - width / 2) / 20;
      const y = params.a * x * x + params.b * x + params.c;
      const py = height / 2 - y * 20;
      if (px === 0) g.moveTo(px, py);
      else g.lineTo(px, py);
    }
    g.stroke();
    label.textContent = `y = ${params.a}x² + ${params.b}x + ${params.c}`;
  };

  const slider = (name: "a" | "b" | "c") => {
    const input = el("input", {
      type: "range", min: "-3", max: "3", step: "0.5", value: String(params[name]),
    });
    input.addEventListener("input", () => {
      params[name] = Number(input.value);
      draw();
      ctx.pub("fn.params", { ...params });
    });
    return el("label", { class: "row" }, [`${name}: `, input]);
  };

  ctx.sub("fn.params", (payload) => {
    params.a = Number(payload.a ?? params.a);
    params.b = Number(payload.b ?? params.b);
    params.c = Number(payload.c ?? params.c);
    draw();
  });

  root.append(canvas, slider("a"), slider("b"), slider("c"), label);
  draw();
}
