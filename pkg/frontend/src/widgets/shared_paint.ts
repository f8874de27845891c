/** Collaborative Paint: strokes are published to the space and drawn live
 * on every member's canvas; used for the graph guessing game. */

import type { WidgetContext } from "./host.js";
import { el } from "./ui.js";

type Point = { x: number; y: number };

export function mountSharedPaint(root: HTMLElement, ctx: WidgetContext): void {
  const canvas = el("canvas", { width: "320", height: "220", class: "paint" });
  const g = canvas.getContext("2d");
  let stroke: Point[] = [];
  let drawing = false;

  const drawStroke = (points: Point[], color: string) => {
    if (!g || points.length < 2) return;
    g.strokeStyle = color;
    g.lineWidth = 2;
    g.beginPath();
    g.moveTo(points[0].x, points[0].y);
    for (const p of points.slice(1)) g.lineTo(p.x, p.y);
    g.stroke();
  };

  const position = (event: MouseEvent): Point => {
    const rect = canvas.getBoundingClientRect();
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  };

  canvas.addEventListener("mousedown", (event) => {
    drawing = true;
    stroke = [position(event)];
  });
  canvas.addEventListener("mousemove", (event) => {
    if (!drawing) return;
    stroke.push(position(event));
    drawStroke(stroke.slice(-2), "#c33");
  });
  const finish = () => {
    if (drawing && stroke.length > 1) {
      ctx.pub("paint.stroke", { points: stroke as unknown as Record<string, unknown>[] } as never);
    }
    drawing = false;
    stroke = [];
  };
  canvas.addEventListener("mouseup", finish);
  canvas.addEventListener("mouseleave", finish);

  ctx.sub("paint.stroke", (payload) => {
    if (Array.isArray(payload.points)) {
      drawStroke(payload.points as unknown as Point[], "#36c");
    }
  });

  const clearButton = el("button", {}, ["clear my view"]);
  clearButton.addEventListener("click", () => g?.clearRect(0, 0, canvas.width, canvas.height));
  root.append(canvas, clearButton);
}
