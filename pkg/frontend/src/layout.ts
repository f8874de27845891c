/** Grid arithmetic for the arrangeable widget frames.
 *
 * The space is a 12-column grid; frames occupy integer cells. Dragging and
 * resizing happen in pixels and snap back to cells before persisting.
 */

export const GRID_COLUMNS = 12;
export const CELL_HEIGHT = 90; // px per row
export const MIN_SIZE = 1;

export interface GridRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export function cellWidth(containerPx: number): number {
  return containerPx / GRID_COLUMNS;
}

export function gridToPx(rect: GridRect, containerPx: number): { left: number; top: number; width: number; height: number } {
  const cw = cellWidth(containerPx);
  return {
    left: rect.x * cw,
    top: rect.y * CELL_HEIGHT,
    width: rect.width * cw,
    height: rect.height * CELL_HEIGHT,
  };
}

export function snapMove(rect: GridRect, dxPx: number, dyPx: number, containerPx: number): GridRect {
  const cw = cellWidth(containerPx);
  const x = clamp(Math.round(rect.x + dxPx / cw), 0, GRID_COLUMNS - rect.width);
  const y = Math.max(0, Math.round(rect.y + dyPx / CELL_HEIGHT));
  return { ...rect, x, y };
}

export function snapResize(rect: GridRect, dwPx: number, dhPx: number, containerPx: number): GridRect {
  const cw = cellWidth(containerPx);
  const width = clamp(Math.round(rect.width + dwPx / cw), MIN_SIZE, GRID_COLUMNS - rect.x);
  const height = Math.max(MIN_SIZE, Math.round(rect.height + dhPx / CELL_HEIGHT));
  return { ...rect, width, height };
}

export function sameRect(a: GridRect, b: GridRect): boolean {
  return a.x === b.x && a.y === b.y && a.width === b.width && a.height === b.height;
}

function clamp(value: number, low: number, high: number): number {
  return Math.min(Math.max(value, low), Math.max(low, high));
}
