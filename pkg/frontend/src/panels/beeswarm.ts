/** Panel (c): per-algorithm beeswarm of overall performance.
 *
 * Points arrive sorted ascending by overall. Colliding points are pushed to
 * the nearest free vertical slot; the displacement of every point is kept so
 * the per-algorithm deviation bar can report the mean absolute vertical
 * displacement in pixels.
 */

import { ALGORITHMS, type Algorithm, type BeeswarmEntry } from "../types.js";
import { el, esc, fmt, svgRoot } from "../svg.js";
import { linearScale } from "../geometry.js";
import { viridis } from "../color.js";

export const POINT_RADIUS = 3;

export interface BeeswarmPoint {
  id: string;
  overall: number;
  x: number;
  y: number;
  /** vertical displacement from the row baseline, px */
  dy: number;
}

export interface AlgorithmSwarm {
  algorithm: Algorithm;
  points: BeeswarmPoint[];
  /** mean |dy| over all points of this algorithm, px */
  meanDeviation: number;
}

export interface BeeswarmView {
  swarms: AlgorithmSwarm[];
  svg: string;
}

/** Greedy collision resolution on vertical slots spaced 2r apart. */
function placeRow(entries: readonly BeeswarmEntry[], baseline: number,
                  x: (v: number) => number, r: number): BeeswarmPoint[] {
  const slots = new Map<number, number[]>(); // slot index -> x positions
  const points: BeeswarmPoint[] = [];
  for (const e of entries) {
    const px = x(e.overall);
    let slot = 0;
    for (let k = 0; ; k++) {
      slot = k === 0 ? 0 : k % 2 === 1 ? (k + 1) / 2 : -(k / 2);
      const taken = slots.get(slot);
      if (!taken || !taken.some((ox) => Math.abs(ox - px) < 2 * r)) break;
    }
    const xs = slots.get(slot) ?? [];
    xs.push(px);
    slots.set(slot, xs);
    const dy = slot * 2 * r;
    points.push({ id: e.id, overall: e.overall, x: px, y: baseline + dy, dy });
  }
  return points;
}

export function renderBeeswarmPanel(beeswarm: Record<Algorithm, BeeswarmEntry[]>,
                                    width = 460, rowHeight = 64): BeeswarmView {
  const height = rowHeight * ALGORITHMS.length;
  const x = linearScale([0, 1], [70, width - 54]);
  const swarms: AlgorithmSwarm[] = [];
  const parts: string[] = [];

  ALGORITHMS.forEach((a, row) => {
    const baseline = row * rowHeight + rowHeight / 2;
    const entries = beeswarm[a] ?? [];
    const points = placeRow(entries, baseline, x, POINT_RADIUS);
    const meanDeviation = points.length
      ? points.reduce((acc, p) => acc + Math.abs(p.dy), 0) / points.length
      : 0;
    swarms.push({ algorithm: a, points, meanDeviation });

    parts.push(el("text", { x: 4, y: baseline + 4, "font-size": 11 }, esc(a)));
    for (const p of points) {
      parts.push(el("circle", {
        cx: p.x, cy: p.y, r: POINT_RADIUS,
        fill: viridis(p.overall),
        "data-id": p.id,
      }, el("title", {}, esc(`${p.id}: ${fmt(p.overall)}`))));
    }
    // deviation bar: mean |dy| in pixels for this algorithm
    const barW = Math.min(48, meanDeviation * 4);
    parts.push(el("rect", {
      x: width - 50, y: baseline - 4, width: barW, height: 8,
      fill: "#8a6d9e", class: "deviation-bar",
    }, el("title", {}, esc(`${a} mean deviation: ${fmt(meanDeviation, 2)} px`))));
    parts.push(el("text", {
      x: width - 50, y: baseline - 8, "font-size": 8, fill: "#555",
    }, esc(fmt(meanDeviation, 1))));
  });

  return { swarms, svg: svgRoot(width, height, ...parts) };
}
