/** Panel (g): instance grid. Cell color encodes all-model predictive power
 * (white to green); with a selection active, per-algorithm difference strips
 * use the purple/green diverging scale. Clustered grids get a play/stop
 * glyph and per-cell count bars.
 */

import { ALGORITHMS, type Algorithm, type GridDoc } from "../types.js";
import { el, esc, fmt, svgRoot } from "../svg.js";
import { purpleGreen, whiteGreen } from "../color.js";

export interface GridCellView {
  cell: number;
  count: number;
  fill: string;
  countBarHeight: number;
  perAlgorithm: {
    algorithm: Algorithm;
    power: number;
    powerFill: string;
    difference: number;
    differenceFill: string;
  }[];
}

export interface GridView {
  clustered: boolean;
  playGlyph: boolean;
  cells: GridCellView[];
  svg: string;
}

const COLUMNS = 10;
const CELL = 34;
const GAP = 3;

export function renderGridPanel(grid: GridDoc, hasSelection: boolean): GridView {
  const maxCount = Math.max(1, ...grid.cells.map((c) => c.count));
  const cells: GridCellView[] = grid.cells.map((c) => ({
    cell: c.cell,
    count: c.count,
    fill: whiteGreen(c.power_all),
    countBarHeight: (c.count / maxCount) * (CELL - 6),
    perAlgorithm: ALGORITHMS.map((a) => ({
      algorithm: a,
      power: c.power[a] ?? 0,
      powerFill: whiteGreen(c.power[a] ?? 0),
      difference: c.difference[a] ?? 0,
      differenceFill: purpleGreen(c.difference[a] ?? 0),
    })),
  }));

  const rows = Math.ceil(cells.length / COLUMNS);
  const width = COLUMNS * (CELL + GAP) + GAP;
  const height = rows * (CELL + GAP) + GAP + 18;

  const parts: string[] = [];
  // header: clustered grids animate through members, hence the play glyph
  parts.push(el("text", { x: 4, y: 12, "font-size": 10, fill: "#555" },
                esc(grid.clustered
                  ? `clustered: ${grid.cell_count} cells`
                  : `${grid.cell_count} instances`)));
  if (grid.clustered) {
    parts.push(el("text", {
      x: width - 30, y: 13, "font-size": 11, class: "play-glyph",
      "data-role": "grid-play", cursor: "pointer",
    }, "▶ ■"));
  }

  const stripW = (CELL - 4) / ALGORITHMS.length;
  cells.forEach((c, i) => {
    const gx = GAP + (i % COLUMNS) * (CELL + GAP);
    const gy = 18 + GAP + Math.floor(i / COLUMNS) * (CELL + GAP);
    const inner: string[] = [
      el("rect", { width: CELL, height: CELL, fill: c.fill, stroke: "#ccc" },
         el("title", {}, esc(`cell ${c.cell}: ${c.count} instance(s), `
                             + `power ${fmt(c.perAlgorithm.length
                               ? c.perAlgorithm.reduce((m, p) => m + p.power, 0)
                                 / c.perAlgorithm.length : 0)}`))),
    ];
    c.perAlgorithm.forEach((p, j) => {
      const strip = hasSelection ? p.differenceFill : p.powerFill;
      inner.push(el("rect", {
        x: 2 + j * stripW, y: CELL - 10, width: stripW - 1, height: 8,
        fill: strip, class: hasSelection ? "diff-strip" : "power-strip",
      }, el("title", {}, esc(hasSelection
        ? `${p.algorithm} difference ${fmt(p.difference)}`
        : `${p.algorithm} power ${fmt(p.power)}`))));
    });
    inner.push(el("rect", {
      x: CELL - 4, y: CELL - 2 - c.countBarHeight, width: 3,
      height: c.countBarHeight, fill: "#5b7d9b", class: "count-bar",
    }));
    parts.push(el("g", { transform: `translate(${gx},${gy})`, "data-cell": c.cell },
                  ...inner));
  });

  return {
    clustered: grid.clustered,
    playGlyph: grid.clustered,
    cells,
    svg: svgRoot(width, height, ...parts),
  };
}
