/** Panel (b): Sankey of stage paths. Link widths are proportional to child
 * counts, with a floor so nonzero paths stay visible; hovering a path shows
 * its PathStat (better/total and over/under direction). */

import { ALGORITHMS, type StageDoc, type StageOrigin } from "../types.js";
import { el, esc, svgRoot } from "../svg.js";

export const MIN_LINK_WIDTH = 1.5;

export interface SankeyNode {
  id: string;
  label: string;
  column: number;
  x: number;
  y: number;
  height: number;
}

export interface SankeyLink {
  source: string;
  target: string;
  count: number;
  width: number;
  title: string;
  path: string;
}

export interface SankeyView {
  nodes: SankeyNode[];
  links: SankeyLink[];
  svg: string;
}

interface RawLink {
  source: string;
  target: string;
  count: number;
  title: string;
}

const ORIGINS: readonly StageOrigin[] = ["crossover", "mutation"];

export function renderSankeyPanel(stages: readonly StageDoc[],
                                  width = 420, height = 260): SankeyView {
  const raw: RawLink[] = [];

  for (const doc of stages) {
    const sid = `S${doc.plan.stage}`;
    for (const a of ALGORITHMS) {
      const children = doc.child_ids[a];
      if (!children) continue;
      let algoTotal = 0;
      for (const origin of ORIGINS) {
        const count = (children[origin] ?? []).length;
        algoTotal += count;
        const stat = doc.path_stats.find(
          (s) => s.algorithm === a && s.origin === origin);
        const title = stat
          ? `${a} ${origin}: ${stat.better}/${stat.total} ${stat.direction}`
          : `${a} ${origin}: ${count} children`;
        raw.push({ source: `${sid}/${a}`, target: `${sid}:${origin}`, count, title });
      }
      raw.push({ source: sid, target: `${sid}/${a}`, count: algoTotal,
                 title: `${sid} ${a}: ${algoTotal} children` });
    }
  }

  const total = raw.reduce((acc, l) => acc + l.count, 0);
  const budget = height * 0.55;
  const scale = total > 0 ? budget / total : 0;
  const links: SankeyLink[] = [];

  // columns: stage | stage/algorithm | stage:origin
  const columnOf = (id: string) => (id.includes("/") ? 1 : id.includes(":") ? 2 : 0);
  const nodeIds = new Set<string>();
  for (const l of raw) {
    nodeIds.add(l.source);
    nodeIds.add(l.target);
  }

  const throughput = new Map<string, number>();
  for (const l of raw) {
    throughput.set(l.target, (throughput.get(l.target) ?? 0) + l.count);
    if (columnOf(l.source) === 0) {
      throughput.set(l.source, (throughput.get(l.source) ?? 0) + l.count);
    }
  }

  const nodes: SankeyNode[] = [];
  const xs = [10, width / 2 - 30, width - 70];
  const cursors = [14, 14, 14];
  for (const id of [...nodeIds].sort()) {
    const column = columnOf(id);
    const h = Math.max(6, (throughput.get(id) ?? 0) * scale);
    nodes.push({
      id,
      label: id.replace(/^S\d+[/:]?/, "") || id,
      column,
      x: xs[column]!,
      y: cursors[column]!,
      height: h,
    });
    cursors[column]! += h + 10;
  }
  const nodeAt = new Map(nodes.map((n) => [n.id, n]));

  const outOffsets = new Map<string, number>();
  const inOffsets = new Map<string, number>();
  for (const l of raw) {
    const s = nodeAt.get(l.source)!;
    const t = nodeAt.get(l.target)!;
    const w = l.count === 0 ? 0 : Math.max(MIN_LINK_WIDTH, l.count * scale);
    const so = outOffsets.get(l.source) ?? 0;
    const to = inOffsets.get(l.target) ?? 0;
    outOffsets.set(l.source, so + w);
    inOffsets.set(l.target, to + w);
    const x1 = s.x + 54;
    const y1 = s.y + so + w / 2;
    const x2 = t.x;
    const y2 = t.y + to + w / 2;
    const mx = (x1 + x2) / 2;
    links.push({
      source: l.source,
      target: l.target,
      count: l.count,
      width: w,
      title: l.title,
      path: `M${x1},${y1} C${mx},${y1} ${mx},${y2} ${x2},${y2}`,
    });
  }

  const svg = svgRoot(width, height,
    ...links.filter((l) => l.width > 0).map((l) =>
      el("path", {
        d: l.path,
        fill: "none",
        stroke: "#7aa6c2",
        "stroke-opacity": 0.6,
        "stroke-width": l.width,
        class: "sankey-link",
      }, el("title", {}, esc(l.title)))),
    ...nodes.map((n) =>
      el("g", { transform: `translate(${n.x},${n.y})` },
         el("rect", { width: 54, height: n.height, fill: "#39484f", rx: 2 }),
         el("text", { x: 4, y: Math.min(n.height - 2, 12), fill: "#fff", "font-size": 9 },
            esc(n.label)))),
  );

  return { nodes, links, svg };
}
