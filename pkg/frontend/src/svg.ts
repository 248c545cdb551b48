/** String-building SVG/HTML helpers so panel renderers stay pure functions. */

const ESC: Record<string, string> = {
  "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;", "'": "&#39;",
};

export function esc(text: string | number): string {
  return String(text).replace(/[&<>"']/g, (c) => ESC[c] ?? c);
}

export type Attrs = Record<string, string | number | boolean | undefined>;

export function el(name: string, attrs: Attrs = {}, ...children: string[]): string {
  let out = `<${name}`;
  for (const [k, v] of Object.entries(attrs)) {
    if (v === undefined || v === false) continue;
    out += v === true ? ` ${k}` : ` ${k}="${esc(v)}"`;
  }
  if (children.length === 0) return `${out}/>`;
  return `${out}>${children.join("")}</${name}>`;
}

export function svgRoot(width: number, height: number, ...children: string[]): string {
  return el("svg", {
    xmlns: "http://www.w3.org/2000/svg",
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
  }, ...children);
}

export function fmt(v: number, digits = 3): string {
  return Number.isFinite(v) ? v.toFixed(digits) : "-";
}
