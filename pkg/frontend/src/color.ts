/** Fixed color scales: Viridis for overall performance, white to green for
 * predictive power, purple/green diverging for selection difference. */

function hexToRgb(hex: string): [number, number, number] {
  const v = parseInt(hex.slice(1), 16);
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
}

function rgbToHex(r: number, g: number, b: number): string {
  const c = (x: number) => Math.max(0, Math.min(255, Math.round(x)))
    .toString(16).padStart(2, "0");
  return `#${c(r)}${c(g)}${c(b)}`;
}

function clamp01(t: number): number {
  if (!Number.isFinite(t)) return 0; // NaN scores must not break a render
  return t < 0 ? 0 : t > 1 ? 1 : t;
}

/** Piecewise-linear ramp through evenly spaced hex stops. */
export function ramp(stops: readonly string[]): (t: number) => string {
  const rgb = stops.map(hexToRgb);
  return (t: number) => {
    const u = clamp01(t) * (rgb.length - 1);
    const i = Math.min(Math.floor(u), rgb.length - 2);
    const f = u - i;
    const a = rgb[i]!;
    const b = rgb[i + 1]!;
    return rgbToHex(a[0] + f * (b[0] - a[0]),
                    a[1] + f * (b[1] - a[1]),
                    a[2] + f * (b[2] - a[2]));
  };
}

const VIRIDIS_STOPS = [
  "#440154", "#482878", "#3e4989", "#31688e", "#26828e",
  "#1f9e89", "#35b779", "#6ece58", "#b5de2b", "#fde725",
] as const;

/** Viridis approximation on [0, 1]. */
export const viridis = ramp(VIRIDIS_STOPS);

/** White to dark green on [0, 1], used for predictive power. */
export const whiteGreen = ramp(["#ffffff", "#c7e9c0", "#74c476", "#238b45", "#00441b"]);

const prgn = ramp(["#762a83", "#c2a5cf", "#f7f7f7", "#a6dba0", "#1b7837"]);

/** Purple (negative) through white to green (positive) on [-1, 1]. */
export function purpleGreen(t: number): string {
  const u = clamp01((t + 1) / 2);
  return prgn(u);
}
