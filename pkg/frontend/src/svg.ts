/** Hand-rolled SVG scene pieces: enough for line charts with error bars and
 * step plots, deterministic output, no rendering dependencies. */

export const WIDTH = 660;
export const HEIGHT = 440;
export const MARGIN = { left: 70, right: 25, top: 30, bottom: 55 };

export function fmt(v: number): string {
  if (!Number.isFinite(v)) {
    throw new Error(`cannot format ${v}`);
  }
  const s = v.toFixed(4);
  return s.replace(/\.?0+$/, "") || "0";
}

export class LinearScale {
  constructor(
    readonly d0: number, readonly d1: number,
    readonly r0: number, readonly r1: number,
  ) {
    if (d1 === d0) {
      throw new Error("degenerate scale domain");
    }
  }

  apply(v: number): number {
    return this.r0 + ((v - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }
}

export function niceTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  const raw = span / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => span / s <= count) ?? mag * 10;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = first; t <= hi + 1e-9; t += step) {
    ticks.push(Number(t.toFixed(10)));
  }
  return ticks;
}

export function el(tag: string, attrs: Record<string, string | number>, body = ""): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  return body === "" ? `<${tag} ${a}/>` : `<${tag} ${a}>${body}</${tag}>`;
}

export function textEl(x: number, y: number, body: string, anchor = "middle",
                       extra: Record<string, string | number> = {}): string {
  return el("text", {
    x, y, "text-anchor": anchor, "font-family": "sans-serif",
    "font-size": 13, fill: "#222", ...extra,
  }, body);
}

export function axes(xs: LinearScale, ys: LinearScale, xTicks: number[], yTicks: number[],
                     xLabel: string, yLabel: string): string {
  const parts: string[] = [];
  const x0 = xs.r0, x1 = xs.r1, yBase = ys.r0, yTop = ys.r1;
  parts.push(el("line", { x1: x0, y1: yBase, x2: x1, y2: yBase, stroke: "#222", "stroke-width": 1 }));
  parts.push(el("line", { x1: x0, y1: yBase, x2: x0, y2: yTop, stroke: "#222", "stroke-width": 1 }));
  for (const t of xTicks) {
    const px = xs.apply(t);
    parts.push(el("line", { x1: px, y1: yBase, x2: px, y2: yBase + 5, stroke: "#222", "stroke-width": 1 }));
    parts.push(textEl(px, yBase + 20, fmt(t)));
  }
  for (const t of yTicks) {
    const py = ys.apply(t);
    parts.push(el("line", { x1: x0 - 5, y1: py, x2: x0, y2: py, stroke: "#222", "stroke-width": 1 }));
    parts.push(el("line", { x1: x0, y1: py, x2: xs.r1, y2: py, stroke: "#ddd", "stroke-width": 0.5 }));
    parts.push(textEl(x0 - 9, py + 4, fmt(t), "end"));
  }
  parts.push(textEl((x0 + x1) / 2, yBase + 42, xLabel));
  parts.push(textEl(18, (yBase + yTop) / 2, yLabel, "middle",
                    { transform: `rotate(-90 18 ${fmt((yBase + yTop) / 2)})` }));
  return parts.join("\n");
}

export function document(body: string): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
    el("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "white" }) + "\n" +
    body + "\n</svg>\n";
}

/** Step path (hold previous value until the next sample). */
export function stepPath(px: number[], py: number[]): string {
  if (px.length === 0) {
    throw new Error("empty path");
  }
  let d = `M ${fmt(px[0]!)} ${fmt(py[0]!)}`;
  for (let i = 1; i < px.length; i++) {
    d += ` H ${fmt(px[i]!)} V ${fmt(py[i]!)}`;
  }
  return d;
}
