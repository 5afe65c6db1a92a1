/** The three figure kinds over harness CSVs.
 *
 * age-vs-n and age-over-n-vs-n consume summary sweeps (one row per n, seed)
 * and draw per-n means with standard-error bars plus the headline reference
 * line (9 for the single-file ages, 3 for age/n). trace-xy consumes a
 * tick,node,file,x,y dump and overlays the instantaneous age (stepwise) with
 * its per-cycle ceiling for one node.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { aggregateByN, SeriesPoint, traceForNode, TraceSeries } from "./aggregate.js";
import { CsvError, parseCsv, requireColumns, Table } from "./csv.js";
import * as svg from "./svg.js";

export type FigureKind = "age-vs-n" | "age-over-n-vs-n" | "trace-xy";

export interface PlotSpec {
  kind: FigureKind;
  input: string;          // CSV path
  output: string;         // SVG path
  node?: number;          // trace-xy: which node (default 0)
  file?: number;          // trace-xy: which file (default: node's first)
  xLabel?: string;
  yLabel?: string;
}

export interface RenderResult {
  svg: string;
  points?: SeriesPoint[];
  trace?: TraceSeries;
}

const SUMMARY_COLUMNS: Record<string, string> = {
  "age-vs-n": "avg_age",
  "age-over-n-vs-n": "avg_age_per_n",
};

const REFERENCE_LINE: Record<string, number> = {
  "age-vs-n": 9,
  "age-over-n-vs-n": 3,
};

export function validate(spec: PlotSpec, table: Table): void {
  if (spec.kind === "age-vs-n" || spec.kind === "age-over-n-vs-n") {
    requireColumns(table, ["n", "seed", SUMMARY_COLUMNS[spec.kind]!]);
  } else if (spec.kind === "trace-xy") {
    requireColumns(table, ["tick", "node", "file", "x", "y"]);
  } else {
    throw new CsvError(`unknown figure kind ${JSON.stringify(spec.kind)}`);
  }
}

function summaryFigure(spec: PlotSpec, table: Table): RenderResult {
  const points = aggregateByN(table, SUMMARY_COLUMNS[spec.kind]!);
  const ref = REFERENCE_LINE[spec.kind]!;
  const xsDom = points.map((p) => p.n);
  const lo = Math.min(...xsDom);
  const hi = Math.max(...xsDom);
  const pad = (hi - lo || lo) * 0.06;
  const yMax = Math.max(ref * 1.15, ...points.map((p) => p.mean + 3 * p.se));
  const xs = new svg.LinearScale(lo - pad, hi + pad, svg.MARGIN.left, svg.WIDTH - svg.MARGIN.right);
  const ys = new svg.LinearScale(0, yMax, svg.HEIGHT - svg.MARGIN.bottom, svg.MARGIN.top);

  const parts: string[] = [];
  parts.push(svg.axes(xs, ys, xsDom, svg.niceTicks(0, yMax),
                      spec.xLabel ?? "network size n",
                      spec.yLabel ?? (spec.kind === "age-vs-n" ? "version age" : "(version age)/n")));
  // reference threshold
  const refY = ys.apply(ref);
  parts.push(svg.el("line", { x1: xs.r0, y1: refY, x2: xs.r1, y2: refY,
                              stroke: "#b30000", "stroke-width": 1, "stroke-dasharray": "6 4" }));
  parts.push(svg.textEl(xs.r1 - 4, refY - 6, `y = ${svg.fmt(ref)}`, "end", { fill: "#b30000" }));
  // error bars, connecting line, points
  for (const p of points) {
    const px = xs.apply(p.n);
    const y1 = ys.apply(p.mean - p.se);
    const y2 = ys.apply(p.mean + p.se);
    parts.push(svg.el("line", { x1: px, y1, x2: px, y2, stroke: "#1f5fa8", "stroke-width": 1.5 }));
    parts.push(svg.el("line", { x1: px - 4, y1, x2: px + 4, y2: y1, stroke: "#1f5fa8", "stroke-width": 1.5 }));
    parts.push(svg.el("line", { x1: px - 4, y1: y2, x2: px + 4, y2, stroke: "#1f5fa8", "stroke-width": 1.5 }));
  }
  const poly = points.map((p) => `${svg.fmt(xs.apply(p.n))},${svg.fmt(ys.apply(p.mean))}`).join(" ");
  parts.push(svg.el("polyline", { points: poly, fill: "none", stroke: "#1f5fa8", "stroke-width": 1.5 }));
  for (const p of points) {
    parts.push(svg.el("circle", { cx: xs.apply(p.n), cy: ys.apply(p.mean), r: 3.5, fill: "#1f5fa8" }));
  }
  return { svg: svg.document(parts.join("\n")), points };
}

function traceFigure(spec: PlotSpec, table: Table): RenderResult {
  const node = spec.node ?? 0;
  const trace = traceForNode(table, node, spec.file);
  const t0 = trace.ticks[0]!;
  const t1 = trace.ticks[trace.ticks.length - 1]!;
  const yMax = Math.max(...trace.y, ...trace.x) * 1.1 || 1;
  const xs = new svg.LinearScale(t0, t1, svg.MARGIN.left, svg.WIDTH - svg.MARGIN.right);
  const ys = new svg.LinearScale(0, yMax, svg.HEIGHT - svg.MARGIN.bottom, svg.MARGIN.top);

  const px = trace.ticks.map((t) => xs.apply(t));
  const capPath = svg.stepPath(px, trace.y.map((v) => ys.apply(v)));
  const agePath = svg.stepPath(px, trace.x.map((v) => ys.apply(v)));
  const parts: string[] = [];
  parts.push(svg.axes(xs, ys, svg.niceTicks(t0, t1), svg.niceTicks(0, yMax),
                      spec.xLabel ?? "tick", spec.yLabel ?? `age at node ${node}`));
  parts.push(svg.el("path", { d: capPath, fill: "none", stroke: "#b30000", "stroke-width": 1.5 }));
  parts.push(svg.el("path", { d: agePath, fill: "none", stroke: "#1f5fa8", "stroke-width": 1.5 }));
  parts.push(svg.textEl(xs.r1 - 4, svg.MARGIN.top + 12, "ceiling", "end", { fill: "#b30000" }));
  parts.push(svg.textEl(xs.r1 - 4, svg.MARGIN.top + 28, "age", "end", { fill: "#1f5fa8" }));
  return { svg: svg.document(parts.join("\n")), trace };
}

export function renderToString(spec: PlotSpec): RenderResult {
  const table = parseCsv(readFileSync(spec.input, "utf8"));
  validate(spec, table);
  if (spec.kind === "trace-xy") {
    return traceFigure(spec, table);
  }
  return summaryFigure(spec, table);
}

export function render(spec: PlotSpec): RenderResult {
  const result = renderToString(spec);
  writeFileSync(spec.output, result.svg);
  return result;
}
