/** Replication-level rows in, per-n means with standard errors out.
 *
 * Aggregation deliberately lives here (not in the harness) so the CSVs stay
 * lossless per-seed records. Sums run in row order, so an independent
 * re-aggregation in row order reproduces the means bit-for-bit.
 */

import { CsvError, numericColumn, Table } from "./csv.js";

export interface SeriesPoint {
  n: number;
  mean: number;
  se: number;
  count: number;
}

export function aggregateByN(table: Table, valueColumn: string): SeriesPoint[] {
  const ns = numericColumn(table, "n");
  const values = numericColumn(table, valueColumn);
  const order: number[] = [];
  const groups = new Map<number, number[]>();
  for (let i = 0; i < ns.length; i++) {
    const n = ns[i]!;
    if (!groups.has(n)) {
      groups.set(n, []);
      order.push(n);
    }
    groups.get(n)!.push(values[i]!);
  }
  order.sort((a, b) => a - b);
  return order.map((n) => {
    const vs = groups.get(n)!;
    const mean = vs.reduce((a, b) => a + b, 0) / vs.length;
    let se = 0;
    if (vs.length > 1) {
      const ss = vs.reduce((a, b) => a + (b - mean) * (b - mean), 0);
      se = Math.sqrt(ss / (vs.length - 1)) / Math.sqrt(vs.length);
    }
    return { n, mean, se, count: vs.length };
  });
}

export interface TraceSeries {
  ticks: number[];
  x: number[];
  y: number[];
}

/** One node's (and file's) age trajectory from a tick,node,file,x,y dump. */
export function traceForNode(table: Table, node: number, file?: number): TraceSeries {
  const ticks = numericColumn(table, "tick");
  const nodes = numericColumn(table, "node");
  const files = numericColumn(table, "file");
  const xs = numericColumn(table, "x");
  const ys = numericColumn(table, "y");
  const wantFile = file ?? files.find((_, i) => nodes[i] === node);
  const out: TraceSeries = { ticks: [], x: [], y: [] };
  for (let i = 0; i < ticks.length; i++) {
    if (nodes[i] === node && files[i] === wantFile) {
      out.ticks.push(ticks[i]!);
      out.x.push(xs[i]!);
      out.y.push(ys[i]!);
    }
  }
  if (out.ticks.length === 0) {
    throw new CsvError(`trace has no rows for node ${node}`);
  }
  return out;
}
