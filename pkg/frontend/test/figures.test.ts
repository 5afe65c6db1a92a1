import assert from "node:assert/strict";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { test } from "node:test";

import { aggregateByN } from "../src/aggregate.js";
import { CsvError, numericColumn, parseCsv } from "../src/csv.js";
import { PlotSpec, render, renderToString, validate } from "../src/figures.js";
import { fmt, LinearScale } from "../src/svg.js";

const FIXTURES = new URL("../../test/fixtures/", import.meta.url);
const fix = (name: string) => fileURLToPath(new URL(name, FIXTURES));
const outDir = mkdtempSync(join(tmpdir(), "figs-"));

test("renders all three figure kinds from acceptance-run CSVs", () => {
  const specs: PlotSpec[] = [
    { kind: "age-vs-n", input: fix("slicing_sweep.csv"), output: join(outDir, "age_vs_n.svg") },
    { kind: "age-over-n-vs-n", input: fix("coded_sweep.csv"), output: join(outDir, "age_over_n.svg") },
    { kind: "trace-xy", input: fix("trace.csv"), output: join(outDir, "trace.svg"), node: 2 },
  ];
  for (const spec of specs) {
    render(spec);
    const svg = readFileSync(spec.output, "utf8");
    assert.ok(svg.startsWith("<svg "));
    assert.ok(svg.endsWith("</svg>\n"));
  }
});

test("plotted means equal independent re-aggregation, through the pixel map", () => {
  for (const [kind, file, column] of [
    ["age-vs-n", "slicing_sweep.csv", "avg_age"],
    ["age-over-n-vs-n", "coded_sweep.csv", "avg_age_per_n"],
  ] as const) {
    const result = renderToString({ kind, input: fix(file), output: "" });
    const table = parseCsv(readFileSync(fix(file), "utf8"));
    const ns = numericColumn(table, "n");
    const vals = numericColumn(table, column);
    assert.ok(result.points && result.points.length >= 3);
    for (const p of result.points!) {
      const mine = vals.filter((_, i) => ns[i] === p.n);
      assert.equal(p.mean, mine.reduce((a, b) => a + b, 0) / mine.length);
    }
    // and the same numbers appear as circle centers in the SVG text
    const points = result.points!;
    const lo = Math.min(...points.map((q) => q.n));
    const hi = Math.max(...points.map((q) => q.n));
    const pad = (hi - lo) * 0.06;
    const xs = new LinearScale(lo - pad, hi + pad, 70, 660 - 25);
    for (const p of points) {
      assert.ok(result.svg.includes(`cx="${fmt(xs.apply(p.n))}"`));
    }
  }
});

test("reference thresholds are drawn by default", () => {
  const a = renderToString({ kind: "age-vs-n", input: fix("slicing_sweep.csv"), output: "" });
  assert.ok(a.svg.includes(">y = 9<"));
  const b = renderToString({ kind: "age-over-n-vs-n", input: fix("coded_sweep.csv"), output: "" });
  assert.ok(b.svg.includes(">y = 3<"));
});

test("fixture sweeps sit under their thresholds", () => {
  // the committed fixtures are real acceptance-scale runs
  const slicing = aggregateByN(parseCsv(readFileSync(fix("slicing_sweep.csv"), "utf8")), "avg_age");
  for (const p of slicing) {
    assert.ok(p.mean < 9, `n=${p.n} mean ${p.mean}`);
  }
  const coded = aggregateByN(parseCsv(readFileSync(fix("coded_sweep.csv"), "utf8")), "avg_age_per_n");
  for (const p of coded) {
    assert.ok(p.mean < 3, `n=${p.n} mean ${p.mean}`);
  }
});

test("trace never shows age above its ceiling, for any node", () => {
  const table = parseCsv(readFileSync(fix("trace.csv"), "utf8"));
  const xs = numericColumn(table, "x");
  const ys = numericColumn(table, "y");
  for (let i = 0; i < xs.length; i++) {
    assert.ok(xs[i]! <= ys[i]!, `row ${i}: x=${xs[i]} above y=${ys[i]}`);
  }
  // the rendered series for a node preserves that ordering
  const result = renderToString({ kind: "trace-xy", input: fix("trace.csv"),
                                  output: "", node: 1 });
  const tr = result.trace!;
  for (let i = 0; i < tr.ticks.length; i++) {
    assert.ok(tr.x[i]! <= tr.y[i]!);
  }
});

test("rendering is deterministic", () => {
  const spec: PlotSpec = { kind: "age-vs-n", input: fix("slicing_sweep.csv"), output: "" };
  assert.equal(renderToString(spec).svg, renderToString(spec).svg);
});

test("schema mismatch and unknown kinds fail before rendering", () => {
  const summary = parseCsv(readFileSync(fix("slicing_sweep.csv"), "utf8"));
  const trace = parseCsv(readFileSync(fix("trace.csv"), "utf8"));
  assert.throws(() => validate({ kind: "trace-xy", input: "", output: "" }, summary), CsvError);
  assert.throws(() => validate({ kind: "age-vs-n", input: "", output: "" }, trace), CsvError);
  assert.throws(
    () => validate({ kind: "age-vs-pressure" as never, input: "", output: "" }, summary),
    CsvError);
});
