import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { test } from "node:test";

import { aggregateByN, traceForNode } from "../src/aggregate.js";
import { CsvError, numericColumn, parseCsv } from "../src/csv.js";

const FIXTURES = new URL("../../test/fixtures/", import.meta.url);

function fixture(name: string): string {
  return readFileSync(new URL(name, FIXTURES), "utf8");
}

test("means equal an independent one-line re-aggregation, exactly", () => {
  for (const name of ["slicing_sweep.csv", "coded_sweep.csv"]) {
    const table = parseCsv(fixture(name));
    const points = aggregateByN(table, "avg_age");
    const ns = numericColumn(table, "n");
    const vals = numericColumn(table, "avg_age");
    for (const p of points) {
      const mine = vals.filter((_, i) => ns[i] === p.n);
      const mean = mine.reduce((a, b) => a + b, 0) / mine.length;
      assert.equal(p.mean, mean);  // bitwise float equality
      assert.equal(p.count, mine.length);
    }
  }
});

test("points come back sorted by n with finite standard errors", () => {
  const table = parseCsv(fixture("slicing_sweep.csv"));
  const points = aggregateByN(table, "avg_age");
  assert.deepEqual(points.map((p) => p.n), [64, 128, 256, 512]);
  for (const p of points) {
    assert.ok(p.se >= 0 && Number.isFinite(p.se));
    assert.ok(p.count === 5);
  }
});

test("empty or truncated CSVs are rejected", () => {
  assert.throws(() => parseCsv(""), CsvError);
  assert.throws(() => parseCsv("a,b,c\n"), CsvError);
  assert.throws(() => parseCsv("a,b\n1,2,3\n"), CsvError);
});

test("missing and non-numeric columns are rejected", () => {
  const table = parseCsv("n,avg_age\n4,\n");
  assert.throws(() => aggregateByN(table, "avg_age"), CsvError);
  assert.throws(() => aggregateByN(parseCsv("m,v\n1,2\n"), "v"), CsvError);
});

test("trace extraction picks one node and keeps tick order", () => {
  const table = parseCsv(fixture("trace.csv"));
  const trace = traceForNode(table, 3);
  assert.ok(trace.ticks.length > 0);
  for (let i = 1; i < trace.ticks.length; i++) {
    assert.ok(trace.ticks[i]! > trace.ticks[i - 1]!);
  }
  assert.throws(() => traceForNode(table, 9999), CsvError);
});
