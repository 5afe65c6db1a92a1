import assert from "node:assert/strict";
import { spawnSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { test } from "node:test";

const FIXTURES = new URL("../../test/fixtures/", import.meta.url);
const fix = (name: string) => fileURLToPath(new URL(name, FIXTURES));
const CLI = fileURLToPath(new URL("../src/cli.js", import.meta.url));
const outDir = mkdtempSync(join(tmpdir(), "figcli-"));

function run(...args: string[]) {
  return spawnSync(process.execPath, [CLI, ...args], { encoding: "utf8" });
}

test("plot subcommand renders each kind", () => {
  const cases: Array<[string, string, string[]]> = [
    ["age-vs-n", "slicing_sweep.csv", []],
    ["age-over-n-vs-n", "coded_sweep.csv", []],
    ["trace-xy", "trace.csv", ["--node", "4"]],
  ];
  for (const [kind, file, extra] of cases) {
    const out = join(outDir, `${kind}.svg`);
    const res = run("plot", "--kind", kind, "--in", fix(file), "--out", out, ...extra);
    assert.equal(res.status, 0, res.stderr);
    assert.ok(existsSync(out));
    assert.ok(readFileSync(out, "utf8").includes("</svg>"));
  }
});

test("usage errors exit 2", () => {
  assert.equal(run("chart").status, 2);
  assert.equal(run("plot", "--kind", "age-vs-n").status, 2);
  assert.equal(run("plot", "--kind", "pie", "--in", fix("slicing_sweep.csv"),
                   "--out", join(outDir, "x.svg")).status, 2);
});

test("data errors exit 1", () => {
  const res = run("plot", "--kind", "age-vs-n", "--in", fix("trace.csv"),
                  "--out", join(outDir, "bad.svg"));
  assert.equal(res.status, 1);
  assert.match(res.stderr, /missing required column/);
  assert.equal(run("plot", "--kind", "age-vs-n", "--in", "/nonexistent.csv",
                   "--out", join(outDir, "nope.svg")).status, 1);
});
