/** CLI: plot --kind <age-vs-n|age-over-n-vs-n|trace-xy> --in <csv> --out <svg> [--node <id>] */

import { pathToFileURL } from "node:url";

import { CsvError } from "./csv.js";
import { FigureKind, PlotSpec, render } from "./figures.js";

const KINDS: FigureKind[] = ["age-vs-n", "age-over-n-vs-n", "trace-xy"];
const USAGE = "usage: plot --kind <" + KINDS.join("|") + "> --in <csv> --out <svg> [--node <id>] [--file <id>]";

function parseArgs(argv: string[]): PlotSpec {
  if (argv[0] !== "plot") {
    throw new UsageError(`unknown command ${JSON.stringify(argv[0] ?? "")}; ${USAGE}`);
  }
  const opts = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const key = argv[i]!;
    const val = argv[i + 1];
    if (!key.startsWith("--") || val === undefined) {
      throw new UsageError(`bad argument ${key}; ${USAGE}`);
    }
    opts.set(key.slice(2), val);
  }
  const kind = opts.get("kind");
  const input = opts.get("in");
  const output = opts.get("out");
  if (!kind || !input || !output) {
    throw new UsageError(`--kind, --in and --out are required; ${USAGE}`);
  }
  if (!KINDS.includes(kind as FigureKind)) {
    throw new UsageError(`unknown figure kind ${kind}; ${USAGE}`);
  }
  const spec: PlotSpec = { kind: kind as FigureKind, input, output };
  if (opts.has("node")) {
    spec.node = Number(opts.get("node"));
  }
  if (opts.has("file")) {
    spec.file = Number(opts.get("file"));
  }
  return spec;
}

class UsageError extends Error {}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    render(spec);
    console.error(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(String(err.message));
      return 2;
    }
    if (err instanceof CsvError || (err as NodeJS.ErrnoException)?.code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exit(main(process.argv.slice(2)));
}
