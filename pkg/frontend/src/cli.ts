/** `plots --csv <path> --kind <k> --out <img>` — render one figure. */

import { readFileSync, writeFileSync } from "node:fs";

import { renderChart } from "./chart.js";
import { parseResults, SchemaError } from "./csv.js";
import { buildSeries, KIND_NAMES, KINDS } from "./kinds.js";

const USAGE = `usage: plots --csv <results.csv> --kind <${KIND_NAMES.join("|")}> --out <figure.svg>`;

interface Args {
  csv: string;
  kind: string;
  out: string;
}

function parseArgs(argv: string[]): Args {
  const values = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i] as string;
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(USAGE);
    }
    values.set(flag.slice(2), value);
  }
  const csv = values.get("csv");
  const kind = values.get("kind");
  const out = values.get("out");
  if (csv === undefined || kind === undefined || out === undefined) {
    throw new Error(USAGE);
  }
  for (const key of values.keys()) {
    if (key !== "csv" && key !== "kind" && key !== "out") {
      throw new Error(`unknown option --${key}\n${USAGE}`);
    }
  }
  return { csv, kind, out };
}

/** Returns the process exit code; writes the figure only on success. */
export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }

  try {
    const spec = KINDS[args.kind];
    if (spec === undefined) {
      throw new Error(
        `unknown figure kind ${JSON.stringify(args.kind)}; one of: ${KIND_NAMES.join(", ")}`,
      );
    }
    const rows = parseResults(readFileSync(args.csv, "utf-8"));
    const series = buildSeries(rows, args.kind);
    const svg = renderChart(series, {
      title: spec.title,
      xLabel: spec.xLabel,
      yLabel: "weighted sum rate (bits/s/Hz)",
    });
    writeFileSync(args.out, svg);
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(err.message);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 1;
  }
}
