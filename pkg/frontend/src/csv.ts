/** Strict reader for the result CSV the optimizer's CLI writes. */

export const REQUIRED_COLUMNS = [
  "scheme",
  "sweep_var",
  "sweep_value",
  "drop",
  "seed",
  "wsse_bps_hz",
  "pu_rate_bps_hz",
  "status",
  "outer_iters",
  "wall_ms",
] as const;

export interface ResultRow {
  scheme: string;
  sweepVar: string;
  sweepValue: number;
  drop: number;
  /** kept as text: seeds are unsigned 64-bit and may not fit a double */
  seed: string;
  wsse: number;
  puRate: number;
  status: string;
  outerIters: number;
  wallMs: number;
}

/** Header mismatch, reported as a column diff against the pinned schema. */
export class SchemaError extends Error {
  readonly missing: string[];
  readonly unexpected: string[];

  constructor(missing: string[], unexpected: string[], orderOnly = false) {
    const parts: string[] = ["CSV header does not match the result schema"];
    if (missing.length > 0) parts.push(`missing: ${missing.join(", ")}`);
    if (unexpected.length > 0) parts.push(`unexpected: ${unexpected.join(", ")}`);
    if (orderOnly) parts.push("columns present but in the wrong order");
    parts.push(`expected: ${REQUIRED_COLUMNS.join(",")}`);
    super(parts.join("\n  "));
    this.name = "SchemaError";
    this.missing = missing;
    this.unexpected = unexpected;
  }
}

function parseNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new Error(`line ${line}: ${column} is not a finite number: ${JSON.stringify(raw)}`);
  }
  return value;
}

/**
 * Parse CSV text into rows, validating the header against the pinned
 * schema first.  The writer never quotes or embeds separators, so a
 * straight comma split is exact.
 */
export function parseResults(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) throw new Error("empty CSV: no header");

  const header = (lines[0] as string).split(",");
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  const unexpected = header.filter((c) => !(REQUIRED_COLUMNS as readonly string[]).includes(c));
  if (missing.length > 0 || unexpected.length > 0) {
    throw new SchemaError(missing, unexpected);
  }
  if (header.join(",") !== REQUIRED_COLUMNS.join(",")) {
    throw new SchemaError([], [], true);
  }

  const rows: ResultRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i] as string;
    if (line === "") continue;
    const f = line.split(",");
    if (f.length !== REQUIRED_COLUMNS.length) {
      throw new Error(`line ${i + 1}: expected ${REQUIRED_COLUMNS.length} fields, got ${f.length}`);
    }
    rows.push({
      scheme: f[0] as string,
      sweepVar: f[1] as string,
      sweepValue: parseNumber(f[2] as string, "sweep_value", i + 1),
      drop: parseNumber(f[3] as string, "drop", i + 1),
      seed: f[4] as string,
      wsse: parseNumber(f[5] as string, "wsse_bps_hz", i + 1),
      puRate: parseNumber(f[6] as string, "pu_rate_bps_hz", i + 1),
      status: f[7] as string,
      outerIters: parseNumber(f[8] as string, "outer_iters", i + 1),
      wallMs: parseNumber(f[9] as string, "wall_ms", i + 1),
    });
  }
  if (rows.length === 0) throw new Error("empty CSV: header but no data rows");
  return rows;
}
