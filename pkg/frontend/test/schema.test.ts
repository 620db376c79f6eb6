import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { parseResults, REQUIRED_COLUMNS, SchemaError } from "../src/csv.js";
import { buildSeries } from "../src/kinds.js";

const FIXTURE = fileURLToPath(new URL("./fixtures/golden.csv", import.meta.url));

const dir = mkdtempSync(join(tmpdir(), "plots-schema-"));
let n = 0;
function tmpFile(content: string): string {
  const path = join(dir, `case-${n++}.csv`);
  writeFileSync(path, content);
  return path;
}

const HEADER = REQUIRED_COLUMNS.join(",");
const ROW = "proposed,K,8,0,1,1.5,4.2,converged,7,12.5";

describe("schema validation", () => {
  it("a missing column is named in the diff", () => {
    const text = readFileSync(FIXTURE, "utf-8").replace(",pu_rate_bps_hz", "");
    expect(() => parseResults(text)).toThrow(SchemaError);
    try {
      parseResults(text);
    } catch (err) {
      const schema = err as SchemaError;
      expect(schema.missing).toEqual(["pu_rate_bps_hz"]);
      expect(schema.message).toContain("missing: pu_rate_bps_hz");
      expect(schema.message).toContain("expected:");
    }
  });

  it("an unexpected column is named in the diff", () => {
    try {
      parseResults(`${HEADER},note\n${ROW},hi\n`);
      expect.unreachable();
    } catch (err) {
      expect((err as SchemaError).unexpected).toEqual(["note"]);
    }
  });

  it("right columns in the wrong order are rejected", () => {
    const shuffled = [...REQUIRED_COLUMNS].reverse().join(",");
    expect(() => parseResults(`${shuffled}\n`)).toThrow(/wrong order/);
  });

  it("schema mismatch exits nonzero and writes nothing", () => {
    const csv = tmpFile(`scheme,value\nproposed,1\n`);
    const out = join(dir, "never.svg");
    expect(main(["--csv", csv, "--kind", "vs_K", "--out", out])).not.toBe(0);
    expect(existsSync(out)).toBe(false);
  });

  it("empty CSV is an error and writes nothing", () => {
    const out = join(dir, "empty.svg");
    expect(main(["--csv", tmpFile(""), "--kind", "vs_K", "--out", out])).not.toBe(0);
    expect(main(["--csv", tmpFile(`${HEADER}\n`), "--kind", "vs_K", "--out", out])).not.toBe(0);
    expect(existsSync(out)).toBe(false);
  });

  it("short rows carry a line number", () => {
    expect(() => parseResults(`${HEADER}\nproposed,K,8\n`)).toThrow(/line 2/);
  });

  it("non-numeric measures carry the column name", () => {
    const bad = ROW.replace("1.5", "fast");
    expect(() => parseResults(`${HEADER}\n${bad}\n`)).toThrow(/wsse_bps_hz/);
  });

  it("64-bit seeds survive as text", () => {
    const row = ROW.replace(",1,", ",18446744073709551615,");
    const rows = parseResults(`${HEADER}\n${row}\n`);
    expect(rows[0]?.seed).toBe("18446744073709551615");
  });
});

describe("cli arguments", () => {
  it("missing flags print usage and exit 2", () => {
    expect(main([])).toBe(2);
    expect(main(["--csv", FIXTURE, "--kind", "vs_K"])).toBe(2);
    expect(main(["--csv", FIXTURE, "--wat", "x", "--kind", "vs_K", "--out", "o.svg"])).toBe(2);
  });

  it("an unknown kind lists the valid ones", () => {
    const out = join(dir, "kind.svg");
    expect(main(["--csv", FIXTURE, "--kind", "vs_Q", "--out", out])).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("a kind with no rows in the CSV is an error", () => {
    const csv = tmpFile(`${HEADER}\n${ROW}\n`);
    const out = join(dir, "norows.svg");
    expect(main(["--csv", csv, "--kind", "vs_M", "--out", out])).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("a missing CSV file is an error", () => {
    expect(main(["--csv", join(dir, "nope.csv"), "--kind", "vs_K", "--out", join(dir, "x.svg")])).toBe(1);
  });

  it("one scheme at one sweep value still renders a valid figure", () => {
    const csv = tmpFile(`${HEADER}\n${ROW}\n${ROW.replace(",0,", ",1,")}\n`);
    const out = join(dir, "single.svg");
    expect(main(["--csv", csv, "--kind", "vs_K", "--out", out])).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("</svg>");
    expect(svg).toContain("circle");
  });
});

describe("series building", () => {
  it("traces are carried forward to the longest drop", () => {
    const lines = [HEADER];
    // drop 0 runs three iterations ending at 2.0; drop 1 stops after one at 0.4
    lines.push("proposed,iter,0,0,1,1.0,4.0,converged,0,9");
    lines.push("proposed,iter,1,0,1,1.8,4.0,converged,1,9");
    lines.push("proposed,iter,2,0,1,2.0,4.0,converged,2,9");
    lines.push("proposed,iter,0,1,2,0.4,4.0,converged,0,9");
    const series = buildSeries(parseResults(lines.join("\n") + "\n"), "convergence");
    expect(series).toHaveLength(1);
    const points = series[0]?.points ?? [];
    expect(points.map((p) => p.x)).toEqual([0, 1, 2]);
    // at x=2 the short drop still contributes its final 0.4
    expect(points[2]?.med).toBeCloseTo((2.0 + 0.4) / 2, 12);
    expect(points[2]?.q1).toBeCloseTo(0.8, 12);
  });

  it("schemes keep first-appearance order and x sorts ascending", () => {
    const lines = [HEADER];
    lines.push("sud,K,16,0,1,1.0,4.0,converged,3,9");
    lines.push("proposed,K,8,0,1,2.0,4.0,converged,3,9");
    lines.push("sud,K,8,0,1,0.5,4.0,converged,3,9");
    lines.push("proposed,K,16,0,1,3.0,4.0,converged,3,9");
    const series = buildSeries(parseResults(lines.join("\n") + "\n"), "vs_K");
    expect(series.map((s) => s.scheme)).toEqual(["sud", "proposed"]);
    expect(series[1]?.points.map((p) => p.x)).toEqual([8, 16]);
    expect(series[1]?.points.map((p) => p.med)).toEqual([2.0, 3.0]);
  });
});
