import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { describe, expect, it } from "vitest";

import { CsvError, numbers, readTable, requireColumns } from "../src/csv";

const FIXTURES = path.join(__dirname, "fixtures");

function tmpFile(content: string): string {
  const file = path.join(fs.mkdtempSync(path.join(os.tmpdir(), "csvtest-")), "x.csv");
  fs.writeFileSync(file, content);
  return file;
}

describe("readTable", () => {
  it("reads a real sweep file with provenance", () => {
    const table = readTable(path.join(FIXTURES, "fig3.csv"));
    expect(table.provenance[0]).toMatch(/^spdcfocus /);
    expect(table.columns).toContain("r_star");
    expect(table.rows.length).toBe(27); // 3 waists x 9 angles
  });

  it("refuses files without the provenance header", () => {
    const file = tmpFile("a,b\n1,2\n");
    expect(() => readTable(file)).toThrow(/provenance/);
  });

  it("refuses empty tables", () => {
    const file = tmpFile("# spdcfocus 0.1.0 test\n# columns: a,b\na,b\n");
    expect(() => readTable(file)).toThrow(/no data rows/);
  });

  it("rejects ragged rows", () => {
    const file = tmpFile("# spdcfocus 0.1.0 test\na,b\n1,2,3\n");
    expect(() => readTable(file)).toThrow(/fields/);
  });
});

describe("requireColumns", () => {
  it("reports the column diff on mismatch", () => {
    const table = readTable(tmpFile("# spdcfocus 0.1.0 test\na,b\n1,2\n"));
    try {
      requireColumns(table, ["a", "r_star", "axis_value"]);
      throw new Error("should have thrown");
    } catch (error) {
      expect(error).toBeInstanceOf(CsvError);
      const message = (error as Error).message;
      expect(message).toContain("missing:  r_star, axis_value");
      expect(message).toContain("present but unused: b");
    }
  });

  it("parses numeric columns", () => {
    const table = readTable(tmpFile("# spdcfocus 0.1.0 test\na,b\n1,2\n3,4\n"));
    expect(numbers(table, "b")).toEqual([2, 4]);
  });
});
