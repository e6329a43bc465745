import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { column, readColumns } from "../src/csv.js";

const dir = mkdtempSync(join(tmpdir(), "csv-"));

function tempCsv(name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text);
  return path;
}

describe("readColumns", () => {
  it("reads numeric columns by header", () => {
    const path = tempCsv("ok.csv", "t,P\n0,3\n0.5,2.5\n1,2\n");
    const cols = readColumns(path, ["t", "P"]);
    expect(column(cols, "t", path)).toEqual([0, 0.5, 1]);
    expect(column(cols, "P", path)).toEqual([3, 2.5, 2]);
  });

  it("keeps full double precision", () => {
    const path = tempCsv("prec.csv", "x\n0.1000000000000000055511151231257827\n");
    const cols = readColumns(path, ["x"]);
    expect(column(cols, "x", path)[0]).toBe(0.1);
  });

  it("names the file when it is missing", () => {
    expect(() => readColumns(join(dir, "nope.csv"), ["t"])).toThrow(/nope\.csv/);
  });

  it("names file and column when a required column is absent", () => {
    const path = tempCsv("cols.csv", "t,P\n0,3\n");
    expect(() => readColumns(path, ["Q_mean"])).toThrow(/'Q_mean'.*cols\.csv/);
  });

  it("lists the columns it did find", () => {
    const path = tempCsv("cols2.csv", "t,P\n0,3\n");
    expect(() => readColumns(path, ["missing"])).toThrow(/has: t, P/);
  });

  it("rejects non-numeric cells, naming column and file", () => {
    const path = tempCsv("bad.csv", "t,P\n0,three\n");
    expect(() => readColumns(path, ["t", "P"])).toThrow(/'three'.*'P'.*bad\.csv/);
  });

  it("column() helper errors name the column", () => {
    const path = tempCsv("helper.csv", "t\n0\n");
    const cols = readColumns(path, ["t"]);
    expect(() => column(cols, "ghost", path)).toThrow(/'ghost'/);
  });
});
