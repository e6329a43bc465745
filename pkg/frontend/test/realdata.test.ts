import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { column, readColumns } from "../src/csv.js";
import { agentControls, priceCompare, rateCompare } from "../src/figures.js";
import { pathYs } from "../src/svg.js";

// fixtures produced by the solver CLI's reference configuration
const ROOT = join(dirname(fileURLToPath(import.meta.url)), "..");
const DATA = join(ROOT, "data");
const mfNash = join(DATA, "meanfield_nash.csv");
const mfSocial = join(DATA, "meanfield_social.csv");
const simNash = join(DATA, "nash", "sim.csv");
const simSocial = join(DATA, "social", "sim.csv");

describe("reference-run figures", () => {
  it("renders all four comparison figures", () => {
    const figures = [
      priceCompare(mfNash, simNash),
      rateCompare(mfNash, simNash),
      priceCompare(mfSocial, simSocial),
      rateCompare(mfSocial, simSocial),
    ];
    for (const svg of figures) {
      expect(svg).toContain("<svg");
      expect(svg).toContain('data-label="mean field"');
      expect(svg).toContain('data-label="simulated mean"');
      expect(svg.length).toBeGreaterThan(10_000);
    }
  });

  it("cooperative rate reference is visibly monotone decreasing", () => {
    // data level: every forward difference negative
    const cols = readColumns(mfSocial, ["t", "qbar"]);
    const qbar = column(cols, "qbar", mfSocial);
    for (let i = 1; i < qbar.length; i++) {
      expect(qbar[i]!).toBeLessThan(qbar[i - 1]!);
    }
    // rendered level: the drawn curve descends monotonically on screen
    const ys = pathYs(rateCompare(mfSocial, simSocial), "mean field");
    expect(ys).toHaveLength(qbar.length);
    for (let i = 1; i < ys.length; i++) {
      expect(ys[i]!).toBeGreaterThanOrEqual(ys[i - 1]!);
    }
    expect(ys[ys.length - 1]!).toBeGreaterThan(ys[0]!);
  });

  it("competitive rate reference is U-shaped, not monotone (the check has teeth)", () => {
    const ys = pathYs(rateCompare(mfNash, simNash), "mean field");
    const rises = ys.some((y, i) => i > 0 && y > ys[i - 1]!);
    const falls = ys.some((y, i) => i > 0 && y < ys[i - 1]!);
    expect(rises && falls).toBe(true);
  });

  it("renders ten agent control paths for both games", () => {
    for (const game of ["nash", "social"]) {
      const svg = agentControls(join(DATA, game, "agents.csv"));
      expect(svg.match(/data-label="agent /g)).toHaveLength(10);
    }
  });

  it("is deterministic on the reference data", () => {
    expect(priceCompare(mfNash, simNash)).toBe(priceCompare(mfNash, simNash));
  });
});

// end-to-end through the compiled scripts; needs `npm run build` first
describe.skipIf(!existsSync(join(ROOT, "dist", "price-compare.js")))("compiled scripts", () => {
  it("write the four figures and fail cleanly on bad input", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    const jobs: Array<[string, string, string, string]> = [
      ["price-compare.js", mfNash, simNash, "price_nash.svg"],
      ["rate-compare.js", mfNash, simNash, "rate_nash.svg"],
      ["price-compare.js", mfSocial, simSocial, "price_social.svg"],
      ["rate-compare.js", mfSocial, simSocial, "rate_social.svg"],
    ];
    for (const [script, mf, sim, name] of jobs) {
      const target = join(out, name);
      execFileSync("node", [join(ROOT, "dist", script), mf, sim, target]);
      expect(readFileSync(target, "utf8")).toContain("</svg>");
    }
    expect(() =>
      execFileSync("node", [join(ROOT, "dist", "price-compare.js"), "missing.csv", simNash, join(out, "x.svg")], {
        stdio: "pipe",
      })
    ).toThrow();
  });
});
