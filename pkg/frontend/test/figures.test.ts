import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { agentControls, priceCompare, rateCompare } from "../src/figures.js";
import { pathYs, renderChart } from "../src/svg.js";

const dir = mkdtempSync(join(tmpdir(), "fig-"));

function tempCsv(name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text);
  return path;
}

// five-point stand-ins with the real column layouts
const MF_NASH = tempCsv(
  "meanfield_nash.csv",
  "t,a,B,xbar,Pbar,Qbar\n0,1,-13,2.2,3,1.5\n0.5,1,-12,2.9,2.4,1.1\n1,1,-10,3.4,2.0,1.3\n1.5,1,-8,4.1,1.8,1.6\n2,1,-6,5.0,1.7,2.0\n"
);
const MF_SOCIAL = tempCsv(
  "meanfield_social.csv",
  "t,a,b,l,pbar,xbar,qbar\n0,1,-12,-1,3,2.2,1.7\n0.5,1,-11,-0.5,2.2,3.0,1.6\n1,1,-9,0,1.9,3.7,1.5\n1.5,1,-7,0.2,1.8,4.4,1.4\n2,1,-6,0,1.75,5.1,1.3\n"
);
const SIM = tempCsv(
  "sim.csv",
  "t,P_mean,P_std,Q_mean,Q_std,Xbar_mean,Pbar_ref,Qbar_ref\n0,3,0,1.49,0,2.2,3,1.5\n0.5,2.41,0.01,1.12,0.01,2.9,2.4,1.1\n1,2.02,0.01,1.31,0.01,3.4,2.0,1.3\n1.5,1.81,0.02,1.62,0.01,4.1,1.8,1.6\n2,1.72,0.02,2.01,0.02,5.0,1.7,2.0\n"
);

describe("priceCompare", () => {
  it("overlays reference and simulated curves with a legend", () => {
    const svg = priceCompare(MF_NASH, SIM);
    expect(svg).toContain("<svg");
    expect(svg).toContain('data-label="mean field"');
    expect(svg).toContain('data-label="simulated mean"');
    expect(svg).toContain(">mean field</text>");
    expect(svg).toContain(">simulated mean</text>");
    expect(svg).toContain("competitive play");
  });

  it("detects the cooperative column names", () => {
    const svg = priceCompare(MF_SOCIAL, SIM);
    expect(svg).toContain("cooperative planning");
  });

  it("is deterministic", () => {
    expect(priceCompare(MF_NASH, SIM)).toBe(priceCompare(MF_NASH, SIM));
  });

  it("rejects a solver CSV with neither game's columns", () => {
    const bad = tempCsv("mf_bad.csv", "t,a\n0,1\n1,1\n");
    expect(() => priceCompare(bad, SIM)).toThrow(/Pbar.*pbar.*mf_bad\.csv/s);
  });

  it("requires P_mean in the simulation CSV", () => {
    const bad = tempCsv("sim_bad.csv", "t,Q_mean\n0,1\n1,1\n");
    expect(() => priceCompare(MF_NASH, bad)).toThrow(/'P_mean'.*sim_bad\.csv/);
  });
});

describe("rateCompare", () => {
  it("plots the game's rate column", () => {
    const svg = rateCompare(MF_SOCIAL, SIM);
    expect(svg).toContain("Average charging rate");
    expect(svg).toContain("cooperative planning");
  });

  it("requires Q_mean in the simulation CSV", () => {
    const bad = tempCsv("sim_bad2.csv", "t,P_mean\n0,1\n1,1\n");
    expect(() => rateCompare(MF_NASH, bad)).toThrow(/'Q_mean'.*sim_bad2\.csv/);
  });

  it("monotone data renders as monotone screen coordinates", () => {
    // qbar decreases; SVG y grows downward, so the path's ys must increase
    const ys = pathYs(rateCompare(MF_SOCIAL, SIM), "mean field");
    for (let i = 1; i < ys.length; i++) {
      expect(ys[i]!).toBeGreaterThan(ys[i - 1]!);
    }
  });
});

describe("agentControls", () => {
  it("plots one path per agent column", () => {
    const agents = tempCsv(
      "agents.csv",
      "t,v1,v2,v3\n0,1.5,1.4,1.6\n1,1.2,1.1,1.3\n2,2.0,1.9,2.1\n"
    );
    const svg = agentControls(agents);
    expect(svg.match(/data-label="agent /g)).toHaveLength(3);
  });

  it("clamps to the agents present, no error below ten", () => {
    const agents = tempCsv("agents1.csv", "t,v1\n0,1.5\n1,1.2\n2,2.0\n");
    expect(() => agentControls(agents)).not.toThrow();
  });

  it("takes an optional title", () => {
    const agents = tempCsv("agents2.csv", "t,v1\n0,1.5\n1,1.2\n2,2.0\n");
    expect(agentControls(agents, "Custom title")).toContain("Custom title");
  });

  it("errors when no agent columns exist", () => {
    const empty = tempCsv("agents_bad.csv", "t\n0\n1\n");
    expect(() => agentControls(empty)).toThrow(/'v1'.*agents_bad\.csv/);
  });
});

describe("renderChart", () => {
  const xy = { x: [0, 1, 2], y: [5, 3, 4] };

  it("escapes markup in labels", () => {
    const svg = renderChart({
      title: "a < b & c",
      xLabel: "x",
      yLabel: "y",
      series: [{ ...xy, label: "s", color: "#000" }],
    });
    expect(svg).toContain("a &lt; b &amp; c");
    expect(svg).not.toContain("a < b");
  });

  it("rejects mismatched series lengths", () => {
    expect(() =>
      renderChart({
        title: "t",
        xLabel: "x",
        yLabel: "y",
        series: [{ label: "s", x: [0, 1], y: [1], color: "#000" }],
      })
    ).toThrow(/'s'.*2 points.*1/);
  });

  it("rejects an empty series list and single points", () => {
    expect(() => renderChart({ title: "t", xLabel: "x", yLabel: "y", series: [] })).toThrow(
      /at least one/
    );
    expect(() =>
      renderChart({
        title: "t",
        xLabel: "x",
        yLabel: "y",
        series: [{ label: "s", x: [0], y: [1], color: "#000" }],
      })
    ).toThrow(/at least 2/);
  });

  it("renders a flat series without a degenerate scale", () => {
    const svg = renderChart({
      title: "flat",
      xLabel: "x",
      yLabel: "y",
      series: [{ label: "s", x: [0, 1, 2], y: [1, 1, 1], color: "#000" }],
    });
    const ys = pathYs(svg, "s");
    expect(new Set(ys).size).toBe(1);
    expect(Number.isFinite(ys[0]!)).toBe(true);
  });

  it("pathYs reads back the rendered coordinates", () => {
    const svg = renderChart({
      title: "t",
      xLabel: "x",
      yLabel: "y",
      series: [{ ...xy, label: "s", color: "#000" }],
    });
    const ys = pathYs(svg, "s");
    expect(ys).toHaveLength(3);
    expect(ys[0]!).toBeLessThan(ys[1]!); // y=5 sits above y=3 on screen
    expect(() => pathYs(svg, "ghost")).toThrow(/ghost/);
  });
});
