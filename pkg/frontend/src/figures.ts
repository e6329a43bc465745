import { column, readColumns, type Columns } from "./csv.js";
import { renderChart } from "./svg.js";

export type Game = "competitive" | "cooperative";

const REF = "#1f6fb4";
const SIM = "#d95f02";

interface RefColumns {
  game: Game;
  price: string;
  rate: string;
}

/** The solver CSV names its columns by game: Pbar/Qbar vs pbar/qbar. */
function detectGame(cols: Columns, path: string): RefColumns {
  if (cols.has("Pbar") && cols.has("Qbar")) {
    return { game: "competitive", price: "Pbar", rate: "Qbar" };
  }
  if (cols.has("pbar") && cols.has("qbar")) {
    return { game: "cooperative", price: "pbar", rate: "qbar" };
  }
  throw new Error(`missing column 'Pbar'/'Qbar' or 'pbar'/'qbar' in '${path}'`);
}

function gameTitle(game: Game): string {
  return game === "competitive" ? "competitive play" : "cooperative planning";
}

export function priceCompare(meanfieldPath: string, simPath: string): string {
  const mf = readColumns(meanfieldPath, ["t"]);
  const ref = detectGame(mf, meanfieldPath);
  const sim = readColumns(simPath, ["t", "P_mean"]);
  return renderChart({
    title: `Price: mean field vs simulation (${gameTitle(ref.game)})`,
    xLabel: "t",
    yLabel: "price",
    series: [
      {
        label: "mean field",
        x: column(mf, "t", meanfieldPath),
        y: column(mf, ref.price, meanfieldPath),
        color: REF,
      },
      {
        label: "simulated mean",
        x: column(sim, "t", simPath),
        y: column(sim, "P_mean", simPath),
        color: SIM,
        dash: "6,4",
      },
    ],
  });
}

export function rateCompare(meanfieldPath: string, simPath: string): string {
  const mf = readColumns(meanfieldPath, ["t"]);
  const ref = detectGame(mf, meanfieldPath);
  const sim = readColumns(simPath, ["t", "Q_mean"]);
  return renderChart({
    title: `Average charging rate: mean field vs simulation (${gameTitle(ref.game)})`,
    xLabel: "t",
    yLabel: "average rate",
    series: [
      {
        label: "mean field",
        x: column(mf, "t", meanfieldPath),
        y: column(mf, ref.rate, meanfieldPath),
        color: REF,
      },
      {
        label: "simulated mean",
        x: column(sim, "t", simPath),
        y: column(sim, "Q_mean", simPath),
        color: SIM,
        dash: "6,4",
      },
    ],
  });
}

// ten distinguishable hues for the per-agent paths
const AGENT_COLORS = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/** Plot the sampled control paths v1, v2, ... (up to ten, fewer if absent). */
export function agentControls(agentsPath: string, title?: string): string {
  const cols = readColumns(agentsPath, ["t"]);
  const t = column(cols, "t", agentsPath);
  const names: string[] = [];
  for (let i = 1; i <= 10; i++) {
    if (cols.has(`v${i}`)) names.push(`v${i}`);
  }
  if (names.length === 0) {
    throw new Error(`missing column 'v1' in '${agentsPath}'`);
  }
  return renderChart({
    title: title ?? "Agent control paths (one replication)",
    xLabel: "t",
    yLabel: "charging rate",
    series: names.map((name, i) => ({
      label: `agent ${i + 1}`,
      x: t,
      y: column(cols, name, agentsPath),
      color: AGENT_COLORS[i % AGENT_COLORS.length]!,
      width: 1.2,
    })),
  });
}
