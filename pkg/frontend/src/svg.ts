import { scaleLinear, type ScaleLinear } from "d3-scale";
import { line } from "d3-shape";

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  width?: number;
  dash?: string;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  width?: number;
  height?: number;
}

const MARGIN = { top: 44, right: 24, bottom: 48, left: 60 };
const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(lo < hi)) {
    // flat or single-point series: pad so the scale is non-degenerate
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function axis(
  scale: ScaleLinear<number, number>,
  which: "x" | "y",
  cross: number,
  plot: { x0: number; x1: number; y0: number; y1: number }
): string {
  const ticks = scale.ticks(6);
  const fmt = scale.tickFormat(6);
  const parts: string[] = [];
  if (which === "x") {
    parts.push(`<line x1="${plot.x0}" y1="${cross}" x2="${plot.x1}" y2="${cross}" stroke="black"/>`);
  } else {
    parts.push(`<line x1="${cross}" y1="${plot.y0}" x2="${cross}" y2="${plot.y1}" stroke="black"/>`);
  }
  for (const t of ticks) {
    const p = scale(t);
    if (which === "x") {
      parts.push(`<line x1="${p}" y1="${cross}" x2="${p}" y2="${cross + 5}" stroke="black"/>`);
      parts.push(
        `<line x1="${p}" y1="${plot.y0}" x2="${p}" y2="${plot.y1}" stroke="#ddd" stroke-width="0.5"/>`
      );
      parts.push(
        `<text x="${p}" y="${cross + 18}" text-anchor="middle" font-size="11" ${FONT}>${esc(fmt(t))}</text>`
      );
    } else {
      parts.push(`<line x1="${cross - 5}" y1="${p}" x2="${cross}" y2="${p}" stroke="black"/>`);
      parts.push(
        `<line x1="${plot.x0}" y1="${p}" x2="${plot.x1}" y2="${p}" stroke="#ddd" stroke-width="0.5"/>`
      );
      parts.push(
        `<text x="${cross - 8}" y="${p + 4}" text-anchor="end" font-size="11" ${FONT}>${esc(fmt(t))}</text>`
      );
    }
  }
  return parts.join("\n");
}

/** Render an overlay line chart as a standalone SVG document. */
export function renderChart(opts: ChartOptions): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const plot = {
    x0: MARGIN.left,
    x1: width - MARGIN.right,
    y0: MARGIN.top,
    y1: height - MARGIN.bottom,
  };
  if (opts.series.length === 0) {
    throw new Error("chart needs at least one series");
  }
  for (const s of opts.series) {
    if (s.x.length !== s.y.length) {
      throw new Error(`series '${s.label}': x has ${s.x.length} points, y has ${s.y.length}`);
    }
    if (s.x.length < 2) {
      throw new Error(`series '${s.label}' needs at least 2 points`);
    }
  }

  const allX = opts.series.flatMap((s) => s.x);
  const allY = opts.series.flatMap((s) => s.y);
  const xs = scaleLinear().domain(extent(allX)).range([plot.x0, plot.x1]);
  const ys = scaleLinear().domain(extent(allY)).nice().range([plot.y1, plot.y0]);

  const paths = opts.series.map((s) => {
    const gen = line<number>()
      .x((_, i) => xs(s.x[i]!))
      .y((_, i) => ys(s.y[i]!));
    const d = gen(s.y.map((_, i) => i)) ?? "";
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    return `<path d="${d}" fill="none" stroke="${s.color}" stroke-width="${s.width ?? 1.8}"${dash} data-label="${esc(s.label)}"/>`;
  });

  // legend, top right inside the plot area
  const legendRows = opts.series.map((s, i) => {
    const ly = plot.y0 + 14 + 18 * i;
    const lx = plot.x1 - 160;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    return (
      `<line x1="${lx}" y1="${ly}" x2="${lx + 26}" y2="${ly}" stroke="${s.color}" stroke-width="2"${dash}/>` +
      `<text x="${lx + 32}" y="${ly + 4}" font-size="12" ${FONT}>${esc(s.label)}</text>`
    );
  });

  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="15" ${FONT}>${esc(opts.title)}</text>`,
    axis(xs, "x", plot.y1, plot),
    axis(ys, "y", plot.x0, plot),
    `<text x="${(plot.x0 + plot.x1) / 2}" y="${height - 12}" text-anchor="middle" font-size="12" ${FONT}>${esc(opts.xLabel)}</text>`,
    `<text x="16" y="${(plot.y0 + plot.y1) / 2}" text-anchor="middle" font-size="12" ${FONT} transform="rotate(-90 16 ${(plot.y0 + plot.y1) / 2})">${esc(opts.yLabel)}</text>`,
    ...paths,
    ...legendRows,
    `</svg>`,
    ``,
  ].join("\n");
}

/** Parse the y coordinates back out of a rendered path's d attribute. */
export function pathYs(svg: string, label: string): number[] {
  const tag = svg
    .split("\n")
    .find((ln) => ln.includes(`data-label="${label}"`));
  if (!tag) {
    throw new Error(`no path labeled '${label}' in SVG`);
  }
  const m = tag.match(/ d="([^"]+)"/);
  if (!m) {
    throw new Error(`path '${label}' has no d attribute`);
  }
  return m[1]!
    .replace(/^M/, "")
    .split("L")
    .map((pair) => Number(pair.split(",")[1]));
}
