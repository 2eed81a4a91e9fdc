/** SVG chart builders. Every number rendered here comes from the API payload. */

import type { AnalyzeResponse, IntervalEntry, PosteriorMarginal, Scale, ScoreFrequency } from "./types";

const BAND_COLORS = ["#d9534f", "#f0ad4e", "#ffd76e", "#9acd68", "#5cb85c", "#4e9a8f",
  "#67809f", "#8e6fa8", "#c577a0", "#b0a18c", "#7f8c8d"];

const f = (x: number): string => {
  const s = x.toPrecision(6);
  return String(Number(s));
};

function openSvg(width: number, height: number): string[] {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="11">`,
    `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`,
  ];
}

function xAxis(x0: number, x1: number, y: number): string[] {
  const parts = [`<line x1="${f(x0)}" y1="${f(y)}" x2="${f(x1)}" y2="${f(y)}" stroke="#333"/>`];
  for (const tick of [0, 25, 50, 75, 100]) {
    const px = x0 + (tick / 100) * (x1 - x0);
    parts.push(`<line x1="${f(px)}" y1="${f(y)}" x2="${f(px)}" y2="${f(y + 4)}" stroke="#333"/>`);
    parts.push(`<text x="${f(px)}" y="${f(y + 16)}" text-anchor="middle">${tick}</text>`);
  }
  return parts;
}

export function scoreFrequencySvg(freq: ScoreFrequency, width = 640, height = 320): string {
  const [x0, x1] = [40, width - 20];
  const [y0, y1] = [height - 40, 20];
  const peak = Math.max(1, ...freq.counts);
  const parts = openSvg(width, height);
  const barW = Math.max(4, ((x1 - x0) / 41) * 0.8);
  freq.values.forEach((v, i) => {
    const px = x0 + (v / 100) * (x1 - x0);
    const h = (freq.counts[i] / peak) * (y0 - y1);
    parts.push(`<rect x="${f(px - barW / 2)}" y="${f(y0 - h)}" width="${f(barW)}" ` +
      `height="${f(h)}" fill="#4878a8"/>`);
  });
  parts.push(...xAxis(x0, x1, y0));
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#333"/>`);
  parts.push(`<text x="${x0 - 6}" y="${y1 + 4}" text-anchor="end">${peak}</text>`);
  parts.push(`<text x="${f((x0 + x1) / 2)}" y="${height - 6}" text-anchor="middle">SUS score</text>`);
  parts.push("</svg>");
  return parts.join("\n");
}

export function intervalOverScaleSvg(
  entry: IntervalEntry,
  scale: Scale,
  mean: number,
  width = 680,
  height = 170,
): string {
  const [x0, x1] = [40, width - 20];
  const px = (score: number) => x0 + (Math.min(Math.max(score, 0), 100) / 100) * (x1 - x0);
  const barY = 40;
  const barH = 46;
  const parts = openSvg(width, height);
  if (scale.kind === "bands") {
    scale.bands.forEach((band, i) => {
      const bx = px(band.lower);
      const bw = px(band.upper) - bx;
      parts.push(`<rect x="${f(bx)}" y="${barY}" width="${f(bw)}" height="${barH}" ` +
        `fill="${BAND_COLORS[i % BAND_COLORS.length]}" fill-opacity="0.55"/>`);
      if (bw > 30) {
        parts.push(`<text x="${f(bx + bw / 2)}" y="${barY + barH / 2 + 4}" ` +
          `text-anchor="middle">${band.label}</text>`);
      }
    });
  } else {
    for (const [score, pct] of scale.anchors) {
      const ax = px(score);
      parts.push(`<line x1="${f(ax)}" y1="${barY}" x2="${f(ax)}" y2="${barY + barH}" stroke="#999"/>`);
      if (pct === 10 || pct === 50 || pct === 90) {
        parts.push(`<text x="${f(ax)}" y="${barY - 4}" text-anchor="middle">${f(pct)}%</text>`);
      }
    }
  }
  const [lx, ux, mx] = [px(entry.lower), px(entry.upper), px(mean)];
  parts.push(`<rect x="${f(lx)}" y="${barY - 10}" width="${f(ux - lx)}" height="${barH + 20}" ` +
    `fill="#2c3e50" fill-opacity="0.16"/>`);
  for (const vx of [lx, ux]) {
    parts.push(`<line x1="${f(vx)}" y1="${barY - 10}" x2="${f(vx)}" y2="${barY + barH + 10}" ` +
      `stroke="#2c3e50" stroke-width="2"/>`);
  }
  parts.push(`<line x1="${f(mx)}" y1="${barY - 10}" x2="${f(mx)}" y2="${barY + barH + 10}" ` +
    `stroke="#2c3e50" stroke-dasharray="4 3"/>`);
  parts.push(...xAxis(x0, x1, barY + barH + 14));
  parts.push(`<text x="${f((x0 + x1) / 2)}" y="${height - 4}" text-anchor="middle">` +
    `${entry.method} interval [${f(entry.lower)}, ${f(entry.upper)}], mean ${f(mean)}</text>`);
  parts.push("</svg>");
  return parts.join("\n");
}

export function posteriorSvg(
  marginal: PosteriorMarginal,
  interval: { lower: number; upper: number },
  width = 640,
  height = 300,
): string {
  const [x0, x1] = [40, width - 20];
  const [y0, y1] = [height - 40, 20];
  const peak = Math.max(...marginal.density, 1e-12);
  const pt = (m: number, d: number) =>
    `${f(x0 + (m / 100) * (x1 - x0))},${f(y0 - (d / peak) * (y0 - y1))}`;
  const parts = openSvg(width, height);
  const inside: string[] = [];
  let first: number | null = null;
  let last = 0;
  marginal.mu.forEach((m, i) => {
    if (m >= interval.lower && m <= interval.upper) {
      if (first === null) first = m;
      last = m;
      inside.push(pt(m, marginal.density[i]));
    }
  });
  if (first !== null) {
    parts.push(`<polygon points="${pt(first, 0)} ${inside.join(" ")} ${pt(last, 0)}" ` +
      `fill="#4878a8" fill-opacity="0.35"/>`);
  }
  parts.push(`<polyline points="${marginal.mu.map((m, i) => pt(m, marginal.density[i])).join(" ")}" ` +
    `fill="none" stroke="#2c3e50" stroke-width="1.5"/>`);
  parts.push(...xAxis(x0, x1, y0));
  parts.push(`<text x="${f((x0 + x1) / 2)}" y="${height - 6}" text-anchor="middle">mean SUS score</text>`);
  parts.push("</svg>");
  return parts.join("\n");
}

export function chartsForTab(analysis: AnalyzeResponse, tab: string, scaleName: string): {
  frequency: string;
  interval: string;
  posterior: string | null;
} {
  const entry = analysis.intervals.find((e) => e.method === tab);
  if (!entry) throw new Error(`no interval computed for method ${tab}`);
  const scale = analysis.plots.interval_bands.scales.find((s) => s.name === scaleName)
    ?? analysis.plots.interval_bands.scales[0];
  const posterior =
    tab === "bayes" && analysis.plots.posterior_marginal
      ? posteriorSvg(analysis.plots.posterior_marginal, entry)
      : null;
  return {
    frequency: scoreFrequencySvg(analysis.plots.score_frequency),
    interval: intervalOverScaleSvg(entry, scale, analysis.plots.interval_bands.mean),
    posterior,
  };
}
