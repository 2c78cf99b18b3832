/**
 * The four figure kinds, each reading the documented producer files and
 * returning a standalone SVG string with the bound-curve overlays.
 */

import {
  EntropySummary,
  LocalizationSummary,
  MeanEntropySummary,
  SCHEMAS,
  SchemaError,
  StarAverageSummary,
  readCsv,
  readJson,
  requireColumns,
} from "./schema.js";
import { Figure, linearScale, logScale } from "./svg.js";
import { fitCurve, histogram, starPredictionCurve } from "./overlays.js";

export type FigureKind =
  | "entropy-scatter"
  | "mean-entropy-vs-size"
  | "localized-state"
  | "sec2-histogram";

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  summary?: string;
}

export function renderEntropyScatter(csvPath: string, summaryPath?: string): string {
  const table = readCsv(csvPath, SCHEMAS.entropyScatter);
  requireColumns(table, ["k_n", "normalized_entropy"], csvPath);
  const k = table.columns["k_n"];
  const s = table.columns["normalized_entropy"];
  const fig = new Figure({
    title: "Eigenfunction entropy over the spectrum",
    xLabel: "k", yLabel: "normalized entropy",
  });
  const area = fig.plotArea();
  const x = linearScale([Math.min(...k), Math.max(...k)], area.x);
  const y = linearScale([0, 1.02], area.y);
  fig.axes(x, y);
  fig.circles(k, s, x, y, "#1f77b4", 2.2, "entropy-points");
  if (summaryPath) {
    const doc = readJson<EntropySummary>(summaryPath, SCHEMAS.entropyScatter);
    if (doc.bounds.girth_bound !== undefined) {
      fig.hline(doc.bounds.girth_bound, x, y, "#2ca02c", "bound-girth", "girth bound");
    }
    if (doc.bounds.et_star_bound !== undefined) {
      fig.hline(doc.bounds.et_star_bound, x, y, "#d62728", "bound-et-star",
                "uncertainty bound");
    }
  }
  return fig.render();
}

export function renderMeanEntropyVsSize(summaryPath: string): string {
  const doc = readJson<MeanEntropySummary>(summaryPath, SCHEMAS.meanEntropy);
  if (!doc.rows || doc.rows.length === 0) {
    throw new SchemaError(`${summaryPath}: no data rows`);
  }
  const b = doc.rows.map((r) => r.bond_count);
  const mean = doc.rows.map((r) => r.mean_normalized_entropy);
  const varBound = doc.rows.map((r) => r.variance_bound);
  const fig = new Figure({
    title: "Mean entropy against graph size",
    xLabel: "bond count B", yLabel: "mean normalized entropy",
  });
  const area = fig.plotArea();
  const x = logScale([Math.min(...b) * 0.9, Math.max(...b) * 1.1], area.x);
  const lo = Math.min(...mean, ...varBound);
  const y = linearScale([Math.max(0, lo - 0.1), 1.02], area.y);
  fig.axes(x, y);
  fig.polyline(b, varBound, x, y, "#2ca02c", "bound-variance", "5 3");
  fig.circles(b, mean, x, y, "#1f77b4", 3.5, "mean-points");
  if (doc.fit_alpha !== undefined && doc.fit_beta !== undefined) {
    const curve = fitCurve(doc.fit_alpha, doc.fit_beta, Math.min(...b), Math.max(...b));
    fig.polyline(curve.b, curve.value, x, y, "#ff7f0e", "fit-model");
    fig.note(`fit: 1 - ${doc.fit_alpha.toPrecision(3)} B^${doc.fit_beta.toPrecision(3)} / ln B`);
  }
  if (doc.c_neumann !== undefined) {
    const curve = starPredictionCurve(doc.c_neumann, Math.min(...b), Math.max(...b));
    fig.polyline(curve.b, curve.value, x, y, "#d62728", "star-prediction");
    fig.note("star prediction (C + ln 2)/ln B", 1);
  }
  return fig.render();
}

export function renderLocalizedState(csvPath: string, summaryPath?: string): string {
  const table = readCsv(csvPath, SCHEMAS.localization);
  requireColumns(table, ["edge", "mass"], csvPath);
  const edges = table.columns["edge"];
  const mass = table.columns["mass"];
  let title = "Ground-state mass per edge";
  if (summaryPath) {
    const doc = readJson<LocalizationSummary>(summaryPath, SCHEMAS.localization);
    title += `  (k1 = ${doc.k1.toFixed(4)}, prediction ${doc.prediction.toFixed(4)})`;
  }
  const fig = new Figure({ title, xLabel: "edge", yLabel: "|A_e|^2" });
  const area = fig.plotArea();
  const x = linearScale([-0.5, edges.length - 0.5], area.x);
  const y = linearScale([0, Math.max(...mass) * 1.08], area.y);
  fig.axes(x, y);
  fig.bars(edges, mass, x, y, "#1f77b4", "mass-bars");
  return fig.render();
}

export function renderSec2Histogram(csvPath: string, summaryPath: string,
                                    edgeCount?: number): string {
  const table = readCsv(csvPath, SCHEMAS.starSpectrum);
  requireColumns(table, ["y_sec2"], csvPath);
  const doc = readJson<StarAverageSummary>(summaryPath, SCHEMAS.starAverage);
  if (!doc.rows || doc.rows.length === 0) {
    throw new SchemaError(`${summaryPath}: no data rows`);
  }
  let row = doc.rows[0];
  if (edgeCount !== undefined) {
    const match = doc.rows.find((r) => r.edge_count === edgeCount);
    if (!match) {
      throw new SchemaError(`${summaryPath}: no row with edge_count ${edgeCount}`);
    }
    row = match;
  }
  const samples = table.columns["y_sec2"];
  const sorted = [...samples].sort((a, b) => a - b);
  const hi = sorted[Math.floor(0.99 * (sorted.length - 1))] * 1.1;
  const hist = histogram(samples, 60, hi);
  const curveY = row.density_curve.y.filter((v) => v <= hi);
  const curveP = row.density_curve.p.slice(0, curveY.length);
  const fig = new Figure({
    title: `Normalized sec^2 sums vs limit density (|E| = ${row.edge_count})`,
    xLabel: "y", yLabel: "density",
  });
  const area = fig.plotArea();
  const x = linearScale([0, hi], area.x);
  const y = linearScale([0, Math.max(...hist.density, ...curveP) * 1.1], area.y);
  fig.axes(x, y);
  fig.bars(hist.centers, hist.density, x, y, "#9ecae1", "histogram-bars");
  fig.polyline(curveY, curveP, x, y, "#d62728", "density-curve");
  fig.note(`KS distance ${row.ks_distance.toFixed(3)}`);
  return fig.render();
}

export function render(spec: FigureSpec): string {
  switch (spec.kind) {
    case "entropy-scatter":
      return renderEntropyScatter(spec.input, spec.summary);
    case "mean-entropy-vs-size":
      return renderMeanEntropyVsSize(spec.input);
    case "localized-state":
      return renderLocalizedState(spec.input, spec.summary);
    case "sec2-histogram":
      if (!spec.summary) {
        throw new SchemaError("sec2-histogram needs --summary with the density curve");
      }
      return renderSec2Histogram(spec.input, spec.summary);
    default:
      throw new SchemaError(`unknown figure kind "${(spec as FigureSpec).kind}"`);
  }
}
