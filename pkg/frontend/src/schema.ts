/**
 * Parsers for the producer's CSV and JSON artifacts.
 *
 * Every file carries version "1" and a schema tag; rendering refuses
 * anything that does not match the expected producer schema.
 */

import { readFileSync } from "fs";

export const VERSION = "1";

export const SCHEMAS = {
  entropyScatter: "qgraphs/entropy-scatter@1",
  starSpectrum: "qgraphs/star-spectrum@1",
  meanEntropy: "qgraphs/mean-entropy-vs-size@1",
  starAverage: "qgraphs/star-average@1",
  bounds: "qgraphs/bounds@1",
  localization: "qgraphs/localization@1",
} as const;

export class SchemaError extends Error {}

export interface CsvTable {
  meta: Record<string, string>;
  columns: Record<string, number[]>;
  rowCount: number;
}

export function parseCsv(text: string, path = "<csv>"): CsvTable {
  const meta: Record<string, string> = {};
  let header: string[] | null = null;
  const rows: number[][] = [];
  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (!line) continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const colon = body.indexOf(":");
      if (colon > 0) meta[body.slice(0, colon).trim()] = body.slice(colon + 1).trim();
      continue;
    }
    if (header === null) {
      header = line.split(",");
      continue;
    }
    const values = line.split(",").map(Number);
    if (values.length !== header.length || values.some((v) => Number.isNaN(v))) {
      throw new SchemaError(`${path}: malformed data row "${line}"`);
    }
    rows.push(values);
  }
  if (header === null) throw new SchemaError(`${path}: no header row`);
  const columns: Record<string, number[]> = {};
  header.forEach((name, i) => {
    columns[name] = rows.map((r) => r[i]);
  });
  return { meta, columns, rowCount: rows.length };
}

export function readCsv(path: string, schema: string): CsvTable {
  const table = parseCsv(readFileSync(path, "utf8"), path);
  if (table.meta["version"] !== VERSION) {
    throw new SchemaError(
      `${path}: expected version ${VERSION}, got ${table.meta["version"]}`);
  }
  if (table.meta["schema"] !== schema) {
    throw new SchemaError(
      `${path}: expected schema ${schema}, got ${table.meta["schema"]}`);
  }
  return table;
}

export function requireColumns(table: CsvTable, names: string[], path: string): void {
  for (const name of names) {
    if (!(name in table.columns)) {
      throw new SchemaError(`${path}: missing column "${name}"`);
    }
  }
  if (table.rowCount === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
}

export function readJson<T = Record<string, unknown>>(path: string, schema: string): T {
  let doc: Record<string, unknown>;
  try {
    doc = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new SchemaError(`${path}: not valid JSON (${err})`);
  }
  if (doc["version"] !== VERSION) {
    throw new SchemaError(`${path}: expected version ${VERSION}, got ${doc["version"]}`);
  }
  if (doc["schema"] !== schema) {
    throw new SchemaError(`${path}: expected schema ${schema}, got ${doc["schema"]}`);
  }
  return doc as T;
}

export interface EntropySummary {
  size: number;
  n_eigen: number;
  mean_normalized_entropy: number | null;
  bounds: { bond_count: number; girth_bound?: number; et_star_bound?: number };
}

export interface MeanEntropyRow {
  size: number;
  bond_count: number;
  n_eigen: number;
  mean_normalized_entropy: number;
  mean_variance: number;
  variance_bound: number;
}

export interface MeanEntropySummary {
  rows: MeanEntropyRow[];
  fit_alpha?: number;
  fit_beta?: number;
  c_neumann?: number;
}

export interface StarAverageRow {
  edge_count: number;
  n_eigen: number;
  weighted_average_A: number;
  weighted_average_a: number;
  prediction_A: number;
  prediction_a: number;
  c_constant: number;
  ks_distance: number;
  density_curve: { y: number[]; p: number[] };
}

export interface StarAverageSummary {
  rows: StarAverageRow[];
}

export interface LocalizationSummary {
  size: number;
  k1: number;
  prediction: number;
  relative_gap: number;
  mass_on_longest_edge: number;
  longest_edge: number;
  l_max: number;
}
