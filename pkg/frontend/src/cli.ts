/**
 * Figure renderer CLI.
 *
 * Usage:
 *   node dist/cli.js --kind entropy-scatter --input run-entropy.csv \
 *       [--summary run-entropy.json] --output figure.svg
 *
 * Kinds: entropy-scatter, mean-entropy-vs-size, localized-state,
 * sec2-histogram.  Exit codes: 0 ok, 2 usage, 3 schema/render failure.
 */

import { writeFileSync } from "fs";
import { FigureKind, render } from "./figures.js";
import { SchemaError } from "./schema.js";

const KINDS: FigureKind[] = [
  "entropy-scatter", "mean-entropy-vs-size", "localized-state", "sec2-histogram",
];

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(`malformed arguments near "${flag}"`);
    }
    out.set(flag.slice(2), value);
  }
  return out;
}

export function main(argv: string[]): number {
  let args: Map<string, string>;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err));
    return 2;
  }
  const kind = args.get("kind") as FigureKind | undefined;
  const input = args.get("input");
  const output = args.get("output");
  if (!kind || !KINDS.includes(kind) || !input || !output) {
    console.error(
      `usage: --kind <${KINDS.join("|")}> --input <file> [--summary <file>] ` +
      "--output <file.svg>");
    return 2;
  }
  try {
    const svg = render({ kind, input, summary: args.get("summary") });
    writeFileSync(output, svg);
    console.log(`wrote ${output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error(`render failed: ${err}`);
    }
    return 3;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
