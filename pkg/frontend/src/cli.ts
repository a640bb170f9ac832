/**
 * render CLI:
 *   node dist/cli.js render <data.csv> --kind ratio-curves --out figure.svg
 *   node dist/cli.js render --spec plot.json
 *
 * A spec file is JSON: {"input": "...", "kind": "...", "out": "...",
 * "title": "..."}.  Both SVG and PNG siblings of --out are written.
 */

import * as fs from "node:fs";

import { CsvError } from "./csv";
import { FigureKind, PlotSpec, render } from "./render";

const KINDS: FigureKind[] = ["ratio-curves", "brightness-curves", "heatmap"];

function usage(): never {
  process.stderr.write(
    "usage: render <data.csv> --kind <ratio-curves|brightness-curves|heatmap> " +
      "--out <figure.svg> [--title <text>]\n" +
      "       render --spec <plot.json>\n"
  );
  process.exit(2);
}

function parseArgs(argv: string[]): PlotSpec {
  if (argv[0] === "render") argv = argv.slice(1);
  const positional: string[] = [];
  const options = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 1) {
    if (argv[i].startsWith("--")) {
      const key = argv[i].slice(2);
      const value = argv[i + 1];
      if (value === undefined) usage();
      options.set(key, value);
      i += 1;
    } else {
      positional.push(argv[i]);
    }
  }
  if (options.has("spec")) {
    const raw = JSON.parse(fs.readFileSync(options.get("spec")!, "utf-8"));
    if (!raw.input || !raw.kind || !raw.out) {
      throw new CsvError("spec file needs input, kind and out fields");
    }
    return raw as PlotSpec;
  }
  if (positional.length !== 1 || !options.has("kind") || !options.has("out")) {
    usage();
  }
  const kind = options.get("kind") as FigureKind;
  if (!KINDS.includes(kind)) {
    process.stderr.write(`unknown kind ${kind}; expected ${KINDS.join("|")}\n`);
    process.exit(2);
  }
  return {
    input: positional[0],
    kind,
    out: options.get("out")!,
    title: options.get("title"),
  };
}

export function main(argv: string[]): number {
  if (argv.length === 0) usage();
  try {
    const result = render(parseArgs(argv));
    process.stdout.write(`${result.svgPath}\n${result.pngPath}\n`);
    return 0;
  } catch (error) {
    if (error instanceof CsvError) {
      process.stderr.write(`${error.message}\n`);
      return 1;
    }
    throw error;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
