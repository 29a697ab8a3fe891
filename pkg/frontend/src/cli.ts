#!/usr/bin/env node
/** figkit <fig1|fig2|fig3|fig4> --in <dir> --out <file.svg> [--k2 <angle>] */

import { writeFileSync } from "node:fs";
import { SchemaError } from "./csv.js";
import { FIGURES, FigureOptions } from "./figures.js";

function parseAngle(text: string): number {
  const match = /^([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)(pi|rad)$/.exec(text.trim());
  if (!match) throw new SchemaError("--k2", `cannot parse angle '${text}' (use e.g. 1.5pi or 4.7rad)`);
  const value = Number(match[1]);
  return match[2] === "pi" ? value * Math.PI : value;
}

export function main(argv: string[]): number {
  const [figure, ...rest] = argv;
  if (!figure || !(figure in FIGURES)) {
    process.stderr.write(`figkit: unknown figure '${figure ?? ""}' (expected fig1|fig2|fig3|fig4)\n`);
    return 2;
  }
  let inputDir = "";
  let outPath = "";
  let k2: number | undefined;
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) {
      process.stderr.write(`figkit: missing value for ${flag}\n`);
      return 2;
    }
    if (flag === "--in") inputDir = value;
    else if (flag === "--out") outPath = value;
    else if (flag === "--k2") {
      try {
        k2 = parseAngle(value);
      } catch (err) {
        process.stderr.write(`figkit: ${(err as Error).message}\n`);
        return 2;
      }
    } else {
      process.stderr.write(`figkit: unknown flag ${flag}\n`);
      return 2;
    }
  }
  if (!inputDir || !outPath) {
    process.stderr.write("figkit: --in <dir> and --out <file.svg> are required\n");
    return 2;
  }
  const options: FigureOptions = { inputDir, k2 };
  try {
    const svg = FIGURES[figure](options);
    writeFileSync(outPath, svg, "utf8");
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`figkit: schema error: ${err.message}\n`);
      return 1;
    }
    process.stderr.write(`figkit: ${(err as Error).message}\n`);
    return 1;
  }
  return 0;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
