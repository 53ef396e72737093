/** `render --manifest <file> --out <dir>`: regenerate one figure. */

import { readFileSync } from "node:fs";
import { dirname } from "node:path";
import { parseArgs } from "node:util";
import { parseManifest, ManifestError } from "./manifest.js";
import { renderFigure } from "./render.js";

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        manifest: { type: "string" },
        out: { type: "string" },
        "base-dir": { type: "string" },
      },
      allowPositionals: true,
    });
  } catch (e) {
    console.error(String(e));
    return 2;
  }
  const positionals = args.positionals;
  if (positionals[0] !== "render" || !args.values.manifest || !args.values.out) {
    console.error("usage: render --manifest <file> --out <dir> [--base-dir <dir>]");
    return 2;
  }
  try {
    const raw = JSON.parse(readFileSync(args.values.manifest, "utf8"));
    const manifest = parseManifest(raw);
    const base = args.values["base-dir"] ?? dirname(args.values.manifest);
    const result = renderFigure(manifest, args.values.out, base);
    console.error(`wrote ${result.svgPath} (${result.sidecar.series_count} series)`);
    return 0;
  } catch (e) {
    if (e instanceof ManifestError || (e as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${(e as Error).message}`);
      return 2;
    }
    throw e;
  }
}

process.exitCode = main(process.argv.slice(2));
