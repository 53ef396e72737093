/**
 * Render one figure manifest: read the referenced CSV columns, draw an SVG,
 * and emit a sidecar JSON with per-series point counts and data ranges so
 * the output can be asserted without golden images.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join, resolve } from "node:path";
import { extractColumn, loadCsv, Table } from "./csv.js";
import { FigureManifest, ManifestError } from "./manifest.js";
import { renderSvg } from "./svg.js";

export interface SeriesSummary {
  label: string;
  input: string;
  x: string;
  y: string;
  points: number;
  x_min: number;
  x_max: number;
  y_min: number;
  y_max: number;
}

export interface Sidecar {
  figure: string;
  series_count: number;
  series: SeriesSummary[];
  x_range: [number, number];
  y_range: [number, number];
}

export interface RenderResult {
  svgPath: string;
  sidecarPath: string;
  sidecar: Sidecar;
}

export function renderFigure(manifest: FigureManifest, outDir: string,
  baseDir = "."): RenderResult {
  const tables = new Map<number, Table>();
  const summaries: SeriesSummary[] = [];
  const plotted = [];

  for (const spec of manifest.series) {
    const path = resolve(baseDir, manifest.inputs[spec.input]);
    if (!tables.has(spec.input)) {
      tables.set(spec.input, loadCsv(path));
    }
    const table = tables.get(spec.input)!;
    const xs = extractColumn(table, path, spec.x);
    const ys = extractColumn(table, path, spec.y);
    const n = Math.min(xs.length, ys.length);
    if (n === 0) {
      throw new ManifestError(
        `series '${spec.label}' is empty (${spec.x}, ${spec.y} in ${path})`);
    }
    summaries.push({
      label: spec.label,
      input: manifest.inputs[spec.input],
      x: spec.x,
      y: spec.y,
      points: n,
      x_min: Math.min(...xs),
      x_max: Math.max(...xs),
      y_min: Math.min(...ys),
      y_max: Math.max(...ys),
    });
    plotted.push({ label: spec.label, x: xs.slice(0, n), y: ys.slice(0, n) });
  }

  const svg = renderSvg(plotted, {
    title: manifest.title ?? manifest.figure,
    xlabel: manifest.axes?.xlabel,
    ylabel: manifest.axes?.ylabel,
    xlog: manifest.axes?.xlog,
    ylog: manifest.axes?.ylog,
    xlim: manifest.axes?.xlim ?? null,
    ylim: manifest.axes?.ylim ?? null,
  });

  const sidecar: Sidecar = {
    figure: manifest.figure,
    series_count: summaries.length,
    series: summaries,
    x_range: [Math.min(...summaries.map((s) => s.x_min)),
      Math.max(...summaries.map((s) => s.x_max))],
    y_range: [Math.min(...summaries.map((s) => s.y_min)),
      Math.max(...summaries.map((s) => s.y_max))],
  };

  mkdirSync(outDir, { recursive: true });
  const svgPath = join(outDir, `${manifest.figure}.svg`);
  const sidecarPath = join(outDir, `${manifest.figure}.sidecar.json`);
  writeFileSync(svgPath, svg);
  writeFileSync(sidecarPath, JSON.stringify(sidecar, null, 2) + "\n");
  return { svgPath, sidecarPath, sidecar };
}
