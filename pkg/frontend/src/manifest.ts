/**
 * Figure manifests: which CSV inputs to read, which column pairs to plot,
 * and how to scale the axes.  Validation is strict so a stale manifest
 * fails loudly instead of rendering an empty figure.
 */

export interface SeriesSpec {
  /** index into the manifest's `inputs` list */
  input: number;
  x: string;
  y: string;
  label: string;
}

export interface AxesSpec {
  xlim?: [number, number] | null;
  ylim?: [number, number] | null;
  xlog?: boolean;
  ylog?: boolean;
  xlabel?: string;
  ylabel?: string;
}

export interface FigureManifest {
  figure: string;
  inputs: string[];
  series: SeriesSpec[];
  axes?: AxesSpec;
  title?: string;
}

export class ManifestError extends Error {}

function isPair(v: unknown): v is [number, number] {
  return Array.isArray(v) && v.length === 2 &&
    v.every((x) => typeof x === "number" && Number.isFinite(x));
}

export function parseManifest(raw: unknown): FigureManifest {
  if (typeof raw !== "object" || raw === null) {
    throw new ManifestError("manifest must be a JSON object");
  }
  const m = raw as Record<string, unknown>;
  if (typeof m.figure !== "string" || m.figure.length === 0) {
    throw new ManifestError("manifest.figure must be a nonempty string");
  }
  if (!Array.isArray(m.inputs) || m.inputs.some((p) => typeof p !== "string")) {
    throw new ManifestError("manifest.inputs must be a list of file paths");
  }
  if (!Array.isArray(m.series) || m.series.length === 0) {
    throw new ManifestError("manifest.series must be a nonempty list");
  }
  const inputs = m.inputs as string[];
  const series = (m.series as unknown[]).map((s, i) => {
    const o = s as Record<string, unknown>;
    if (typeof o.input !== "number" || o.input < 0 || o.input >= inputs.length) {
      throw new ManifestError(`series[${i}].input is not a valid input index`);
    }
    for (const key of ["x", "y", "label"]) {
      if (typeof o[key] !== "string") {
        throw new ManifestError(`series[${i}].${key} must be a string`);
      }
    }
    return {
      input: o.input,
      x: o.x as string,
      y: o.y as string,
      label: o.label as string,
    };
  });
  const axes: AxesSpec = {};
  if (m.axes !== undefined) {
    const a = m.axes as Record<string, unknown>;
    if (a.xlim != null) {
      if (!isPair(a.xlim)) throw new ManifestError("axes.xlim must be [lo, hi]");
      axes.xlim = a.xlim;
    }
    if (a.ylim != null) {
      if (!isPair(a.ylim)) throw new ManifestError("axes.ylim must be [lo, hi]");
      axes.ylim = a.ylim;
    }
    axes.xlog = Boolean(a.xlog);
    axes.ylog = Boolean(a.ylog);
    if (typeof a.xlabel === "string") axes.xlabel = a.xlabel;
    if (typeof a.ylabel === "string") axes.ylabel = a.ylabel;
  }
  return {
    figure: m.figure,
    inputs,
    series,
    axes,
    title: typeof m.title === "string" ? m.title : undefined,
  };
}
