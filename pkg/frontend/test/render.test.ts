import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { parseManifest, ManifestError } from "../src/manifest.js";
import { renderFigure } from "../src/render.js";

function tempDir(): string {
  return mkdtempSync(join(tmpdir(), "figtest-"));
}

function writeHistoryCsv(dir: string): string {
  const lines = ["tau,t,c_l,c_omega,gamma,residual,max_abs_omega,x_m,halfwidth"];
  for (let i = 1; i <= 50; i++) {
    const tau = 0.1 * i;
    lines.push([tau, 1 - Math.exp(-tau), 2.0, -1.0, 2.0, 1e-5 / i,
      Math.exp(0.5 * tau), 1.0, Math.exp(-0.4 * tau)].join(","));
  }
  const p = join(dir, "history.csv");
  writeFileSync(p, lines.join("\n") + "\n");
  return p;
}

function writeSnapshotCsv(dir: string, name: string, scale: number): string {
  const lines = ["X,Omega,HOmega,U"];
  for (let i = 0; i <= 100; i++) {
    const x = 0.05 * i;
    lines.push([x, -scale * x / (1 + x * x), scale / (1 + x * x),
      0.5 * scale * Math.log(1 + x * x)].join(","));
  }
  const p = join(dir, name);
  writeFileSync(p, lines.join("\n") + "\n");
  return p;
}

describe("manifest parsing", () => {
  it("rejects malformed manifests", () => {
    expect(() => parseManifest(null)).toThrow(ManifestError);
    expect(() => parseManifest({ figure: "f", inputs: [], series: [] }))
      .toThrow(ManifestError);
    expect(() => parseManifest({
      figure: "f", inputs: ["a.csv"],
      series: [{ input: 3, x: "X", y: "Y", label: "s" }],
    })).toThrow(/input index/);
  });

  it("accepts a well-formed manifest", () => {
    const m = parseManifest({
      figure: "fig", inputs: ["a.csv"],
      series: [{ input: 0, x: "X", y: "Omega", label: "s" }],
      axes: { xlog: true, xlim: [0.1, 10] },
    });
    expect(m.series).toHaveLength(1);
    expect(m.axes?.xlog).toBe(true);
  });
});

describe("renderFigure", () => {
  it("writes an svg and a sidecar with exact counts and ranges", () => {
    const dir = tempDir();
    writeSnapshotCsv(dir, "snap1.csv", 1.0);
    writeSnapshotCsv(dir, "snap2.csv", 2.0);
    const manifest = parseManifest({
      figure: "profile-evolution",
      inputs: ["snap1.csv", "snap2.csv"],
      series: [
        { input: 0, x: "X", y: "Omega", label: "early" },
        { input: 1, x: "X", y: "Omega", label: "late" },
      ],
    });
    const out = join(dir, "figs");
    const res = renderFigure(manifest, out, dir);
    expect(res.sidecar.series_count).toBe(2);
    expect(res.sidecar.series[0].points).toBe(101);
    expect(res.sidecar.series[0].x_min).toBe(0);
    expect(res.sidecar.series[0].x_max).toBe(5);
    // Omega = -2x/(1+x^2) has minimum -1 at x = 1
    expect(res.sidecar.series[1].y_min).toBeCloseTo(-1.0, 12);
    const svg = readFileSync(res.svgPath, "utf8");
    expect(svg).toContain("<svg");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2);
    const sidecar = JSON.parse(readFileSync(res.sidecarPath, "utf8"));
    expect(sidecar.x_range).toEqual([0, 5]);
  });

  it("renders scaling-factor traces from a history file", () => {
    const dir = tempDir();
    writeHistoryCsv(dir);
    const manifest = parseManifest({
      figure: "scaling-factors",
      inputs: ["history.csv"],
      series: [
        { input: 0, x: "tau", y: "c_l", label: "c_l" },
        { input: 0, x: "tau", y: "c_omega", label: "c_w" },
        { input: 0, x: "tau", y: "gamma", label: "gamma" },
      ],
    });
    const res = renderFigure(manifest, join(dir, "figs"), dir);
    expect(res.sidecar.series_count).toBe(3);
    expect(res.sidecar.x_range[0]).toBeCloseTo(0.1, 12);
    expect(res.sidecar.x_range[1]).toBeCloseTo(5.0, 12);
    expect(res.sidecar.series[2].y_min).toBe(2.0);
  });

  it("fails on a missing column", () => {
    const dir = tempDir();
    writeSnapshotCsv(dir, "snap.csv", 1.0);
    const manifest = parseManifest({
      figure: "bad",
      inputs: ["snap.csv"],
      series: [{ input: 0, x: "X", y: "NotThere", label: "s" }],
    });
    expect(() => renderFigure(manifest, join(dir, "figs"), dir))
      .toThrow(/column 'NotThere'/);
  });

  it("fails on an empty series", () => {
    const dir = tempDir();
    writeFileSync(join(dir, "empty.csv"), "X,Omega\n");
    const manifest = parseManifest({
      figure: "empty",
      inputs: ["empty.csv"],
      series: [{ input: 0, x: "X", y: "Omega", label: "s" }],
    });
    expect(() => renderFigure(manifest, join(dir, "figs"), dir))
      .toThrow(/empty/);
  });
});
