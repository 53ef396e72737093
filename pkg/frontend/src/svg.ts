/** Minimal dependency-free SVG line plots (fixed palette, optional log axes). */

export interface PlotSeries {
  label: string;
  x: number[];
  y: number[];
}

export interface PlotOptions {
  title?: string;
  xlabel?: string;
  ylabel?: string;
  xlog?: boolean;
  ylog?: boolean;
  xlim?: [number, number] | null;
  ylim?: [number, number] | null;
  width?: number;
  height?: number;
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"];

const MARGIN = { left: 64, right: 16, top: 34, bottom: 46 };

function niceTicks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const step = [1, 2, 5, 10].map((m) => m * mag)
    .find((s) => span / s <= n) ?? 10 * mag;
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += step) out.push(v);
  return out;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(6)));
}

export function renderSvg(series: PlotSeries[], opts: PlotOptions): string {
  const W = opts.width ?? 640;
  const H = opts.height ?? 420;
  const tx = (v: number) => (opts.xlog ? Math.log10(v) : v);
  const ty = (v: number) => (opts.ylog ? Math.log10(v) : v);

  const pts = series.map((s) => {
    const keep = s.x.map((xv, i) => [xv, s.y[i]] as [number, number])
      .filter(([xv, yv]) => Number.isFinite(xv) && Number.isFinite(yv) &&
        (!opts.xlog || xv > 0) && (!opts.ylog || yv > 0));
    return keep.map(([xv, yv]) => [tx(xv), ty(yv)] as [number, number]);
  });

  const allX = pts.flat().map((p) => p[0]);
  const allY = pts.flat().map((p) => p[1]);
  let x0 = opts.xlim ? tx(opts.xlim[0]) : Math.min(...allX);
  let x1 = opts.xlim ? tx(opts.xlim[1]) : Math.max(...allX);
  let y0 = opts.ylim ? ty(opts.ylim[0]) : Math.min(...allY);
  let y1 = opts.ylim ? ty(opts.ylim[1]) : Math.max(...allY);
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 = y0 + 1;
  }
  if (!opts.ylim) {
    const pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }

  const pw = W - MARGIN.left - MARGIN.right;
  const ph = H - MARGIN.top - MARGIN.bottom;
  const px = (v: number) => MARGIN.left + ((v - x0) / (x1 - x0)) * pw;
  const py = (v: number) => MARGIN.top + (1 - (v - y0) / (y1 - y0)) * ph;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`);
  parts.push(`<rect width="${W}" height="${H}" fill="white"/>`);
  if (opts.title) {
    parts.push(`<text x="${W / 2}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">${escapeXml(opts.title)}</text>`);
  }
  // axes box and ticks
  parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${pw}" height="${ph}" fill="none" stroke="#333"/>`);
  for (const t of niceTicks(x0, x1)) {
    const gx = px(t);
    parts.push(`<line x1="${gx}" y1="${MARGIN.top}" x2="${gx}" y2="${MARGIN.top + ph}" stroke="#ddd"/>`);
    const label = opts.xlog ? `1e${fmt(t)}` : fmt(t);
    parts.push(`<text x="${gx}" y="${MARGIN.top + ph + 16}" text-anchor="middle" font-family="sans-serif" font-size="11">${label}</text>`);
  }
  for (const t of niceTicks(y0, y1)) {
    const gy = py(t);
    parts.push(`<line x1="${MARGIN.left}" y1="${gy}" x2="${MARGIN.left + pw}" y2="${gy}" stroke="#ddd"/>`);
    const label = opts.ylog ? `1e${fmt(t)}` : fmt(t);
    parts.push(`<text x="${MARGIN.left - 6}" y="${gy + 4}" text-anchor="end" font-family="sans-serif" font-size="11">${label}</text>`);
  }
  if (opts.xlabel) {
    parts.push(`<text x="${MARGIN.left + pw / 2}" y="${H - 8}" text-anchor="middle" font-family="sans-serif" font-size="12">${escapeXml(opts.xlabel)}</text>`);
  }
  if (opts.ylabel) {
    parts.push(`<text x="16" y="${MARGIN.top + ph / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 ${MARGIN.top + ph / 2})">${escapeXml(opts.ylabel)}</text>`);
  }
  // series
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const path = pts[i]
      .filter(([xv, yv]) => xv >= x0 && xv <= x1 && yv >= y0 && yv <= y1)
      .map(([xv, yv]) => `${px(xv).toFixed(2)},${py(yv).toFixed(2)}`)
      .join(" ");
    parts.push(`<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.5"/>`);
    const ly = MARGIN.top + 14 + 15 * i;
    parts.push(`<line x1="${W - 150}" y1="${ly - 4}" x2="${W - 130}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${W - 125}" y="${ly}" font-family="sans-serif" font-size="11">${escapeXml(s.label)}</text>`);
  });
  parts.push("</svg>");
  return parts.join("\n");
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
