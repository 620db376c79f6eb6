/** Deterministic SVG line charts: median per scheme, quartile band.
 *
 * Fixed canvas, fixed palette, fixed number formatting — rendering the
 * same series twice must produce identical bytes, because the golden
 * tests compare output files byte for byte.
 */

import type { Series } from "./kinds.js";

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 72, right: 20, top: 44, bottom: 56 };

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/** Coordinates to 2 decimals: stable and sub-pixel enough at this size. */
function px(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

/** Tick labels: plain integers stay plain, everything else trims to <= 6 sig figs. */
function fmt(v: number): string {
  if (Number.isInteger(v) && Math.abs(v) < 1e9) return String(v);
  return String(Number(v.toPrecision(6)));
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

/** Round tick spacing to 1/2/5 x 10^k covering [lo, hi] with ~n steps. */
function ticks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 1;
    return ticks(lo - pad, lo + pad, n);
  }
  const raw = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm <= 1 ? 1 : norm <= 2 ? 2 : norm <= 5 ? 5 : 10) * mag;
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    // snap away accumulated float drift so labels stay clean
    out.push(Number(t.toPrecision(12)));
  }
  return out;
}

interface Extent {
  lo: number;
  hi: number;
}

function padExtent(e: Extent, frac: number): Extent {
  if (e.hi > e.lo) {
    const pad = (e.hi - e.lo) * frac;
    return { lo: e.lo - pad, hi: e.hi + pad };
  }
  // single value: open a symmetric window so the point sits mid-chart
  const pad = Math.abs(e.lo) > 0 ? Math.abs(e.lo) * 0.25 : 1;
  return { lo: e.lo - pad, hi: e.hi + pad };
}

export function renderChart(series: Series[], options: ChartOptions): string {
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => s.points.flatMap((p) => [p.q1, p.med, p.q3]));
  const xe = padExtent({ lo: Math.min(...xs), hi: Math.max(...xs) }, 0.04);
  const ye = padExtent({ lo: Math.min(...ys, 0), hi: Math.max(...ys) }, 0.06);

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => MARGIN.left + ((x - xe.lo) / (xe.hi - xe.lo)) * plotW;
  const sy = (y: number) => MARGIN.top + plotH - ((y - ye.lo) / (ye.hi - ye.lo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  parts.push(
    `<text x="${px(WIDTH / 2)}" y="24" text-anchor="middle" font-size="16" fill="#111111">${esc(options.title)}</text>`,
  );

  // gridlines and axes
  for (const t of ticks(ye.lo, ye.hi)) {
    const y = sy(t);
    parts.push(
      `<line x1="${px(MARGIN.left)}" y1="${px(y)}" x2="${px(WIDTH - MARGIN.right)}" y2="${px(y)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px(MARGIN.left - 8)}" y="${px(y + 4)}" text-anchor="end" font-size="11" fill="#444444">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(xe.lo, xe.hi)) {
    const x = sx(t);
    parts.push(
      `<line x1="${px(x)}" y1="${px(HEIGHT - MARGIN.bottom)}" x2="${px(x)}" y2="${px(HEIGHT - MARGIN.bottom + 5)}" stroke="#444444" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px(x)}" y="${px(HEIGHT - MARGIN.bottom + 18)}" text-anchor="middle" font-size="11" fill="#444444">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<line x1="${px(MARGIN.left)}" y1="${px(MARGIN.top)}" x2="${px(MARGIN.left)}" y2="${px(HEIGHT - MARGIN.bottom)}" stroke="#444444" stroke-width="1"/>`,
  );
  parts.push(
    `<line x1="${px(MARGIN.left)}" y1="${px(HEIGHT - MARGIN.bottom)}" x2="${px(WIDTH - MARGIN.right)}" y2="${px(HEIGHT - MARGIN.bottom)}" stroke="#444444" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${px(MARGIN.left + plotW / 2)}" y="${px(HEIGHT - 14)}" text-anchor="middle" font-size="13" fill="#111111">${esc(options.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${px(MARGIN.top + plotH / 2)}" text-anchor="middle" font-size="13" fill="#111111" transform="rotate(-90 18 ${px(MARGIN.top + plotH / 2)})">${esc(options.yLabel)}</text>`,
  );

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length] as string;
    if (s.points.length > 1) {
      const upper = s.points.map((p) => `${px(sx(p.x))},${px(sy(p.q3))}`);
      const lower = [...s.points].reverse().map((p) => `${px(sx(p.x))},${px(sy(p.q1))}`);
      parts.push(
        `<path d="M ${upper.join(" L ")} L ${lower.join(" L ")} Z" fill="${color}" fill-opacity="0.15" stroke="none"/>`,
      );
      const line = s.points.map((p) => `${px(sx(p.x))},${px(sy(p.med))}`).join(" ");
      parts.push(
        `<polyline points="${line}" fill="none" stroke="${color}" stroke-width="2"/>`,
      );
    } else {
      // a single sweep value still gets a visible quartile whisker
      const p = s.points[0];
      if (p !== undefined && p.q3 > p.q1) {
        parts.push(
          `<line x1="${px(sx(p.x))}" y1="${px(sy(p.q1))}" x2="${px(sx(p.x))}" y2="${px(sy(p.q3))}" stroke="${color}" stroke-width="2" stroke-opacity="0.4"/>`,
        );
      }
    }
    for (const p of s.points) {
      parts.push(
        `<circle cx="${px(sx(p.x))}" cy="${px(sy(p.med))}" r="3" fill="${color}"/>`,
      );
    }
  });

  // legend, top-right inside the plot area
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length] as string;
    const y = MARGIN.top + 14 + i * 18;
    const x = WIDTH - MARGIN.right - 150;
    parts.push(
      `<line x1="${px(x)}" y1="${px(y - 4)}" x2="${px(x + 22)}" y2="${px(y - 4)}" stroke="${color}" stroke-width="2"/>`,
    );
    parts.push(
      `<text x="${px(x + 28)}" y="${px(y)}" font-size="12" fill="#111111">${esc(s.scheme)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
