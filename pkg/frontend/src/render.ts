/**
 * Deterministic SVG line charts for sweep results.
 *
 * One series per (scheme, environment), sorted lexicographically; colors walk
 * the hue circle by the golden angle starting at an offset derived from the
 * spec's style_seed, and marker shapes cycle per scheme. Output depends only
 * on the CSV content and the spec (no clock, no randomness), so renders are
 * byte-stable.
 */

import { ResultRow } from "./csv.js";
import { PlotSpec } from "./spec.js";

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { top: 42, right: 24, bottom: 52, left: 64 };

const MARKERS = ["circle", "square", "diamond", "triangle", "cross"] as const;

interface Series {
  key: string;
  scheme: string;
  environment: string;
  points: { x: number; y: number; err: number }[];
}

function fmt(x: number): string {
  if (!isFinite(x)) return "0";
  const s = x.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function groupSeries(rows: ResultRow[]): Series[] {
  const map = new Map<string, Series>();
  for (const row of rows) {
    const key = `${row.scheme} | ${row.environment}`;
    if (!map.has(key)) {
      map.set(key, { key, scheme: row.scheme, environment: row.environment, points: [] });
    }
    map.get(key)!.points.push({ x: row.axis, y: row.sumSe, err: row.seStderr });
  }
  const series = [...map.values()].sort((a, b) => a.key.localeCompare(b.key));
  for (const s of series) {
    s.points.sort((a, b) => a.x - b.x);
  }
  return series;
}

export function seriesColor(index: number, styleSeed: number): string {
  const offset = ((styleSeed * 137.50776405) % 360 + 360) % 360;
  const hue = (offset + index * 137.50776405) % 360;
  const h = hue / 60;
  const c = 0.62;
  const xc = c * (1 - Math.abs((h % 2) - 1));
  const sector = Math.floor(h) % 6;
  const rgb = [
    [c, xc, 0], [xc, c, 0], [0, c, xc], [0, xc, c], [xc, 0, c], [c, 0, xc],
  ][sector];
  const lift = 0.22;
  const toHex = (v: number) => Math.round((v + lift) * 255).toString(16).padStart(2, "0");
  return `#${toHex(rgb[0])}${toHex(rgb[1])}${toHex(rgb[2])}`;
}

function ticks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => span / s <= count) ?? 10 * mag;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) out.push(Number(v.toPrecision(12)));
  return out;
}

function marker(shape: (typeof MARKERS)[number], cx: number, cy: number, color: string): string {
  const r = 3.6;
  switch (shape) {
    case "circle":
      return `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${color}"/>`;
    case "square":
      return `<rect x="${fmt(cx - r)}" y="${fmt(cy - r)}" width="${2 * r}" height="${2 * r}" fill="${color}"/>`;
    case "diamond":
      return `<path d="M ${fmt(cx)} ${fmt(cy - r * 1.2)} L ${fmt(cx + r * 1.2)} ${fmt(cy)} L ${fmt(cx)} ${fmt(cy + r * 1.2)} L ${fmt(cx - r * 1.2)} ${fmt(cy)} Z" fill="${color}"/>`;
    case "triangle":
      return `<path d="M ${fmt(cx)} ${fmt(cy - r * 1.25)} L ${fmt(cx + r * 1.15)} ${fmt(cy + r)} L ${fmt(cx - r * 1.15)} ${fmt(cy + r)} Z" fill="${color}"/>`;
    case "cross":
      return `<path d="M ${fmt(cx - r)} ${fmt(cy - r)} L ${fmt(cx + r)} ${fmt(cy + r)} M ${fmt(cx - r)} ${fmt(cy + r)} L ${fmt(cx + r)} ${fmt(cy - r)}" stroke="${color}" stroke-width="1.8" fill="none"/>`;
  }
}

export function renderChart(rows: ResultRow[], spec: PlotSpec): string {
  const logX = spec.x_scale === "log10";
  const series = groupSeries(rows);
  const xs = series.flatMap((s) => s.points.map((p) => (logX ? Math.log10(p.x) : p.x)));
  const ys = series.flatMap((s) => s.points.flatMap((p) => [p.y - p.err, p.y + p.err]));

  const xLo = xs.length ? Math.min(...xs) : 0;
  const xHi = xs.length ? Math.max(...xs) : 1;
  const yLo = 0;
  const yHi = ys.length ? Math.max(...ys, 1e-12) * 1.06 : 1;
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => {
    const v = logX ? Math.log10(x) : x;
    return xHi > xLo ? MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW : MARGIN.left + plotW / 2;
  };
  const sy = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  if (spec.title) {
    parts.push(
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15" fill="#222">${escapeXml(spec.title)}</text>`,
    );
  }

  // frame + grid + tick labels
  const xTicks = xs.length ? ticks(xLo, xHi) : [];
  const yTicks = ticks(yLo, yHi);
  for (const t of yTicks) {
    const y = sy(t);
    parts.push(`<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${WIDTH - MARGIN.right}" y2="${fmt(y)}" stroke="#ddd" stroke-width="1"/>`);
    parts.push(`<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end" font-size="11" fill="#444">${Number(t.toPrecision(6))}</text>`);
  }
  for (const t of xTicks) {
    const xv = logX ? Math.pow(10, t) : t;
    const x = sx(xv);
    parts.push(`<line x1="${fmt(x)}" y1="${MARGIN.top}" x2="${fmt(x)}" y2="${HEIGHT - MARGIN.bottom}" stroke="#eee" stroke-width="1"/>`);
    const label = logX ? `1e${Number(t.toPrecision(6))}` : `${Number(t.toPrecision(6))}`;
    parts.push(`<text x="${fmt(x)}" y="${HEIGHT - MARGIN.bottom + 18}" text-anchor="middle" font-size="11" fill="#444">${label}</text>`);
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13" fill="#222">${escapeXml(spec.x_label)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" fill="#222" transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${escapeXml(spec.y_label)}</text>`,
  );

  const schemes = [...new Set(series.map((s) => s.scheme))].sort();
  series.forEach((s, i) => {
    const color = seriesColor(i, spec.style_seed);
    const shape = MARKERS[schemes.indexOf(s.scheme) % MARKERS.length];
    const path = s.points
      .map((p, j) => `${j === 0 ? "M" : "L"} ${fmt(sx(p.x))} ${fmt(sy(p.y))}`)
      .join(" ");
    if (s.points.length > 1) {
      parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    }
    for (const p of s.points) {
      if (p.err > 0) {
        const x = sx(p.x);
        parts.push(
          `<line x1="${fmt(x)}" y1="${fmt(sy(p.y - p.err))}" x2="${fmt(x)}" y2="${fmt(sy(p.y + p.err))}" stroke="${color}" stroke-width="1.2"/>`,
          `<line x1="${fmt(x - 3)}" y1="${fmt(sy(p.y - p.err))}" x2="${fmt(x + 3)}" y2="${fmt(sy(p.y - p.err))}" stroke="${color}" stroke-width="1.2"/>`,
          `<line x1="${fmt(x - 3)}" y1="${fmt(sy(p.y + p.err))}" x2="${fmt(x + 3)}" y2="${fmt(sy(p.y + p.err))}" stroke="${color}" stroke-width="1.2"/>`,
        );
      }
      parts.push(marker(shape, sx(p.x), sy(p.y), color));
    }
  });

  // legend
  series.forEach((s, i) => {
    const color = seriesColor(i, spec.style_seed);
    const shape = MARKERS[schemes.indexOf(s.scheme) % MARKERS.length];
    const y = MARGIN.top + 10 + i * 16;
    const x = MARGIN.left + 10;
    parts.push(`<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${color}" stroke-width="1.8"/>`);
    parts.push(marker(shape, x + 11, y, color));
    parts.push(`<text x="${x + 28}" y="${y + 4}" font-size="11" fill="#222">${escapeXml(s.key)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
