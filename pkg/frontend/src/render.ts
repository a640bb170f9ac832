/**
 * Figure rendering from spdcfocus CSV tables.
 *
 * The renderer never recomputes physics: it draws exactly what the CSV
 * contains.  Three kinds are supported:
 *
 * - "ratio-curves":      optimal waist ratio r* against the sweep axis, one
 *                        curve per (model, L, w), with dashed guide lines at
 *                        r = 1/2 and r = 1/sqrt(2);
 * - "brightness-curves": normalized brightness against the sweep axis;
 * - "heatmap":           the transverse-integrand map with dashed expansion
 *                        center markers and dotted collection markers.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { Resvg } from "@resvg/resvg-js";

import { CsvError, numbers, readTable, requireColumns, strings, Table } from "./csv";
import {
  Canvas,
  HEIGHT,
  MARGIN,
  PALETTE,
  WIDTH,
  colormap,
  drawAxes,
  fmt,
  linearScale,
} from "./svg";

export type FigureKind = "ratio-curves" | "brightness-curves" | "heatmap";

export interface PlotSpec {
  input: string;
  kind: FigureKind;
  /** output path; .svg and .png siblings are both written */
  out: string;
  title?: string;
}

const GUIDE_RATIOS = [0.5, 0.7071067811865475];

const SWEEP_COLUMNS = ["model", "axis", "axis_value", "alpha_rad", "w_um", "L_um",
  "r_star", "R_star", "R_star_norm", "status"];
const MAP_COLUMNS = ["row_type", "k_ix_radum", "k_sx_radum", "value"];

interface Series {
  label: string;
  points: Array<[number, number]>;
}

function collectSeries(table: Table, yColumn: string): { series: Series[]; axis: string } {
  const axisNames = new Set(strings(table, "axis"));
  if (axisNames.size !== 1) {
    throw new CsvError(`${table.path}: mixed sweep axes ${[...axisNames].join(",")}`);
  }
  const axis = [...axisNames][0];
  const xs = numbers(table, "axis_value");
  const ys = numbers(table, yColumn);
  const status = strings(table, "status");
  const models = strings(table, "model");
  const lengths = strings(table, "L_um");
  const waists = strings(table, "w_um");
  const manyModels = new Set(models).size > 1;
  const manyLengths = new Set(lengths).size > 1;

  const byKey = new Map<string, Series>();
  for (let i = 0; i < xs.length; i += 1) {
    if (status[i] !== "ok" || !Number.isFinite(ys[i])) continue;
    const parts = [];
    if (manyModels) parts.push(models[i]);
    if (manyLengths) parts.push(`L=${lengths[i]} um`);
    if (axis !== "w") parts.push(`w=${waists[i]} um`);
    const label = parts.join(", ") || "sweep";
    if (!byKey.has(label)) byKey.set(label, { label, points: [] });
    byKey.get(label)!.points.push([xs[i], ys[i]]);
  }
  const series = [...byKey.values()];
  for (const s of series) s.points.sort((a, b) => a[0] - b[0]);
  if (series.length === 0) {
    throw new CsvError(`${table.path}: no usable rows (all failed or NaN)`);
  }
  return { series, axis };
}

function axisLabel(axis: string): string {
  if (axis === "alpha") return "collection angle alpha [rad]";
  if (axis === "w") return "photon waist w [um]";
  if (axis === "r") return "waist ratio r";
  return axis;
}

function renderCurves(table: Table, yColumn: string, yLabel: string,
                      withGuides: boolean, title: string): string {
  requireColumns(table, SWEEP_COLUMNS);
  const { series, axis } = collectSeries(table, yColumn);
  const allX = series.flatMap((s) => s.points.map((p) => p[0]));
  const allY = series.flatMap((s) => s.points.map((p) => p[1]));
  const xLo = Math.min(...allX);
  const xHi = Math.max(...allX);
  let yLo = Math.min(...allY, withGuides ? 0.45 : Infinity);
  let yHi = Math.max(...allY, withGuides ? 0.75 : -Infinity);
  const pad = 0.06 * (yHi - yLo || 1);
  yLo -= pad;
  yHi += pad;

  const x = linearScale([xLo, xHi], [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale([yLo, yHi], [HEIGHT - MARGIN.bottom, MARGIN.top]);
  const canvas = new Canvas();
  drawAxes(canvas, x, y, axisLabel(axis), yLabel);
  canvas.text(MARGIN.left + 8, MARGIN.top - 16, title, 'font-size="15"');

  if (withGuides) {
    for (const guide of GUIDE_RATIOS) {
      canvas.add(
        `<line class="guide" data-value="${fmt(guide)}" x1="${fmt(MARGIN.left)}" ` +
          `y1="${fmt(y(guide))}" x2="${fmt(WIDTH - MARGIN.right)}" y2="${fmt(y(guide))}" ` +
          `stroke="#777" stroke-width="1" stroke-dasharray="6,4"/>`
      );
      canvas.text(WIDTH - MARGIN.right + 6, y(guide) + 4, fmt(guide));
    }
  }
  series.forEach((s, index) => {
    const color = PALETTE[index % PALETTE.length];
    canvas.polyline(
      s.points.map(([px, py]) => [x(px), y(py)] as [number, number]),
      `class="series" stroke="${color}" stroke-width="2"`
    );
    const ly = MARGIN.top + 18 * index + 30;
    canvas.line(WIDTH - MARGIN.right + 6, ly - 4, WIDTH - MARGIN.right + 28, ly - 4,
      `stroke="${color}" stroke-width="2"`);
    canvas.text(WIDTH - MARGIN.right + 32, ly, s.label);
  });
  return canvas.toString();
}

function renderHeatmap(table: Table, title: string): string {
  requireColumns(table, MAP_COLUMNS);
  const kinds = strings(table, "row_type");
  const kix = numbers(table, "k_ix_radum");
  const ksx = numbers(table, "k_sx_radum");
  const raw = strings(table, "value");

  const xsSet = new Set<number>();
  const ysSet = new Set<number>();
  const cells: Array<[number, number, number]> = [];
  let kbar: [number, number] | null = null;
  let k0: [number, number] | null = null;
  for (let i = 0; i < kinds.length; i += 1) {
    if (kinds[i] === "cell") {
      const value = Number(raw[i]);
      xsSet.add(kix[i]);
      ysSet.add(ksx[i]);
      cells.push([kix[i], ksx[i], value]);
    } else if (kinds[i] === "kbar") {
      kbar = [kix[i], ksx[i]];
    } else if (kinds[i] === "k0") {
      k0 = [kix[i], ksx[i]];
    }
  }
  if (cells.length === 0) {
    throw new CsvError(`${table.path}: heatmap has no cell rows`);
  }
  const xs = [...xsSet].sort((a, b) => a - b);
  const ys = [...ysSet].sort((a, b) => a - b);
  const x = linearScale([xs[0], xs[xs.length - 1]], [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale([ys[0], ys[ys.length - 1]], [HEIGHT - MARGIN.bottom, MARGIN.top]);
  const cellW = (WIDTH - MARGIN.right - MARGIN.left) / Math.max(1, xs.length - 1);
  const cellH = (HEIGHT - MARGIN.bottom - MARGIN.top) / Math.max(1, ys.length - 1);

  const canvas = new Canvas();
  for (const [cx, cy, value] of cells) {
    canvas.rect(
      x(cx) - cellW / 2, y(cy) - cellH / 2, cellW, cellH,
      `fill="${colormap(value)}" stroke="none"`
    );
  }
  drawAxes(canvas, x, y, "k_ix [rad/um]", "k_sx [rad/um]");
  canvas.text(MARGIN.left + 8, MARGIN.top - 16, title, 'font-size="15"');

  const marker = (
    point: [number, number], cls: string, dash: string, color: string, label: string
  ) => {
    canvas.add(
      `<line class="${cls}" data-axis="k_ix" x1="${fmt(x(point[0]))}" y1="${fmt(
        HEIGHT - MARGIN.bottom
      )}" x2="${fmt(x(point[0]))}" y2="${fmt(MARGIN.top)}" stroke="${color}" ` +
        `stroke-width="1.5" stroke-dasharray="${dash}"/>`
    );
    canvas.add(
      `<line class="${cls}" data-axis="k_sx" x1="${fmt(MARGIN.left)}" y1="${fmt(
        y(point[1])
      )}" x2="${fmt(WIDTH - MARGIN.right)}" y2="${fmt(y(point[1]))}" stroke="${color}" ` +
        `stroke-width="1.5" stroke-dasharray="${dash}"/>`
    );
    canvas.text(x(point[0]) + 4, MARGIN.top + 14, label, `fill="${color}"`);
  };
  if (kbar) marker(kbar, "marker-kbar", "7,4", "#ffffff", "expansion center");
  if (k0) marker(k0, "marker-k0", "2,4", "#ffb000", "collection");
  return canvas.toString();
}

export function renderToString(spec: PlotSpec): string {
  const table = readTable(spec.input);
  const title = spec.title ?? path.basename(spec.input);
  switch (spec.kind) {
    case "ratio-curves":
      return renderCurves(table, "r_star", "optimal ratio r*", true, title);
    case "brightness-curves":
      return renderCurves(table, "R_star_norm", "R / R_max", false, title);
    case "heatmap":
      return renderHeatmap(table, title);
    default:
      throw new CsvError(`unknown figure kind ${String(spec.kind)}`);
  }
}

export interface RenderResult {
  svgPath: string;
  pngPath: string;
}

export function render(spec: PlotSpec): RenderResult {
  const svg = renderToString(spec);
  const base = spec.out.replace(/\.(svg|png)$/i, "");
  const svgPath = `${base}.svg`;
  const pngPath = `${base}.png`;
  fs.writeFileSync(svgPath, svg, "utf-8");
  const png = new Resvg(svg, { fitTo: { mode: "original" } }).render().asPng();
  fs.writeFileSync(pngPath, png);
  return { svgPath, pngPath };
}
