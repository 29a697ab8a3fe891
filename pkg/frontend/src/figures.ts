/** Figure assembly from rotorlab CSV artifacts. Rendering never recomputes physics. */

import { existsSync, readFileSync } from "node:fs";
import { join } from "node:path";

import { numbers, readCsv, requireColumns, strings, SchemaError, Table } from "./csv.js";
import { BC_STYLE, Box, extent, pad, Scale, SvgDoc } from "./svg.js";

const PI = Math.PI;

export interface FigureOptions {
  inputDir: string;
  /** cross-section kick strength for fig2 (radians); default: block nearest the sweep midpoint */
  k2?: number;
}

const STATE_COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#e377c2"];

function load(options: FigureOptions, name: string): Table {
  const path = join(options.inputDir, name);
  if (!existsSync(path)) throw new SchemaError(name, "input file not found");
  return readCsv(path);
}

function groupBy<T>(keys: string[], values: T[]): Map<string, T[]> {
  const out = new Map<string, T[]>();
  keys.forEach((key, i) => {
    const bucket = out.get(key);
    if (bucket) bucket.push(values[i]);
    else out.set(key, [values[i]]);
  });
  return out;
}

function legend(doc: SvgDoc, x: number, y: number, entries: Array<[string, string, string]>): void {
  entries.forEach(([label, color, dash], i) => {
    const yy = y + i * 16;
    doc.line(x, yy - 4, x + 22, yy - 4, color, 2, dash);
    doc.text(x + 28, yy, label, 11);
  });
}

// ---------------------------------------------------------------------------
// fig1: antiresonant spectrum under open/periodic boundaries + deviating vectors

export function renderFig1(options: FigureOptions): string {
  const spectrum = load(options, "spectrum.csv");
  requireColumns(spectrum, ["index", "phase", "edge_weight", "k1", "k2", "bc"]);
  const vectors = load(options, "edge_vectors.csv");
  requireColumns(vectors, ["index", "n", "spin", "prob"]);

  const usesHalf = spectrum.columns.includes("phase_fig1");
  const phases = numbers(spectrum, usesHalf ? "phase_fig1" : "phase").map((p) => p / PI);
  const indices = numbers(spectrum, "index");
  const bcs = strings(spectrum, "bc");

  const doc = new SvgDoc(880, 420);
  const left: Box = { x: 60, y: 40, width: 340, height: 310 };
  const right: Box = { x: 500, y: 40, width: 340, height: 310 };

  const xs = new Scale(...pad(extent(indices)), left.x, left.x + left.width);
  const ys = new Scale(...pad(extent(phases), 0.1), left.y + left.height, left.y);
  doc.axes(left, xs, ys, "eigenstate index", usesHalf ? "quasienergy / pi (halved scale)" : "phase / pi",
    "antiresonant spectrum");
  for (let i = 0; i < phases.length; i++) {
    const style = BC_STYLE[bcs[i]] ?? { color: "#666" };
    doc.circle(xs.at(indices[i]), ys.at(phases[i]), 2, style.color, `bc-${bcs[i]}`);
  }
  legend(doc, left.x + 8, left.y + 16, [
    ["open", BC_STYLE.open.color, ""],
    ["periodic", BC_STYLE.periodic.color, ""],
  ]);

  const vecIndex = numbers(vectors, "index");
  const vecN = numbers(vectors, "n");
  const vecProb = numbers(vectors, "prob");
  const states = [...new Set(vecIndex)].sort((a, b) => a - b);
  const xr = new Scale(...pad(extent(vecN)), right.x, right.x + right.width);
  const yr = new Scale(...pad([0, Math.max(0.01, Math.max(...vecProb, 0))], 0.08), right.y + right.height, right.y);
  doc.axes(right, xr, yr, "momentum class n", "occupation probability", "deviating eigenvectors");
  states.forEach((state, s) => {
    const perN = new Map<number, number>();
    for (let i = 0; i < vecIndex.length; i++) {
      if (vecIndex[i] === state) perN.set(vecN[i], (perN.get(vecN[i]) ?? 0) + vecProb[i]);
    }
    const ns = [...perN.keys()].sort((a, b) => a - b);
    const color = STATE_COLORS[s % STATE_COLORS.length];
    const barW = Math.max(1, (right.width / Math.max(ns.length, 1)) * 0.4);
    for (const n of ns) {
      const p = perN.get(n)!;
      if (p < 1e-12) continue;
      doc.rect(xr.at(n) - barW / 2 + s * 0.8, Math.min(yr.at(p), yr.at(0)), barW, Math.abs(yr.at(0) - yr.at(p)), color, 'opacity="0.75"');
    }
    doc.text(right.x + right.width - 8, right.y + 16 + 14 * s, `index ${state}`, 11, "end", color);
  });
  if (states.length === 0) {
    doc.text(right.x + right.width / 2, right.y + right.height / 2, "no deviating states", 13, "middle", "#666");
  }
  return doc.render();
}

// ---------------------------------------------------------------------------
// fig2: spectrum vs k2 with winding labels, cross-section, edge-vector bars

export function renderFig2(options: FigureOptions): string {
  const spectrum = load(options, "spectrum.csv");
  requireColumns(spectrum, ["index", "phase", "edge_weight", "k1", "k2", "bc"]);
  const winding = load(options, "winding.csv");
  requireColumns(winding, ["k1", "k2", "w0_num", "w0_den", "wpi_num", "wpi_den", "status"]);
  const edges = load(options, "edges.csv");
  requireColumns(edges, ["index", "phase", "target", "edge_weight", "side"]);
  const vectors = load(options, "edge_vectors.csv");
  requireColumns(vectors, ["index", "n", "spin", "prob"]);

  const k2 = numbers(spectrum, "k2").map((v) => v / PI);
  const phase = numbers(spectrum, "phase").map((v) => v / PI);
  const index = numbers(spectrum, "index");
  const bc = strings(spectrum, "bc");

  const doc = new SvgDoc(1260, 430);
  const panels: Box[] = [
    { x: 60, y: 40, width: 330, height: 310 },
    { x: 480, y: 40, width: 310, height: 310 },
    { x: 880, y: 40, width: 330, height: 310 },
  ];

  // left: sweep
  const [p0, p1] = panels;
  const xs = new Scale(...pad(extent(k2)), p0.x, p0.x + p0.width);
  const ys = new Scale(-1.05, 1.05, p0.y + p0.height, p0.y);
  doc.axes(p0, xs, ys, "k2 / pi", "quasienergy / pi", "spectrum vs k2");
  for (let i = 0; i < k2.length; i++) {
    const style = BC_STYLE[bc[i]] ?? { color: "#666" };
    doc.circle(xs.at(k2[i]), ys.at(phase[i]), 1.1, style.color, `bc-${bc[i]}`);
  }
  // winding labels per region, transitions as dotted rules
  const wk2 = numbers(winding, "k2").map((v) => v / PI);
  const status = strings(winding, "status");
  const w0n = strings(winding, "w0_num");
  const w0d = strings(winding, "w0_den");
  const wpn = strings(winding, "wpi_num");
  const wpd = strings(winding, "wpi_den");
  const labelOf = (i: number) => {
    const f = (num: string, den: string) => (den === "1" ? num : `${num}/${den}`);
    return `(${f(w0n[i], w0d[i])}, ${f(wpn[i], wpd[i])})`;
  };
  let runStart = -1;
  let runLabel = "";
  const flush = (endK2: number) => {
    if (runStart >= 0 && runLabel) {
      const mid = (runStart + endK2) / 2;
      doc.text(xs.at(mid), p0.y + 18, runLabel, 10, "middle", "#333");
    }
  };
  for (let i = 0; i < wk2.length; i++) {
    if (status[i] !== "ok") {
      flush(wk2[i]);
      runStart = -1;
      runLabel = "";
      doc.line(xs.at(wk2[i]), p0.y, xs.at(wk2[i]), p0.y + p0.height, "#333", 1, "2 3");
      continue;
    }
    const label = labelOf(i);
    if (label !== runLabel) {
      flush(wk2[i]);
      runStart = wk2[i];
      runLabel = label;
    }
  }
  flush(wk2.length ? wk2[wk2.length - 1] : 0);
  legend(doc, p0.x + 8, p0.y + p0.height - 24, [
    ["open", BC_STYLE.open.color, ""],
    ["periodic", BC_STYLE.periodic.color, ""],
  ]);

  // middle: cross-section at the block nearest the requested (or middle) k2
  const uniqueK2 = [...new Set(k2)].sort((a, b) => a - b);
  const wanted = options.k2 !== undefined ? options.k2 / PI : (uniqueK2[0] + uniqueK2[uniqueK2.length - 1]) / 2;
  let cross = uniqueK2[0] ?? 0;
  for (const candidate of uniqueK2) {
    if (Math.abs(candidate - wanted) < Math.abs(cross - wanted) - 1e-12) cross = candidate;
  }
  const xs1 = new Scale(...pad(extent(index)), p1.x, p1.x + p1.width);
  doc.axes(p1, xs1, ys, "eigenstate index", "quasienergy / pi", `cross-section k2 = ${cross.toFixed(2)} pi`);
  for (let i = 0; i < k2.length; i++) {
    if (k2[i] !== cross) continue;
    const style = BC_STYLE[bc[i]] ?? { color: "#666" };
    doc.circle(xs1.at(index[i]), ys.at(phase[i]), 1.6, style.color, `bc-${bc[i]}`);
  }

  // right: stacked occupation bars of all edge states + per-state insets
  const p2 = panels[2];
  const eIndex = numbers(vectors, "index");
  const eN = numbers(vectors, "n");
  const eProb = numbers(vectors, "prob");
  const states = [...new Set(eIndex)].sort((a, b) => a - b);
  if (states.length === 0) {
    doc.axes(p2, new Scale(0, 1, p2.x, p2.x + p2.width), new Scale(0, 1, p2.y + p2.height, p2.y),
      "momentum class n", "occupation probability", "edge states");
    doc.text(p2.x + p2.width / 2, p2.y + p2.height / 2, "no edge states", 14, "middle", "#666");
    return doc.render();
  }
  const perN = new Map<number, number>();
  const perState = new Map<number, Map<number, number>>();
  for (let i = 0; i < eIndex.length; i++) {
    perN.set(eN[i], (perN.get(eN[i]) ?? 0) + eProb[i]);
    if (!perState.has(eIndex[i])) perState.set(eIndex[i], new Map());
    const m = perState.get(eIndex[i])!;
    m.set(eN[i], (m.get(eN[i]) ?? 0) + eProb[i]);
  }
  const ns = [...perN.keys()].sort((a, b) => a - b);
  const xs2 = new Scale(...pad(extent(ns)), p2.x, p2.x + p2.width);
  const maxTotal = Math.max(...perN.values());
  const ys2 = new Scale(...pad([0, maxTotal], 0.08), p2.y + p2.height, p2.y);
  doc.axes(p2, xs2, ys2, "momentum class n", "occupation probability", "edge states (gray: total)");
  const barW = Math.max(1, (p2.width / ns.length) * 0.7);
  for (const n of ns) {
    const total = perN.get(n)!;
    if (total < 1e-12) continue;
    doc.rect(xs2.at(n) - barW / 2, ys2.at(total), barW, ys2.at(0) - ys2.at(total), "#999", 'opacity="0.8"');
  }
  // per-state insets: one small panel per edge state across the top
  const insetW = Math.min(70, (p2.width - 10) / states.length - 6);
  states.forEach((state, s) => {
    const ix = p2.x + 6 + s * (insetW + 6);
    const iy = p2.y + 8;
    const ih = 52;
    const color = STATE_COLORS[s % STATE_COLORS.length];
    doc.rect(ix, iy, insetW, ih, "white", 'stroke="#bbb" stroke-width="0.7"');
    const m = perState.get(state)!;
    const localMax = Math.max(...m.values(), 1e-12);
    const sx = new Scale(ns[0], ns[ns.length - 1], ix + 2, ix + insetW - 2);
    for (const [n, p] of [...m.entries()].sort((a, b) => a[0] - b[0])) {
      if (p < 1e-9) continue;
      const h = (p / localMax) * (ih - 14);
      doc.rect(sx.at(n) - 0.8, iy + ih - 2 - h, 1.6, h, color);
    }
    doc.text(ix + insetW / 2, iy + 10, `${state}`, 9, "middle", color);
  });
  return doc.render();
}

// ---------------------------------------------------------------------------
// fig3: boundary-resolved MCD curves with a spin-resolved inset

export function renderFig3(options: FigureOptions): string {
  const mcd = load(options, "mcd.csv");
  requireColumns(mcd, ["k2", "bc", "mcd", "mcd_up", "mcd_down", "periods"]);
  const k2 = numbers(mcd, "k2").map((v) => v / PI);
  const value = numbers(mcd, "mcd");
  const up = numbers(mcd, "mcd_up");
  const down = numbers(mcd, "mcd_down");
  const bc = strings(mcd, "bc");

  const doc = new SvgDoc(720, 470);
  const box: Box = { x: 70, y: 40, width: 590, height: 370 };
  const xs = new Scale(...pad(extent(k2)), box.x, box.x + box.width);
  const ys = new Scale(...pad(extent([...value, 0]), 0.1), box.y + box.height, box.y);
  doc.axes(box, xs, ys, "k2 / pi", "mean chiral displacement", "MCD vs boundary condition");

  const byBc = new Map<string, Array<[number, number]>>();
  for (let i = 0; i < k2.length; i++) {
    if (!byBc.has(bc[i])) byBc.set(bc[i], []);
    byBc.get(bc[i])!.push([k2[i], value[i]]);
  }
  const order = ["ideal", "open", "periodic"].filter((name) => byBc.has(name));
  for (const extraBc of byBc.keys()) if (!order.includes(extraBc)) order.push(extraBc);
  for (const name of order) {
    const style = BC_STYLE[name] ?? { color: "#666", dash: "", label: name };
    const points = byBc.get(name)!.sort((a, b) => a[0] - b[0]);
    doc.path(points.map(([x, y]) => [xs.at(x), ys.at(y)]), style.color, 1.8, style.dash);
  }
  legend(doc, box.x + 10, box.y + 18, order.map((name) => {
    const style = BC_STYLE[name] ?? { color: "#666", dash: "", label: name };
    return [style.label ?? name, style.color, style.dash] as [string, string, string];
  }));

  // inset: spin-resolved running averages
  const inset: Box = { x: box.x + box.width - 220, y: box.y + box.height - 160, width: 200, height: 140 };
  doc.rect(inset.x, inset.y, inset.width, inset.height, "white", 'stroke="#888" stroke-width="0.8"');
  const iys = new Scale(...pad(extent([...up, ...down]), 0.12), inset.y + inset.height - 6, inset.y + 6);
  const ixs = new Scale(...extent(k2), inset.x + 6, inset.x + inset.width - 6);
  for (const name of order) {
    const style = BC_STYLE[name] ?? { color: "#666", dash: "" };
    const rows = [...Array(k2.length).keys()].filter((i) => bc[i] === name).sort((a, b) => k2[a] - k2[b]);
    doc.path(rows.map((i) => [ixs.at(k2[i]), iys.at(up[i])]), style.color, 0.9, style.dash);
    doc.path(rows.map((i) => [ixs.at(k2[i]), iys.at(down[i])]), style.color, 0.9, "1.5 2");
  }
  doc.line(ixs.at(k2[0] ?? 0), iys.at(0), ixs.at(k2[k2.length - 1] ?? 1), iys.at(0), "#bbb", 0.6);
  doc.text(inset.x + 8, inset.y + 14, "spin-up / spin-down parts", 9);
  return doc.render();
}

// ---------------------------------------------------------------------------
// fig4: distribution-difference heat map with mean-momentum overlay

export function renderFig4(options: FigureOptions): string {
  const delta = load(options, "delta.csv");
  requireColumns(delta, ["t", "n", "delta_down", "mean_n_pbc", "mean_n_ideal"]);
  const t = numbers(delta, "t");
  const n = numbers(delta, "n");
  const value = numbers(delta, "delta_down");
  const meanPbc = numbers(delta, "mean_n_pbc");
  const meanIdeal = numbers(delta, "mean_n_ideal");

  const ts = [...new Set(t)].sort((a, b) => a - b);
  const ns = [...new Set(n)].sort((a, b) => a - b);
  const vmax = Math.max(1e-12, ...value.map(Math.abs));

  const doc = new SvgDoc(760, 470);
  const box: Box = { x: 70, y: 40, width: 560, height: 370 };
  const xs = new Scale(ns[0], ns[ns.length - 1], box.x, box.x + box.width);
  const ys = new Scale(ts[0], ts[ts.length - 1], box.y + box.height, box.y);
  const cellW = box.width / ns.length;
  const cellH = box.height / ts.length;
  for (let i = 0; i < value.length; i++) {
    if (Math.abs(value[i]) < vmax * 1e-4) continue;
    doc.rect(xs.at(n[i]) - cellW / 2, ys.at(t[i]) - cellH / 2, cellW + 0.3, cellH + 0.3, diverging(value[i] / vmax));
  }
  doc.axes(box, xs, ys, "momentum class n", "driving period T",
    "spin-down probability difference (periodic - ideal)");

  const meanByT = new Map<number, [number, number]>();
  for (let i = 0; i < t.length; i++) meanByT.set(t[i], [meanPbc[i], meanIdeal[i]]);
  const ptsPbc: Array<[number, number]> = ts.map((tt) => [xs.at(meanByT.get(tt)![0]), ys.at(tt)]);
  const ptsIdeal: Array<[number, number]> = ts.map((tt) => [xs.at(meanByT.get(tt)![1]), ys.at(tt)]);
  doc.path(ptsIdeal, "#777", 1.4, "5 3");
  doc.path(ptsPbc, "#000", 1.8);
  legend(doc, box.x + 10, box.y + 16, [
    ["mean n (periodic)", "#000", ""],
    ["mean n (ideal)", "#777", "5 3"],
  ]);
  // color bar
  const cb: Box = { x: box.x + box.width + 18, y: box.y + 40, width: 14, height: 240 };
  for (let i = 0; i < 60; i++) {
    const v = 1 - (2 * i) / 59;
    doc.rect(cb.x, cb.y + (i * cb.height) / 60, cb.width, cb.height / 60 + 0.4, diverging(v));
  }
  doc.rect(cb.x, cb.y, cb.width, cb.height, "none", 'stroke="#444" stroke-width="0.8"');
  doc.text(cb.x + cb.width / 2, cb.y - 8, `+${vmax.toExponential(1)}`, 9, "middle");
  doc.text(cb.x + cb.width / 2, cb.y + cb.height + 14, `-${vmax.toExponential(1)}`, 9, "middle");
  return doc.render();
}

/** Blue-white-red diverging color for v in [-1, 1]. */
function diverging(v: number): string {
  const clamp = Math.max(-1, Math.min(1, v));
  const mix = (a: number, b: number, w: number) => Math.round(a + (b - a) * w);
  let r: number, g: number, b: number;
  if (clamp >= 0) {
    r = mix(255, 214, clamp); g = mix(255, 39, clamp); b = mix(255, 40, clamp);
  } else {
    r = mix(255, 31, -clamp); g = mix(255, 119, -clamp); b = mix(255, 180, -clamp);
  }
  return `rgb(${r},${g},${b})`;
}

export const FIGURES: Record<string, (options: FigureOptions) => string> = {
  fig1: renderFig1,
  fig2: renderFig2,
  fig3: renderFig3,
  fig4: renderFig4,
};
