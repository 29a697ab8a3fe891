/** Minimal deterministic SVG builder: no timestamps, fixed number formatting. */

export interface Box {
  x: number;
  y: number;
  width: number;
  height: number;
}

export function fmt(value: number): string {
  if (!Number.isFinite(value)) return "0";
  const text = value.toFixed(2);
  return text === "-0.00" ? "0.00" : text;
}

export class Scale {
  constructor(
    readonly d0: number,
    readonly d1: number,
    readonly r0: number,
    readonly r1: number,
  ) {}

  at(value: number): number {
    const span = this.d1 - this.d0;
    const t = span === 0 ? 0.5 : (value - this.d0) / span;
    return this.r0 + t * (this.r1 - this.r0);
  }

  /** Around 'count' round tick positions inside the domain. */
  ticks(count: number): number[] {
    const span = Math.abs(this.d1 - this.d0);
    if (span === 0) return [this.d0];
    const raw = span / Math.max(1, count);
    const power = Math.pow(10, Math.floor(Math.log10(raw)));
    const step = [1, 2, 2.5, 5, 10].map((m) => m * power).find((s) => span / s <= count + 1) ?? power * 10;
    const lo = Math.min(this.d0, this.d1);
    const hi = Math.max(this.d0, this.d1);
    const out: number[] = [];
    for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12; v += step) {
      out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return out;
  }
}

export function pad(domain: [number, number], fraction = 0.05): [number, number] {
  const [a, b] = domain;
  const m = (b - a || 1) * fraction;
  return [a - m, b + m];
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1];
  return [lo, hi];
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`,
    );
  }

  raw(tag: string): void {
    this.parts.push(tag);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string, cls = ""): void {
    const c = cls ? ` class="${cls}"` : "";
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"${c}/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, opts = ""): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(Math.max(0, w))}" height="${fmt(Math.max(0, h))}" fill="${fill}"${opts ? " " + opts : ""}/>`,
    );
  }

  path(points: Array<[number, number]>, stroke: string, width = 1.5, dash = ""): void {
    if (points.length === 0) return;
    const d = points.map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`).join(" ");
    const extra = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(`<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"${extra}/>`);
  }

  text(x: number, y: number, content: string, size = 11, anchor = "start", fill = "#222"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" fill="${fill}">${escapeXml(content)}</text>`,
    );
  }

  /** Frame, ticks and labels for one panel; returns the inner data box. */
  axes(box: Box, xs: Scale, ys: Scale, xLabel: string, yLabel: string, title = ""): void {
    const { x, y, width, height } = box;
    this.rect(x, y, width, height, "none", 'stroke="#444" stroke-width="1"');
    for (const t of xs.ticks(6)) {
      const px = xs.at(t);
      if (px < x - 0.5 || px > x + width + 0.5) continue;
      this.line(px, y + height, px, y + height + 4, "#444");
      this.text(px, y + height + 16, tickLabel(t), 10, "middle");
    }
    for (const t of ys.ticks(5)) {
      const py = ys.at(t);
      if (py < y - 0.5 || py > y + height + 0.5) continue;
      this.line(x - 4, py, x, py, "#444");
      this.text(x - 7, py + 3.5, tickLabel(t), 10, "end");
    }
    this.text(x + width / 2, y + height + 32, xLabel, 12, "middle");
    this.raw(
      `<text x="${fmt(x - 38)}" y="${fmt(y + height / 2)}" font-size="12" text-anchor="middle" fill="#222" transform="rotate(-90 ${fmt(x - 38)} ${fmt(y + height / 2)})">${escapeXml(yLabel)}</text>`,
    );
    if (title) this.text(x + width / 2, y - 8, title, 12, "middle");
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

function tickLabel(value: number): string {
  if (Math.abs(value) >= 1000) return value.toExponential(1);
  const text = String(Math.round(value * 1000) / 1000);
  return text;
}

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export const BC_STYLE: Record<string, { color: string; dash: string; label: string }> = {
  open: { color: "#d62728", dash: "", label: "open" },
  periodic: { color: "#1f77b4", dash: "4 3", label: "periodic" },
  ideal: { color: "#222222", dash: "8 4", label: "ideal" },
};
