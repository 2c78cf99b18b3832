/**
 * Minimal SVG scene builder: linear/log scales, axes with ticks, and the
 * handful of marks the figure kinds need.  Output is a standalone SVG
 * string; no DOM required.
 */

export interface Scale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
  ticks(count: number): number[];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((x: number) => r0 + ((x - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  f.ticks = (count: number) => niceTicks(d0, d1, count);
  return f;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  const f = ((x: number) => r0 + ((Math.log10(x) - l0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  f.ticks = () => {
    const out: number[] = [];
    for (let e = Math.floor(l0); e <= Math.ceil(Math.log10(d1)); e++) {
      const v = 10 ** e;
      if (v >= d0 * 0.999 && v <= d1 * 1.001) out.push(v);
    }
    return out.length >= 2 ? out : [d0, d1];
  };
  return f;
}

export function niceTicks(lo: number, hi: number, count: number): number[] {
  const span = hi - lo || 1;
  const step = 10 ** Math.floor(Math.log10(span / count));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return out;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const fmt = (x: number) => (Math.abs(x) >= 1e4 || (x !== 0 && Math.abs(x) < 1e-3)
  ? x.toExponential(1) : +x.toPrecision(4) + "");

export interface FigureOptions {
  width?: number;
  height?: number;
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

export class Figure {
  readonly width: number;
  readonly height: number;
  readonly margin = { top: 34, right: 16, bottom: 42, left: 56 };
  private parts: string[] = [];

  constructor(opts: FigureOptions = {}) {
    this.width = opts.width ?? 640;
    this.height = opts.height ?? 400;
    if (opts.title) {
      this.parts.push(
        `<text x="${this.width / 2}" y="20" text-anchor="middle" ` +
        `font-size="13" class="title">${esc(opts.title)}</text>`);
    }
    if (opts.xLabel) {
      this.parts.push(
        `<text x="${(this.margin.left + this.width - this.margin.right) / 2}" ` +
        `y="${this.height - 8}" text-anchor="middle" font-size="11">` +
        `${esc(opts.xLabel)}</text>`);
    }
    if (opts.yLabel) {
      const y = (this.margin.top + this.height - this.margin.bottom) / 2;
      this.parts.push(
        `<text x="14" y="${y}" text-anchor="middle" font-size="11" ` +
        `transform="rotate(-90 14 ${y})">${esc(opts.yLabel)}</text>`);
    }
  }

  plotArea(): { x: [number, number]; y: [number, number] } {
    return {
      x: [this.margin.left, this.width - this.margin.right],
      y: [this.height - this.margin.bottom, this.margin.top],
    };
  }

  axes(xScale: Scale, yScale: Scale): void {
    const [x0, x1] = xScale.range;
    const [y0, y1] = yScale.range;
    this.parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`,
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
    for (const t of xScale.ticks(6)) {
      const x = xScale(t);
      this.parts.push(
        `<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + 4}" stroke="black"/>`,
        `<text x="${x}" y="${y0 + 16}" text-anchor="middle" font-size="10">` +
        `${fmt(t)}</text>`);
    }
    for (const t of yScale.ticks(6)) {
      const y = yScale(t);
      this.parts.push(
        `<line x1="${x0 - 4}" y1="${y}" x2="${x0}" y2="${y}" stroke="black"/>`,
        `<text x="${x0 - 7}" y="${y + 3}" text-anchor="end" font-size="10">` +
        `${fmt(t)}</text>`);
    }
  }

  circles(xs: number[], ys: number[], xScale: Scale, yScale: Scale,
          color: string, r = 2, cls = "points"): void {
    const dots = xs.map((x, i) =>
      `<circle cx="${xScale(x).toFixed(2)}" cy="${yScale(ys[i]).toFixed(2)}" ` +
      `r="${r}" fill="${color}" fill-opacity="0.75"/>`).join("");
    this.parts.push(`<g class="${cls}">${dots}</g>`);
  }

  polyline(xs: number[], ys: number[], xScale: Scale, yScale: Scale,
           color: string, cls: string, dash = ""): void {
    const pts = xs.map((x, i) =>
      `${xScale(x).toFixed(2)},${yScale(ys[i]).toFixed(2)}`).join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline class="${cls}" points="${pts}" fill="none" ` +
      `stroke="${color}" stroke-width="1.5"${dashAttr}/>`);
  }

  hline(yValue: number, xScale: Scale, yScale: Scale, color: string,
        cls: string, label?: string): void {
    const y = yScale(yValue);
    this.parts.push(
      `<line class="${cls}" x1="${xScale.range[0]}" y1="${y}" ` +
      `x2="${xScale.range[1]}" y2="${y}" stroke="${color}" ` +
      `stroke-width="1.3" stroke-dasharray="6 3"/>`);
    if (label) {
      this.parts.push(
        `<text x="${xScale.range[1] - 4}" y="${y - 4}" text-anchor="end" ` +
        `font-size="10" fill="${color}">${esc(label)}</text>`);
    }
  }

  bars(xs: number[], heights: number[], xScale: Scale, yScale: Scale,
       color: string, cls = "bars"): void {
    const base = yScale(0);
    const bw = Math.max(1, (xScale.range[1] - xScale.range[0]) / (xs.length + 1) - 1);
    const rects = xs.map((x, i) => {
      const top = yScale(heights[i]);
      return `<rect x="${(xScale(x) - bw / 2).toFixed(2)}" y="${top.toFixed(2)}" ` +
        `width="${bw.toFixed(2)}" height="${Math.max(0, base - top).toFixed(2)}" ` +
        `fill="${color}" fill-opacity="0.85"/>`;
    }).join("");
    this.parts.push(`<g class="${cls}">${rects}</g>`);
  }

  note(text: string, line = 0): void {
    this.parts.push(
      `<text x="${this.width - this.margin.right - 4}" ` +
      `y="${this.margin.top + 12 + 13 * line}" text-anchor="end" ` +
      `font-size="10" fill="#444">${esc(text)}</text>`);
  }

  render(): string {
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}" ` +
      `font-family="sans-serif">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") + "\n</svg>\n";
  }
}
