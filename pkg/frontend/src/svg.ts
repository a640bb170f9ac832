/**
 * Minimal deterministic SVG builder: fixed canvas, fixed fonts, no
 * timestamps or randomness, so identical inputs give identical bytes.
 */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 72, right: 160, top: 40, bottom: 56 };

export const PALETTE = [
  "#4053d3",
  "#ddb310",
  "#b51d14",
  "#00beff",
  "#fb49b0",
  "#00b25d",
  "#cacaca",
];

const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function fmt(value: number): string {
  if (!Number.isFinite(value)) return "0";
  return Number(value.toPrecision(6)).toString();
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  return scale;
}

/** Deterministic "nice" tick positions, at most `count` of them. */
export function ticks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / count;
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = power;
  for (const mult of [1, 2, 2.5, 5, 10]) {
    if (mult * power >= rawStep) {
      step = mult * power;
      break;
    }
  }
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * step; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export class Canvas {
  private parts: string[] = [];

  add(part: string): void {
    this.parts.push(part);
  }

  line(x1: number, y1: number, x2: number, y2: number, attrs: string): void {
    this.add(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ${attrs}/>`
    );
  }

  polyline(points: Array<[number, number]>, attrs: string): void {
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.add(`<polyline points="${path}" fill="none" ${attrs}/>`);
  }

  rect(x: number, y: number, w: number, h: number, attrs: string): void {
    this.add(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ${attrs}/>`
    );
  }

  text(x: number, y: number, content: string, attrs = ""): void {
    const size = attrs.includes("font-size") ? "" : 'font-size="13" ';
    const fill = attrs.includes("fill=") ? "" : 'fill="#222" ';
    this.add(
      `<text x="${fmt(x)}" y="${fmt(y)}" ${FONT} ${size}${fill}${attrs.trim()}>` +
        `${esc(content)}</text>`
    );
  }

  toString(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

export function drawAxes(
  canvas: Canvas,
  x: Scale,
  y: Scale,
  xLabel: string,
  yLabel: string
): void {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const axisAttrs = 'stroke="#222" stroke-width="1"';
  canvas.line(x0, y0, x1, y0, axisAttrs);
  canvas.line(x0, y0, x0, y1, axisAttrs);
  for (const t of ticks(x.domain[0], x.domain[1])) {
    const px = x(t);
    canvas.line(px, y0, px, y0 + 5, axisAttrs);
    canvas.text(px - 12, y0 + 20, fmt(t));
  }
  for (const t of ticks(y.domain[0], y.domain[1])) {
    const py = y(t);
    canvas.line(x0 - 5, py, x0, py, axisAttrs);
    canvas.text(x0 - 48, py + 4, fmt(t));
  }
  canvas.text((x0 + x1) / 2 - 40, HEIGHT - 14, xLabel);
  canvas.text(14, y1 - 12, yLabel);
}

/** Fixed 9-stop sequential colormap (dark blue -> yellow), interpolated. */
const RAMP: Array<[number, number, number]> = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function colormap(value: number): string {
  const clamped = Math.min(1, Math.max(0, value));
  const pos = clamped * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(pos));
  const frac = pos - i;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * frac);
  const [r, g, b] = [0, 1, 2].map((c) => mix(RAMP[i][c], RAMP[i + 1][c]));
  return `rgb(${r},${g},${b})`;
}
