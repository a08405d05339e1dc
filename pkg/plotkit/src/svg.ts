/** Minimal deterministic line-chart SVG builder (no DOM, no timestamps). */

export interface Series {
  label: string
  x: number[]
  y: number[]
}

export interface ChartSpec {
  title: string
  xLabel: string
  yLabel: string
  series: Series[]
}

const WIDTH = 560
const HEIGHT = 380
const MARGIN = { left: 62, right: 16, top: 34, bottom: 46 }
const COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b']

function extent(values: number[]): [number, number] {
  let lo = Infinity
  let hi = -Infinity
  for (const v of values) {
    if (!Number.isFinite(v)) continue
    if (v < lo) lo = v
    if (v > hi) hi = v
  }
  if (!Number.isFinite(lo)) throw new Error('no finite data to plot')
  if (lo === hi) {
    lo -= 0.5
    hi += 0.5
  }
  return [lo, hi]
}

/** Round ticks similar to what plotting libraries pick: 1/2/5 steps. */
function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo
  const raw = span / count
  const mag = Math.pow(10, Math.floor(Math.log10(raw)))
  const candidates = [1, 2, 5, 10].map((m) => m * mag)
  const step = candidates.find((c) => span / c <= count) ?? candidates[3]
  const start = Math.ceil(lo / step) * step
  const out: number[] = []
  for (let t = start; t <= hi + 1e-12; t += step) out.push(Number(t.toPrecision(12)))
  return out
}

function fmt(v: number): string {
  if (v === 0) return '0'
  const abs = Math.abs(v)
  if (abs >= 1000 || abs < 0.01) return v.toExponential(1)
  return Number(v.toPrecision(4)).toString()
}

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
}

export function renderChart(spec: ChartSpec): string {
  if (spec.series.length === 0) throw new Error('chart needs at least one series')
  const xs = spec.series.flatMap((s) => s.x)
  const ys = spec.series.flatMap((s) => s.y)
  const [x0, x1] = extent(xs)
  const [y0raw, y1raw] = extent(ys)
  const pad = 0.06 * (y1raw - y0raw)
  const y0 = y0raw - pad
  const y1 = y1raw + pad
  const plotW = WIDTH - MARGIN.left - MARGIN.right
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom
  const px = (x: number) => MARGIN.left + ((x - x0) / (x1 - x0)) * plotW
  const py = (y: number) => MARGIN.top + plotH - ((y - y0) / (y1 - y0)) * plotH

  const parts: string[] = []
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  )
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`)
  parts.push(
    `<text x="${WIDTH / 2}" y="20" text-anchor="middle" font-size="14">${esc(spec.title)}</text>`,
  )
  // axes
  const axisY = MARGIN.top + plotH
  parts.push(
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${MARGIN.left + plotW}" y2="${axisY}" stroke="black" stroke-width="1"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisY}" stroke="black" stroke-width="1"/>`,
  )
  for (const t of ticks(x0, x1)) {
    const x = px(t)
    parts.push(
      `<line x1="${x.toFixed(2)}" y1="${axisY}" x2="${x.toFixed(2)}" y2="${axisY + 5}" stroke="black"/>`,
      `<text x="${x.toFixed(2)}" y="${axisY + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    )
  }
  for (const t of ticks(y0, y1)) {
    const y = py(t)
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${y.toFixed(2)}" x2="${MARGIN.left}" y2="${y.toFixed(2)}" stroke="black"/>`,
      `<text x="${MARGIN.left - 8}" y="${(y + 4).toFixed(2)}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    )
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 10}" text-anchor="middle" font-size="12">${esc(spec.xLabel)}</text>`,
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${esc(spec.yLabel)}</text>`,
  )
  spec.series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length]
    const pts = s.x
      .map((x, k) => `${px(x).toFixed(2)},${py(s.y[k]).toFixed(2)}`)
      .join(' ')
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    )
    for (let k = 0; k < s.x.length; k++) {
      parts.push(
        `<circle cx="${px(s.x[k]).toFixed(2)}" cy="${py(s.y[k]).toFixed(2)}" r="2.6" fill="${color}"/>`,
      )
    }
  })
  if (spec.series.length > 1 || spec.series[0].label) {
    spec.series.forEach((s, i) => {
      const color = COLORS[i % COLORS.length]
      const y = MARGIN.top + 10 + 16 * i
      const x = MARGIN.left + plotW - 120
      parts.push(
        `<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${color}" stroke-width="1.8"/>`,
        `<text x="${x + 28}" y="${y + 4}" font-size="11">${esc(s.label)}</text>`,
      )
    })
  }
  parts.push('</svg>')
  return parts.join('\n') + '\n'
}
