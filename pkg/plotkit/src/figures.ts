import { writeFileSync } from 'fs'
import { groupBy, numeric, readSweepCsv, requireColumns } from './csv.js'
import { renderChart, Series } from './svg.js'

export const FIGURE_KINDS = ['capacity', 'diamond', 'noise-overlap', 'noise-capacity'] as const
export type FigureKind = (typeof FIGURE_KINDS)[number]

export interface FigureSpec {
  kind: FigureKind
  csvPath: string
  outPath: string
}

function capacityChart(csvPath: string): string {
  const csv = readSweepCsv(csvPath)
  requireColumns(csv, ['lambda_phi', 'capacity'], csvPath)
  const series: Series[] = [
    { label: '', x: numeric(csv.rows, 'lambda_phi'), y: numeric(csv.rows, 'capacity') },
  ]
  return renderChart({
    title: 'n=1 capacity of the field-mediated transfer channel',
    xLabel: 'coupling λ_φ',
    yLabel: 'coherent information (bits)',
    series,
  })
}

function diamondChart(csvPath: string): string {
  const csv = readSweepCsv(csvPath)
  requireColumns(csv, ['lambda_phi', 'diamond'], csvPath)
  const pair = csv.meta.pair ? ` (${csv.meta.pair})` : ''
  return renderChart({
    title: `diamond distance, field vs qubit channel${pair}`,
    xLabel: 'coupling λ_φ',
    yLabel: 'diamond distance',
    series: [
      { label: '', x: numeric(csv.rows, 'lambda_phi'), y: numeric(csv.rows, 'diamond') },
    ],
  })
}

function noiseOverlapChart(csvPath: string): string {
  const csv = readSweepCsv(csvPath)
  requireColumns(csv, ['gamma_phi', 'b', 'overlap'], csvPath)
  const series: Series[] = []
  for (const [b, rows] of groupBy(csv.rows, 'b')) {
    series.push({ label: `b = ${b}`, x: numeric(rows, 'gamma_phi'), y: numeric(rows, 'overlap') })
  }
  return renderChart({
    title: 'cross-talk dephasing of the coherent overlap',
    xLabel: 'dephasing strength γ_φ',
    yLabel: 'dephased inner product',
    series,
  })
}

function noiseCapacityChart(csvPath: string): string {
  const csv = readSweepCsv(csvPath)
  requireColumns(csv, ['lambda_phi', 'b', 'capacity', 'flag'], csvPath)
  const series: Series[] = []
  for (const [b, rows] of groupBy(csv.rows, 'b')) {
    const ok = rows.filter((r) => r.flag === 'ok')
    if (ok.length === 0) continue
    series.push({ label: `b = ${b}`, x: numeric(ok, 'lambda_phi'), y: numeric(ok, 'capacity') })
  }
  if (series.length === 0) throw new Error(`${csvPath}: every row is domain-flagged`)
  return renderChart({
    title: 'capacity with cross-talk noise folded into the coupling',
    xLabel: 'coupling λ_φ',
    yLabel: 'coherent information (bits)',
    series,
  })
}

const BUILDERS: Record<FigureKind, (csvPath: string) => string> = {
  capacity: capacityChart,
  diamond: diamondChart,
  'noise-overlap': noiseOverlapChart,
  'noise-capacity': noiseCapacityChart,
}

/** Render one figure; the SVG is written only after it builds successfully. */
export function render(spec: FigureSpec): string {
  const builder = BUILDERS[spec.kind]
  if (!builder) {
    throw new Error(`unknown figure kind '${spec.kind}' (use ${FIGURE_KINDS.join(', ')})`)
  }
  const svg = builder(spec.csvPath)
  writeFileSync(spec.outPath, svg)
  return spec.outPath
}
