import { readFileSync } from 'fs'

export interface SweepCsv {
  meta: Record<string, string>
  columns: string[]
  rows: Record<string, string>[]
}

/** Parse the udw sweep CSV: `# udw v.. key=val ..`, a column row, data rows. */
export function readSweepCsv(path: string): SweepCsv {
  const text = readFileSync(path, 'utf8')
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0)
  if (lines.length === 0 || !lines[0].startsWith('#')) {
    throw new Error(`${path}: missing '# udw ...' header line`)
  }
  const meta: Record<string, string> = {}
  const tokens = lines[0].replace(/^#\s*/, '').split(/\s+/)
  for (const token of tokens.slice(1)) {
    const eq = token.indexOf('=')
    if (eq > 0) meta[token.slice(0, eq)] = token.slice(eq + 1)
    else if (!meta.version) meta.version = token
  }
  if (lines.length < 2) throw new Error(`${path}: missing column header row`)
  const columns = lines[1].split(',')
  const rows: Record<string, string>[] = []
  for (const line of lines.slice(2)) {
    const cells = line.split(',')
    if (cells.length !== columns.length) {
      throw new Error(`${path}: row has ${cells.length} cells, expected ${columns.length}`)
    }
    const row: Record<string, string> = {}
    columns.forEach((c, i) => (row[c] = cells[i]))
    rows.push(row)
  }
  if (rows.length === 0) throw new Error(`${path}: no data rows`)
  return { meta, columns, rows }
}

export function requireColumns(csv: SweepCsv, needed: string[], path: string): void {
  for (const col of needed) {
    if (!csv.columns.includes(col)) {
      throw new Error(`${path}: missing column '${col}'`)
    }
  }
}

export function numeric(rows: Record<string, string>[], col: string): number[] {
  return rows.map((r) => Number(r[col]))
}

/** Group rows by a column value, preserving first-seen order of groups. */
export function groupBy(
  rows: Record<string, string>[],
  col: string,
): Map<string, Record<string, string>[]> {
  const groups = new Map<string, Record<string, string>[]>()
  for (const row of rows) {
    const key = row[col]
    const bucket = groups.get(key)
    if (bucket) bucket.push(row)
    else groups.set(key, [row])
  }
  return groups
}
