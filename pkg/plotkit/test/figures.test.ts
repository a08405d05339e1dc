import { describe, expect, it } from 'vitest'
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from 'fs'
import { tmpdir } from 'os'
import { join } from 'path'
import { readSweepCsv } from '../src/csv.js'
import { FIGURE_KINDS, render } from '../src/figures.js'
import { run } from '../src/cli.js'

const FIXTURES = join(__dirname, '..', 'fixtures')
const FIXTURE_FOR: Record<string, string> = {
  capacity: join(FIXTURES, 'capacity.csv'),
  diamond: join(FIXTURES, 'diamond.csv'),
  'noise-overlap': join(FIXTURES, 'overlap.csv'),
  'noise-capacity': join(FIXTURES, 'noise.csv'),
}

function tmp(): string {
  return mkdtempSync(join(tmpdir(), 'plotkit-'))
}

describe('csv parsing', () => {
  it('reads the udw header and rows', () => {
    const csv = readSweepCsv(FIXTURE_FOR.capacity)
    expect(csv.meta.seed).toBe('3')
    expect(csv.meta.backend).toBe('symbolic')
    expect(csv.columns).toEqual(['lambda_phi', 'gamma', 'capacity', 'backend'])
    expect(csv.rows.length).toBe(6)
  })

  it('rejects an empty body without writing anything', () => {
    const dir = tmp()
    const bad = join(dir, 'empty.csv')
    writeFileSync(bad, '# udw v0.1.0 seed=0 backend=x\nlambda_phi,capacity\n')
    const out = join(dir, 'empty.svg')
    expect(() => render({ kind: 'capacity', csvPath: bad, outPath: out })).toThrow(
      /no data rows/,
    )
    expect(existsSync(out)).toBe(false)
  })

  it('rejects a missing header line', () => {
    const dir = tmp()
    const bad = join(dir, 'nohdr.csv')
    writeFileSync(bad, 'lambda_phi,capacity\n1,0.5\n')
    expect(() => readSweepCsv(bad)).toThrow(/header/)
  })
})

describe('figure rendering', () => {
  for (const kind of FIGURE_KINDS) {
    it(`renders the ${kind} family from a real sweep CSV`, () => {
      const dir = tmp()
      const out = join(dir, `${kind}.svg`)
      render({ kind, csvPath: FIXTURE_FOR[kind], outPath: out })
      const svg = readFileSync(out, 'utf8')
      expect(svg).toContain('<svg')
      expect(svg).toContain('polyline')
      expect(svg).toContain('</svg>')
    })
  }

  it('labels axes with the sweep symbols', () => {
    const dir = tmp()
    const out = join(dir, 'cap.svg')
    render({ kind: 'capacity', csvPath: FIXTURE_FOR.capacity, outPath: out })
    const svg = readFileSync(out, 'utf8')
    expect(svg).toContain('λ_φ')
    expect(svg).toContain('coherent information (bits)')
    const dia = join(dir, 'dia.svg')
    render({ kind: 'diamond', csvPath: FIXTURE_FOR.diamond, outPath: dia })
    expect(readFileSync(dia, 'utf8')).toContain('diamond distance')
  })

  it('draws one curve per b value with a legend', () => {
    const dir = tmp()
    const out = join(dir, 'noise.svg')
    render({ kind: 'noise-capacity', csvPath: FIXTURE_FOR['noise-capacity'], outPath: out })
    const svg = readFileSync(out, 'utf8')
    expect(svg).toContain('b = 0')
    expect(svg).toContain('b = 0.5')
    expect((svg.match(/<polyline/g) || []).length).toBe(2)
  })

  it('errors on a missing column, naming it', () => {
    const dir = tmp()
    const bad = join(dir, 'bad.csv')
    writeFileSync(bad, '# udw v0.1.0 seed=0 backend=x\nlambda_phi,foo\n1,2\n')
    const out = join(dir, 'bad.svg')
    expect(() => render({ kind: 'diamond', csvPath: bad, outPath: out })).toThrow(
      /'diamond'/,
    )
    expect(existsSync(out)).toBe(false)
  })

  it('never mutates the input CSV and re-renders identically', () => {
    const before = readFileSync(FIXTURE_FOR.capacity)
    const dir = tmp()
    const out1 = join(dir, 'a.svg')
    const out2 = join(dir, 'b.svg')
    render({ kind: 'capacity', csvPath: FIXTURE_FOR.capacity, outPath: out1 })
    render({ kind: 'capacity', csvPath: FIXTURE_FOR.capacity, outPath: out2 })
    expect(readFileSync(FIXTURE_FOR.capacity)).toEqual(before)
    expect(readFileSync(out1, 'utf8')).toEqual(readFileSync(out2, 'utf8'))
  })

  it('skips domain-flagged rows rather than plotting NaN', () => {
    const dir = tmp()
    const csv = join(dir, 'flags.csv')
    writeFileSync(
      csv,
      '# udw v0.1.0 seed=0 backend=symbolic\n' +
        'lambda_phi,b,lambda_eff,capacity,flag\n' +
        '1,1,nan,nan,domain-error\n' +
        '2,1,1.5,0.9,ok\n' +
        '3,1,2.5,0.99,ok\n',
    )
    const out = join(dir, 'flags.svg')
    render({ kind: 'noise-capacity', csvPath: csv, outPath: out })
    const svg = readFileSync(out, 'utf8')
    expect(svg).not.toContain('NaN')
  })
})

describe('cli', () => {
  it('renders via the command surface', () => {
    const dir = tmp()
    const out = join(dir, 'cli.svg')
    const code = run(['capacity', FIXTURE_FOR.capacity, '-o', out])
    expect(code).toBe(0)
    expect(existsSync(out)).toBe(true)
  })

  it('returns 2 on usage errors and 1 on bad input', () => {
    expect(run(['capacity'])).toBe(2)
    expect(run(['bogus-kind', FIXTURE_FOR.capacity, '-o', '/tmp/x.svg'])).toBe(1)
  })
})
