#!/usr/bin/env node
import { FIGURE_KINDS, FigureKind, render } from './figures.js'

const USAGE = `usage: plotkit <kind> <csv> -o <img>
  kind: ${FIGURE_KINDS.join(' | ')}`

export function run(argv: string[]): number {
  const args = [...argv]
  let out: string | undefined
  const positional: string[] = []
  while (args.length > 0) {
    const a = args.shift() as string
    if (a === '-o' || a === '--out') {
      out = args.shift()
      if (!out) {
        console.error('-o requires a path')
        return 2
      }
    } else if (a === '-h' || a === '--help') {
      console.log(USAGE)
      return 0
    } else {
      positional.push(a)
    }
  }
  if (positional.length !== 2 || !out) {
    console.error(USAGE)
    return 2
  }
  const [kind, csvPath] = positional
  try {
    const written = render({ kind: kind as FigureKind, csvPath, outPath: out })
    console.log(`wrote ${written}`)
    return 0
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err))
    return 1
  }
}

if (process.argv[1] && process.argv[1].endsWith('cli.js')) {
  process.exit(run(process.argv.slice(2)))
}
