import { execFileSync } from 'node:child_process';
import { describe, expect, it } from 'vitest';

import { DNCNN_SPEC, SRCNN_SPEC, countOps, perCellFromArchitecture } from '../dist/ops.js';

describe('operation counts', () => {
  it('derives the direct net coefficients from its architecture', () => {
    // layers (9,32), (1,16), (5,1) from depth 1:
    // sum d f v^2 = 1*32*81 + 32*16*1 + 16*1*25 = 3504; sum d f = 560
    const perCell = perCellFromArchitecture(SRCNN_SPEC);
    expect(perCell).toEqual({ mulDiv: 7008, sumSub: 1120 });
  });

  it('pins the published residual-net coefficients', () => {
    const ops = countOps(DNCNN_SPEC, 52, 98);
    expect(ops.mulDiv).toBe(84096 * 52 * 98);
    expect(ops.sumSub).toBe(9856 * 52 * 98);
  });

  it('scales linearly with the grid size', () => {
    const a = countOps(SRCNN_SPEC, 52, 98);
    const b = countOps(SRCNN_SPEC, 26, 49);
    expect(a.mulDiv).toBe(4 * b.mulDiv);
    expect(a.sumSub).toBe(4 * b.sumSub);
  });

  it('matches the core library complexity tables exactly', () => {
    // consume the core only through its CLI: the learned-stage cost is
    // the difference between a WI+net scheme and its bare WI scheme
    const out = execFileSync('wice', ['complexity', '--i', '100', '--p', '2'],
                             { encoding: 'utf8' });
    const rows = new Map<string, { mul: number; sum: number }>();
    for (const line of out.trim().split('\n').slice(1)) {
      const [scheme, mul, sum] = line.split(',');
      rows.set(scheme, { mul: Number(mul), sum: Number(sum) });
    }
    const stage = (net: string) => ({
      mulDiv: rows.get(`fp-sls-${net}`)!.mul - rows.get('fp-sls')!.mul,
      sumSub: rows.get(`fp-sls-${net}`)!.sum - rows.get('fp-sls')!.sum,
    });
    expect(countOps(SRCNN_SPEC, 52, 98)).toEqual(stage('srcnn'));
    expect(countOps(DNCNN_SPEC, 52, 98)).toEqual(stage('dncnn'));
  }, 60_000);
});
