/**
 * Command line:
 *   node dist/cli.js train   --data train.wice --model srcnn|dncnn --out ckpt/ [...]
 *   node dist/cli.js predict --model ckpt/ --data test.wice --out pred.wice
 *   node dist/cli.js count-ops --model srcnn|dncnn [--k-on 52] [--i-d 98]
 */

import * as process from 'node:process';
import { initBackend } from './backend.js';
import { nmse, readDataset, toDb, writeDataset } from './container.js';
import { loadCheckpoint, saveCheckpoint } from './dataio.js';
import { DEFAULT_TRAIN_SPEC, modelSpec } from './models.js';
import { countOps } from './ops.js';
import { refine, toPredictionDataset } from './predict.js';
import { train } from './train.js';

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    if (!argv[i].startsWith('--') || i + 1 >= argv.length) {
      throw new Error(`malformed option near '${argv[i]}'`);
    }
    out.set(argv[i].slice(2), argv[i + 1]);
  }
  return out;
}

function num(args: Map<string, string>, key: string, fallback: number): number {
  const raw = args.get(key);
  if (raw === undefined) return fallback;
  const v = Number(raw);
  if (!Number.isFinite(v)) throw new Error(`--${key} expects a number, got '${raw}'`);
  return v;
}

async function cmdTrain(args: Map<string, string>): Promise<void> {
  for (const key of ['data', 'model', 'out']) {
    if (!args.has(key)) throw new Error(`train requires --${key}`);
  }
  const dataset = readDataset(args.get('data')!);
  const spec = modelSpec(args.get('model')!);
  const trainSpec = {
    ...DEFAULT_TRAIN_SPEC,
    epochs: num(args, 'epochs', DEFAULT_TRAIN_SPEC.epochs),
    batchSize: num(args, 'batch', DEFAULT_TRAIN_SPEC.batchSize),
    learningRate: num(args, 'lr', DEFAULT_TRAIN_SPEC.learningRate),
    trainSamples: num(args, 'samples', 0),
    seed: num(args, 'seed', DEFAULT_TRAIN_SPEC.seed),
  };
  const patchSize = num(args, 'patch', 0);
  const patch = patchSize > 0
    ? { rows: patchSize, cols: patchSize, perRecord: num(args, 'patch-per-record', 4) }
    : undefined;
  console.log(`training ${spec.kind} on ${dataset.records.length} records `
    + `(${dataset.rows}x${dataset.cols} grids), ${trainSpec.epochs} epochs, `
    + `batch ${trainSpec.batchSize}`
    + (patch ? `, ${patch.perRecord} ${patch.rows}x${patch.cols} patches/record` : ''));
  const result = await train(dataset, spec, trainSpec, (m) => console.log(m), patch);
  await saveCheckpoint(args.get('out')!, result.checkpoint);
  console.log(`saved checkpoint to ${args.get('out')} `
    + `(final loss ${result.lossCurve.at(-1)?.toExponential(4)})`);
}

async function cmdPredict(args: Map<string, string>): Promise<void> {
  for (const key of ['data', 'model', 'out']) {
    if (!args.has(key)) throw new Error(`predict requires --${key}`);
  }
  const dataset = readDataset(args.get('data')!);
  const ckpt = await loadCheckpoint(args.get('model')!);
  if (ckpt.rows !== dataset.rows || ckpt.cols !== dataset.cols) {
    throw new Error(`checkpoint geometry ${ckpt.rows}x${ckpt.cols} does not match `
      + `dataset ${dataset.rows}x${dataset.cols}`);
  }
  const result = await refine(dataset, ckpt.kind, ckpt.model,
                              num(args, 'batch', 32));
  writeDataset(args.get('out')!, toPredictionDataset(dataset, result.outputs));
  console.log(`wrote ${result.outputs.length} predictions to ${args.get('out')}`);

  if (dataset.records[0]?.target) {
    let pre = 0;
    let post = 0;
    dataset.records.forEach((rec, i) => {
      pre += nmse(rec.input, rec.target!);
      post += nmse(result.outputs[i], rec.target!);
    });
    pre /= dataset.records.length;
    post /= dataset.records.length;
    console.log(`NMSE pre ${toDb(pre).toFixed(2)} dB -> post ${toDb(post).toFixed(2)} dB`);
  }
}

function cmdCountOps(args: Map<string, string>): void {
  if (!args.has('model')) throw new Error('count-ops requires --model');
  const spec = modelSpec(args.get('model')!);
  const kOn = num(args, 'k-on', 52);
  const cols = num(args, 'i-d', 98);
  const ops = countOps(spec, kOn, cols);
  console.log(`${spec.kind} at K_on=${kOn}, I_d=${cols}: `
    + `mul_div=${ops.mulDiv} sum_sub=${ops.sumSub}`);
}

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  try {
    const args = parseArgs(rest);
    if (command === 'train') {
      await initBackend();
      await cmdTrain(args);
    } else if (command === 'predict') {
      await initBackend();
      await cmdPredict(args);
    } else if (command === 'count-ops') {
      cmdCountOps(args);
    } else {
      throw new Error(`unknown command '${command ?? ''}' (train | predict | count-ops)`);
    }
    return 0;
  } catch (err) {
    console.error(`wice-frontend: error: ${(err as Error).message}`);
    return 1;
  }
}

const argv1 = process.argv[1] ?? '';
if (argv1.endsWith('cli.js') || argv1.endsWith('cli.ts')) {
  main(process.argv.slice(2)).then((code) => process.exit(code));
}
