/**
 * Training.
 *
 * Both networks minimize the mean-squared error under ADAM.  The
 * direct net regresses the refined grid; the residual net regresses
 * the noise contained in the input (input minus target), so a perfect
 * prediction subtracted from the input reproduces the target.
 */

import { initBackend, tf } from './backend.js';
import { Dataset } from './container.js';
import { recordsToTensor, Checkpoint } from './dataio.js';
import { ModelSpec, TrainSpec, buildModel } from './models.js';

function seededShuffle(n: number, seed: number): number[] {
  // 32-bit LCG; good enough for epoch-order shuffling
  const order = Array.from({ length: n }, (_, i) => i);
  let state = (seed >>> 0) || 1;
  for (let i = n - 1; i > 0; i--) {
    state = (1664525 * state + 1013904223) >>> 0;
    const j = state % (i + 1);
    [order[i], order[j]] = [order[j], order[i]];
  }
  return order;
}

export interface TrainResult {
  checkpoint: Checkpoint;
  lossCurve: number[];
}

/** Crop every record into `perRecord` seeded random patches.  The nets
 * are fully convolutional, so patch training is equivalent up to
 * boundary effects and cuts the per-step cost by the area ratio. */
export function cropPatches(dataset: Dataset, patchRows: number, patchCols: number,
                            perRecord: number, seed: number): Dataset {
  if (patchRows > dataset.rows || patchCols > dataset.cols) {
    throw new Error('patch size exceeds the grid');
  }
  let state = (seed >>> 0) || 1;
  const next = (bound: number) => {
    state = (1664525 * state + 1013904223) >>> 0;
    return bound > 0 ? state % bound : 0;
  };
  const crop = (src: Float32Array, r0: number, c0: number): Float32Array => {
    const out = new Float32Array(patchRows * patchCols);
    for (let r = 0; r < patchRows; r++) {
      const srcOff = (r0 + r) * dataset.cols + c0;
      out.set(src.subarray(srcOff, srcOff + patchCols), r * patchCols);
    }
    return out;
  };
  const records = [];
  for (const rec of dataset.records) {
    for (let k = 0; k < perRecord; k++) {
      const r0 = next(dataset.rows - patchRows + 1);
      const c0 = next(dataset.cols - patchCols + 1);
      records.push({
        input: crop(rec.input, r0, c0),
        target: rec.target ? crop(rec.target, r0, c0) : null,
      });
    }
  }
  return { kOn: Math.floor(patchRows / 2), rows: patchRows, cols: patchCols, records };
}

export interface PatchConfig {
  rows: number;
  cols: number;
  perRecord: number;
}

export async function train(dataset: Dataset, spec: ModelSpec,
                            trainSpec: TrainSpec,
                            log: (msg: string) => void = () => {},
                            patch?: PatchConfig): Promise<TrainResult> {
  await initBackend();
  if (dataset.records.length === 0 || dataset.records[0].target === null) {
    throw new Error('training requires a dataset with targets');
  }
  const n = trainSpec.trainSamples > 0
    ? Math.min(trainSpec.trainSamples, dataset.records.length)
    : dataset.records.length;
  const indices = seededShuffle(dataset.records.length, trainSpec.seed).slice(0, n);

  let trainSet: Dataset = {
    ...dataset,
    records: indices.map((i) => dataset.records[i]),
  };
  if (patch) {
    trainSet = cropPatches(trainSet, patch.rows, patch.cols, patch.perRecord,
                           trainSpec.seed + 7);
    const order = seededShuffle(trainSet.records.length, trainSpec.seed + 13);
    trainSet = { ...trainSet, records: order.map((i) => trainSet.records[i]) };
  }

  const all = trainSet.records.map((_, i) => i);
  const inputs = recordsToTensor(trainSet, (r) => r.input, all);
  const per = trainSet.rows * trainSet.cols;
  const targets = recordsToTensor(trainSet, (r) => {
    if (spec.kind === 'srcnn') return r.target as Float32Array;
    const noise = new Float32Array(per);
    for (let i = 0; i < per; i++) noise[i] = r.input[i] - (r.target as Float32Array)[i];
    return noise;
  }, all);

  const model = buildModel(spec, trainSet.rows, trainSet.cols, trainSpec.seed);
  model.compile({
    optimizer: tf.train.adam(trainSpec.learningRate),
    loss: 'meanSquaredError',
  });

  const lossCurve: number[] = [];
  const t0 = Date.now();
  // samples are pre-shuffled with the seeded generator and fit keeps
  // the order, so a (dataset, spec, seed) triple trains identically
  // every run
  await model.fit(inputs, targets, {
    epochs: trainSpec.epochs,
    batchSize: trainSpec.batchSize,
    shuffle: false,
    validationSplit: trainSpec.validationSplit || undefined,
    verbose: 0,
    callbacks: {
      onEpochEnd: (epoch, logs) => {
        const loss = logs?.loss ?? NaN;
        lossCurve.push(loss);
        log(`epoch ${epoch + 1}/${trainSpec.epochs}  loss=${loss.toExponential(4)}  `
          + `(${((Date.now() - t0) / 1000).toFixed(1)}s)`);
      },
    },
  });
  inputs.dispose();
  targets.dispose();

  // The nets are fully convolutional; rebuild at the dataset geometry
  // so checkpoints always accept full grids, and transfer the weights
  // (batch-norm moving statistics ride along as weights).
  let finalModel = model;
  if (trainSet.rows !== dataset.rows || trainSet.cols !== dataset.cols) {
    finalModel = buildModel(spec, dataset.rows, dataset.cols, trainSpec.seed);
    finalModel.setWeights(model.getWeights());
    model.dispose();
  }

  // Normalization statistics drift badly over short runs (and patch
  // activations are not distributed like full-grid ones), so replace
  // the moving averages with exact statistics measured at the final
  // geometry before shipping the checkpoint.
  const calibCount = Math.min(32, indices.length);
  const calib = recordsToTensor(dataset, (r) => r.input, indices.slice(0, calibCount));
  recalibrateNormalization(finalModel, calib);
  calib.dispose();

  return {
    checkpoint: { kind: spec.kind, spec, rows: dataset.rows, cols: dataset.cols,
                  lossCurve, model: finalModel },
    lossCurve,
  };
}

/** Walk the layer stack, replacing every normalization layer's moving
 * mean/variance with the exact per-channel statistics of its input on
 * the calibration batch (layers are applied in inference mode with the
 * freshly written statistics, so downstream inputs are consistent). */
export function recalibrateNormalization(model: tf.LayersModel,
                                         calibration: tf.Tensor4D): void {
  let x: tf.Tensor = calibration;
  const owned: tf.Tensor[] = [];
  for (const layer of model.layers) {
    if (layer.getClassName() === 'BatchNormalization') {
      const [gamma, beta] = layer.getWeights();
      const { mean, variance } = tf.moments(x, [0, 1, 2]);
      layer.setWeights([gamma, beta, mean, variance]);
    }
    const y = layer.apply(x) as tf.Tensor;
    owned.push(y);
    x = y;
  }
  owned.forEach((t) => t.dispose());
}
