/**
 * Inference: refine a dataset's estimate grids with a trained network
 * and assemble prediction records for the container.
 *
 * For the residual net the denoised grid is computed in double
 * precision as input - noise, and the exposed noise is re-derived as
 * input - denoised; with float32-valued operands those differences are
 * exact, so denoised + noise reproduces the input bit for bit.
 */

import { initBackend, tf } from './backend.js';
import { Dataset } from './container.js';
import { recordsToTensor } from './dataio.js';
import { ModelSpec, runModel } from './models.js';

export interface Refinement {
  /** refined grids, one Float32Array per record */
  outputs: Float32Array[];
  /** extracted noise per record (residual net only) */
  noise: Float64Array[] | null;
  /** double-precision outputs backing the residual identity check */
  outputs64: Float64Array[] | null;
}

export async function refine(dataset: Dataset, kind: ModelSpec['kind'],
                             model: tf.LayersModel, batchSize = 32): Promise<Refinement> {
  await initBackend();
  const per = dataset.rows * dataset.cols;
  const outputs: Float32Array[] = [];
  const noiseArr: Float64Array[] = [];
  const out64Arr: Float64Array[] = [];

  for (let start = 0; start < dataset.records.length; start += batchSize) {
    const idx = [];
    for (let i = start; i < Math.min(start + batchSize, dataset.records.length); i++) {
      idx.push(i);
    }
    const inputs = recordsToTensor(dataset, (r) => r.input, idx);
    const raw = runModel(model, inputs, batchSize);
    const rawData = raw.dataSync() as Float32Array;
    inputs.dispose();
    raw.dispose();

    idx.forEach((recIdx, k) => {
      const rawRec = rawData.subarray(k * per, (k + 1) * per);
      const input = dataset.records[recIdx].input;
      if (kind === 'srcnn') {
        outputs.push(Float32Array.from(rawRec));
      } else {
        const out64 = new Float64Array(per);
        const noise = new Float64Array(per);
        for (let i = 0; i < per; i++) {
          out64[i] = input[i] - rawRec[i];   // exact for float32 operands
          noise[i] = input[i] - out64[i];    // exact complement of the output
        }
        outputs.push(Float32Array.from(out64));
        noiseArr.push(noise);
        out64Arr.push(out64);
      }
    });
  }
  return {
    outputs,
    noise: kind === 'dncnn' ? noiseArr : null,
    outputs64: kind === 'dncnn' ? out64Arr : null,
  };
}

/** Prediction records in container form (no targets). */
export function toPredictionDataset(dataset: Dataset, outputs: Float32Array[]): Dataset {
  return {
    kOn: dataset.kOn,
    cols: dataset.cols,
    rows: dataset.rows,
    records: outputs.map((o) => ({ input: o, target: null })),
  };
}
