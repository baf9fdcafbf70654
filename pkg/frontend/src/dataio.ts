/** Dataset records <-> training tensors, plus checkpoint persistence. */

import * as fs from 'node:fs';
import * as path from 'node:path';
import { tf } from './backend.js';
import { Dataset } from './container.js';
import { ModelSpec, buildModel } from './models.js';

/** Stack records into a [n, rows, cols, 1] tensor. */
export function recordsToTensor(dataset: Dataset,
                                pick: (r: { input: Float32Array; target: Float32Array | null }) => Float32Array,
                                indices?: number[]): tf.Tensor4D {
  const idx = indices ?? dataset.records.map((_, i) => i);
  const per = dataset.rows * dataset.cols;
  const flat = new Float32Array(idx.length * per);
  idx.forEach((r, i) => flat.set(pick(dataset.records[r]), i * per));
  return tf.tensor4d(flat, [idx.length, dataset.rows, dataset.cols, 1]);
}

export interface Checkpoint {
  kind: ModelSpec['kind'];
  spec: ModelSpec;
  rows: number;
  cols: number;
  lossCurve: number[];
  model: tf.LayersModel;
}

/** Save topology + weights + metadata into a directory (no native
 * file:// IO handler is available, so artifacts are written manually). */
export async function saveCheckpoint(dir: string, ckpt: Checkpoint): Promise<void> {
  fs.mkdirSync(dir, { recursive: true });
  let captured: tf.io.ModelArtifacts | null = null;
  await ckpt.model.save(tf.io.withSaveHandler(async (artifacts) => {
    captured = artifacts;
    return { modelArtifactsInfo: { dateSaved: new Date(), modelTopologyType: 'JSON' } };
  }));
  const artifacts = captured as unknown as tf.io.ModelArtifacts;
  const weightData = artifacts.weightData as ArrayBuffer;
  fs.writeFileSync(path.join(dir, 'weights.bin'), Buffer.from(weightData));
  fs.writeFileSync(path.join(dir, 'model.json'), JSON.stringify({
    modelTopology: artifacts.modelTopology,
    weightSpecs: artifacts.weightSpecs,
  }));
  fs.writeFileSync(path.join(dir, 'meta.json'), JSON.stringify({
    kind: ckpt.kind, spec: ckpt.spec, rows: ckpt.rows, cols: ckpt.cols,
    lossCurve: ckpt.lossCurve,
  }, null, 1));
}

export async function loadCheckpoint(dir: string): Promise<Checkpoint> {
  const meta = JSON.parse(fs.readFileSync(path.join(dir, 'meta.json'), 'utf8'));
  const topo = JSON.parse(fs.readFileSync(path.join(dir, 'model.json'), 'utf8'));
  const weights = fs.readFileSync(path.join(dir, 'weights.bin'));
  const model = await tf.loadLayersModel(tf.io.fromMemory({
    modelTopology: topo.modelTopology,
    weightSpecs: topo.weightSpecs,
    weightData: weights.buffer.slice(weights.byteOffset,
                                     weights.byteOffset + weights.byteLength),
  }));
  return { ...meta, model };
}

/** Fresh model for a dataset's geometry. */
export function modelForDataset(spec: ModelSpec, dataset: Dataset, seed = 1): tf.LayersModel {
  return buildModel(spec, dataset.rows, dataset.cols, seed);
}
