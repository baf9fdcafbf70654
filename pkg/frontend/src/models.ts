/**
 * The two optimized post-processing networks.
 *
 * SR-CNN: three stride-1 same-padded conv layers (9,32) -> (1,16) ->
 * (5,1), ReLU after the first two, linear output; maps the stacked
 * estimate grid directly to the refined grid.
 *
 * DN-CNN: conv(3,16)+ReLU, D=7 blocks of conv(3,16)+BN+ReLU, and a
 * conv(3,1) reconstruction layer; trained on the residual (the noise
 * contained in the input), so the denoised grid is input minus the
 * network output.
 */

import { tf } from './backend.js';

export interface ConvLayerSpec {
  kernel: number;
  filters: number;
}

export interface SrCnnSpec {
  kind: 'srcnn';
  layers: [ConvLayerSpec, ConvLayerSpec, ConvLayerSpec];
}

export interface DnCnnSpec {
  kind: 'dncnn';
  feature: ConvLayerSpec;   // first and middle layers
  depth: number;            // number of conv+BN+ReLU middle layers
}

export type ModelSpec = SrCnnSpec | DnCnnSpec;

export const SRCNN_SPEC: SrCnnSpec = {
  kind: 'srcnn',
  layers: [{ kernel: 9, filters: 32 }, { kernel: 1, filters: 16 }, { kernel: 5, filters: 1 }],
};

export const DNCNN_SPEC: DnCnnSpec = {
  kind: 'dncnn',
  feature: { kernel: 3, filters: 16 },
  depth: 7,
};

export interface TrainSpec {
  epochs: number;
  batchSize: number;
  learningRate: number;
  trainSamples: number;     // 0 = use every record in the file
  validationSplit: number;
  seed: number;
}

export const DEFAULT_TRAIN_SPEC: TrainSpec = {
  epochs: 250,
  batchSize: 128,
  learningRate: 0.001,
  trainSamples: 8000,
  validationSplit: 0.0,
  seed: 1,
};

export function modelSpec(kind: string): ModelSpec {
  if (kind === 'srcnn') return SRCNN_SPEC;
  if (kind === 'dncnn') return DNCNN_SPEC;
  throw new Error(`unknown model kind '${kind}' (expected srcnn or dncnn)`);
}

/** Build the network for [rows, cols, 1] grids.  Stride 1 and same
 * padding everywhere, so shapes are preserved end to end; the output
 * layer is linear (regression). */
export function buildModel(spec: ModelSpec, rows: number, cols: number,
                           seed = 1): tf.LayersModel {
  const model = tf.sequential();
  const conv = (layer: ConvLayerSpec, opts: Partial<tf.layers.Layer['getConfig']> & {
    activation?: 'relu'; inputShape?: number[]; useBias?: boolean } = {}) =>
    tf.layers.conv2d({
      filters: layer.filters,
      kernelSize: layer.kernel,
      padding: 'same',
      strides: 1,
      activation: opts.activation,
      useBias: opts.useBias ?? true,
      kernelInitializer: tf.initializers.heNormal({ seed: seed++ }),
      biasInitializer: 'zeros',
      ...(opts.inputShape ? { inputShape: opts.inputShape } : {}),
    });

  if (spec.kind === 'srcnn') {
    const [l1, l2, l3] = spec.layers;
    model.add(conv(l1, { activation: 'relu', inputShape: [rows, cols, 1] }));
    model.add(conv(l2, { activation: 'relu' }));
    model.add(conv(l3, {}));  // linear reconstruction
  } else {
    model.add(conv(spec.feature, { activation: 'relu', inputShape: [rows, cols, 1] }));
    for (let d = 0; d < spec.depth; d++) {
      model.add(conv(spec.feature, { useBias: false }));
      // momentum 0.85 so the inference statistics converge within the
      // few hundred steps of a short training run
      model.add(tf.layers.batchNormalization({ axis: -1, momentum: 0.85 }));
      model.add(tf.layers.activation({ activation: 'relu' }));
    }
    // Zero-initialized residual head: the net starts by predicting no
    // noise (denoised == input), so training monotonically improves on
    // the raw estimate instead of first unlearning a random output.
    model.add(tf.layers.conv2d({
      filters: 1, kernelSize: spec.feature.kernel, padding: 'same', strides: 1,
      kernelInitializer: 'zeros', biasInitializer: 'zeros',
    }));
  }
  return model;
}

/** Raw network forward pass: the refined grid for the direct net, the
 * extracted noise for the residual net. */
export function runModel(model: tf.LayersModel, inputs: tf.Tensor4D,
                         batchSize = 32): tf.Tensor4D {
  return model.predict(inputs, { batchSize }) as tf.Tensor4D;
}
