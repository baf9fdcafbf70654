import { beforeAll, describe, expect, it } from 'vitest';

import { initBackend, tf } from '../dist/backend.js';

beforeAll(async () => {
  await initBackend();
});

describe('registered convolution filter gradient', () => {
  it('matches a central finite-difference oracle', () => {
    expect(tf.getBackend()).toBe('wasm');
    const x = tf.randomNormal([2, 5, 6, 3], 0, 1, 'float32', 1);
    const w0 = tf.randomNormal([3, 3, 3, 4], 0, 1, 'float32', 2);
    // nonlinear scalar so the filter gradient depends on the data path
    const f = (xx: tf.Tensor4D, ww: tf.Tensor4D) => {
      const y = tf.conv2d(xx, ww, 1, 'same');
      return tf.sum(tf.mul(y, y)) as tf.Scalar;
    };
    const [gx, gw] = tf.grads((xx, ww) => f(xx as tf.Tensor4D, ww as tf.Tensor4D))([x, w0]);
    const gwData = gw.dataSync();
    const gxData = gx.dataSync();
    const wData = w0.dataSync();
    const xData = x.dataSync();
    const eps = 1e-2;

    const evalLoss = (xa: Float32Array | Int32Array | Uint8Array,
                      wa: Float32Array | Int32Array | Uint8Array): number =>
      f(tf.tensor4d(Array.from(xa), [2, 5, 6, 3]),
        tf.tensor4d(Array.from(wa), [3, 3, 3, 4])).dataSync()[0];

    for (const idx of [0, 17, 35, 50, 80, 107]) {
      const wp = Float32Array.from(wData); wp[idx] += eps;
      const wm = Float32Array.from(wData); wm[idx] -= eps;
      const numeric = (evalLoss(xData, wp) - evalLoss(xData, wm)) / (2 * eps);
      expect(Math.abs(gwData[idx] - numeric))
        .toBeLessThan(5e-3 * Math.max(1, Math.abs(numeric)));
    }
    for (const idx of [3, 77, 140]) {
      const xp = Float32Array.from(xData); xp[idx] += eps;
      const xm = Float32Array.from(xData); xm[idx] -= eps;
      const numeric = (evalLoss(xp, wData) - evalLoss(xm, wData)) / (2 * eps);
      expect(Math.abs(gxData[idx] - numeric))
        .toBeLessThan(5e-3 * Math.max(1, Math.abs(numeric)));
    }
  });

  it('agrees with the reference backend on the forward pass', async () => {
    const xArr = Array.from({ length: 2 * 4 * 5 * 2 }, (_, i) => Math.sin(i));
    const wArr = Array.from({ length: 3 * 3 * 2 * 3 }, (_, i) => Math.cos(i) / 3);
    const run = () => {
      const y = tf.conv2d(tf.tensor4d(xArr, [2, 4, 5, 2]),
                          tf.tensor4d(wArr, [3, 3, 2, 3]), 1, 'same');
      return y.dataSync();
    };
    const onWasm = run();
    await tf.setBackend('cpu');
    const onCpu = run();
    await tf.setBackend('wasm');
    for (let i = 0; i < onWasm.length; i++) {
      expect(Math.abs(onWasm[i] - onCpu[i])).toBeLessThan(1e-5);
    }
  });
});
