/**
 * Backend bootstrap.
 *
 * Training runs on the wasm backend (the plain JS backend is ~500x
 * slower), which ships every kernel the nets need except the
 * convolution filter gradient.  That kernel is registered here,
 * composed from shifted matMuls: for stride-1 NHWC convolution,
 *
 *   dW[kh, kw, ci, co] = sum_{b,y,x} Xpad[b, y+kh, x+kw, ci] * dy[b, y, x, co]
 *
 * i.e. one [ci x BHW] * [BHW x co] product per kernel tap.
 */

import { createRequire } from 'node:module';
import * as path from 'node:path';
import * as tf from '@tensorflow/tfjs';
import { setWasmPaths } from '@tensorflow/tfjs-backend-wasm';

let ready: Promise<void> | null = null;

function registerConvFilterGradKernel(backendName: string): void {
  if (tf.getKernel('Conv2DBackpropFilter', backendName)) return;
  tf.registerKernel({
    kernelName: 'Conv2DBackpropFilter',
    backendName,
    kernelFunc: ({ inputs, attrs }) => {
      const { x, dy } = inputs as { x: tf.Tensor4D; dy: tf.Tensor4D };
      const { strides, pad, dataFormat, filterShape } = attrs as unknown as {
        strides: [number, number] | number;
        pad: 'valid' | 'same' | number;
        dataFormat: string;
        filterShape: [number, number, number, number];
      };
      const [sh, sw] = typeof strides === 'number' ? [strides, strides] : strides;
      if (sh !== 1 || sw !== 1) {
        throw new Error('Conv2DBackpropFilter (wasm shim) supports stride 1 only');
      }
      if (dataFormat !== 'NHWC') {
        throw new Error('Conv2DBackpropFilter (wasm shim) supports NHWC only');
      }
      const [kh, kw, ci, co] = filterShape;
      return tf.tidy(() => {
        const xt = tf.engine().makeTensorFromTensorInfo(x) as tf.Tensor4D;
        const dyt = tf.engine().makeTensorFromTensorInfo(dy) as tf.Tensor4D;
        const [b, , , ] = xt.shape;
        const [, ho, wo] = dyt.shape;
        let padTop = 0;
        let padLeft = 0;
        if (pad === 'same') {
          padTop = Math.floor((kh - 1) / 2);
          padLeft = Math.floor((kw - 1) / 2);
        } else if (typeof pad === 'number' && pad !== 0) {
          padTop = pad;
          padLeft = pad;
        }
        const xp = padTop || padLeft
          ? tf.pad(xt, [[0, 0], [padTop, kh - 1 - padTop], [padLeft, kw - 1 - padLeft], [0, 0]])
          : xt;
        const dyMat = tf.reshape(dyt, [b * ho * wo, co]);
        const taps: tf.Tensor[] = [];
        for (let i = 0; i < kh; i++) {
          for (let j = 0; j < kw; j++) {
            const xs = tf.slice(xp, [0, i, j, 0], [b, ho, wo, ci]);
            const xsMat = tf.reshape(xs, [b * ho * wo, ci]);
            taps.push(tf.matMul(xsMat, dyMat, true, false)); // [ci, co]
          }
        }
        const stacked = tf.stack(taps); // [kh*kw, ci, co]
        return tf.reshape(stacked, [kh, kw, ci, co]);
      });
    },
  });
}

/** Initialize tfjs on the requested backend (default wasm) once. */
export function initBackend(backend: 'wasm' | 'cpu' = 'wasm'): Promise<void> {
  if (!ready) {
    ready = (async () => {
      if (backend === 'wasm') {
        const require = createRequire(import.meta.url);
        const dir = path.dirname(require.resolve('@tensorflow/tfjs-backend-wasm')) + path.sep;
        setWasmPaths(dir);
        await tf.setBackend('wasm');
        registerConvFilterGradKernel('wasm');
      } else {
        await tf.setBackend('cpu');
      }
      await tf.ready();
    })();
  }
  return ready;
}

export { tf };
