/**
 * Reader/writer for the channel-estimate dataset container.
 *
 * Layout (little endian):
 *   magic "WICE" | version u16 | K_on u16 | I_d u16 | count u32 | flags u16
 * followed by per-record float32 matrices of shape [2*K_on, I_d]
 * (row-major; real part stacked above the imaginary part), the input
 * grid first and, when flags bit0 is set, the target grid.
 */

import * as fs from 'node:fs';

export const MAGIC = 'WICE';
export const VERSION = 1;
export const FLAG_HAS_TARGET = 0x1;
const HEADER_BYTES = 16;

export interface DatasetRecord {
  input: Float32Array;            // length rows*cols, row-major
  target: Float32Array | null;
}

export interface Dataset {
  kOn: number;
  cols: number;                   // I_d
  rows: number;                   // 2 * K_on
  records: DatasetRecord[];
}

export function readDataset(filePath: string): Dataset {
  const blob = fs.readFileSync(filePath);
  if (blob.length < HEADER_BYTES) {
    throw new Error(`${filePath}: truncated header`);
  }
  const view = new DataView(blob.buffer, blob.byteOffset, blob.byteLength);
  const magic = blob.toString('latin1', 0, 4);
  if (magic !== MAGIC) {
    throw new Error(`${filePath}: magic mismatch (found ${JSON.stringify(magic)})`);
  }
  const version = view.getUint16(4, true);
  if (version !== VERSION) {
    throw new Error(`${filePath}: unsupported container version ${version}`);
  }
  const kOn = view.getUint16(6, true);
  const cols = view.getUint16(8, true);
  const count = view.getUint32(10, true);
  const flags = view.getUint16(14, true);
  const hasTarget = (flags & FLAG_HAS_TARGET) !== 0;

  const rows = 2 * kOn;
  const perMatrix = rows * cols;
  const expected = HEADER_BYTES + count * (hasTarget ? 2 : 1) * perMatrix * 4;
  if (blob.length !== expected) {
    throw new Error(`${filePath}: file size ${blob.length} does not match header (${expected} expected)`);
  }

  const records: DatasetRecord[] = [];
  let offset = HEADER_BYTES;
  const readMatrix = (): Float32Array => {
    const out = new Float32Array(perMatrix);
    for (let i = 0; i < perMatrix; i++, offset += 4) {
      out[i] = view.getFloat32(offset, true);
    }
    return out;
  };
  for (let r = 0; r < count; r++) {
    const input = readMatrix();
    const target = hasTarget ? readMatrix() : null;
    records.push({ input, target });
  }
  return { kOn, cols, rows, records };
}

export function writeDataset(filePath: string, dataset: Dataset): void {
  const hasTarget = dataset.records.length > 0 && dataset.records[0].target !== null;
  const perMatrix = dataset.rows * dataset.cols;
  const total = HEADER_BYTES
    + dataset.records.length * (hasTarget ? 2 : 1) * perMatrix * 4;
  const buf = Buffer.alloc(total);
  buf.write(MAGIC, 0, 'latin1');
  buf.writeUInt16LE(VERSION, 4);
  buf.writeUInt16LE(dataset.kOn, 6);
  buf.writeUInt16LE(dataset.cols, 8);
  buf.writeUInt32LE(dataset.records.length, 10);
  buf.writeUInt16LE(hasTarget ? FLAG_HAS_TARGET : 0, 14);

  let offset = HEADER_BYTES;
  const writeMatrix = (m: Float32Array) => {
    if (m.length !== perMatrix) throw new Error('record dimensions differ from header');
    for (let i = 0; i < m.length; i++, offset += 4) buf.writeFloatLE(m[i], offset);
  };
  for (const rec of dataset.records) {
    writeMatrix(rec.input);
    if (hasTarget) {
      if (!rec.target) throw new Error('records must uniformly carry targets');
      writeMatrix(rec.target);
    }
  }
  fs.writeFileSync(filePath, buf);
}

/** Squared error of the stacked grid vs its reference, normalized by the
 * reference energy (real-stacked representation makes this the complex
 * NMSE as well). */
export function nmse(estimate: Float32Array, reference: Float32Array): number {
  if (estimate.length !== reference.length || reference.length === 0) {
    throw new Error('estimate/reference length mismatch');
  }
  let err = 0;
  let pow = 0;
  for (let i = 0; i < estimate.length; i++) {
    const d = estimate[i] - reference[i];
    err += d * d;
    pow += reference[i] * reference[i];
  }
  if (pow === 0) throw new Error('reference has zero energy');
  return err / pow;
}

export function toDb(x: number): number {
  return 10 * Math.log10(x);
}
