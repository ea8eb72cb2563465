/** PSMEAN1 mean-image reader.
 *
 * Layout: ASCII magic "PSMEAN1\n", an ASCII "<width> <height>\n" line,
 * then height*width*3 little-endian float32 values in row-major HWC order.
 */

import * as fs from "fs";

const MEAN_MAGIC = "PSMEAN1\n";

export interface MeanImage {
  width: number;
  height: number;
  /** row-major HWC, length height*width*3 */
  data: Float32Array;
}

export function readMeanImage(path: string): MeanImage {
  const buf = fs.readFileSync(path);
  if (buf.subarray(0, MEAN_MAGIC.length).toString("ascii") !== MEAN_MAGIC) {
    throw new Error(`${path}: not a PSMEAN1 file`);
  }
  const nl = buf.indexOf(0x0a, MEAN_MAGIC.length);
  if (nl < 0) {
    throw new Error(`${path}: malformed dimension line`);
  }
  const dims = buf.subarray(MEAN_MAGIC.length, nl).toString("ascii").split(" ");
  if (dims.length !== 2) {
    throw new Error(`${path}: malformed dimension line`);
  }
  const width = parseInt(dims[0], 10);
  const height = parseInt(dims[1], 10);
  if (!(width > 0) || !(height > 0)) {
    throw new Error(`${path}: bad dimensions ${dims.join("x")}`);
  }
  const count = width * height * 3;
  const body = buf.subarray(nl + 1);
  if (body.length < count * 4) {
    throw new Error(`${path}: truncated mean data`);
  }
  const data = new Float32Array(count);
  for (let i = 0; i < count; i++) {
    data[i] = body.readFloatLE(i * 4);
  }
  return { width, height, data };
}
