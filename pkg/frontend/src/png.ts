/** PNG loading for the data pipeline. */

import * as fs from "fs";
import { PNG } from "pngjs";

export interface Image {
  width: number;
  height: number;
  /** row-major HWC RGB, values 0..255 */
  data: Float32Array;
}

export function loadPng(path: string): Image {
  if (!fs.existsSync(path)) {
    throw new Error(`missing image: ${path}`);
  }
  const png = PNG.sync.read(fs.readFileSync(path));
  const n = png.width * png.height;
  const data = new Float32Array(n * 3);
  for (let i = 0; i < n; i++) {
    data[i * 3] = png.data[i * 4];
    data[i * 3 + 1] = png.data[i * 4 + 1];
    data[i * 3 + 2] = png.data[i * 4 + 2];
  }
  return { width: png.width, height: png.height, data };
}
