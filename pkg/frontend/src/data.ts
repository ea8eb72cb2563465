/** Training data loading: manifest → mean-subtracted image tensors.
 *
 * The loader audits every path it is asked to read: a training loader
 * refuses any image outside images/train/, so held-out frames can never
 * leak into the optimizer.
 */

import * as path from "path";
import * as tf from "@tensorflow/tfjs";

import { ManifestRecord } from "./manifest";
import { loadPng } from "./png";
import { MeanImage } from "./psmean";

export interface LoadedSplit {
  /** (N, H, W, 3) mean-subtracted inputs */
  x: tf.Tensor4D;
  /** (N, 6) pose targets */
  y: tf.Tensor2D;
  records: ManifestRecord[];
}

export function auditTrainPaths(records: ManifestRecord[]): void {
  for (const rec of records) {
    const parts = rec.imagePath.split("/");
    if (parts[0] !== "images" || parts[1] !== "train") {
      throw new Error(
        `training loader refuses non-train image: ${rec.imagePath}`,
      );
    }
  }
}

export function loadImage(
  root: string,
  rec: ManifestRecord,
  mean: MeanImage | null,
  inputScale = 1,
): Float32Array {
  const img = loadPng(path.join(root, rec.imagePath));
  if (mean !== null) {
    if (img.width !== mean.width || img.height !== mean.height) {
      throw new Error(
        `mean image is ${mean.width}x${mean.height} but ` +
          `${rec.imagePath} is ${img.width}x${img.height}`,
      );
    }
    for (let i = 0; i < img.data.length; i++) {
      img.data[i] = (img.data[i] - mean.data[i]) * inputScale;
    }
  } else if (inputScale !== 1) {
    for (let i = 0; i < img.data.length; i++) {
      img.data[i] *= inputScale;
    }
  }
  return img.data;
}

/** Block-average an HWC image by an integer factor (exact box filter). */
export function blockAverage(
  data: Float32Array,
  width: number,
  height: number,
  factor: number,
): Float32Array {
  if (factor === 1) return data;
  if (width % factor !== 0 || height % factor !== 0) {
    throw new Error(`image ${width}x${height} not divisible by ${factor}`);
  }
  const ow = width / factor;
  const oh = height / factor;
  const out = new Float32Array(ow * oh * 3);
  const norm = 1 / (factor * factor);
  for (let y = 0; y < height; y++) {
    const oy = Math.floor(y / factor);
    for (let x = 0; x < width; x++) {
      const ox = Math.floor(x / factor);
      for (let c = 0; c < 3; c++) {
        out[(oy * ow + ox) * 3 + c] += data[(y * width + x) * 3 + c] * norm;
      }
    }
  }
  return out;
}

export function loadSplit(
  root: string,
  records: ManifestRecord[],
  mean: MeanImage | null,
  opts: { trainOnly?: boolean; inputScale?: number; downsample?: number } = {},
): LoadedSplit {
  if (opts.trainOnly) {
    auditTrainPaths(records);
  }
  if (records.length === 0) {
    throw new Error("empty manifest");
  }
  const factor = opts.downsample ?? 1;
  const first = loadPng(path.join(root, records[0].imagePath));
  const srcH = first.height;
  const srcW = first.width;
  const h = srcH / factor;
  const w = srcW / factor;
  const xs = new Float32Array(records.length * h * w * 3);
  const ys = new Float32Array(records.length * 6);
  records.forEach((rec, i) => {
    const raw = loadImage(root, rec, mean, opts.inputScale ?? 1);
    if (raw.length !== srcH * srcW * 3) {
      throw new Error(`image size mismatch: ${rec.imagePath}`);
    }
    const data = blockAverage(raw, srcW, srcH, factor);
    xs.set(data, i * h * w * 3);
    ys.set(rec.pose, i * 6);
  });
  return {
    x: tf.tensor4d(xs, [records.length, h, w, 3]),
    y: tf.tensor2d(ys, [records.length, 6]),
    records,
  };
}
