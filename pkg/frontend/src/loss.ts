/** Weighted 6-DOF pose loss.
 *
 * loss(pred, gt) = || w ⊙ (pred − gt) ||₂ where the three orientation
 * components of the difference are wrapped into (−180, 180] degrees
 * before weighting. Matches the loss used by `posesynth eval`.
 */

import * as tf from "@tensorflow/tfjs";

export const DEFAULT_WEIGHTS = [1, 1, 1, 1, 1, 1];

function wrapDeg(d: number): number {
  let w = ((d + 180) % 360 + 360) % 360 - 180;
  if (w === -180) w = 180;
  return w;
}

/** Scalar loss on plain arrays: [x, y, z, pitch, yaw, roll]. */
export function poseLoss(pred: number[], gt: number[], w: number[]): number {
  let sum = 0;
  for (let i = 0; i < 6; i++) {
    const d = i < 3 ? pred[i] - gt[i] : wrapDeg(pred[i] - gt[i]);
    sum += (w[i] * d) ** 2;
  }
  return Math.sqrt(sum);
}

/**
 * Batched loss as a tensor op: pred and gt are (N, 6), returns the mean
 * of the per-sample losses. Differentiable w.r.t. pred (angle wrapping is
 * a shift by a locally constant multiple of 360°, so its gradient is the
 * plain difference gradient).
 */
export function poseLossTensor(
  pred: tf.Tensor2D,
  gt: tf.Tensor2D,
  w: number[],
): tf.Scalar {
  return tf.tidy(() => {
    const diff = tf.sub(pred, gt);
    const pos = tf.slice(diff, [0, 0], [-1, 3]);
    const ang = tf.slice(diff, [0, 3], [-1, 3]);
    const wrapped = tf.sub(tf.mod(tf.add(ang, 180), 360), 180);
    const weighted = tf.mul(tf.concat([pos, wrapped], 1), tf.tensor1d(w));
    // sqrt has an infinite gradient at 0; the epsilon keeps exact-match
    // samples (e.g. an overfit toy set) finite without moving the loss
    // at any realistic error magnitude
    const norm = tf.sqrt(tf.add(tf.sum(tf.square(weighted), 1), 1e-12));
    return tf.mean(norm);
  });
}
