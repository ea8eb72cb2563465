import * as tf from "@tensorflow/tfjs";
import { describe, expect, it } from "vitest";

import { poseLoss, poseLossTensor } from "../src/loss";

/** xorshift-style deterministic PRNG for reproducible random triples */
function makeRng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** d(loss)/d(pred_i) = w_i² · diff_i / loss, diff wrapped for angles. */
function analyticGrad(pred: number[], gt: number[], w: number[]): number[] {
  const loss = poseLoss(pred, gt, w);
  return pred.map((p, i) => {
    let d = p - gt[i];
    if (i >= 3) {
      d = ((((d + 180) % 360) + 360) % 360) - 180;
      if (d === -180) d = 180;
    }
    return (w[i] * w[i] * d) / loss;
  });
}

describe("gradient check", () => {
  it("analytic gradient matches central finite differences to 1e-4", () => {
    const rand = makeRng(99);
    const h = 1e-6;
    let worst = 0;
    for (let trial = 0; trial < 200; trial++) {
      const pred = Array.from({ length: 6 }, (_, i) =>
        (rand() * 2 - 1) * (i < 3 ? 10 : 170),
      );
      const gt = Array.from({ length: 6 }, (_, i) =>
        (rand() * 2 - 1) * (i < 3 ? 10 : 170),
      );
      const w = Array.from({ length: 6 }, () => 0.1 + rand());
      const analytic = analyticGrad(pred, gt, w);
      const fd = analytic.map((_, i) => {
        const plus = [...pred];
        const minus = [...pred];
        plus[i] += h;
        minus[i] -= h;
        return (poseLoss(plus, gt, w) - poseLoss(minus, gt, w)) / (2 * h);
      });
      // error relative to the gradient vector norm, so near-zero components
      // are not judged against their own cancellation-dominated magnitude
      const norm = Math.max(Math.hypot(...analytic), Math.hypot(...fd));
      for (let i = 0; i < 6; i++) {
        worst = Math.max(worst, Math.abs(analytic[i] - fd[i]) / norm);
      }
    }
    const ok = worst <= 1e-4;
    process.stdout.write(
      `ACCEPTANCE gradient-check: ${ok ? "PASS" : "FAIL"}  ` +
        `(worst rel err ${worst.toExponential(2)} over 200 triples x 6 outputs)\n`,
    );
    expect(worst).toBeLessThanOrEqual(1e-4);
  });

  it("autodiff gradient of the tensor loss agrees with the analytic form", () => {
    const rand = makeRng(1234);
    let worst = 0;
    for (let trial = 0; trial < 50; trial++) {
      const pred = Array.from({ length: 6 }, (_, i) =>
        (rand() * 2 - 1) * (i < 3 ? 10 : 170),
      );
      const gt = Array.from({ length: 6 }, (_, i) =>
        (rand() * 2 - 1) * (i < 3 ? 10 : 170),
      );
      const w = Array.from({ length: 6 }, () => 0.1 + rand());
      const analytic = analyticGrad(pred, gt, w);
      const auto = (
        tf.grad((p: tf.Tensor2D) => poseLossTensor(p, tf.tensor2d([gt]), w))(
          tf.tensor2d([pred]),
        ).arraySync() as number[][]
      )[0];
      const norm = Math.hypot(...analytic);
      for (let i = 0; i < 6; i++) {
        worst = Math.max(worst, Math.abs(analytic[i] - auto[i]) / norm);
      }
    }
    // float32 autodiff vs float64 analytic: precision-limited tolerance
    expect(worst).toBeLessThanOrEqual(1e-3);
  });
});
