/** Small convolutional pose regressor.
 *
 * A few strided conv+relu stages, a penultimate fully-connected layer,
 * and a linear 6-unit output head (x, y, z, pitch, yaw, roll).
 */

import * as tf from "@tensorflow/tfjs";

export interface ModelConfig {
  inputSize: number; // square input, pixels
  convFilters: number[]; // one entry per stride-2 conv stage
  penultimateUnits: number;
  seed: number;
}

export const DEFAULT_MODEL: Omit<ModelConfig, "seed"> = {
  inputSize: 224,
  convFilters: [16, 32, 64],
  penultimateUnits: 128,
};

export function buildModel(cfg: ModelConfig): tf.Sequential {
  if (cfg.inputSize < 2 ** cfg.convFilters.length) {
    throw new Error(
      `input size ${cfg.inputSize} too small for ${cfg.convFilters.length} stride-2 stages`,
    );
  }
  const model = tf.sequential();
  let seed = cfg.seed;
  cfg.convFilters.forEach((filters, i) => {
    model.add(
      tf.layers.conv2d({
        inputShape: i === 0 ? [cfg.inputSize, cfg.inputSize, 3] : undefined,
        filters,
        kernelSize: 3,
        strides: 2,
        padding: "same",
        activation: "relu",
        kernelInitializer: tf.initializers.glorotUniform({ seed: seed++ }),
        biasInitializer: "zeros",
      }),
    );
  });
  model.add(tf.layers.flatten());
  model.add(
    tf.layers.dense({
      units: cfg.penultimateUnits,
      activation: "relu",
      kernelInitializer: tf.initializers.glorotUniform({ seed: seed++ }),
      biasInitializer: "zeros",
    }),
  );
  model.add(
    tf.layers.dense({
      units: 6,
      kernelInitializer: tf.initializers.glorotUniform({ seed: seed++ }),
      biasInitializer: "zeros",
    }),
  );
  return model;
}
