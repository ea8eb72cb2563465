/** Training loop: SGD with step-decayed learning rate and mini-batch
 * gradient accumulation, minimizing the weighted pose loss.
 */

import * as path from "path";
import * as tf from "@tensorflow/tfjs";

import { loadSplit } from "./data";
import { DEFAULT_WEIGHTS, poseLossTensor } from "./loss";
import { ManifestRecord, readManifest, writeManifest } from "./manifest";
import { buildModel, DEFAULT_MODEL, ModelConfig } from "./model";
import { MeanImage, readMeanImage } from "./psmean";

export interface TrainerConfig {
  datasetRoot: string;
  trainManifest: string; // relative to datasetRoot
  meanImage: string | null; // relative to datasetRoot, null = no subtraction
  epochs: number;
  batchSize: number;
  accumSteps: number; // gradient-accumulation steps per update
  baseLearningRate: number;
  momentum: number; // classical SGD momentum, 0 disables
  stepEpochs: number; // decay the rate every this many epochs
  decayFactor: number; // in (0, 1]
  lossWeights: number[];
  seed: number;
  /** multiplies mean-subtracted pixels before the network (conditioning) */
  inputScale: number;
  /**
   * fixed per-component gain applied to the 6 raw network outputs to get
   * the pose; lets the net work in O(1) units while targets span meters
   * and up to ±180 degrees
   */
  outputScale: number[];
  /** integer block-average factor applied to frames before the network */
  downsample: number;
  model?: Partial<Omit<ModelConfig, "seed">>;
}

export const DEFAULT_CONFIG: Omit<TrainerConfig, "datasetRoot"> = {
  trainManifest: "train.csv",
  meanImage: "mean.psmean",
  epochs: 300,
  batchSize: 90,
  accumSteps: 1,
  baseLearningRate: 1e-5,
  momentum: 0.9,
  stepEpochs: 30,
  decayFactor: 0.1,
  lossWeights: DEFAULT_WEIGHTS,
  seed: 1,
  inputScale: 1 / 255,
  outputScale: [1, 1, 1, 1, 1, 1],
  downsample: 1,
};

export interface TrainResult {
  model: tf.Sequential;
  /** mean training loss per epoch */
  lossCurve: number[];
}

function validateConfig(cfg: TrainerConfig): void {
  const positive: [string, number][] = [
    ["epochs", cfg.epochs + 1], // epochs 0 is allowed
    ["batchSize", cfg.batchSize],
    ["accumSteps", cfg.accumSteps],
    ["baseLearningRate", cfg.baseLearningRate],
    ["stepEpochs", cfg.stepEpochs],
  ];
  for (const [name, value] of positive) {
    if (!(value > 0)) throw new Error(`${name} must be positive`);
  }
  if (!(cfg.decayFactor > 0 && cfg.decayFactor <= 1)) {
    throw new Error("decayFactor must be in (0, 1]");
  }
  if (!(cfg.momentum >= 0 && cfg.momentum < 1)) {
    throw new Error("momentum must be in [0, 1)");
  }
  if (cfg.lossWeights.length !== 6 || cfg.lossWeights.some((w) => w < 0)) {
    throw new Error("lossWeights must be 6 non-negative values");
  }
  if (cfg.outputScale.length !== 6 || cfg.outputScale.some((s) => !(s > 0))) {
    throw new Error("outputScale must be 6 positive values");
  }
  if (!Number.isInteger(cfg.downsample) || cfg.downsample < 1) {
    throw new Error("downsample must be a positive integer");
  }
}

/** Deterministic PRNG for shuffling (mulberry32). */
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

function shuffled(n: number, rand: () => number): number[] {
  const order = Array.from({ length: n }, (_, i) => i);
  for (let i = n - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [order[i], order[j]] = [order[j], order[i]];
  }
  return order;
}

export function learningRate(cfg: TrainerConfig, epoch: number): number {
  return (
    cfg.baseLearningRate * cfg.decayFactor ** Math.floor(epoch / cfg.stepEpochs)
  );
}

export function train(
  cfg: TrainerConfig,
  log: (msg: string) => void = console.log,
): TrainResult {
  validateConfig(cfg);
  tf.backend(); // force backend initialization so the startup log is accurate
  log(
    `backend=${tf.getBackend()} seed=${cfg.seed} — deterministic given ` +
      `seed up to backend reduction-order caveats`,
  );
  const records = readManifest(path.join(cfg.datasetRoot, cfg.trainManifest));
  const mean: MeanImage | null =
    cfg.meanImage === null
      ? null
      : readMeanImage(path.join(cfg.datasetRoot, cfg.meanImage));
  const split = loadSplit(cfg.datasetRoot, records, mean, {
    trainOnly: true,
    inputScale: cfg.inputScale,
    downsample: cfg.downsample,
  });

  const inputSize = split.x.shape[1];
  if (split.x.shape[2] !== inputSize) {
    throw new Error("only square inputs are supported");
  }
  const model = buildModel({
    ...DEFAULT_MODEL,
    inputSize,
    ...cfg.model,
    seed: cfg.seed,
  });

  const vars = model.trainableWeights.map((w) => w.read() as tf.Variable);
  const rand = makeRng(cfg.seed);
  const lossCurve: number[] = [];
  const n = split.records.length;
  const optimizer =
    cfg.momentum > 0
      ? tf.train.momentum(cfg.baseLearningRate, cfg.momentum)
      : tf.train.sgd(cfg.baseLearningRate);

  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    const lr = learningRate(cfg, epoch);
    (optimizer as tf.SGDOptimizer).setLearningRate(lr);
    const order = shuffled(n, rand);
    let epochLoss = 0;
    let batches = 0;
    let accum: tf.Tensor[] | null = null;
    let accumCount = 0;

    for (let start = 0; start < n; start += cfg.batchSize) {
      const idx = order.slice(start, start + cfg.batchSize);
      const { value, grads } = tf.tidy(() => {
        const bx = tf.gather(split.x, idx);
        const by = tf.gather(split.y, idx);
        const f = () =>
          poseLossTensor(
            tf.mul(
              model.apply(bx) as tf.Tensor2D,
              tf.tensor1d(cfg.outputScale),
            ) as tf.Tensor2D,
            by as tf.Tensor2D,
            cfg.lossWeights,
          );
        const g = tf.variableGrads(f, vars);
        return { value: g.value.arraySync() as number, grads: Object.values(g.grads) };
      });
      epochLoss += value;
      batches += 1;

      if (accum === null) {
        accum = grads;
      } else {
        const prev: tf.Tensor[] = accum;
        accum = grads.map((g, i): tf.Tensor => {
          const sum: tf.Tensor = tf.add(prev[i], g);
          prev[i].dispose();
          g.dispose();
          return sum;
        });
      }
      accumCount += 1;

      const last = start + cfg.batchSize >= n;
      if (accumCount === cfg.accumSteps || last) {
        const named: tf.NamedTensorMap = {};
        vars.forEach((v, i) => {
          named[v.name] = tf.div(accum![i], accumCount);
        });
        optimizer.applyGradients(named);
        Object.values(named).forEach((t) => t.dispose());
        accum.forEach((t) => t.dispose());
        accum = null;
        accumCount = 0;
      }
    }
    const meanLoss = epochLoss / batches;
    lossCurve.push(meanLoss);
    log(`epoch ${epoch + 1}/${cfg.epochs} lr=${lr.toExponential(1)} loss=${meanLoss.toFixed(4)}`);
  }

  optimizer.dispose();
  split.x.dispose();
  split.y.dispose();
  return { model, lossCurve };
}

export interface PredictOptions {
  meanImage?: string | null;
  inputScale?: number;
  outputScale?: number[];
  downsample?: number;
  batchSize?: number;
}

/** Run the model over a query manifest and write a predictions manifest. */
export function predict(
  model: tf.LayersModel,
  datasetRoot: string,
  queryManifest: string,
  outPath: string,
  opts: PredictOptions = {},
): ManifestRecord[] {
  const meanImage = opts.meanImage === undefined ? "mean.psmean" : opts.meanImage;
  const inputScale = opts.inputScale ?? 1 / 255;
  const outputScale = opts.outputScale ?? [1, 1, 1, 1, 1, 1];
  const batchSize = opts.batchSize ?? 64;
  const records = readManifest(path.join(datasetRoot, queryManifest));
  if (records.length === 0) {
    writeManifest([], outPath);
    return [];
  }
  const mean =
    meanImage === null ? null : readMeanImage(path.join(datasetRoot, meanImage));
  const split = loadSplit(datasetRoot, records, mean, {
    inputScale,
    downsample: opts.downsample ?? 1,
  });
  const preds: ManifestRecord[] = [];
  for (let start = 0; start < records.length; start += batchSize) {
    const count = Math.min(batchSize, records.length - start);
    const out = tf.tidy(() => {
      const bx = tf.slice(split.x, [start, 0, 0, 0], [count, -1, -1, -1]);
      const raw = tf.mul(model.apply(bx) as tf.Tensor2D, tf.tensor1d(outputScale));
      return raw.arraySync() as number[][];
    });
    out.forEach((pose, i) => {
      preds.push({ imagePath: records[start + i].imagePath, pose });
    });
  }
  split.x.dispose();
  split.y.dispose();
  writeManifest(preds, outPath);
  return preds;
}
