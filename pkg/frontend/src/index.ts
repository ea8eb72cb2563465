export { ManifestError, ManifestRecord, readManifest, writeManifest } from "./manifest";
export { MeanImage, readMeanImage } from "./psmean";
export { Image, loadPng } from "./png";
export { DEFAULT_WEIGHTS, poseLoss, poseLossTensor } from "./loss";
export { DEFAULT_MODEL, ModelConfig, buildModel } from "./model";
export { LoadedSplit, auditTrainPaths, blockAverage, loadImage, loadSplit } from "./data";
export {
  DEFAULT_CONFIG,
  PredictOptions,
  TrainResult,
  TrainerConfig,
  learningRate,
  predict,
  train,
} from "./trainer";
