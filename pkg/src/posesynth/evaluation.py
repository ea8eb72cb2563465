"""Scoring of pose predictions and a nearest-neighbor retrieval baseline.

Position error is the Euclidean distance in meters; orientation error is
the geodesic rotation angle in degrees. Both median and mean are reported.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import ManifestRecord, MeanImage, read_manifest
from .geometry import Pose, geodesic_angle
from .renderer import load_png


@dataclass(frozen=True)
class Metrics:
    median_pos_m: float
    mean_pos_m: float
    median_ori_deg: float
    mean_ori_deg: float
    count: int


@dataclass(frozen=True)
class Prediction:
    image_path: str
    pose: Pose


def evaluate(preds, gt_records) -> Metrics:
    """Score predictions against ground-truth manifest records."""
    if not preds:
        raise ValueError("no predictions to evaluate")
    gt_by_path = {r.image_path: r.pose for r in gt_records}
    pos_errors = []
    ori_errors = []
    for pred in preds:
        if pred.image_path not in gt_by_path:
            raise ValueError(f"prediction for unknown image {pred.image_path!r}")
        gt = gt_by_path[pred.image_path]
        pos_errors.append(float(np.linalg.norm(pred.pose.position - gt.position)))
        ori_errors.append(geodesic_angle(pred.pose.orientation, gt.orientation))
    return Metrics(
        median_pos_m=statistics.median(pos_errors),
        mean_pos_m=statistics.fmean(pos_errors),
        median_ori_deg=statistics.median(ori_errors),
        mean_ori_deg=statistics.fmean(ori_errors),
        count=len(preds),
    )


def format_report(rows) -> str:
    """Fixed-width table of (label, Metrics): one line per statistic, cells
    rendered like "1.54m, 0.92°"."""
    if not rows:
        raise ValueError("no rows to report")
    label_w = max(len("scene/run"), max(len(label) for label, _ in rows))
    lines = [f"{'scene/run':<{label_w}}  {'stat':<6}  {'pos, ori':<16}  n"]
    lines.append("-" * len(lines[0]))
    for label, m in rows:
        med = f"{m.median_pos_m:.2f}m, {m.median_ori_deg:.2f}°"
        avg = f"{m.mean_pos_m:.2f}m, {m.mean_ori_deg:.2f}°"
        lines.append(f"{label:<{label_w}}  {'median':<6}  {med:<16}  {m.count}")
        lines.append(f"{'':<{label_w}}  {'mean':<6}  {avg:<16}  {m.count}")
    return "\n".join(lines)


def image_descriptor(img: np.ndarray, mean: MeanImage | None,
                     descriptor_size: int = 16) -> np.ndarray:
    """Mean-subtracted grayscale descriptor, block-averaged to size^2."""
    pix = img.astype(np.float64)
    if mean is not None:
        if mean.mean.shape != pix.shape:
            raise ValueError("mean image dimensions do not match")
        pix = pix - mean.mean
    gray = pix.mean(axis=2)
    h, w = gray.shape
    ys = (np.arange(descriptor_size + 1) * h) // descriptor_size
    xs = (np.arange(descriptor_size + 1) * w) // descriptor_size
    desc = np.empty((descriptor_size, descriptor_size))
    for i in range(descriptor_size):
        for j in range(descriptor_size):
            desc[i, j] = gray[ys[i]:ys[i + 1], xs[j]:xs[j + 1]].mean()
    return desc.ravel()


class KnnBaseline:
    """1-nearest-neighbor pose regressor over downsampled image descriptors.

    Ties in descriptor distance break to the lowest manifest index, so
    predictions are deterministic.
    """

    def __init__(self, train_records, root, mean: MeanImage | None = None,
                 descriptor_size: int = 16):
        if not train_records:
            raise ValueError("train manifest is empty")
        self.records = list(train_records)
        self.root = Path(root)
        self.mean = mean
        self.descriptor_size = descriptor_size
        self._train = np.stack([
            image_descriptor(load_png(self.root / r.image_path), mean,
                             descriptor_size)
            for r in self.records])

    def predict_image(self, img: np.ndarray) -> Pose:
        q = image_descriptor(img, self.mean, self.descriptor_size)
        d2 = np.sum((self._train - q) ** 2, axis=1)
        return self.records[int(np.argmin(d2))].pose  # argmin takes first tie

    def predict_path(self, image_path) -> Pose:
        return self.predict_image(load_png(image_path))


def knn_predict(train_records, root, query_image_path,
                mean: MeanImage | None = None,
                descriptor_size: int = 16) -> Pose:
    """One-shot convenience wrapper around KnnBaseline."""
    baseline = KnnBaseline(train_records, root, mean, descriptor_size)
    return baseline.predict_path(query_image_path)
