#!/usr/bin/env python3
"""Regenerate test/fixtures/loss_triples.json from the posesynth library.

100 random (pred, gt, w) triples with the reference loss value, so the
trainer's loss implementation can be cross-checked against the one used
by `posesynth eval`.
"""

import json
from pathlib import Path

import numpy as np

from posesynth.geometry import LossWeights, Pose, pose_loss

rng = np.random.default_rng(20240817)
triples = []
for i in range(100):
    pred = np.concatenate([rng.uniform(-10, 10, 3), rng.uniform(-180, 180, 3)])
    gt = np.concatenate([rng.uniform(-10, 10, 3), rng.uniform(-180, 180, 3)])
    if i % 10 == 0:  # exercise the wrap boundary
        pred[4], gt[4] = 179.0, -179.0
    w = rng.uniform(0.0, 2.0, 6)
    loss = pose_loss(Pose(pred[:3], pred[3:]), Pose(gt[:3], gt[3:]),
                     LossWeights(w))
    triples.append({"pred": pred.tolist(), "gt": gt.tolist(),
                    "w": w.tolist(), "loss": float(loss)})

out = Path(__file__).resolve().parent.parent / "test" / "fixtures" / "loss_triples.json"
out.write_text(json.dumps(triples, indent=1) + "\n")
print(f"wrote {len(triples)} triples to {out}")
