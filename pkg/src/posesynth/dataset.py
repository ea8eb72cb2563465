"""Dataset generation and persistence: manifests, splits, mean image.

Layout under the output root:

    images/train/  images/testA/  images/testB/
    train.csv  testA.csv  testB.csv        (manifests)
    mean.psmean                            (train mean image)
    config.echo.json                       (generation config echo)

Manifest format: UTF-8 CSV, first line "# posesynth-manifest v1", header
"image,x,y,z,pitch,yaw,roll", floats with 6 decimal places.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .camera import Intrinsics
from .errors import ManifestError
from .geometry import Pose
from .pointcloud import PointCloud
from .renderer import RenderOptions, center_crop_resize, load_png, save_png, splat_render
from .sampler import GridSpec, OrientationSpec, enumerate_poses

MANIFEST_MAGIC = "# posesynth-manifest v1"
MANIFEST_HEADER = "image,x,y,z,pitch,yaw,roll"
MEAN_MAGIC = b"PSMEAN1\n"
INCOMPLETE_MARKER = "INCOMPLETE.json"


@dataclass(frozen=True)
class ManifestRecord:
    image_path: str  # relative to the dataset root
    pose: Pose


@dataclass(frozen=True)
class DatasetLayout:
    root: Path

    @property
    def train_manifest(self) -> Path:
        return self.root / "train.csv"

    @property
    def testA_manifest(self) -> Path:
        return self.root / "testA.csv"

    @property
    def testB_manifest(self) -> Path:
        return self.root / "testB.csv"

    @property
    def mean_path(self) -> Path:
        return self.root / "mean.psmean"

    def image_dir(self, split: str) -> Path:
        return self.root / "images" / split


def write_manifest(records, path):
    seen = set()
    lines = [MANIFEST_MAGIC, MANIFEST_HEADER]
    for rec in records:
        if not rec.image_path:
            raise ManifestError("empty image path")
        if rec.image_path in seen:
            raise ManifestError(f"duplicate image path {rec.image_path!r}")
        seen.add(rec.image_path)
        x, y, z = rec.pose.position
        p, yw, r = rec.pose.orientation
        lines.append(f"{rec.image_path},{x:.6f},{y:.6f},{z:.6f},"
                     f"{p:.6f},{yw:.6f},{r:.6f}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path) -> list[ManifestRecord]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0].strip() != MANIFEST_MAGIC:
        raise ManifestError(f"{path}: missing magic line {MANIFEST_MAGIC!r}", 1)
    if len(lines) < 2 or lines[1].strip() != MANIFEST_HEADER:
        raise ManifestError(f"{path}: bad header, expected {MANIFEST_HEADER!r}", 2)
    records = []
    seen = set()
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 7:
            raise ManifestError(
                f"{path}: expected 7 fields, got {len(fields)}", lineno)
        image_path = fields[0]
        if image_path in seen:
            raise ManifestError(f"{path}: duplicate image path {image_path!r}",
                                lineno)
        seen.add(image_path)
        try:
            vals = [float(v) for v in fields[1:]]
        except ValueError:
            raise ManifestError(f"{path}: non-numeric pose field", lineno)
        if not all(np.isfinite(vals)):
            raise ManifestError(f"{path}: non-finite pose field", lineno)
        records.append(ManifestRecord(
            image_path, Pose(np.array(vals[:3]), np.array(vals[3:]))))
    return records


@dataclass
class GenerationSummary:
    train_count: int
    testB_count: int
    total_poses: int


def generate_dataset(cloud: PointCloud, intr: Intrinsics, grid: GridSpec,
                     orient: OrientationSpec, opts: RenderOptions,
                     holdout_every: int, out_root,
                     threads: int = 1,
                     config_echo: dict | None = None,
                     compute_mean: bool = True):
    """Render every sampled pose to disk and write split manifests.

    Every holdout_every-th pose (by enumeration index, 1-based) goes to
    testB; the rest to train. holdout_every = 0 disables the holdout.
    """
    if holdout_every == 1 or holdout_every < 0:
        raise ValueError("holdout_every must be 0 (no holdout) or >= 2")
    root = Path(out_root)
    layout = DatasetLayout(root)
    poses = enumerate_poses(grid, orient)

    root.mkdir(parents=True, exist_ok=True)
    for split in ("train", "testA", "testB"):
        layout.image_dir(split).mkdir(parents=True, exist_ok=True)
    marker = root / INCOMPLETE_MARKER
    marker.write_text(json.dumps({"status": "incomplete",
                                  "total_poses": len(poses)}) + "\n")

    jobs = []
    for i, pose in enumerate(poses):
        split = "testB" if holdout_every and (i + 1) % holdout_every == 0 else "train"
        rel = f"images/{split}/pose_{i:06d}.png"
        jobs.append((i, pose, split, rel))

    def render_one(job):
        _, pose, _, rel = job
        save_png(splat_render(cloud, intr, pose, opts), root / rel)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(render_one, jobs))
    else:
        for job in jobs:
            render_one(job)

    train = [ManifestRecord(rel, pose) for _, pose, split, rel in jobs
             if split == "train"]
    testB = [ManifestRecord(rel, pose) for _, pose, split, rel in jobs
             if split == "testB"]
    write_manifest(train, layout.train_manifest)
    write_manifest(testB, layout.testB_manifest)
    if not layout.testA_manifest.exists():
        write_manifest([], layout.testA_manifest)
    if compute_mean and train:
        mean = compute_mean_image(layout.train_manifest, root)
        write_mean_image(mean, layout.mean_path)
    if config_echo is not None:
        (root / "config.echo.json").write_text(
            json.dumps(config_echo, indent=2, sort_keys=True) + "\n")
    marker.unlink()
    return layout, GenerationSummary(len(train), len(testB), len(poses))


def ingest_real_frames(frames_dir, poses_manifest, target_size, out_root,
                       split: str = "testA") -> list[ManifestRecord]:
    """Copy externally-posed real frames into the layout, center-crop-resized.

    poses_manifest lists frame filenames (relative to frames_dir) with their
    registered poses. Mirroring is never applied.
    """
    frames_dir = Path(frames_dir)
    root = Path(out_root)
    tw, th = target_size
    records = read_manifest(poses_manifest)
    layout = DatasetLayout(root)
    layout.image_dir(split).mkdir(parents=True, exist_ok=True)
    out_records = []
    for rec in records:
        src = frames_dir / rec.image_path
        if not src.exists():
            raise FileNotFoundError(f"missing frame {src}")
        img = load_png(src)
        out_rel = f"images/{split}/{Path(rec.image_path).stem}.png"
        save_png(center_crop_resize(img, tw, th), root / out_rel)
        out_records.append(ManifestRecord(out_rel, rec.pose))
    write_manifest(out_records, root / f"{split}.csv")
    return out_records


@dataclass
class SplitReport:
    image_overlaps: list
    pose_overlaps: list

    @property
    def passed(self) -> bool:
        return not self.image_overlaps


def validate_splits(layout: DatasetLayout) -> SplitReport:
    """Check train/test disjointness by image path (failure) and by exact
    pose 6-tuple (warning only: distinct images may share a pose)."""
    def load(path):
        return read_manifest(path) if Path(path).exists() else []

    train = load(layout.train_manifest)
    image_overlaps = []
    pose_overlaps = []
    train_paths = {r.image_path for r in train}
    train_poses = {tuple(r.pose.as_vector()): r.image_path for r in train}
    for name, manifest in (("testA", layout.testA_manifest),
                           ("testB", layout.testB_manifest)):
        for rec in load(manifest):
            if rec.image_path in train_paths:
                image_overlaps.append((name, rec.image_path))
            key = tuple(rec.pose.as_vector())
            if key in train_poses and train_poses[key] != rec.image_path:
                pose_overlaps.append((name, rec.image_path, train_poses[key]))
    return SplitReport(image_overlaps, pose_overlaps)


@dataclass(frozen=True)
class MeanImage:
    """Per-pixel per-channel mean over a split, float64 (H, W, 3)."""

    mean: np.ndarray

    @property
    def width(self) -> int:
        return self.mean.shape[1]

    @property
    def height(self) -> int:
        return self.mean.shape[0]


def compute_mean_image(manifest_path, root) -> MeanImage:
    """Exact per-pixel mean over every image in the manifest."""
    records = read_manifest(manifest_path)
    if not records:
        raise ValueError("cannot compute a mean over an empty manifest")
    root = Path(root)
    acc = None
    shape = None
    for rec in records:
        img = load_png(root / rec.image_path)
        if acc is None:
            shape = img.shape
            acc = np.zeros(shape, dtype=np.float64)
        elif img.shape != shape:
            raise ValueError(
                f"image size mismatch at {rec.image_path}: "
                f"{img.shape[1]}x{img.shape[0]} vs {shape[1]}x{shape[0]}")
        acc += img
    return MeanImage(acc / len(records))


def write_mean_image(mean: MeanImage, path):
    with open(path, "wb") as f:
        f.write(MEAN_MAGIC)
        f.write(f"{mean.width} {mean.height}\n".encode("ascii"))
        f.write(mean.mean.astype("<f4").tobytes())


def read_mean_image(path) -> MeanImage:
    with open(path, "rb") as f:
        magic = f.read(len(MEAN_MAGIC))
        if magic != MEAN_MAGIC:
            raise ValueError(f"{path}: not a PSMEAN1 file")
        dims = f.readline().split()
        if len(dims) != 2:
            raise ValueError(f"{path}: malformed dimension line")
        w, h = int(dims[0]), int(dims[1])
        data = np.frombuffer(f.read(w * h * 3 * 4), dtype="<f4")
        if data.size != w * h * 3:
            raise ValueError(f"{path}: truncated mean data")
    return MeanImage(data.reshape(h, w, 3).astype(np.float64))
