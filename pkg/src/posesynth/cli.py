"""Command-line front-end: generate / ingest / validate / mean / baseline / eval.

Exit codes: 0 success, 1 runtime failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import _kernel, dataset, evaluation, pointcloud, renderer
from .camera import Intrinsics, intrinsics_from_fov
from .errors import ConfigError, ManifestError
from .geometry import Pose
from .pointcloud import RoomSpec, bounding_box, load_ply, procedural_cloud
from .renderer import RenderOptions
from .sampler import GridSpec, OrientationSpec


@dataclass
class GenerationConfig:
    cloud: pointcloud.PointCloud
    intrinsics: Intrinsics
    grid: GridSpec
    orientations: OrientationSpec
    render: RenderOptions
    holdout_every: int
    output_root: Path
    echo: dict


def _section(raw: dict, name: str, required: bool = True) -> dict:
    value = raw.get(name)
    if value is None:
        if required:
            raise ConfigError("missing section", name)
        return {}
    if not isinstance(value, dict):
        raise ConfigError("must be an object", name)
    return value


def _build(section: str, factory, kwargs: dict):
    """Construct a config object, naming the offending field on failure.

    On a ValueError, each field is dropped in turn; if construction then
    succeeds with the factory defaults, that field was the culprit and the
    error is reported as e.g. "grid.step_x".
    """
    try:
        return factory(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc), section)
    except ValueError as exc:
        for key in kwargs:
            rest = {f: v for f, v in kwargs.items() if f != key}
            try:
                factory(**rest)
            except Exception:
                continue
            raise ConfigError(str(exc), f"{section}.{key}")
        raise ConfigError(str(exc), section)


def load_generation_config(path) -> GenerationConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")

    has_cloud = "cloud" in raw
    has_proc = "procedural" in raw
    if has_cloud == has_proc:
        raise ConfigError("exactly one of 'cloud' and 'procedural' is required")
    if has_cloud:
        cloud = load_ply(raw["cloud"])
    else:
        proc = _section(raw, "procedural")
        if "seed" not in proc:
            raise ConfigError("missing value", "procedural.seed")
        spec = _build("procedural", RoomSpec, {
            "size": tuple(proc.get("size", (10.0, 4.0, 10.0))),
            "num_points": int(proc.get("num_points", 50_000)),
        })
        cloud = procedural_cloud(int(proc["seed"]), spec)

    cam = _section(raw, "camera")
    if "fov_deg" in cam:
        intr = _build("camera", intrinsics_from_fov, {
            "fov_deg": float(cam["fov_deg"]),
            "width": int(cam.get("width", 224)),
            "height": int(cam.get("height", 224)),
        })
    else:
        intr = _build("camera", Intrinsics, {
            k: cam[k] for k in ("fx", "fy", "cx", "cy", "width", "height")
            if k in cam})

    grid_raw = _section(raw, "grid", required=False)
    grid_kwargs = {
        "step_x": float(grid_raw.get("step_x", 1.0)),
        "step_z": float(grid_raw.get("step_z", 1.0)),
        "height_y": float(grid_raw.get("height_y", 1.6)),
    }
    if "origin" in grid_raw:
        grid = _build("grid", GridSpec, {
            "origin": grid_raw["origin"],
            "count_x": int(grid_raw.get("count_x", 1)),
            "count_z": int(grid_raw.get("count_z", 1)),
            **grid_kwargs})
    else:
        # auto-center the grid on the cloud footprint
        try:
            grid = GridSpec.centered_on(bounding_box(cloud), **grid_kwargs)
        except ValueError as exc:
            raise ConfigError(str(exc), "grid")
        if "count_x" in grid_raw or "count_z" in grid_raw:
            grid = _build("grid", GridSpec, {
                "origin": grid.origin,
                "count_x": int(grid_raw.get("count_x", grid.count_x)),
                "count_z": int(grid_raw.get("count_z", grid.count_z)),
                **grid_kwargs})

    orient_raw = _section(raw, "orientations", required=False)
    orient = _build("orientations", OrientationSpec, {
        "yaw_count": int(orient_raw.get("yaw_count", 8)),
        "pitch_values": tuple(orient_raw.get("pitch_values", (-10.0, 0.0, 10.0))),
        "roll": float(orient_raw.get("roll", 0.0)),
    })

    render_raw = _section(raw, "render", required=False)
    opts = _build("render", RenderOptions, {
        "splat_radius_px": float(render_raw.get("splat_radius_px", 2.0)),
        "reference_depth": float(render_raw.get("reference_depth", 5.0)),
        "max_splat_px": float(render_raw.get("max_splat_px", 16.0)),
        "near_plane": float(render_raw.get("near_plane", 0.01)),
        "skybox": render_raw.get("skybox", "noon"),
        "shader": render_raw.get("shader", "none"),
    })
    if opts.skybox not in renderer.SKYBOX_PRESETS:
        raise ConfigError(f"unknown sky-box preset {opts.skybox!r}", "render.skybox")
    if opts.shader not in renderer.SHADER_PRESETS:
        raise ConfigError(f"unknown shader preset {opts.shader!r}", "render.shader")

    holdout = int(raw.get("holdout_every", 0))
    if holdout == 1 or holdout < 0:
        raise ConfigError("must be 0 or >= 2", "holdout_every")
    if "output_root" not in raw:
        raise ConfigError("missing value", "output_root")

    echo = {
        "cloud": raw.get("cloud"),
        "procedural": raw.get("procedural"),
        "camera": intr.to_dict(),
        "grid": {"origin": list(grid.origin), "step_x": grid.step_x,
                 "step_z": grid.step_z, "count_x": grid.count_x,
                 "count_z": grid.count_z, "height_y": grid.height_y},
        "orientations": {"yaw_count": orient.yaw_count,
                         "pitch_values": list(orient.pitch_values),
                         "roll": orient.roll},
        "render": {"splat_radius_px": opts.splat_radius_px,
                   "reference_depth": opts.reference_depth,
                   "max_splat_px": opts.max_splat_px,
                   "near_plane": opts.near_plane,
                   "skybox": opts.skybox, "shader": opts.shader},
        "holdout_every": holdout,
        "output_root": str(raw["output_root"]),
    }
    return GenerationConfig(cloud, intr, grid, orient, opts, holdout,
                            Path(raw["output_root"]), echo)


def _cmd_generate(args) -> int:
    cfg = load_generation_config(args.config)
    start = time.perf_counter()
    layout, summary = dataset.generate_dataset(
        cfg.cloud, cfg.intrinsics, cfg.grid, cfg.orientations, cfg.render,
        cfg.holdout_every, cfg.output_root, threads=args.threads,
        config_echo=cfg.echo)
    elapsed = time.perf_counter() - start
    if not args.quiet:
        print(f"kernel backend: {_kernel.backend_name()}")
        print(f"train: {summary.train_count}  testB: {summary.testB_count}  "
              f"total: {summary.total_poses}")
        print(f"elapsed: {elapsed:.1f}s "
              f"({summary.total_poses / max(elapsed, 1e-9):.1f} images/s)")
        print(f"output: {layout.root}")
    return 0


def _parse_size(text: str):
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise ConfigError(f"bad size {text!r}, expected WxH")


def _cmd_ingest(args) -> int:
    records = dataset.ingest_real_frames(
        args.frames, args.poses, _parse_size(args.size), args.out,
        split=args.split)
    if not args.quiet:
        print(f"ingested {len(records)} frames into {args.out}/{args.split}")
    if not records:
        print("warning: no frames listed in the poses manifest", file=sys.stderr)
    return 0


def _cmd_validate(args) -> int:
    report = dataset.validate_splits(dataset.DatasetLayout(Path(args.root)))
    for split, path in report.image_overlaps:
        print(f"image overlap: {path} appears in train and {split}")
    for split, path, train_path in report.pose_overlaps:
        print(f"warning: pose overlap: {split}:{path} duplicates the pose of "
              f"train:{train_path}")
    if report.passed:
        if not args.quiet:
            print("splits OK: no image overlap between train and test sets")
        return 0
    return 1


def _cmd_mean(args) -> int:
    root = Path(args.root) if args.root else Path(args.manifest).parent
    mean = dataset.compute_mean_image(args.manifest, root)
    out = Path(args.out) if args.out else root / "mean.psmean"
    dataset.write_mean_image(mean, out)
    if not args.quiet:
        print(f"mean image {mean.width}x{mean.height} written to {out}")
    return 0


def _cmd_baseline(args) -> int:
    train_root = Path(args.train_root) if args.train_root \
        else Path(args.train_manifest).parent
    query_root = Path(args.query_root) if args.query_root else train_root
    train = dataset.read_manifest(args.train_manifest)
    queries = dataset.read_manifest(args.query_manifest)
    if not queries:
        dataset.write_manifest([], args.out)
        print("warning: empty query manifest", file=sys.stderr)
        return 0
    mean = dataset.read_mean_image(args.mean) if args.mean else None
    baseline = evaluation.KnnBaseline(train, train_root, mean,
                                      args.descriptor_size)
    preds = []
    for i, rec in enumerate(queries):
        pose = baseline.predict_path(query_root / rec.image_path)
        preds.append(dataset.ManifestRecord(rec.image_path, pose))
        if not args.quiet and (i + 1) % 50 == 0:
            print(f"predicted {i + 1}/{len(queries)}", file=sys.stderr)
    dataset.write_manifest(preds, args.out)
    if not args.quiet:
        print(f"wrote {len(preds)} predictions to {args.out}")
    return 0


def _cmd_eval(args) -> int:
    preds = [evaluation.Prediction(r.image_path, r.pose)
             for r in dataset.read_manifest(args.predictions)]
    gt = dataset.read_manifest(args.ground_truth)
    metrics = evaluation.evaluate(preds, gt)
    report = evaluation.format_report([(args.label, metrics)])
    print(report)
    if args.out:
        Path(args.out).write_text(report + "\n", encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posesynth",
        description="Synthesize pose-labeled images from a point cloud and "
                    "evaluate 6-DOF pose predictions.")
    parser.add_argument("--threads", type=int, default=1,
                        help="render worker threads (output is identical for any count)")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress informational output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="render a dataset from a JSON config")
    p.add_argument("config", help="generation config (JSON)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("ingest", help="ingest real frames with external poses")
    p.add_argument("--frames", required=True, help="directory of frame images")
    p.add_argument("--poses", required=True, help="poses manifest for the frames")
    p.add_argument("--out", required=True, help="dataset root")
    p.add_argument("--size", default="224x224", help="target WxH (default 224x224)")
    p.add_argument("--split", default="testA", choices=("testA", "train"))
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("validate", help="check train/test split disjointness")
    p.add_argument("root", help="dataset root")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("mean", help="compute the train mean image")
    p.add_argument("manifest", help="manifest to average over")
    p.add_argument("--root", help="dataset root (default: manifest directory)")
    p.add_argument("--out", help="output path (default: ROOT/mean.psmean)")
    p.set_defaults(func=_cmd_mean)

    p = sub.add_parser("baseline", help="1-NN retrieval baseline predictions")
    p.add_argument("train_manifest")
    p.add_argument("query_manifest")
    p.add_argument("out", help="predictions CSV to write")
    p.add_argument("--train-root", help="root for train image paths")
    p.add_argument("--query-root", help="root for query image paths")
    p.add_argument("--mean", help="PSMEAN1 mean image for descriptor subtraction")
    p.add_argument("--descriptor-size", type=int, default=16)
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("eval", help="score predictions against ground truth")
    p.add_argument("predictions", help="predictions manifest CSV")
    p.add_argument("ground_truth", help="ground-truth manifest CSV")
    p.add_argument("--out", help="also write the report to this file")
    p.add_argument("--label", default="run", help="row label in the report")
    p.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (ConfigError, ManifestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
