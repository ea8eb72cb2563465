/** Generates the fixture datasets with the posesynth CLI (once, cached
 * under .cache/). The trainer only ever touches the files it produces.
 */

import { execFileSync } from "child_process";
import * as fs from "fs";
import * as path from "path";

const cacheDir = path.join(__dirname, "..", ".cache");

function generate(name: string, config: object): void {
  const root = path.join(cacheDir, name);
  if (fs.existsSync(path.join(root, "train.csv"))) return;
  fs.rmSync(root, { recursive: true, force: true });
  fs.mkdirSync(cacheDir, { recursive: true });
  const cfgPath = path.join(cacheDir, `${name}.json`);
  fs.writeFileSync(cfgPath, JSON.stringify({ ...config, output_root: root }));
  console.log(`generating dataset ${name} ...`);
  execFileSync("posesynth", ["--quiet", "--threads", "4", "generate", cfgPath], {
    stdio: "inherit",
  });
}

export default function setup(): void {
  // 50-image toy set: 5x5 grid, 2 yaws, everything in train
  generate("toy64", {
    procedural: { seed: 11, size: [6.0, 3.0, 6.0], num_points: 20000 },
    camera: { fov_deg: 90, width: 64, height: 64 },
    grid: {
      origin: [-2.0, 0.0, -2.0],
      step_x: 1.0,
      step_z: 1.0,
      count_x: 5,
      count_z: 5,
      height_y: 1.2,
    },
    orientations: { yaw_count: 2, pitch_values: [0.0] },
    render: { skybox: "noon" },
    holdout_every: 0,
  });

  // ~2.4k-pose room for the learning-sanity run (10x10 grid x 8 yaws x 3
  // pitches, every 7th pose held out to testB)
  generate("room64", {
    procedural: { seed: 42, size: [10.0, 4.0, 10.0], num_points: 60000 },
    camera: { fov_deg: 90, width: 64, height: 64 },
    grid: { step_x: 1.0, step_z: 1.0, height_y: 1.6 },
    orientations: { yaw_count: 8, pitch_values: [-10.0, 0.0, 10.0] },
    render: { skybox: "noon" },
    holdout_every: 7,
  });
}
