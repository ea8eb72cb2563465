/** Dataset manifest CSV I/O (posesynth-manifest v1).
 *
 * Format: a magic comment line, a fixed header, then one row per image
 * with the pose as x,y,z in meters and pitch,yaw,roll in degrees.
 */

import * as fs from "fs";

export const MANIFEST_MAGIC = "# posesynth-manifest v1";
export const MANIFEST_HEADER = "image,x,y,z,pitch,yaw,roll";

export interface ManifestRecord {
  imagePath: string;
  /** [x, y, z, pitch, yaw, roll] */
  pose: number[];
}

export class ManifestError extends Error {
  constructor(message: string, public readonly line: number) {
    super(`${message} (line ${line})`);
    this.name = "ManifestError";
  }
}

export function readManifest(path: string): ManifestRecord[] {
  const text = fs.readFileSync(path, "utf8");
  const lines = text.split("\n");
  if (lines[0] !== MANIFEST_MAGIC) {
    throw new ManifestError(`${path}: missing manifest magic`, 1);
  }
  if (lines[1] !== MANIFEST_HEADER) {
    throw new ManifestError(`${path}: bad header`, 2);
  }
  const records: ManifestRecord[] = [];
  const seen = new Set<string>();
  for (let i = 2; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === "") continue;
    const cells = line.split(",");
    if (cells.length !== 7) {
      throw new ManifestError(`${path}: expected 7 cells, got ${cells.length}`, i + 1);
    }
    const pose = cells.slice(1).map(Number);
    if (pose.some((v) => !Number.isFinite(v))) {
      throw new ManifestError(`${path}: non-finite pose value`, i + 1);
    }
    if (seen.has(cells[0])) {
      throw new ManifestError(`${path}: duplicate image ${cells[0]}`, i + 1);
    }
    seen.add(cells[0]);
    records.push({ imagePath: cells[0], pose });
  }
  return records;
}

export function writeManifest(records: ManifestRecord[], path: string): void {
  const lines = [MANIFEST_MAGIC, MANIFEST_HEADER];
  for (const rec of records) {
    const cells = rec.pose.map((v) => v.toFixed(6));
    lines.push(`${rec.imagePath},${cells.join(",")}`);
  }
  fs.writeFileSync(path, lines.join("\n") + "\n");
}
