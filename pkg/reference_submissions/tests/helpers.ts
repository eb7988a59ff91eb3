import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { DataRecord, Dataset, Schema } from "../src/dataset";
import { Rng } from "../src/rng";

export const FIXTURE_SCHEMA: Schema = {
  static: [
    { name: "age", kind: "continuous" },
    { name: "sex", kind: "binary" },
    { name: "unit", kind: { categorical: 3 } },
  ],
  temporal: [
    { name: "hr", kind: "continuous" },
    { name: "bp", kind: "continuous" },
  ],
  label: "outcome",
};

export function fixtureDataset(n: number, seed: number, firstId = 0): Dataset {
  const rng = new Rng(seed);
  const records: DataRecord[] = [];
  for (let i = 0; i < n; i++) {
    const length = 3 + (i % 3);
    const temporalValues: number[][] = [];
    const mask: boolean[][] = [];
    for (let t = 0; t < length; t++) {
      temporalValues.push([rng.gaussian(), rng.gaussian()]);
      // keep the final step observed so the length survives the disk format
      mask.push([t === length - 1 ? true : rng.next() < 0.8, rng.next() < 0.8]);
    }
    records.push({
      recordId: firstId + i,
      staticValues: [rng.gaussian() * 10 + 50, rng.next() < 0.5 ? 1 : 0, i % 3],
      temporalValues: temporalValues.map((row, t) =>
        row.map((v, j) => (mask[t][j] ? v : 0))
      ),
      mask,
      label: rng.next() < 0.5 ? 1 : 0,
    });
  }
  return { schema: FIXTURE_SCHEMA, records };
}

export function tempDir(prefix: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), prefix));
}
