/**
 * Example re-identification-track submission: nearest-neighbour attack.
 *
 * Reads synthetic/ and enlarged/ dataset directories from --input, embeds
 * every record as a summary vector standardized by the enlarged set's
 * statistics (zero-variance coordinates dropped), and predicts as members the
 * floor(n/2) enlarged records closest to any synthetic record. Ties resolve
 * to earlier record order. Writes one record_id per line to
 * <output>/prediction.csv.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { Dataset, loadDataset } from "./dataset.js";
import { parseArgs } from "./args.js";
import { summaryVector } from "./summary.js";

function standardizedEmbeddings(
  synthetic: Dataset,
  enlarged: Dataset
): { syn: number[][]; enl: number[][] } {
  const enlRaw = enlarged.records.map((r) => summaryVector(r, enlarged.schema));
  const synRaw = synthetic.records.map((r) => summaryVector(r, synthetic.schema));
  const width = enlRaw[0].length;
  const mean = new Array<number>(width).fill(0);
  for (const row of enlRaw) row.forEach((v, c) => (mean[c] += v));
  mean.forEach((v, c) => (mean[c] = v / enlRaw.length));
  const variance = new Array<number>(width).fill(0);
  for (const row of enlRaw) {
    row.forEach((v, c) => (variance[c] += (v - mean[c]) * (v - mean[c])));
  }
  const std = variance.map((v) => Math.sqrt(v / enlRaw.length));
  const keep: number[] = [];
  std.forEach((s, c) => {
    if (s > 0) keep.push(c);
  });
  const project = (row: number[]) => keep.map((c) => (row[c] - mean[c]) / std[c]);
  return { syn: synRaw.map(project), enl: enlRaw.map(project) };
}

function nearestDistance(point: number[], reference: number[][]): number {
  let best = Infinity;
  for (const row of reference) {
    let acc = 0;
    for (let c = 0; c < point.length; c++) {
      const diff = point[c] - row[c];
      acc += diff * diff;
    }
    if (acc < best) best = acc;
  }
  return Math.sqrt(best);
}

export function predictMembers(synthetic: Dataset, enlarged: Dataset): number[] {
  const { syn, enl } = standardizedEmbeddings(synthetic, enlarged);
  const distances = enl.map((row, index) => ({
    index,
    distance: nearestDistance(row, syn),
  }));
  distances.sort((a, b) => a.distance - b.distance || a.index - b.index);
  const nPredict = Math.floor(enlarged.records.length / 2);
  return distances
    .slice(0, nPredict)
    .map(({ index }) => enlarged.records[index].recordId)
    .sort((a, b) => a - b);
}

export function run(inputDir: string, outputDir: string): void {
  const synthetic = loadDataset(path.join(inputDir, "synthetic"));
  const enlarged = loadDataset(path.join(inputDir, "enlarged"));
  const ids = predictMembers(synthetic, enlarged);
  fs.mkdirSync(outputDir, { recursive: true });
  fs.writeFileSync(
    path.join(outputDir, "prediction.csv"),
    ids.map((i) => `${i}\n`).join("")
  );
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;

if (invokedDirectly) {
  try {
    const args = parseArgs(process.argv.slice(2));
    run(args.input, args.output);
  } catch (err) {
    console.error(String(err));
    process.exit(1);
  }
}
