/**
 * Example generation-track submission: noise addition at sigma 0.5.
 *
 * Reads a real dataset from --input, writes a synthetic copy to --output:
 * every observed continuous value gets Gaussian noise at half the feature's
 * observed standard deviation; level-valued columns (label included) are
 * resampled from their empirical marginal with probability 0.5. Record ids
 * are fresh and the output is deterministic.
 */

import {
  DataRecord,
  Dataset,
  isContinuous,
  levelCount,
  loadDataset,
  saveDataset,
} from "./dataset.js";
import { parseArgs } from "./args.js";
import { Rng } from "./rng.js";

const SIGMA = 0.5;
const SEED = 0x5eed;

interface ColumnStats {
  std: number;
  marginal: number[];
}

function observedStd(values: number[]): number {
  if (values.length === 0) return 0;
  const mean = values.reduce((a, b) => a + b, 0) / values.length;
  return Math.sqrt(
    values.reduce((a, b) => a + (b - mean) * (b - mean), 0) / values.length
  );
}

function marginalOf(values: number[], levels: number): number[] {
  const counts = new Array<number>(levels).fill(0);
  for (const v of values) counts[Math.round(v)] += 1;
  const total = values.length || 1;
  return counts.map((c) => (values.length ? c / total : 1 / levels));
}

function columnStats(dataset: Dataset): {
  statics: ColumnStats[];
  temporals: ColumnStats[];
  labelMarginal: number[];
} {
  const { schema, records } = dataset;
  const statics = schema.static.map((f, i) => {
    const values = records.map((r) => r.staticValues[i]);
    return isContinuous(f.kind)
      ? { std: observedStd(values), marginal: [] }
      : { std: 0, marginal: marginalOf(values, levelCount(f.kind)) };
  });
  const temporals = schema.temporal.map((f, j) => {
    const values: number[] = [];
    for (const r of records) {
      for (let t = 0; t < r.temporalValues.length; t++) {
        if (r.mask[t][j]) values.push(r.temporalValues[t][j]);
      }
    }
    return isContinuous(f.kind)
      ? { std: observedStd(values), marginal: [] }
      : { std: 0, marginal: marginalOf(values, levelCount(f.kind)) };
  });
  const labelMarginal = marginalOf(records.map((r) => r.label), 2);
  return { statics, temporals, labelMarginal };
}

export function generate(real: Dataset): Dataset {
  const { schema } = real;
  const { statics, temporals, labelMarginal } = columnStats(real);
  const rng = new Rng(SEED);
  const flipP = Math.min(SIGMA, 1.0);
  const idBase = real.records.reduce((acc, r) => Math.max(acc, r.recordId), -1) + 1;

  const records: DataRecord[] = real.records.map((r, index) => {
    const staticValues = r.staticValues.slice();
    schema.static.forEach((f, i) => {
      if (isContinuous(f.kind)) {
        staticValues[i] += SIGMA * statics[i].std * rng.gaussian();
      } else if (rng.next() < flipP) {
        staticValues[i] = rng.categorical(statics[i].marginal);
      }
    });
    const temporalValues = r.temporalValues.map((row) => row.slice());
    const mask = r.mask.map((row) => row.slice());
    schema.temporal.forEach((f, j) => {
      for (let t = 0; t < temporalValues.length; t++) {
        if (!mask[t][j]) continue;
        if (isContinuous(f.kind)) {
          temporalValues[t][j] += SIGMA * temporals[j].std * rng.gaussian();
        } else if (rng.next() < flipP) {
          temporalValues[t][j] = rng.categorical(temporals[j].marginal);
        }
      }
    });
    let label = r.label;
    if (rng.next() < flipP) label = rng.categorical(labelMarginal);
    return { recordId: idBase + index, staticValues, temporalValues, mask, label };
  });
  return { schema, records };
}

export function run(inputDir: string, outputDir: string): void {
  saveDataset(generate(loadDataset(inputDir)), outputDir);
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
