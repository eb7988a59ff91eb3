/**
 * Length-invariant record embedding: per temporal feature the six statistics
 * {mean, population std, first, last, min, max} over observed entries (zeros
 * when nothing observed), then static values with level-valued statics
 * one-hot encoded. Matches the engine's embedding definition.
 */

import { DataRecord, Schema, isContinuous, levelCount } from "./dataset.js";

export const STATS_PER_FEATURE = 6;

export function summaryLength(schema: Schema): number {
  const staticWidth = schema.static.reduce(
    (acc, f) => acc + (isContinuous(f.kind) ? 1 : levelCount(f.kind)),
    0
  );
  return STATS_PER_FEATURE * schema.temporal.length + staticWidth;
}

export function summaryVector(record: DataRecord, schema: Schema): number[] {
  const out: number[] = [];
  for (let j = 0; j < schema.temporal.length; j++) {
    const observed: number[] = [];
    for (let t = 0; t < record.temporalValues.length; t++) {
      if (record.mask[t][j]) observed.push(record.temporalValues[t][j]);
    }
    if (observed.length === 0) {
      out.push(0, 0, 0, 0, 0, 0);
      continue;
    }
    const mean = observed.reduce((a, b) => a + b, 0) / observed.length;
    const variance =
      observed.reduce((a, b) => a + (b - mean) * (b - mean), 0) / observed.length;
    out.push(
      mean,
      Math.sqrt(variance),
      observed[0],
      observed[observed.length - 1],
      Math.min(...observed),
      Math.max(...observed)
    );
  }
  schema.static.forEach((f, i) => {
    if (isContinuous(f.kind)) {
      out.push(record.staticValues[i]);
    } else {
      const oneHot = new Array<number>(levelCount(f.kind)).fill(0);
      oneHot[Math.round(record.staticValues[i])] = 1;
      out.push(...oneHot);
    }
  });
  return out;
}
