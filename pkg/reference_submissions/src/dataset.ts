/**
 * Dataset directory format shared with the competition engine.
 *
 * A directory holds schema.json, static.csv (one row per record, label in the
 * final column) and temporal.csv (long format: record_id,t,feature,value;
 * absent rows are masked entries). This module deliberately re-implements the
 * format from the written contract rather than sharing code with the engine,
 * so a submission only needs these files to interoperate.
 */

import * as fs from "node:fs";
import * as path from "node:path";

export type FeatureKind = "continuous" | "binary" | { categorical: number };

export interface Feature {
  name: string;
  kind: FeatureKind;
}

export interface Schema {
  static: Feature[];
  temporal: Feature[];
  label: string;
}

export interface DataRecord {
  recordId: number;
  staticValues: number[];
  temporalValues: number[][]; // T x D, masked entries 0
  mask: boolean[][]; // T x D, true = observed
  label: number;
}

export interface Dataset {
  schema: Schema;
  records: DataRecord[];
}

export function isContinuous(kind: FeatureKind): boolean {
  return kind === "continuous";
}

export function levelCount(kind: FeatureKind): number {
  if (kind === "continuous") return 0;
  if (kind === "binary") return 2;
  return kind.categorical;
}

function parseKind(raw: unknown, name: string): FeatureKind {
  if (raw === "continuous" || raw === "binary") return raw;
  if (
    typeof raw === "object" &&
    raw !== null &&
    "categorical" in raw &&
    typeof (raw as { categorical: unknown }).categorical === "number"
  ) {
    return { categorical: (raw as { categorical: number }).categorical };
  }
  throw new Error(`schema.json: unknown kind for feature ${name}`);
}

function readLines(file: string): string[] {
  const text = fs.readFileSync(file, "utf-8");
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  return lines;
}

export function loadSchema(dir: string): Schema {
  const raw = JSON.parse(fs.readFileSync(path.join(dir, "schema.json"), "utf-8"));
  const toFeatures = (entries: Array<{ name: string; kind: unknown }>): Feature[] =>
    entries.map((e) => ({ name: e.name, kind: parseKind(e.kind, e.name) }));
  return {
    static: toFeatures(raw.static),
    temporal: toFeatures(raw.temporal),
    label: raw.label,
  };
}

export function loadDataset(dir: string): Dataset {
  const schema = loadSchema(dir);
  const staticLines = readLines(path.join(dir, "static.csv"));
  const expectedHeader = [
    "record_id",
    ...schema.static.map((f) => f.name),
    schema.label,
  ].join(",");
  if (staticLines[0] !== expectedHeader) {
    throw new Error(`static.csv header mismatch: got ${staticLines[0]}`);
  }

  const records: DataRecord[] = [];
  const byId = new Map<number, DataRecord>();
  for (const line of staticLines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== 2 + schema.static.length) {
      throw new Error(`static.csv: bad column count in ${line}`);
    }
    const recordId = Number(cells[0]);
    if (!Number.isInteger(recordId)) throw new Error(`bad record_id ${cells[0]}`);
    if (byId.has(recordId)) throw new Error(`duplicate record_id ${recordId}`);
    const staticValues = cells.slice(1, -1).map(Number);
    if (staticValues.some((v) => Number.isNaN(v))) {
      throw new Error(`record ${recordId}: unparseable static value`);
    }
    const record: DataRecord = {
      recordId,
      staticValues,
      temporalValues: [],
      mask: [],
      label: Number(cells[cells.length - 1]),
    };
    records.push(record);
    byId.set(recordId, record);
  }

  const temporalLines = readLines(path.join(dir, "temporal.csv"));
  if (temporalLines[0] !== "record_id,t,feature,value") {
    throw new Error("temporal.csv header mismatch");
  }
  const featureIndex = new Map(schema.temporal.map((f, j) => [f.name, j]));
  const cellsByRecord = new Map<number, Array<[number, number, number]>>();
  for (const line of temporalLines.slice(1)) {
    const [idText, tText, feature, valueText] = line.split(",");
    const recordId = Number(idText);
    const t = Number(tText);
    const j = featureIndex.get(feature);
    if (!byId.has(recordId)) throw new Error(`temporal.csv: unknown record_id ${idText}`);
    if (j === undefined) throw new Error(`temporal.csv: unknown feature ${feature}`);
    if (!Number.isInteger(t) || t < 0) throw new Error(`temporal.csv: bad t ${tText}`);
    const value = Number(valueText);
    if (Number.isNaN(value)) throw new Error(`temporal.csv: bad value ${valueText}`);
    let bucket = cellsByRecord.get(recordId);
    if (!bucket) {
      bucket = [];
      cellsByRecord.set(recordId, bucket);
    }
    bucket.push([t, j, value]);
  }
  const d = schema.temporal.length;
  for (const record of records) {
    const entries = cellsByRecord.get(record.recordId) ?? [];
    const length = entries.reduce((acc, [t]) => Math.max(acc, t + 1), 0);
    record.temporalValues = Array.from({ length }, () => new Array<number>(d).fill(0));
    record.mask = Array.from({ length }, () => new Array<boolean>(d).fill(false));
    for (const [t, j, value] of entries) {
      record.temporalValues[t][j] = value;
      record.mask[t][j] = true;
    }
  }
  return { schema, records };
}

function kindToJson(kind: FeatureKind): unknown {
  return kind;
}

function formatValue(value: number, kind: FeatureKind): string {
  if (isContinuous(kind)) return String(value);
  return String(Math.round(value));
}

export function saveDataset(dataset: Dataset, dir: string): void {
  fs.mkdirSync(dir, { recursive: true });
  const { schema } = dataset;
  const schemaObj = {
    static: schema.static.map((f) => ({ name: f.name, kind: kindToJson(f.kind) })),
    temporal: schema.temporal.map((f) => ({ name: f.name, kind: kindToJson(f.kind) })),
    label: schema.label,
  };
  fs.writeFileSync(path.join(dir, "schema.json"), JSON.stringify(schemaObj) + "\n");

  const staticLines = [
    ["record_id", ...schema.static.map((f) => f.name), schema.label].join(","),
  ];
  for (const r of dataset.records) {
    const cells = [String(r.recordId)];
    schema.static.forEach((f, i) => cells.push(formatValue(r.staticValues[i], f.kind)));
    cells.push(String(r.label));
    staticLines.push(cells.join(","));
  }
  fs.writeFileSync(path.join(dir, "static.csv"), staticLines.join("\n") + "\n");

  const temporalLines = ["record_id,t,feature,value"];
  for (const r of dataset.records) {
    for (let t = 0; t < r.temporalValues.length; t++) {
      schema.temporal.forEach((f, j) => {
        if (r.mask[t][j]) {
          temporalLines.push(
            `${r.recordId},${t},${f.name},${formatValue(r.temporalValues[t][j], f.kind)}`
          );
        }
      });
    }
  }
  fs.writeFileSync(path.join(dir, "temporal.csv"), temporalLines.join("\n") + "\n");
}
