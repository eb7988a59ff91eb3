import * as fs from "node:fs";
import * as path from "node:path";
import { execFileSync } from "node:child_process";

import { describe, expect, it } from "vitest";

import { loadDataset, saveDataset } from "../src/dataset";
import { generate, run } from "../src/hider";
import { fixtureDataset, tempDir } from "./helpers";

const DIST_HIDER = path.resolve(__dirname, "..", "dist", "hider.js");

describe("noise hider", () => {
  it("keeps schema, size, masks; refreshes ids; perturbs content", () => {
    const real = fixtureDataset(10, 7);
    const syn = generate(real);
    expect(syn.schema).toEqual(real.schema);
    expect(syn.records).toHaveLength(10);
    const realIds = new Set(real.records.map((r) => r.recordId));
    for (const r of syn.records) expect(realIds.has(r.recordId)).toBe(false);
    expect(syn.records.map((r) => r.mask)).toEqual(real.records.map((r) => r.mask));
    const changed = syn.records.some((r, i) =>
      r.temporalValues.some((row, t) =>
        row.some((v, j) => r.mask[t][j] && v !== real.records[i].temporalValues[t][j])
      )
    );
    expect(changed).toBe(true);
  });

  it("is deterministic over the wire", () => {
    const dir = tempDir("hider-");
    const input = path.join(dir, "input");
    saveDataset(fixtureDataset(10, 8), input);
    run(input, path.join(dir, "out1"));
    run(input, path.join(dir, "out2"));
    for (const name of ["schema.json", "static.csv", "temporal.csv"]) {
      expect(fs.readFileSync(path.join(dir, "out1", name), "utf-8")).toBe(
        fs.readFileSync(path.join(dir, "out2", name), "utf-8")
      );
    }
  });

  it("round-trips through the CLI entry point", () => {
    const dir = tempDir("hider-cli-");
    const input = path.join(dir, "input");
    const output = path.join(dir, "output");
    saveDataset(fixtureDataset(10, 9), input);
    execFileSync("node", [DIST_HIDER, "--input", input, "--output", output]);
    const syn = loadDataset(output);
    expect(syn.records).toHaveLength(10);
  });

  it("exits 1 on unreadable input", () => {
    const dir = tempDir("hider-bad-");
    expect(() =>
      execFileSync("node", [DIST_HIDER, "--input", path.join(dir, "nope"),
                            "--output", path.join(dir, "out")],
                   { stdio: "pipe" })
    ).toThrow();
  });
});
