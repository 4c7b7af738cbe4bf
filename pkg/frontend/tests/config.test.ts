// Config file parsing.

import * as path from "path";
import { describe, expect, it } from "vitest";
import { parseConfig } from "../src/config.js";

const sample = `
# strsat against a stub, half-minute budget
timeout = 30
memory_mib = 1024
jobs = 3
results = out/results.csv
benchmarks = suite
benchmarks = extra/one.smt2
solver.strsat = python3 -m strsat.cli {file}
solver.stub = sh stub.sh {file}
`;

describe("parseConfig", () => {
  it("reads keys and resolves paths against the config directory", () => {
    const c = parseConfig(sample, "/base");
    expect(c.timeoutS).toBe(30);
    expect(c.memoryMib).toBe(1024);
    expect(c.jobs).toBe(3);
    expect(c.resultsCsv).toBe(path.join("/base", "out", "results.csv"));
    expect(c.benchmarks).toEqual(["/base/suite", "/base/extra/one.smt2"]);
    expect(c.solvers).toEqual([
      { id: "strsat", command: "python3 -m strsat.cli {file}" },
      { id: "stub", command: "sh stub.sh {file}" },
    ]);
  });

  it("rejects unknown keys and empty solver lists", () => {
    expect(() => parseConfig("bogus = 1\nsolver.a = x {file}\nbenchmarks = b", "/")).toThrow(
      /unknown config key/,
    );
    expect(() => parseConfig("benchmarks = b", "/")).toThrow(/no solvers/);
    expect(() => parseConfig("solver.a = x {file}", "/")).toThrow(/no benchmarks/);
  });
});
