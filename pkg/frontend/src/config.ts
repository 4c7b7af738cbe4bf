/** Key-value config file parser.
 *
 * Format, one entry per line (# starts a comment):
 *
 *   timeout = 120
 *   memory_mib = 8192
 *   jobs = 4
 *   results = results.csv
 *   benchmarks = ../benchmarks/suite
 *   solver.strsat = python3 -m strsat.cli {file}
 *   solver.other = other-solver --smt2 {file}
 *
 * "benchmarks" may be repeated to list several directories or files, and
 * relative paths resolve against the config file's directory.
 */

import * as fs from "fs";
import * as path from "path";
import type { RunConfig } from "./types.js";

export function parseConfig(text: string, baseDir: string): RunConfig {
  const config: RunConfig = {
    solvers: [],
    benchmarks: [],
    timeoutS: 120,
    memoryMib: 8192,
    jobs: 1,
    resultsCsv: path.join(baseDir, "results.csv"),
  };
  for (const raw of text.split("\n")) {
    const line = raw.replace(/#.*/, "").trim();
    if (!line) continue;
    const eq = line.indexOf("=");
    if (eq < 0) throw new Error(`config line without '=': ${raw}`);
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (key === "timeout") config.timeoutS = parseFloat(value);
    else if (key === "memory_mib") config.memoryMib = parseFloat(value);
    else if (key === "jobs") config.jobs = parseInt(value, 10);
    else if (key === "results") config.resultsCsv = path.resolve(baseDir, value);
    else if (key === "benchmarks") config.benchmarks.push(path.resolve(baseDir, value));
    else if (key.startsWith("solver.")) {
      config.solvers.push({ id: key.slice("solver.".length), command: value });
    } else throw new Error(`unknown config key: ${key}`);
  }
  if (config.solvers.length === 0) throw new Error("config declares no solvers");
  if (config.benchmarks.length === 0) throw new Error("config declares no benchmarks");
  return config;
}

export function loadConfig(file: string): RunConfig {
  return parseConfig(fs.readFileSync(file, "utf-8"), path.dirname(path.resolve(file)));
}
