/** CSV persistence for run records.
 *
 * Schema (stable, one header line): solver,benchmark,verdict,wall_s,mem_mib
 * Records are appended one line at a time so an interrupted run can resume;
 * loadCsv + the (solver, benchmark) key set is how duplicates are avoided.
 */

import * as fs from "fs";
import type { RunRecord, Verdict } from "./types.js";

export const CSV_HEADER = "solver,benchmark,verdict,wall_s,mem_mib";

function escapeField(s: string): string {
  if (/[",\n]/.test(s)) {
    return '"' + s.replace(/"/g, '""') + '"';
  }
  return s;
}

export function recordToLine(r: RunRecord): string {
  return [
    escapeField(r.solver),
    escapeField(r.benchmark),
    r.verdict,
    r.wallS.toFixed(3),
    r.memMib.toFixed(1),
  ].join(",");
}

function splitCsvLine(line: string): string[] {
  const fields: string[] = [];
  let cur = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const c = line[i];
    if (quoted) {
      if (c === '"' && line[i + 1] === '"') {
        cur += '"';
        i++;
      } else if (c === '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c === '"') {
      quoted = true;
    } else if (c === ",") {
      fields.push(cur);
      cur = "";
    } else {
      cur += c;
    }
  }
  fields.push(cur);
  return fields;
}

export function loadCsv(path: string): RunRecord[] {
  if (!fs.existsSync(path)) return [];
  const lines = fs.readFileSync(path, "utf-8").split("\n").filter((l) => l.length > 0);
  const records: RunRecord[] = [];
  for (const line of lines) {
    if (line === CSV_HEADER) continue;
    const f = splitCsvLine(line);
    if (f.length < 5) continue;
    records.push({
      solver: f[0],
      benchmark: f[1],
      verdict: f[2] as Verdict,
      wallS: parseFloat(f[3]),
      memMib: parseFloat(f[4]),
    });
  }
  return records;
}

/** Appends a single record, writing the header first on a fresh file. */
export function appendRecord(path: string, r: RunRecord): void {
  if (!fs.existsSync(path) || fs.statSync(path).size === 0) {
    fs.writeFileSync(path, CSV_HEADER + "\n");
  }
  fs.appendFileSync(path, recordToLine(r) + "\n");
}

/** Keys of already-present (solver, benchmark) pairs, for resume logic. */
export function doneKeys(records: RunRecord[]): Set<string> {
  return new Set(records.map((r) => r.solver + " " + r.benchmark));
}
