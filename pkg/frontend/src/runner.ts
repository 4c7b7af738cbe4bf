/** Subprocess execution of solver CLIs with time and memory limits.
 *
 * Each run is an isolated /bin/sh child: the shell sets an address-space
 * ulimit and execs the solver command with "{file}" substituted.  Wall time
 * is measured around the child; peak memory is sampled from
 * /proc/<pid>/status (VmHWM) while it runs.  Over-time children are killed
 * and recorded as "timeout"; an OOM kill under the ulimit surfaces as
 * "memout" when the sampled peak is near the cap.
 */

import { spawn } from "child_process";
import * as fs from "fs";
import * as path from "path";
import { appendRecord, doneKeys, loadCsv } from "./csv.js";
import type { RunConfig, RunRecord, SolverSpec, Verdict } from "./types.js";

const GRACE_S = 1.0;
const SAMPLE_MS = 15;

function readPeakMib(pid: number): number {
  try {
    const status = fs.readFileSync(`/proc/${pid}/status`, "utf-8");
    const m = /VmHWM:\s+(\d+)\s+kB/.exec(status);
    if (m) return parseInt(m[1], 10) / 1024;
  } catch {
    // process already gone
  }
  return 0;
}

function parseVerdict(stdout: string): Verdict | null {
  for (const line of stdout.split("\n")) {
    const t = line.trim();
    if (t === "sat" || t === "unsat" || t === "unknown") return t;
  }
  return null;
}

export function runOne(
  solver: SolverSpec,
  benchmark: string,
  timeoutS: number,
  memoryMib: number,
): Promise<RunRecord> {
  const cmd = solver.command.split("{file}").join(shellQuote(benchmark));
  const limitKb = Math.floor(memoryMib * 1024);
  const script = `ulimit -v ${limitKb} 2>/dev/null; exec ${cmd}`;
  return new Promise((resolve) => {
    const start = process.hrtime.bigint();
    const child = spawn("/bin/sh", ["-c", script], {
      stdio: ["ignore", "pipe", "pipe"],
    });
    let stdout = "";
    let stderr = "";
    let peakMib = 0;
    let timedOut = false;
    child.stdout.on("data", (d) => (stdout += d));
    child.stderr.on("data", (d) => (stderr += d));

    const sampler = setInterval(() => {
      if (child.pid) peakMib = Math.max(peakMib, readPeakMib(child.pid));
    }, SAMPLE_MS);
    const killer = setTimeout(() => {
      timedOut = true;
      child.kill("SIGKILL");
    }, timeoutS * 1000);

    const finish = (verdict: Verdict, errorText?: string) => {
      clearInterval(sampler);
      clearTimeout(killer);
      const wallS = Math.min(
        Number(process.hrtime.bigint() - start) / 1e9,
        timeoutS + GRACE_S,
      );
      resolve({
        solver: solver.id,
        benchmark,
        verdict,
        wallS,
        memMib: peakMib,
        ...(errorText ? { errorText } : {}),
      });
    };

    child.on("error", (err) => finish("error", String(err)));
    child.on("close", (code, signal) => {
      if (timedOut) return finish("timeout");
      const verdict = parseVerdict(stdout);
      if (verdict) return finish(verdict);
      // killed by the kernel at the memory cap, or died without a verdict
      if (signal === "SIGKILL" || peakMib >= memoryMib * 0.9) {
        return finish("memout");
      }
      return finish("error", (stderr || `exit code ${code}`).slice(0, 2000));
    });
  });
}

function shellQuote(s: string): string {
  return "'" + s.replace(/'/g, "'\\''") + "'";
}

/** All .smt2 files under the configured directories, plus explicit files. */
export function collectBenchmarks(paths: string[]): string[] {
  const out: string[] = [];
  const walk = (p: string) => {
    const st = fs.statSync(p);
    if (st.isDirectory()) {
      for (const entry of fs.readdirSync(p).sort()) walk(path.join(p, entry));
    } else if (p.endsWith(".smt2")) {
      out.push(p);
    }
  };
  for (const p of paths) {
    if (!fs.existsSync(p)) {
      console.warn(`warning: benchmark path not found, skipped: ${p}`);
      continue;
    }
    walk(p);
  }
  return out;
}

/** Runs every (solver, benchmark) pair not already present in the CSV.
 *
 * Pairs are dispatched to a bounded pool of concurrent subprocesses; each
 * completed record is appended to the CSV immediately so interrupting the
 * run loses at most the in-flight jobs.
 */
export async function runCorpus(config: RunConfig): Promise<RunRecord[]> {
  const benchmarks = collectBenchmarks(config.benchmarks);
  const existing = loadCsv(config.resultsCsv);
  const done = doneKeys(existing);
  const pending: Array<[SolverSpec, string]> = [];
  for (const solver of config.solvers) {
    for (const b of benchmarks) {
      if (!done.has(solver.id + " " + b)) pending.push([solver, b]);
    }
  }
  const fresh: RunRecord[] = [];
  let next = 0;
  const worker = async () => {
    while (next < pending.length) {
      const [solver, b] = pending[next++];
      const rec = await runOne(solver, b, config.timeoutS, config.memoryMib);
      appendRecord(config.resultsCsv, rec);
      fresh.push(rec);
    }
  };
  const jobs = Math.max(1, config.jobs);
  await Promise.all(Array.from({ length: jobs }, worker));
  return existing.concat(fresh);
}
