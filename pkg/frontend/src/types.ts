/** Shared domain types for the bench harness. */

export type Verdict = "sat" | "unsat" | "unknown" | "timeout" | "memout" | "error";

/** One solver run on one benchmark file. */
export interface RunRecord {
  solver: string;
  benchmark: string;
  verdict: Verdict;
  /** Wall-clock seconds, bounded by the configured timeout plus grace. */
  wallS: number;
  /** Peak resident set size in MiB (0 when it could not be sampled). */
  memMib: number;
  /** Captured stderr/exception text, only meaningful for verdict "error". */
  errorText?: string;
}

export interface SolverSpec {
  id: string;
  /** Command template; "{file}" is replaced with the benchmark path. */
  command: string;
}

export interface RunConfig {
  solvers: SolverSpec[];
  /** Directories (scanned recursively for .smt2) or individual files. */
  benchmarks: string[];
  timeoutS: number;
  memoryMib: number;
  jobs: number;
  /** CSV results path; existing (solver, benchmark) pairs are not re-run. */
  resultsCsv: string;
}
