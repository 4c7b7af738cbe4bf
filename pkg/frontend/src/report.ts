/** Report generation over collected run records.
 *
 * Produces per-solver summary rows (unsolved count, total/avg/median/std of
 * solved times), virtual-best-solver and leave-one-out portfolio rows, a
 * majority-vote disagreement list, and pairwise log-log scatter data with an
 * SVG rendering.
 */

import type { RunRecord, Verdict } from "./types.js";

const DECISIVE: ReadonlySet<string> = new Set(["sat", "unsat"]);

export function isSolved(v: Verdict): boolean {
  return DECISIVE.has(v);
}

export interface SummaryRow {
  solver: string;
  unsolved: number;
  totalS: number;
  avgS: number;
  medS: number;
  stdS: number;
}

function median(xs: number[]): number {
  if (xs.length === 0) return 0;
  const s = [...xs].sort((a, b) => a - b);
  const m = s.length >> 1;
  return s.length % 2 ? s[m] : (s[m - 1] + s[m]) / 2;
}

function std(xs: number[], mean: number): number {
  if (xs.length < 2) return 0;
  const v = xs.reduce((acc, x) => acc + (x - mean) ** 2, 0) / (xs.length - 1);
  return Math.sqrt(v);
}

export function solverIds(records: RunRecord[]): string[] {
  return [...new Set(records.map((r) => r.solver))].sort();
}

export function benchmarkIds(records: RunRecord[]): string[] {
  return [...new Set(records.map((r) => r.benchmark))].sort();
}

/** Per-solver statistics; time statistics cover solved instances only. */
export function summarize(records: RunRecord[]): SummaryRow[] {
  return solverIds(records).map((solver) => {
    const mine = records.filter((r) => r.solver === solver);
    const solvedTimes = mine.filter((r) => isSolved(r.verdict)).map((r) => r.wallS);
    const totalS = solvedTimes.reduce((a, b) => a + b, 0);
    const avgS = solvedTimes.length ? totalS / solvedTimes.length : 0;
    return {
      solver,
      unsolved: mine.length - solvedTimes.length,
      totalS,
      avgS,
      medS: median(solvedTimes),
      stdS: std(solvedTimes, avgS),
    };
  });
}

export interface PortfolioRow {
  label: string;
  unsolved: number;
  totalS: number;
}

/** Virtual best solver over a set of solver ids: per benchmark the minimum
 * solved time, counted unsolved when no member solves it. */
function vbsOver(
  records: RunRecord[],
  members: string[],
  benchmarks: string[],
  timeoutS: number,
): { unsolved: number; totalS: number } {
  let unsolved = 0;
  let totalS = 0;
  for (const b of benchmarks) {
    const solvedHere = records.filter(
      (r) => r.benchmark === b && members.includes(r.solver) && isSolved(r.verdict),
    );
    if (solvedHere.length === 0) {
      unsolved += 1;
      totalS += timeoutS;
    } else {
      totalS += Math.min(...solvedHere.map((r) => r.wallS));
    }
  }
  return { unsolved, totalS };
}

/** VBS over all solvers plus one leave-one-out row per solver. */
export function portfolioTable(records: RunRecord[], timeoutS: number): PortfolioRow[] {
  const solvers = solverIds(records);
  const benchmarks = benchmarkIds(records);
  const rows: PortfolioRow[] = [
    { label: "VBS", ...vbsOver(records, solvers, benchmarks, timeoutS) },
  ];
  for (const s of solvers) {
    const rest = solvers.filter((x) => x !== s);
    rows.push({
      label: `VBS - ${s}`,
      ...vbsOver(records, rest, benchmarks, timeoutS),
    });
  }
  return rows;
}

export interface Disagreement {
  benchmark: string;
  verdicts: Record<string, Verdict>;
  /** Solvers whose decisive verdict conflicts with the (tied or strict)
   * majority of the other decisive verdicts. */
  suspects: string[];
}

/** Majority-vote cross-check over decisive verdicts.
 *
 * For each benchmark where both sat and unsat were reported, each solver's
 * verdict is compared against the majority of the *other* solvers' decisive
 * verdicts; a strict majority against it marks the solver a suspect, a tie
 * marks every decisive participant (the data cannot exonerate anyone).
 */
export function disagreements(records: RunRecord[]): Disagreement[] {
  const out: Disagreement[] = [];
  for (const b of benchmarkIds(records)) {
    const here = records.filter((r) => r.benchmark === b);
    const decisive = here.filter((r) => isSolved(r.verdict));
    const verdictSet = new Set(decisive.map((r) => r.verdict));
    if (!(verdictSet.has("sat") && verdictSet.has("unsat"))) continue;
    const suspects: string[] = [];
    for (const r of decisive) {
      const others = decisive.filter((o) => o.solver !== r.solver);
      const against = others.filter((o) => o.verdict !== r.verdict).length;
      const withMe = others.length - against;
      if (against > withMe) suspects.push(r.solver);
    }
    const verdicts: Record<string, Verdict> = {};
    for (const r of here) verdicts[r.solver] = r.verdict;
    out.push({ benchmark: b, verdicts, suspects: suspects.sort() });
  }
  return out;
}

export interface ScatterPoint {
  benchmark: string;
  x: number;
  y: number;
}

/** Pairwise scatter data: per benchmark, solver A's time against solver B's.
 * Unsolved runs sit on the timeout guide line. */
export function scatterPoints(
  records: RunRecord[],
  solverA: string,
  solverB: string,
  timeoutS: number,
): ScatterPoint[] {
  const time = (solver: string, b: string): number => {
    const r = records.find((x) => x.solver === solver && x.benchmark === b);
    return r && isSolved(r.verdict) ? r.wallS : timeoutS;
  };
  return benchmarkIds(records).map((b) => ({
    benchmark: b,
    x: time(solverA, b),
    y: time(solverB, b),
  }));
}

/** Log-log scatter plot as a standalone SVG string. */
export function scatterSvg(
  points: ScatterPoint[],
  solverA: string,
  solverB: string,
  timeoutS: number,
): string {
  const size = 420;
  const margin = 50;
  const floor = 0.001;
  const lo = Math.log10(floor);
  const hi = Math.log10(timeoutS);
  const scale = (t: number): number => {
    const v = (Math.log10(Math.max(t, floor)) - lo) / (hi - lo);
    return margin + v * (size - 2 * margin);
  };
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${size}" height="${size}" viewBox="0 0 ${size} ${size}">`,
  );
  parts.push(`<rect width="${size}" height="${size}" fill="white"/>`);
  const x0 = margin;
  const x1 = size - margin;
  const tl = scale(timeoutS);
  // axes and diagonal
  parts.push(`<line x1="${x0}" y1="${size - x0}" x2="${x1}" y2="${size - x0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${size - x0}" x2="${x0}" y2="${size - x1}" stroke="black"/>`);
  parts.push(
    `<line x1="${x0}" y1="${size - x0}" x2="${x1}" y2="${size - x1}" stroke="#bbbbbb"/>`,
  );
  // dashed timeout guide lines
  parts.push(
    `<line x1="${tl}" y1="${size - x0}" x2="${tl}" y2="${size - x1}" stroke="red" stroke-dasharray="4 3"/>`,
  );
  parts.push(
    `<line x1="${x0}" y1="${size - tl}" x2="${x1}" y2="${size - tl}" stroke="red" stroke-dasharray="4 3"/>`,
  );
  for (const p of points) {
    parts.push(
      `<circle cx="${scale(p.x).toFixed(1)}" cy="${(size - scale(p.y)).toFixed(1)}" r="3" ` +
        `fill="steelblue" fill-opacity="0.7" data-benchmark="${p.benchmark}"/>`,
    );
  }
  parts.push(
    `<text x="${size / 2}" y="${size - 12}" text-anchor="middle" font-size="12">${solverA} (s)</text>`,
  );
  parts.push(
    `<text x="14" y="${size / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 14 ${size / 2})">${solverB} (s)</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n");
}

export function scatterCsv(points: ScatterPoint[]): string {
  const lines = ["benchmark,x_s,y_s"];
  for (const p of points) {
    lines.push(`${p.benchmark},${p.x.toFixed(3)},${p.y.toFixed(3)}`);
  }
  return lines.join("\n") + "\n";
}

const pad = (s: string, w: number) => s.padEnd(w);
const num = (x: number) => x.toFixed(2).padStart(9);

/** Plain-text rendering of the summary and portfolio tables. */
export function renderReport(records: RunRecord[], timeoutS: number): string {
  const lines: string[] = [];
  const w = Math.max(10, ...solverIds(records).map((s) => s.length + 2));
  lines.push(pad("solver", w) + " unsolved    total      avg      med      std");
  for (const row of summarize(records)) {
    lines.push(
      pad(row.solver, w) +
        String(row.unsolved).padStart(9) +
        num(row.totalS) +
        num(row.avgS) +
        num(row.medS) +
        num(row.stdS),
    );
  }
  lines.push("");
  lines.push(pad("portfolio", w + 8) + " unsolved    total");
  for (const row of portfolioTable(records, timeoutS)) {
    lines.push(pad(row.label, w + 8) + String(row.unsolved).padStart(9) + num(row.totalS));
  }
  const dis = disagreements(records);
  lines.push("");
  if (dis.length === 0) {
    lines.push("no disagreements");
  } else {
    lines.push("disagreements:");
    for (const d of dis) {
      const vs = Object.entries(d.verdicts)
        .map(([s, v]) => `${s}=${v}`)
        .join(" ");
      lines.push(`  ${d.benchmark}: ${vs}  suspects: ${d.suspects.join(", ")}`);
    }
  }
  return lines.join("\n") + "\n";
}
