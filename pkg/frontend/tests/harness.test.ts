// End-to-end fixture run: two stub solvers over five benchmark files.
//
// The oracle stub answers each file's :status annotation; the contrarian
// stub always answers sat and stalls on the slow-marker file.  With a 1 s
// timeout the expected records are fully hand-computable:
//
//   oracle:     sat sat unsat unsat sat     (0 unsolved)
//   contrarian: sat sat sat   sat   timeout (1 unsolved)
//
// f03/f04 are sat-vs-unsat conflicts, so the contrarian must show up in the
// disagreement report; the VBS rows follow from the solved sets.

import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { beforeAll, describe, expect, it } from "vitest";
import { CSV_HEADER, loadCsv } from "../src/csv.js";
import { runCorpus } from "../src/runner.js";
import {
  disagreements,
  portfolioTable,
  scatterPoints,
  scatterSvg,
  summarize,
} from "../src/report.js";
import type { RunConfig, RunRecord } from "../src/types.js";

const HERE = path.dirname(new URL(import.meta.url).pathname);
const FIXTURES = path.join(HERE, "fixtures");
const STUBS = path.join(HERE, "stubs");
const TIMEOUT_S = 1;

let workDir: string;
let csvPath: string;
let config: RunConfig;
let records: RunRecord[];

const byKey = (solver: string, stem: string): RunRecord => {
  const r = records.find(
    (x) => x.solver === solver && path.basename(x.benchmark).startsWith(stem),
  );
  if (!r) throw new Error(`missing record ${solver}/${stem}`);
  return r;
};

beforeAll(async () => {
  workDir = fs.mkdtempSync(path.join(os.tmpdir(), "bench-"));
  csvPath = path.join(workDir, "results.csv");
  config = {
    solvers: [
      { id: "oracle", command: `sh ${path.join(STUBS, "oracle.sh")} {file}` },
      { id: "contrarian", command: `sh ${path.join(STUBS, "contrarian.sh")} {file}` },
    ],
    benchmarks: [FIXTURES],
    timeoutS: TIMEOUT_S,
    memoryMib: 512,
    jobs: 2,
    resultsCsv: csvPath,
  };
  records = await runCorpus(config);
});

describe("fixture corpus run", () => {
  it("produces one CSV record per (solver, benchmark) pair", () => {
    expect(records).toHaveLength(10);
    const lines = fs.readFileSync(csvPath, "utf-8").trim().split("\n");
    expect(lines[0]).toBe(CSV_HEADER);
    expect(lines).toHaveLength(11);
    expect(loadCsv(csvPath)).toHaveLength(10);
  });

  it("matches the hand-computed verdicts", () => {
    expect(byKey("oracle", "f01").verdict).toBe("sat");
    expect(byKey("oracle", "f02").verdict).toBe("sat");
    expect(byKey("oracle", "f03").verdict).toBe("unsat");
    expect(byKey("oracle", "f04").verdict).toBe("unsat");
    expect(byKey("oracle", "f05").verdict).toBe("sat");
    expect(byKey("contrarian", "f01").verdict).toBe("sat");
    expect(byKey("contrarian", "f02").verdict).toBe("sat");
    expect(byKey("contrarian", "f03").verdict).toBe("sat");
    expect(byKey("contrarian", "f04").verdict).toBe("sat");
    expect(byKey("contrarian", "f05").verdict).toBe("timeout");
  });

  it("enforces the time limit on the stalling stub", () => {
    const slow = byKey("contrarian", "f05");
    expect(slow.wallS).toBeGreaterThanOrEqual(TIMEOUT_S * 0.9);
    expect(slow.wallS).toBeLessThanOrEqual(TIMEOUT_S + 1.0);
  });

  it("computes the hand-computed unsolved counts", () => {
    const rows = summarize(records);
    const bySolver = Object.fromEntries(rows.map((r) => [r.solver, r]));
    expect(bySolver["oracle"].unsolved).toBe(0);
    expect(bySolver["contrarian"].unsolved).toBe(1);
  });

  it("computes the hand-computed VBS and leave-one-out rows", () => {
    const rows = portfolioTable(records, TIMEOUT_S);
    const byLabel = Object.fromEntries(rows.map((r) => [r.label, r]));
    // every file is answered decisively by at least one solver
    expect(byLabel["VBS"].unsolved).toBe(0);
    // without the oracle only the contrarian remains, which times out on f05
    expect(byLabel["VBS - oracle"].unsolved).toBe(1);
    // the oracle alone answers everything
    expect(byLabel["VBS - contrarian"].unsolved).toBe(0);
  });

  it("flags the deliberately wrong stub in the disagreement report", () => {
    const dis = disagreements(records);
    const files = dis.map((d) => path.basename(d.benchmark));
    expect(files).toHaveLength(2);
    expect(files[0]).toContain("f03");
    expect(files[1]).toContain("f04");
    for (const d of dis) {
      expect(d.suspects).toContain("contrarian");
    }
  });

  it("renders the scatter artifact with one point per benchmark", () => {
    const pts = scatterPoints(records, "contrarian", "oracle", TIMEOUT_S);
    expect(pts).toHaveLength(5);
    // the timed-out run sits on the x timeout guide line
    const slow = pts.find((p) => p.benchmark.includes("f05"))!;
    expect(slow.x).toBe(TIMEOUT_S);
    const svg = scatterSvg(pts, "contrarian", "oracle", TIMEOUT_S);
    const artifact = path.join(workDir, "scatter.svg");
    fs.writeFileSync(artifact, svg);
    expect(fs.existsSync(artifact)).toBe(true);
    expect((svg.match(/<circle /g) || []).length).toBe(5);
    expect((svg.match(/stroke-dasharray/g) || []).length).toBe(2);
  });

  it("resumes without re-running or duplicating finished pairs", async () => {
    const before = fs.readFileSync(csvPath, "utf-8");
    const again = await runCorpus(config);
    expect(again).toHaveLength(10);
    expect(fs.readFileSync(csvPath, "utf-8")).toBe(before);
  });
});
