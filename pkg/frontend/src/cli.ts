/** Command line entry point.
 *
 * Usage:
 *   node dist/cli.js run CONFIG          run all pending (solver, benchmark)
 *                                        pairs, appending to the results CSV
 *   node dist/cli.js report CONFIG       print summary/portfolio tables and
 *                                        write scatter artifacts next to the
 *                                        results CSV
 */

import * as fs from "fs";
import * as path from "path";
import { loadConfig } from "./config.js";
import { loadCsv } from "./csv.js";
import { runCorpus } from "./runner.js";
import {
  renderReport,
  scatterCsv,
  scatterPoints,
  scatterSvg,
  solverIds,
} from "./report.js";

async function main(): Promise<number> {
  const [mode, configPath] = process.argv.slice(2);
  if (!mode || !configPath) {
    console.error("usage: cli.js run|report CONFIG");
    return 2;
  }
  const config = loadConfig(configPath);
  if (mode === "run") {
    const records = await runCorpus(config);
    console.log(`${records.length} records in ${config.resultsCsv}`);
    return 0;
  }
  if (mode === "report") {
    const records = loadCsv(config.resultsCsv);
    if (records.length === 0) {
      console.error("no records; run first");
      return 1;
    }
    process.stdout.write(renderReport(records, config.timeoutS));
    const solvers = solverIds(records);
    const dir = path.dirname(config.resultsCsv);
    for (let i = 0; i < solvers.length; i++) {
      for (let j = i + 1; j < solvers.length; j++) {
        const pts = scatterPoints(records, solvers[i], solvers[j], config.timeoutS);
        const stem = path.join(dir, `scatter_${solvers[i]}_vs_${solvers[j]}`);
        fs.writeFileSync(stem + ".svg", scatterSvg(pts, solvers[i], solvers[j], config.timeoutS));
        fs.writeFileSync(stem + ".csv", scatterCsv(pts));
        console.log(`wrote ${stem}.svg`);
      }
    }
    return 0;
  }
  console.error(`unknown mode: ${mode}`);
  return 2;
}

main().then((code) => process.exit(code));
