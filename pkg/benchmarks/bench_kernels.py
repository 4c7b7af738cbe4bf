"""Compare the compiled automata kernels with the pure-Python fallback.

Runs the same workload twice in subprocesses, once with the default
kernel selection (compiled when available) and once with
``STRSAT_KERNEL=pure``, then prints a timing table.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _random_nfa(rng, n, m):
    from strsat.nfa.automaton import Nfa

    trans = [
        (rng.randrange(n), rng.randrange(m), rng.randrange(n))
        for _ in range(3 * n)
    ]
    return Nfa(n, m, trans, (0,), tuple(rng.sample(range(n), max(1, n // 3))))


def run_workload(repeat):
    sys.path.insert(0, os.path.join(ROOT, "src"))
    from strsat.driver import Options, solve_text
    from strsat.nfa import automaton

    rng = random.Random(7)
    nfas = [_random_nfa(rng, rng.randint(4, 12), 3) for _ in range(40)]
    out = {"kernel": automaton._k.__name__.rsplit(".", 1)[-1]}

    t = time.perf_counter()
    for _ in range(repeat):
        for a, b in zip(nfas, nfas[1:]):
            a.intersect(b).trim()
    out["product+trim"] = time.perf_counter() - t

    t = time.perf_counter()
    for _ in range(repeat):
        for a, b in zip(nfas, nfas[1:]):
            a.is_included(b)
    out["inclusion"] = time.perf_counter() - t

    t = time.perf_counter()
    for _ in range(repeat):
        for a in nfas:
            a.reduce_simulation()
    out["simulation"] = time.perf_counter() - t

    t = time.perf_counter()
    for _ in range(repeat):
        for a in nfas[:10]:
            a.determinize().minimize_dfa()
    out["determinize+minimize"] = time.perf_counter() - t

    suite = sorted(
        os.path.join(ROOT, "benchmarks", "suite", f)
        for f in os.listdir(os.path.join(ROOT, "benchmarks", "suite"))
    )[:20]
    t = time.perf_counter()
    for path in suite:
        solve_text(open(path).read(), Options(timeout=120.0))
    out["solve 20 files"] = time.perf_counter() - t
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--inner", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.inner:
        print(json.dumps(run_workload(args.repeat)))
        return

    results = []
    for label, env_val in (("compiled", None), ("pure", "pure")):
        env = dict(os.environ)
        env.pop("STRSAT_KERNEL", None)
        if env_val:
            env["STRSAT_KERNEL"] = env_val
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--inner",
             "--repeat", str(args.repeat)],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        results.append((label, json.loads(proc.stdout)))

    keys = [k for k in results[0][1] if k != "kernel"]
    width = max(len(k) for k in keys) + 2
    header = f"{'workload':<{width}}" + "".join(
        f"{label + ' (' + data['kernel'] + ')':>24}" for label, data in results
    )
    print(header)
    print("-" * len(header))
    for k in keys:
        row = f"{k:<{width}}"
        for _label, data in results:
            row += f"{data[k]:>23.3f}s"
        print(row)
    comp = results[0][1]
    pure = results[1][1]
    total_c = sum(comp[k] for k in keys)
    total_p = sum(pure[k] for k in keys)
    print("-" * len(header))
    print(f"{'total':<{width}}{total_c:>23.3f}s{total_p:>23.3f}s")
    if total_c > 0:
        print(f"speedup: {total_p / total_c:.2f}x")


if __name__ == "__main__":
    main()
