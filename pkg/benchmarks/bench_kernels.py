"""Time the numba kernels against the pure-Python fallback.

Each backend runs in its own interpreter, since SPORADIC_NO_NUMBA is read at
import time.  Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--json]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from pathlib import Path
import numpy as np
import sporadic
from sporadic._accel import backend
from sporadic.atlas import GroupDescriptor, find_descriptor
from sporadic.backtrack import centralizer_chain
from sporadic.bsgs import schreier_sims
from sporadic.cohomology import ModuleRep, h1
from sporadic.local import sylow_chain
from sporadic.orbits import subdegrees

repeat = int(sys.argv[1])
gens = {n: GroupDescriptor.load(find_descriptor(n)).generator_set() for n in ("M24", "HS")}
m24 = schreier_sims(gens["M24"])
hs = schreier_sims(gens["HS"])
a7 = ModuleRep.load(Path(sporadic.__file__).parent / "data" / "modules" / "A7_natural.json")
rng = np.random.default_rng(0)
sample = np.stack([m24.random_array(rng) for _ in range(20000)])
z = sylow_chain(m24, 2, np.random.default_rng(1)).generators[0]

tasks = {
    "schreier_sims M24": lambda: schreier_sims(gens["M24"]),
    "schreier_sims HS": lambda: schreier_sims(gens["HS"]),
    "membership x20000 M24": lambda: [m24.contains(g) for g in sample],
    "subdegrees HS": lambda: subdegrees(hs),
    "centralizer in M24": lambda: centralizer_chain(m24, [z]),
    "h1 A7 natural": lambda: h1(a7),
}
out = {"backend": backend(), "seconds": {}}
for name, task in tasks.items():
    task()  # compile or warm caches
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        task()
        best = min(best, time.perf_counter() - t)
    out["seconds"][name] = best
print(json.dumps(out))
"""


def run_backend(no_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("SPORADIC_NO_NUMBA", None)
    if no_numba:
        env["SPORADIC_NO_NUMBA"] = "1"
    p = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], capture_output=True, text=True, env=env)
    if p.returncode:
        sys.exit(p.stderr)
    return json.loads(p.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="timed runs per task; the best is kept")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    if args.json:
        print(json.dumps({"fast": fast, "slow": slow}, indent=2))
        return
    print(f"{'task':<26}{fast['backend']:>10}{slow['backend']:>10}{'speedup':>10}")
    for name, t_fast in fast["seconds"].items():
        t_slow = slow["seconds"][name]
        print(f"{name:<26}{t_fast:>10.4f}{t_slow:>10.4f}{t_slow / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
