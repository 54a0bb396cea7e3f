#!/usr/bin/env python3
"""Times the session kernel on the JIT path against the pure-Python fallback.

The fallback is selected by VDTPTUNE_DISABLE_NUMBA=1, which is read at import
time, so each path runs in its own subprocess. Both paths share one source
function and PRNG and produce bit-identical results; this script reports the
speed difference and cross-checks a fingerprint of the outputs.

Usage: python3 benchmarks/kernel_speed.py [--sessions N] [--repeats K]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def child(sessions: int, repeats: int) -> None:
    from vdtptune.sim import kernels
    from vdtptune.sim.scenario import human_expert_config, preset
    from vdtptune.sim.transfer import _kernel_args

    out = {"numba": kernels.NUMBA_ENABLED, "cases": {}}
    for name in ("urban", "highway"):
        scenario = preset(name)
        args = _kernel_args(human_expert_config(scenario), scenario)
        # warm-up triggers compilation on the JIT path
        kernels.run_sessions(sessions, *args, 42)
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            times, lost, delivered, refused = kernels.run_sessions(sessions, *args, 42)
            best = min(best, time.perf_counter() - t0)
        out["cases"][name] = {
            "best_s": best,
            "fingerprint": [repr(float(times.sum())), int(lost.sum()), int(delivered.sum())],
        }
    print(json.dumps(out))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sessions", type=int, default=2000)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.child:
        child(args.sessions, args.repeats)
        return 0

    results = {}
    for label, disable in (("numba", "0"), ("pure", "1")):
        env = dict(os.environ, VDTPTUNE_DISABLE_NUMBA=disable)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--child",
             "--sessions", str(args.sessions), "--repeats", str(args.repeats)],
            env=env, capture_output=True, text=True, check=True,
        )
        results[label] = json.loads(proc.stdout.strip().splitlines()[-1])

    if not results["numba"]["numba"]:
        print("note: numba unavailable, both runs used the pure path")

    print(f"{args.sessions} sessions per call, best of {args.repeats}:")
    print(f"{'scenario':<10}  {'numba_s':>10}  {'pure_s':>10}  {'speedup':>8}")
    for name in results["numba"]["cases"]:
        a = results["numba"]["cases"][name]
        b = results["pure"]["cases"][name]
        if a["fingerprint"] != b["fingerprint"]:
            print(f"MISMATCH on {name}: {a['fingerprint']} vs {b['fingerprint']}")
            return 1
        print(f"{name:<10}  {a['best_s']:>10.4f}  {b['best_s']:>10.4f}  {b['best_s'] / a['best_s']:>7.1f}x")
    print("outputs bit-identical across paths")
    return 0


if __name__ == "__main__":
    sys.exit(main())
