"""Compare the numba and numpy kernel paths, per kernel and end to end.

    python benchmarks/bench_kernels.py --repeat 200 --runs 3
"""
import argparse
import time

import numpy as np

from reechsim import kernels
from reechsim.config import ExperimentConfig
from reechsim.engine import run_simulation
from reechsim.kernels import ROLE_DIRECT, ROLE_HEAD, ROLE_NORMAL, SINK


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def make_round(n, heads, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 100, n)
    y = rng.uniform(0, 100, n)
    head_idx = np.sort(rng.choice(n, heads, replace=False)).astype(np.int64)
    member_idx = np.setdiff1d(np.arange(n), head_idx).astype(np.int64)
    role = np.full(n, ROLE_NORMAL, dtype=np.int64)
    role[head_idx] = ROLE_HEAD
    role[: n // 5][role[: n // 5] == ROLE_NORMAL] = ROLE_DIRECT
    dest = np.full(n, SINK, dtype=np.int64)
    members = np.flatnonzero(role == ROLE_NORMAL)
    dest[members] = head_idx[np.arange(members.size) % heads]
    return x, y, dest, role, member_idx, head_idx


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, nargs="+", default=[100, 1000, 10000])
    ap.add_argument("--repeat", type=int, default=100)
    ap.add_argument("--runs", type=int, default=3, help="seeds for the end-to-end timing")
    args = ap.parse_args()

    if kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")
    backends = {name: kernels.select_backend(name) for name in ("numpy", "numba")}

    print(f"{'kernel':<14}{'nodes':>8}{'numpy us':>12}{'numba us':>12}{'speedup':>9}")
    for n in args.nodes:
        x, y, dest, role, member_idx, head_idx = make_round(n, max(1, n // 10))
        debit_args = (x, y, dest, role, 50.0, 50.0, 50e-9, 10e-12, 1.3e-15, 87.7, 5e-9, 4000)
        rows = {
            "round_debits": lambda b: b[0](*debit_args),
            "nearest_heads": lambda b: b[1](x, y, member_idx, head_idx),
            "apply_debits": lambda b: b[2](np.full(n, 0.5), np.full(n, 1e-4)),
        }
        for label, call in rows.items():
            for b in backends.values():
                call(b)  # warm-up / JIT compile
            t = {name: best_of(lambda: call(b), args.repeat) for name, b in backends.items()}
            print(f"{label:<14}{n:>8}{t['numpy'] * 1e6:>12.1f}{t['numba'] * 1e6:>12.1f}"
                  f"{t['numpy'] / t['numba']:>8.1f}x")

    cfg = ExperimentConfig()
    print()
    print(f"{'full run':<14}{'protocol':>8}{'numpy s':>12}{'numba s':>12}{'speedup':>9}")
    for proto in ("reech", "leach"):
        t = {}
        for name in backends:
            run_simulation(cfg.replace(max_rounds=5), proto, 0, backend=name)
            t0 = time.perf_counter()
            for seed in range(1, args.runs + 1):
                run_simulation(cfg, proto, seed, backend=name)
            t[name] = (time.perf_counter() - t0) / args.runs
        print(f"{'':<14}{proto:>8}{t['numpy']:>12.3f}{t['numba']:>12.3f}{t['numpy'] / t['numba']:>8.1f}x")


if __name__ == "__main__":
    main()
