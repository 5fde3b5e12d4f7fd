#!/usr/bin/env python3
"""Run the full 10^5-rollout factorial action sweep with a worker pool.

Usage: python scripts/run_full_sweep.py [OUT_DIR] [--seed N] [--workers N]
"""
import argparse
import os
import sys
import time

from ricensim.cli import main as ricensim_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", nargs="?", default="ricensim_out/full_sweep")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    args = parser.parse_args()

    start = time.perf_counter()
    code = ricensim_main([
        "sweep", "--full-scale",
        "--seed", str(args.seed),
        "--out", args.out_dir,
        "--workers", str(args.workers),
    ])
    print(f"elapsed: {time.perf_counter() - start:.1f}s with {args.workers} workers")
    return code


if __name__ == "__main__":
    sys.exit(main())
