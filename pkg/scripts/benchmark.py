#!/usr/bin/env python3
"""
Benchmark script comparing binary64 mean evaluation against the mpmath oracle.
"""

import statistics
import time

from meanaudit import PositivePair, draw_pairs, evaluate_mean, mean_value, oracle
from meanaudit.means import CHAIN_ORDER, L

# Test cases
SAMPLE = draw_pairs(42, 10_000, 1_000)
PAIR = PositivePair(1.0, 4.0)

TEST_CASES = [
    {
        "name": "L, vectorized over 11k pairs",
        "fast": lambda: evaluate_mean(L, SAMPLE.a, SAMPLE.b),
        "slow": None,
        "iterations": 200,
    },
    {
        "name": "L at one pair",
        "fast": lambda: mean_value(L, PAIR),
        "slow": lambda: oracle.mean_value(L, PAIR),
        "iterations": 5_000,
    },
    {
        "name": "All named means at one pair",
        "fast": lambda: [mean_value(k, PAIR) for k in CHAIN_ORDER],
        "slow": lambda: [oracle.mean_value(k, PAIR) for k in CHAIN_ORDER],
        "iterations": 1_000,
    },
]


def benchmark_function(func, iterations, warmup=20):
    """Time ``func`` over ``iterations`` calls."""
    for _ in range(warmup):
        func()

    times = []
    for _ in range(iterations):
        start = time.perf_counter()
        func()
        end = time.perf_counter()
        times.append((end - start) * 1000)  # Convert to milliseconds

    return {
        "mean": statistics.mean(times),
        "median": statistics.median(times),
        "stdev": statistics.stdev(times) if len(times) > 1 else 0,
        "min": min(times),
        "max": max(times),
        "total": sum(times),
    }


def _report(label, stats):
    print(f"{label}")
    print(f"  Mean:   {stats['mean']:.4f} ms")
    print(f"  Median: {stats['median']:.4f} ms")
    print(f"  Total:  {stats['total']:.2f} ms")


def run_benchmark(test_case):
    """Run benchmark for a single test case."""
    print(f"\n{'=' * 70}")
    print(f"Test: {test_case['name']}")
    print(f"Iterations: {test_case['iterations']:,}")
    print(f"{'-' * 70}")

    fast = benchmark_function(test_case["fast"], test_case["iterations"])
    _report("binary64:", fast)
    if test_case["slow"] is None:
        return
    slow = benchmark_function(test_case["slow"], test_case["iterations"])
    _report("oracle (mpmath):", slow)
    print(f"\noracle / binary64 time ratio: {slow['mean'] / fast['mean']:.1f}")


def main():
    """Run all benchmarks."""
    print("=" * 70)
    print("meanaudit binary64 vs oracle benchmark")
    print("=" * 70)

    for test_case in TEST_CASES:
        run_benchmark(test_case)

    print("\n" + "=" * 70)
    print("Benchmark complete!")
    print("=" * 70)


if __name__ == "__main__":
    main()
