"""Naive-vs-fast kernel timings for each available backend."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .hadamard import hadamard_forward_fast, hadamard_forward_naive, sylvester_build
from .ntt import ntt_build, ntt_forward_fast, ntt_forward_naive

DEFAULT_SIZES = (64, 256, 1024, 4096)
# Fermat prime: every power of two up to 2**16 divides p-1
DEFAULT_P = 65537


@dataclass
class BenchRow:
    backend: str
    transform: str
    n: int
    naive_ms: float
    fast_ms: float
    equal: bool

    @property
    def speedup(self) -> float:
        return self.naive_ms / self.fast_ms if self.fast_ms > 0 else float("inf")


def median_time(fn, repeats: int) -> float:
    fn()  # warm-up; also triggers JIT compilation
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def run(sizes=DEFAULT_SIZES, p: int = DEFAULT_P, repeats: int = 20,
        backends=None, seed: int = 0) -> list[BenchRow]:
    rng = np.random.default_rng(seed)
    rows = []
    for name in backends or _kernels.available_backends():
        with _kernels.use_backend(name):
            for n in sizes:
                x = rng.integers(0, p, n)
                H = sylvester_build(n.bit_length() - 1, p)
                W = ntt_build(n, p)
                for label, M, naive, fast in (
                    ("hadamard", H, hadamard_forward_naive, hadamard_forward_fast),
                    ("ntt", W, ntt_forward_naive, ntt_forward_fast),
                ):
                    equal = bool(np.array_equal(naive(M, x), fast(M, x)))
                    t_naive = median_time(lambda: naive(M, x), repeats)
                    t_fast = median_time(lambda: fast(M, x), repeats)
                    rows.append(BenchRow(name, label, n, t_naive * 1e3, t_fast * 1e3, equal))
    return rows


def format_rows(rows) -> str:
    head = f"{'backend':<8}{'transform':<10}{'n':>7}{'naive_ms':>12}{'fast_ms':>11}{'speedup':>10}  equal"
    lines = [head]
    for r in rows:
        lines.append(f"{r.backend:<8}{r.transform:<10}{r.n:>7}{r.naive_ms:>12.4f}"
                     f"{r.fast_ms:>11.4f}{r.speedup:>10.1f}  {'yes' if r.equal else 'NO'}")
    return "\n".join(lines) + "\n"
