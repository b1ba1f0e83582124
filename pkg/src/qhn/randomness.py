"""Randomness measurements: cyclic autocorrelation, the R measure, and the
block-frequency chi-square test with its incomplete-gamma P-value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (BlockTooLarge, ConvergenceError, DomainError, EmptySequence,
                     OutOfAlphabet, PeriodTooShort)

ALPHA = 0.01
DEFAULT_BLOCK_SIZE = 18


def bits_per_symbol(p: int) -> int:
    return max(1, (int(p) - 1).bit_length())


def to_bits(symbols, p: int) -> np.ndarray:
    """Each symbol as ceil(log2 p) bits, most significant first."""
    s = np.asarray(symbols, dtype=np.int64).reshape(-1)
    if s.size and (s.min() < 0 or s.max() >= p):
        raise OutOfAlphabet(f"symbols must lie in [0, {p})")
    b = bits_per_symbol(p)
    shifts = np.arange(b - 1, -1, -1)
    return ((s[:, None] >> shifts) & 1).astype(np.int8).reshape(-1)


def to_bipolar(bits) -> np.ndarray:
    return np.where(np.asarray(bits).reshape(-1) != 0, 1, -1).astype(np.int64)


def autocorrelation(s) -> np.ndarray:
    """C(k) = (1/n) sum_j s[j] s[(j+k) mod n] for k in [0, n).

    Lag sums are accumulated in int64 and divided once, so the result does
    not depend on evaluation order.
    """
    a = np.ascontiguousarray(np.asarray(s, dtype=np.int64).reshape(-1))
    n = a.shape[0]
    if n == 0:
        raise EmptySequence("autocorrelation of an empty sequence")
    return _kernels.active.cyclic_lag_sums(a) / n


def randomness_measure(C) -> float:
    """R = 1 - mean(|C(k)|, k = 1..n-1). 1 for ideal noise, 0 for a constant."""
    C = np.asarray(C, dtype=np.float64)
    n = C.shape[0]
    if n < 2:
        raise PeriodTooShort(f"period {n} < 2")
    return float(1.0 - np.abs(C[1:]).sum() / (n - 1))


def _igam_series(a, x, tol, max_iter):
    # regularised lower P(a, x)
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * tol:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"igam series did not converge for a={a}, x={x}")


def _igamc_cf(a, x, tol, max_iter):
    # modified Lentz evaluation of the continued fraction for Q(a, x)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
    raise ConvergenceError(f"igamc continued fraction did not converge for a={a}, x={x}")


def igamc(a: float, x: float, tol: float = 1e-10, max_iter: int = 500) -> float:
    """Regularised upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    if not a > 0:
        raise DomainError(f"igamc needs a > 0, got {a}")
    if not x >= 0:
        raise DomainError(f"igamc needs x >= 0, got {x}")
    if x == 0:
        return 1.0
    # both expansions need O(sqrt(a)) terms near x ~ a
    max_iter = max(max_iter, int(20 * math.sqrt(a)) + 100)
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _igam_series(a, x, tol, max_iter)))
    return min(1.0, max(0.0, _igamc_cf(a, x, tol, max_iter)))


@dataclass(frozen=True)
class BlockFrequencyResult:
    chi2: float
    n_blocks: int
    block_size: int
    p_value: float

    @property
    def random(self) -> bool:
        return self.p_value >= ALPHA

    @property
    def verdict(self) -> str:
        return "random" if self.random else "non-random"


def block_frequency_test(bits, M: int = DEFAULT_BLOCK_SIZE) -> BlockFrequencyResult:
    eps = np.asarray(bits, dtype=np.int64).reshape(-1)
    n = eps.shape[0]
    if M < 1:
        raise BlockTooLarge(f"block size must be >= 1, got {M}")
    if M > n:
        raise BlockTooLarge(f"block size {M} exceeds sequence length {n}")
    N = n // M
    ones = eps[: N * M].reshape(N, M).sum(axis=1)
    # 4M * sum (ones/M - 1/2)^2 == sum (2*ones - M)^2 / M, numerator exact
    chi2 = float(((2 * ones - M) ** 2).sum()) / M
    return BlockFrequencyResult(chi2, N, M, igamc(N / 2.0, chi2 / 2.0))


@dataclass(frozen=True)
class AnalysisReport:
    autocorrelation: np.ndarray
    r: float
    chi2: float
    n_blocks: int
    block_size: int
    p_value: float
    n_bits: int

    @property
    def verdict(self) -> str:
        return "random" if self.p_value >= ALPHA else "non-random"

    def to_text(self) -> str:
        return (
            f"n_bits={self.n_bits}\n"
            f"r={self.r:.6f}\n"
            f"chi2={self.chi2:.6f}\n"
            f"n_blocks={self.n_blocks}\n"
            f"block_size={self.block_size}\n"
            f"p_value={self.p_value:.6f}\n"
            f"verdict={self.verdict}\n"
        )

    def autocorrelation_text(self) -> str:
        return "".join(f"{k} {c:.6f}\n" for k, c in enumerate(self.autocorrelation.tolist()))


def analyze_bits(bits, M: int = DEFAULT_BLOCK_SIZE) -> AnalysisReport:
    bits = np.asarray(bits).reshape(-1)
    C = autocorrelation(to_bipolar(bits))
    bf = block_frequency_test(bits, M)
    return AnalysisReport(
        autocorrelation=C,
        r=randomness_measure(C),
        chi2=bf.chi2,
        n_blocks=bf.n_blocks,
        block_size=M,
        p_value=bf.p_value,
        n_bits=bits.shape[0],
    )


def analyze(symbols, p: int, M: int = DEFAULT_BLOCK_SIZE) -> AnalysisReport:
    return analyze_bits(to_bits(symbols, p), M)


def parse_report(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if "=" in line:
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out
