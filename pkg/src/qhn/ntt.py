"""Number-theoretic transform over Z/p.

The transform matrix is ``W[i, j] = w**(i*j mod n)`` for a primitive n-th
root of unity ``w``, which exists iff ``n`` divides ``p - 1``. The root is
the smallest ``g >= 2`` of exact order ``n`` so that results are
reproducible; for (n=6, p=7) that is 3.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import BlockSizeMismatch, NoSuchRoot, UnsupportedFastOrder
from .modmath import PrimeModulus, mod_inverse, prime_factors


def find_primitive_nth_root(n: int, p: int | PrimeModulus) -> int:
    p = int(p)
    if n < 1:
        raise NoSuchRoot("order must be >= 1")
    if (p - 1) % n:
        raise NoSuchRoot(f"{n} does not divide p-1={p - 1}")
    if n == 1:
        return 1
    factors = prime_factors(n)
    for g in range(2, p):
        if pow(g, n, p) == 1 and all(pow(g, n // q, p) != 1 for q in factors):
            return g
    raise NoSuchRoot(f"no element of order {n} mod {p}")  # unreachable for prime p


def _power_matrix(w: int, n: int, p: int) -> np.ndarray:
    powers = np.array([pow(w, k, p) for k in range(n)], dtype=np.int64)
    i = np.arange(n)
    return powers[(i[:, None] * i[None, :]) % n]


@dataclass(frozen=True, eq=False)
class NttMatrix:
    n: int
    p: int
    w: int
    w_inv: int
    inv_scale: int

    @cached_property
    def entries(self) -> np.ndarray:
        # dense n x n, built on first use (large fast-path orders never need it)
        W = _power_matrix(self.w, self.n, self.p)
        W.setflags(write=False)
        return W

    @property
    def is_fast(self) -> bool:
        return self.n & (self.n - 1) == 0

    @cached_property
    def inverse_entries(self) -> np.ndarray:
        # n^-1 * w^(-ij), ready to use as a plain matrix
        inv = _power_matrix(self.w_inv, self.n, self.p) * self.inv_scale % self.p
        inv.setflags(write=False)
        return inv

    @cached_property
    def twiddles(self) -> np.ndarray:
        return np.array([pow(self.w, k, self.p) for k in range(max(1, self.n // 2))], np.int64)

    @cached_property
    def inverse_twiddles(self) -> np.ndarray:
        return np.array([pow(self.w_inv, k, self.p) for k in range(max(1, self.n // 2))], np.int64)

    @cached_property
    def reduction_interval(self) -> int:
        return _kernels._reduction_interval(self.p)

    def check_block(self, block) -> np.ndarray:
        x = np.asarray(block, dtype=np.int64)
        if x.shape[-1:] != (self.n,):
            raise BlockSizeMismatch(f"block length {x.shape[-1:]} != order {self.n}")
        return x % self.p


def ntt_build(n: int, p: int | PrimeModulus) -> NttMatrix:
    p = int(p)
    PrimeModulus(p)
    w = find_primitive_nth_root(n, p)
    return NttMatrix(n=n, p=p, w=w, w_inv=mod_inverse(w, p), inv_scale=mod_inverse(n, p))


def _batched(fn, M, block):
    x = M.check_block(block)
    flat = np.ascontiguousarray(x.reshape(-1, M.n))
    return fn(flat).reshape(x.shape)


def ntt_forward_naive(M: NttMatrix, block) -> np.ndarray:
    return _batched(
        lambda X: _kernels.active.matvec(M.entries, X, M.p, M.reduction_interval), M, block)


def ntt_forward_fast(M: NttMatrix, block) -> np.ndarray:
    """Radix-2 DIT butterfly; only defined for power-of-two orders."""
    if not M.is_fast:
        raise UnsupportedFastOrder(f"order {M.n} is not a power of two")
    return _batched(lambda X: _kernels.active.ntt(X, M.twiddles, M.p), M, block)


def ntt_inverse(M: NttMatrix, block) -> np.ndarray:
    """``x[j] = n^-1 * sum_i w^(-ij) y[i]``; uses the butterfly when it can."""
    if M.is_fast:
        y = _batched(lambda X: _kernels.active.ntt(X, M.inverse_twiddles, M.p), M, block)
        return y * M.inv_scale % M.p
    return _batched(
        lambda X: _kernels.active.matvec(M.inverse_entries, X, M.p, M.reduction_interval),
        M, block)

