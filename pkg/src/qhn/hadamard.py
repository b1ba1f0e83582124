"""Sylvester Hadamard matrices over Z/p.

``-1`` is represented by ``p - 1``, so entries are 1 or p-1. No 1/sqrt(2)
normalisation is applied; the inverse uses the exact scale ``n^-1 mod p``
together with H being symmetric (H^T = H, H.H^T = n.I).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import BlockSizeMismatch, DegenerateOrder
from .modmath import PrimeModulus, mod_inverse


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    m: int
    p: int
    entries: np.ndarray = field(repr=False)
    inv_scale: int

    @property
    def n(self) -> int:
        return 1 << self.m

    @cached_property
    def inverse_entries(self) -> np.ndarray:
        inv = self.entries * self.inv_scale % self.p
        inv.setflags(write=False)
        return inv

    @cached_property
    def reduction_interval(self) -> int:
        return _kernels._reduction_interval(self.p)

    def check_block(self, block) -> np.ndarray:
        x = np.asarray(block, dtype=np.int64)
        if x.shape[-1:] != (self.n,):
            raise BlockSizeMismatch(f"block length {x.shape[-1:]} != order {self.n}")
        return x % self.p


def sylvester_build(m: int, p: int | PrimeModulus) -> HadamardMatrix:
    p = int(p)
    PrimeModulus(p)
    if m < 0:
        raise DegenerateOrder("depth must be non-negative")
    n = 1 << m
    if n % p == 0:
        raise DegenerateOrder(f"order {n} is divisible by p={p}; no inverse scale")
    H = np.ones((1, 1), dtype=np.int64)
    for _ in range(m):
        H = np.block([[H, H], [H, -H]])
    H %= p
    H.setflags(write=False)
    return HadamardMatrix(m=m, p=p, entries=H, inv_scale=mod_inverse(n, p))


def _batched(fn, H, block):
    x = H.check_block(block)
    flat = np.ascontiguousarray(x.reshape(-1, H.n))
    return fn(flat).reshape(x.shape)


def hadamard_forward_naive(H: HadamardMatrix, block) -> np.ndarray:
    """``H @ block mod p`` as a dense product. Accepts (..., n) batches."""
    return _batched(
        lambda X: _kernels.active.matvec(H.entries, X, H.p, H.reduction_interval), H, block)


def hadamard_forward_fast(H: HadamardMatrix, block) -> np.ndarray:
    """Same result as the naive product via log2(n) butterfly stages."""
    return _batched(lambda X: _kernels.active.fwht(X, H.p), H, block)


def hadamard_inverse(H: HadamardMatrix, block) -> np.ndarray:
    return hadamard_forward_fast(H, block) * H.inv_scale % H.p


def hadamard_inverse_naive(H: HadamardMatrix, block) -> np.ndarray:
    return _batched(
        lambda X: _kernels.active.matvec(H.inverse_entries, X, H.p, H.reduction_interval),
        H, block)
