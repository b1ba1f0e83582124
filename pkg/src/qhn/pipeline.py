"""Four-phase randomiser and its exact inverse.

Phases, applied in order to a sequence of residues mod p:

1. chained quasigroup substitution (quasigroup of order p)
2. chained Hadamard transform of order n1 = 2**h1_depth
3. chained NTT of order n2 (n2 | p-1)
4. chained Hadamard transform of order n3 = 2**h2_depth

Chaining is additive CBC: ``c[i] = T((x[i] + c[i-1]) mod p)`` with
``c[0] = iv``. A zero IV leaves the first block as a bare transform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import ConfigError, LengthNotAligned, OutOfAlphabet
from .hadamard import HadamardMatrix, sylvester_build
from .modmath import PrimeModulus
from .ntt import NttMatrix, ntt_build
from .quasigroup import QuasigroupKey, paper7, qg_decrypt, qg_encrypt

Trace = Callable[[str, np.ndarray], None]

PHASES = ("quasigroup", "hadamard1", "ntt", "hadamard2")


def _iv(values, n: int, p: int, name: str) -> np.ndarray:
    if values is None:
        arr = np.zeros(n, np.int64)
    else:
        arr = np.asarray(values, dtype=np.int64).reshape(-1)
        if arr.shape[0] != n:
            raise ConfigError(f"{name} has length {arr.shape[0]}, block order is {n}")
        arr = arr % p
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PipelineConfig:
    p: int = 7
    qg: QuasigroupKey = field(default_factory=lambda: QuasigroupKey(paper7(), 3))
    h1_depth: int = 2
    ntt_order: int = 6
    h2_depth: int = 1
    iv1: Optional[np.ndarray] = None
    iv2: Optional[np.ndarray] = None
    iv3: Optional[np.ndarray] = None

    def __post_init__(self):
        p = int(self.p)
        PrimeModulus(p)
        if p == 2:
            raise ConfigError("p must be an odd prime")
        if self.qg.table.order != p:
            raise ConfigError(f"quasigroup order {self.qg.table.order} != p={p}")
        if self.h1_depth < 0 or self.h2_depth < 0:
            raise ConfigError("Hadamard depths must be non-negative")
        if self.ntt_order < 1 or (p - 1) % self.ntt_order:
            raise ConfigError(f"ntt_order {self.ntt_order} must divide p-1={p - 1}")
        n1, n2, n3 = self.orders
        if len({n1, n2, n3}) != 3:
            raise ConfigError(f"block orders must be pairwise distinct, got {(n1, n2, n3)}")
        object.__setattr__(self, "iv1", _iv(self.iv1, n1, p, "iv1"))
        object.__setattr__(self, "iv2", _iv(self.iv2, n2, p, "iv2"))
        object.__setattr__(self, "iv3", _iv(self.iv3, n3, p, "iv3"))

    @property
    def orders(self) -> tuple[int, int, int]:
        return 1 << self.h1_depth, self.ntt_order, 1 << self.h2_depth

    @property
    def lcm(self) -> int:
        return math.lcm(*self.orders)

    @cached_property
    def hadamard1(self) -> HadamardMatrix:
        return sylvester_build(self.h1_depth, self.p)

    @cached_property
    def ntt(self) -> NttMatrix:
        return ntt_build(self.ntt_order, self.p)

    @cached_property
    def hadamard2(self) -> HadamardMatrix:
        return sylvester_build(self.h2_depth, self.p)


def check_length(cfg: PipelineConfig, length: int) -> None:
    if length % cfg.lcm:
        raise LengthNotAligned(length, cfg.lcm)


def pad_to_alignment(seq, cfg: PipelineConfig) -> np.ndarray:
    x = np.asarray(seq, dtype=np.int64).reshape(-1)
    short = -x.shape[0] % cfg.lcm
    return np.concatenate((x, np.zeros(short, np.int64)))


# -- generic chaining over any block transform --------------------------------

def _blocks(seq, iv, p):
    x = np.asarray(seq, dtype=np.int64).reshape(-1) % p
    iv = np.asarray(iv, dtype=np.int64).reshape(-1) % p
    n = iv.shape[0]
    if x.shape[0] % n:
        raise LengthNotAligned(x.shape[0], n)
    return x, iv, n


def chained_block_transform(forward, iv, seq, p: int) -> np.ndarray:
    """CBC-chain an arbitrary block map ``forward`` (length-n array -> array)."""
    x, prev, n = _blocks(seq, iv, p)
    out = np.empty_like(x)
    for s in range(0, x.shape[0], n):
        prev = np.asarray(forward((x[s:s + n] + prev) % p), dtype=np.int64) % p
        out[s:s + n] = prev
    return out


def chained_block_inverse(inverse, iv, cipher, p: int) -> np.ndarray:
    c, prev, n = _blocks(cipher, iv, p)
    out = np.empty_like(c)
    for s in range(0, c.shape[0], n):
        block = c[s:s + n]
        out[s:s + n] = (np.asarray(inverse(block), dtype=np.int64) - prev) % p
        prev = block
    return out


# -- fused chaining on the package's own transforms ---------------------------

_DUMMY_M = np.zeros((1, 1), np.int64)
_DUMMY_TW = np.zeros(1, np.int64)


def _kernel_args(T, inverse: bool):
    """(mode, matrix, twiddles, scale) driving the fused chain kernels."""
    if isinstance(T, HadamardMatrix):
        return _kernels.FWHT, _DUMMY_M, _DUMMY_TW, T.inv_scale
    if T.is_fast:
        tw = T.inverse_twiddles if inverse else T.twiddles
        return _kernels.NTT, _DUMMY_M, tw, T.inv_scale
    M = T.inverse_entries if inverse else T.entries
    return _kernels.MATRIX, np.ascontiguousarray(M), _DUMMY_TW, 1


def chain_forward(T: HadamardMatrix | NttMatrix, iv, seq) -> np.ndarray:
    x, iv, _ = _blocks(seq, iv, T.p)
    if iv.shape[0] != T.n:
        raise LengthNotAligned(iv.shape[0], T.n)
    mode, M, tw, _ = _kernel_args(T, inverse=False)
    return _kernels.active.chain_forward(x, iv, T.p, mode, M, tw, T.reduction_interval)


def chain_inverse(T: HadamardMatrix | NttMatrix, iv, cipher) -> np.ndarray:
    c, iv, _ = _blocks(cipher, iv, T.p)
    if iv.shape[0] != T.n:
        raise LengthNotAligned(iv.shape[0], T.n)
    mode, M, tw, scale = _kernel_args(T, inverse=True)
    return _kernels.active.chain_inverse(c, iv, T.p, mode, M, tw, scale, T.reduction_interval)


# -- the full system -----------------------------------------------------------

def _input(cfg: PipelineConfig, seq) -> np.ndarray:
    x = np.asarray(seq, dtype=np.int64).reshape(-1)
    if x.size and (x.min() < 0 or x.max() >= cfg.p):
        raise OutOfAlphabet(f"symbols must lie in [0, {cfg.p})")
    check_length(cfg, x.shape[0])
    return x


def pipeline_encrypt(cfg: PipelineConfig, seq, trace: Trace | None = None) -> np.ndarray:
    x = _input(cfg, seq)
    x = qg_encrypt(cfg.qg, x)
    if trace:
        trace("quasigroup", x)
    x = chain_forward(cfg.hadamard1, cfg.iv1, x)
    if trace:
        trace("hadamard1", x)
    x = chain_forward(cfg.ntt, cfg.iv2, x)
    if trace:
        trace("ntt", x)
    x = chain_forward(cfg.hadamard2, cfg.iv3, x)
    if trace:
        trace("hadamard2", x)
    return x


def pipeline_decrypt(cfg: PipelineConfig, cipher, trace: Trace | None = None) -> np.ndarray:
    """Undo :func:`pipeline_encrypt`; ``trace`` sees each phase's inverse output."""
    c = _input(cfg, cipher)
    c = chain_inverse(cfg.hadamard2, cfg.iv3, c)
    if trace:
        trace("hadamard2", c)
    c = chain_inverse(cfg.ntt, cfg.iv2, c)
    if trace:
        trace("ntt", c)
    c = chain_inverse(cfg.hadamard1, cfg.iv1, c)
    if trace:
        trace("hadamard1", c)
    c = qg_decrypt(cfg.qg, c)
    if trace:
        trace("quasigroup", c)
    return c
