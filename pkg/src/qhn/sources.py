"""Deterministic input streams for experiments.

``lcg``: Park-Miller minimal standard generator, s <- 16807 s mod (2**31 - 1),
each state reduced mod p. ``dseq``: binary expansion of 1/q, bit i being
(2**i mod q) mod 2. Plus the constant patterns ``zeros``, ``ones`` and
``zeros-last-one``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BadPrime, BadSeed, ConfigError
from .modmath import is_prime
from .randomness import bits_per_symbol
from .textio import read_symbols

LCG_MODULUS = 2**31 - 1
LCG_MULTIPLIER = 16807

KINDS = ("lcg", "dseq", "zeros", "ones", "zeros-last-one", "file")


def lcg_states(seed: int, length: int) -> np.ndarray:
    if not 1 <= seed <= LCG_MODULUS - 1:
        raise BadSeed(f"seed must lie in [1, {LCG_MODULUS - 1}], got {seed}")
    out = np.empty(length, np.int64)
    s = seed
    for i in range(length):
        s = LCG_MULTIPLIER * s % LCG_MODULUS
        out[i] = s
    return out


def gen_lcg(seed: int, length: int, p: int) -> np.ndarray:
    return lcg_states(seed, length) % p


def gen_dsequence_bits(q: int, length: int) -> np.ndarray:
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise BadPrime(f"d-sequence needs an odd prime, got {q}")
    out = np.empty(length, np.int8)
    r = 1
    for i in range(length):
        r = 2 * r % q
        out[i] = r & 1
    return out


def pack_bits(bits, p: int) -> tuple[np.ndarray, int]:
    """Pack MSB-first groups of ceil(log2 p) bits into symbols.

    Groups worth p or more are reduced mod p; the second return value counts
    how many were. A trailing partial group is dropped.
    """
    b = bits_per_symbol(p)
    bits = np.asarray(bits, dtype=np.int64).reshape(-1)
    groups = bits[: bits.shape[0] // b * b].reshape(-1, b)
    values = groups @ (1 << np.arange(b - 1, -1, -1))
    over = int((values >= p).sum())
    return values % p, over


def gen_pattern(kind: str, length: int) -> np.ndarray:
    if kind == "zeros":
        return np.zeros(length, np.int64)
    if kind == "ones":
        return np.ones(length, np.int64)
    if kind == "zeros-last-one":
        out = np.zeros(length, np.int64)
        if length:
            out[-1] = 1
        return out
    raise ConfigError(f"unknown pattern {kind!r}")


@dataclass(frozen=True)
class SourceSpec:
    kind: str
    length: int = 0
    seed: int = 1
    prime: int = 2029
    path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown source kind {self.kind!r}")
        if self.length < 0:
            raise ConfigError("length must be non-negative")


@dataclass(frozen=True)
class Generated:
    symbols: np.ndarray
    reduced: int = 0


def generate(spec: SourceSpec, p: int) -> Generated:
    if spec.kind == "lcg":
        return Generated(gen_lcg(spec.seed, spec.length, p))
    if spec.kind == "dseq":
        bits = gen_dsequence_bits(spec.prime, spec.length * bits_per_symbol(p))
        symbols, over = pack_bits(bits, p)
        return Generated(symbols, over)
    if spec.kind == "file":
        with open(spec.path) as fh:
            return Generated(read_symbols(fh.read()))
    return Generated(gen_pattern(spec.kind, spec.length))
