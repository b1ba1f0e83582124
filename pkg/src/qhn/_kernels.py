"""Hot loops, in two flavours.

Every kernel exists as an explicit-loop function compiled with numba and as
a vectorised numpy function with the same contract. ``active`` is chosen at
import: numba when it imports and ``QHN_DISABLE_NUMBA`` is unset (or "0"),
numpy otherwise. ``use_backend`` switches temporarily (tests, benchmarks).

All arrays are int64 and every residue is < p < 2**31, so a single product
plus an accumulator below p never overflows.

Block transforms are identified by ``mode``:
    MATRIX  dense matrix, naive O(n^2) product
    FWHT    Sylvester Walsh-Hadamard butterfly
    NTT     radix-2 decimation-in-time NTT butterfly
"""
from __future__ import annotations

import contextlib
import os
from functools import lru_cache
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

MATRIX, FWHT, NTT = 0, 1, 2

_INT64_MAX = 2**63 - 1


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True)(fn)


def _reduction_interval(p: int) -> int:
    """How many (p-1)^2 products can be summed onto a residue without overflow."""
    sq = (p - 1) * (p - 1)
    if sq == 0:
        return _INT64_MAX
    return max(1, (_INT64_MAX - p) // sq)


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

@_njit
def _nb_matvec_row(M, x, i, p, interval):
    n = x.shape[0]
    acc = 0
    pending = 0
    for j in range(n):
        acc += M[i, j] * x[j]
        pending += 1
        if pending == interval:
            acc %= p
            pending = 0
    return acc % p


@_njit
def _nb_matvec(M, X, p, interval):
    B = X.shape[0]
    m = M.shape[0]
    Y = np.empty((B, m), np.int64)
    for b in range(B):
        for i in range(m):
            Y[b, i] = _nb_matvec_row(M, X[b], i, p, interval)
    return Y


@_njit
def _nb_fwht_inplace(v, p):
    n = v.shape[0]
    h = 1
    while h < n:
        for start in range(0, n, 2 * h):
            for j in range(start, start + h):
                u = v[j]
                w = v[j + h]
                v[j] = (u + w) % p
                v[j + h] = (u - w + p) % p
        h *= 2


@_njit
def _nb_ntt_inplace(v, tw, p):
    n = v.shape[0]
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            t = v[i]
            v[i] = v[j]
            v[j] = t
    h = 1
    while h < n:
        step = n // (2 * h)
        for start in range(0, n, 2 * h):
            for k in range(h):
                u = v[start + k]
                t = v[start + k + h] * tw[k * step] % p
                v[start + k] = (u + t) % p
                v[start + k + h] = (u - t + p) % p
        h *= 2


@_njit
def _nb_fwht(X, p):
    Y = X.copy()
    for b in range(Y.shape[0]):
        _nb_fwht_inplace(Y[b], p)
    return Y


@_njit
def _nb_ntt(X, tw, p):
    Y = X.copy()
    for b in range(Y.shape[0]):
        _nb_ntt_inplace(Y[b], tw, p)
    return Y


@_njit
def _nb_block(buf, scratch, mode, M, tw, p, interval):
    # transforms buf in place
    if mode == 0:
        for i in range(buf.shape[0]):
            scratch[i] = _nb_matvec_row(M, buf, i, p, interval)
        buf[:] = scratch
    elif mode == 1:
        _nb_fwht_inplace(buf, p)
    else:
        _nb_ntt_inplace(buf, tw, p)


@_njit
def _nb_chain_forward(x, iv, p, mode, M, tw, interval):
    n = iv.shape[0]
    out = np.empty_like(x)
    prev = iv.copy()
    buf = np.empty(n, np.int64)
    scratch = np.empty(n, np.int64)
    for s in range(0, x.shape[0], n):
        for k in range(n):
            buf[k] = (x[s + k] + prev[k]) % p
        _nb_block(buf, scratch, mode, M, tw, p, interval)
        for k in range(n):
            out[s + k] = buf[k]
            prev[k] = buf[k]
    return out


@_njit
def _nb_chain_inverse(c, iv, p, mode, M, tw, scale, interval):
    n = iv.shape[0]
    out = np.empty_like(c)
    prev = iv.copy()
    buf = np.empty(n, np.int64)
    scratch = np.empty(n, np.int64)
    for s in range(0, c.shape[0], n):
        for k in range(n):
            buf[k] = c[s + k]
        _nb_block(buf, scratch, mode, M, tw, p, interval)
        for k in range(n):
            out[s + k] = (buf[k] * scale % p - prev[k] + p) % p
            prev[k] = c[s + k]
    return out


@_njit
def _nb_qg_encrypt(table, seed, x):
    out = np.empty_like(x)
    e = seed
    for i in range(x.shape[0]):
        e = table[e, x[i]]
        out[i] = e
    return out


@_njit
def _nb_qg_decrypt(ldiv, seed, e):
    out = np.empty_like(e)
    prev = seed
    for i in range(e.shape[0]):
        out[i] = ldiv[prev, e[i]]
        prev = e[i]
    return out


@_njit
def _nb_cyclic_lag_sums(a):
    n = a.shape[0]
    s = np.empty(n, np.int64)
    for k in range(n):
        acc = 0
        for j in range(n - k):
            acc += a[j] * a[j + k]
        for j in range(n - k, n):
            acc += a[j] * a[j + k - n]
        s[k] = acc
    return s


# ---------------------------------------------------------------------------
# numpy kernels
# ---------------------------------------------------------------------------

def _np_matvec(M, X, p, interval):
    n = M.shape[1]
    if n <= interval:
        return (X @ M.T) % p
    Y = np.zeros((X.shape[0], M.shape[0]), np.int64)
    for s in range(0, n, interval):
        Y = (Y + X[:, s:s + interval] @ M[:, s:s + interval].T) % p
    return Y


def _np_fwht(X, p):
    B, n = X.shape
    Y = X.copy()
    h = 1
    while h < n:
        Y = Y.reshape(B, n // (2 * h), 2, h)
        u, v = Y[:, :, 0, :], Y[:, :, 1, :]
        Y = np.stack(((u + v) % p, (u - v) % p), axis=2).reshape(B, n)
        h *= 2
    return Y


@lru_cache(maxsize=64)
def bit_reverse_permutation(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.setflags(write=False)
    return rev


def _np_ntt(X, tw, p):
    B, n = X.shape
    Y = X[:, bit_reverse_permutation(n)]
    h = 1
    while h < n:
        w = tw[:: n // (2 * h)][:h]
        Y = Y.reshape(B, n // (2 * h), 2, h)
        u = Y[:, :, 0, :]
        t = Y[:, :, 1, :] * w % p
        Y = np.stack(((u + t) % p, (u - t) % p), axis=2).reshape(B, n)
        h *= 2
    return Y


def _np_block(row, mode, M, tw, p, interval):
    X = row[None, :]
    if mode == MATRIX:
        return _np_matvec(M, X, p, interval)[0]
    if mode == FWHT:
        return _np_fwht(X, p)[0]
    return _np_ntt(X, tw, p)[0]


def _np_chain_forward(x, iv, p, mode, M, tw, interval):
    n = iv.shape[0]
    out = np.empty_like(x)
    prev = iv
    for s in range(0, x.shape[0], n):
        prev = _np_block((x[s:s + n] + prev) % p, mode, M, tw, p, interval)
        out[s:s + n] = prev
    return out


def _np_chain_inverse(c, iv, p, mode, M, tw, scale, interval):
    n = iv.shape[0]
    L = c.shape[0]
    blocks = c.reshape(L // n, n)
    # each block inverts independently of the others; only the subtraction chains
    plain = _np_matvec(M, blocks, p, interval) if mode == MATRIX else (
        _np_fwht(blocks, p) if mode == FWHT else _np_ntt(blocks, tw, p))
    prevs = np.vstack((iv[None, :], blocks[:-1])) if L else blocks
    return ((plain * scale % p - prevs) % p).reshape(L)


def _np_qg_encrypt(table, seed, x):
    rows = table.tolist()
    out = []
    e = int(seed)
    for a in x.tolist():
        e = rows[e][a]
        out.append(e)
    return np.array(out, np.int64)


def _np_qg_decrypt(ldiv, seed, e):
    if e.shape[0] == 0:
        return e.copy()
    prev = np.concatenate(([seed], e[:-1]))
    return ldiv[prev, e]


def _np_cyclic_lag_sums(a, chunk=256):
    n = a.shape[0]
    doubled = np.concatenate((a, a))
    windows = np.lib.stride_tricks.sliding_window_view(doubled, n)
    s = np.empty(n, np.int64)
    for k0 in range(0, n, chunk):
        k1 = min(n, k0 + chunk)
        s[k0:k1] = windows[k0:k1] @ a
    return s


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

NUMPY = SimpleNamespace(
    name="numpy",
    matvec=_np_matvec,
    fwht=_np_fwht,
    ntt=_np_ntt,
    chain_forward=_np_chain_forward,
    chain_inverse=_np_chain_inverse,
    qg_encrypt=_np_qg_encrypt,
    qg_decrypt=_np_qg_decrypt,
    cyclic_lag_sums=_np_cyclic_lag_sums,
)

NUMBA = None if numba is None else SimpleNamespace(
    name="numba",
    matvec=_nb_matvec,
    fwht=_nb_fwht,
    ntt=_nb_ntt,
    chain_forward=_nb_chain_forward,
    chain_inverse=_nb_chain_inverse,
    qg_encrypt=_nb_qg_encrypt,
    qg_decrypt=_nb_qg_decrypt,
    cyclic_lag_sums=_nb_cyclic_lag_sums,
)


def _numba_disabled() -> bool:
    flag = os.environ.get("QHN_DISABLE_NUMBA", "").strip().lower()
    return flag not in ("", "0", "false", "no")


active = NUMPY if (NUMBA is None or _numba_disabled()) else NUMBA


def available_backends() -> list[str]:
    return ["numpy"] if NUMBA is None else ["numba", "numpy"]


def get_backend(name: str | None = None) -> SimpleNamespace:
    if name is None:
        return active
    if name == "numpy":
        return NUMPY
    if name == "numba":
        if NUMBA is None:
            raise RuntimeError("numba is not installed")
        return NUMBA
    raise ValueError(f"unknown backend {name!r}")


@contextlib.contextmanager
def use_backend(name: str):
    global active
    saved = active
    active = get_backend(name)
    try:
        yield active
    finally:
        active = saved
