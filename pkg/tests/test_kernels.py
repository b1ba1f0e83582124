import os
import subprocess
import sys

import numpy as np
import pytest

from qhn import _kernels
from qhn.bench import median_time
from qhn.hadamard import hadamard_forward_fast, hadamard_forward_naive, sylvester_build


def test_backend_registry():
    assert "numpy" in _kernels.available_backends()
    assert _kernels.get_backend("numpy") is _kernels.NUMPY
    with pytest.raises(ValueError):
        _kernels.get_backend("fortran")
    before = _kernels.active
    with _kernels.use_backend("numpy") as ns:
        assert _kernels.active is ns is _kernels.NUMPY
    assert _kernels.active is before


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", None)])
def test_env_flag(flag, expected):
    env = dict(os.environ, QHN_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "from qhn import _kernels; print(_kernels.active.name)"],
                         capture_output=True, text=True, env=env, check=True)
    want = expected or _kernels.available_backends()[0]
    assert out.stdout.strip() == want


def test_bit_reverse():
    assert _kernels.bit_reverse_permutation(8).tolist() == [0, 4, 2, 6, 1, 5, 3, 7]
    assert _kernels.bit_reverse_permutation(1).tolist() == [0]


def test_reduction_interval():
    assert _kernels._reduction_interval(2**31 - 1) == 2
    assert _kernels._reduction_interval(7) > 10**16


@pytest.mark.skipif(_kernels.NUMBA is None, reason="numba not installed")
def test_backends_bit_identical(rng):
    nb, npy = _kernels.NUMBA, _kernels.NUMPY
    for p in (7, 257, 2**31 - 1):
        M = rng.integers(0, p, (33, 70))
        X = rng.integers(0, p, (5, 70))
        iv = _kernels._reduction_interval(p)
        assert np.array_equal(nb.matvec(M, X, p, iv), npy.matvec(M, X, p, iv))
        X = rng.integers(0, p, (5, 64))
        assert np.array_equal(nb.fwht(X, p), npy.fwht(X, p))
    table = np.array([[(a + x) % 5 for x in range(5)] for a in range(5)], np.int64)
    x = rng.integers(0, 5, 100)
    assert np.array_equal(nb.qg_encrypt(table, np.int64(2), x), npy.qg_encrypt(table, np.int64(2), x))


def test_numpy_fast_hadamard_speedup(rng):
    # the fallback path must also keep the butterfly ahead of the dense product
    H = sylvester_build(12, 7)
    x = rng.integers(0, 7, 4096)
    with _kernels.use_backend("numpy"):
        assert np.array_equal(hadamard_forward_fast(H, x), hadamard_forward_naive(H, x))
        t_naive = median_time(lambda: hadamard_forward_naive(H, x), 5)
        t_fast = median_time(lambda: hadamard_forward_fast(H, x), 5)
    assert t_naive >= 10 * t_fast
