import itertools

import numpy as np
import pytest

from qhn.errors import ConfigError, LengthNotAligned, OutOfAlphabet
from qhn.hadamard import hadamard_forward_fast, hadamard_forward_naive, hadamard_inverse, sylvester_build
from qhn.ntt import ntt_build, ntt_forward_naive, ntt_inverse
from qhn.pipeline import (PipelineConfig, chain_forward, chain_inverse, chained_block_inverse,
                          chained_block_transform, check_length, pad_to_alignment,
                          pipeline_decrypt, pipeline_encrypt)
from qhn.quasigroup import QuasigroupKey, cyclic, isotope, paper7, qg_decrypt
from qhn.randomness import to_bits


def test_check_length():
    check_length(PipelineConfig(), 684)
    check_length(PipelineConfig(), 0)
    cfg = PipelineConfig(h1_depth=3, ntt_order=6, h2_depth=2)
    with pytest.raises(LengthNotAligned) as err:
        check_length(cfg, 684)
    assert err.value.lcm == 24
    assert "24" in str(err.value)


def test_config_validation():
    with pytest.raises(ConfigError):
        PipelineConfig(h1_depth=1, ntt_order=6, h2_depth=1)  # n1 == n3
    with pytest.raises(ConfigError):
        PipelineConfig(ntt_order=4)  # 4 does not divide 6
    with pytest.raises(ConfigError):
        PipelineConfig(p=31)  # paper7 has order 7
    with pytest.raises(ConfigError):
        PipelineConfig(iv1=[1, 2])
    cfg = PipelineConfig(p=31, qg=QuasigroupKey(cyclic(31), 0), h1_depth=3, ntt_order=6, h2_depth=2)
    assert cfg.orders == (8, 6, 4) and cfg.lcm == 24


def test_chain_single_block_zero_iv():
    H = sylvester_build(2, 7)
    x = np.array([1, 2, 3, 4])
    out = chained_block_transform(lambda b: hadamard_forward_naive(H, b), np.zeros(4), x, 7)
    assert out.tolist() == hadamard_forward_naive(H, x).tolist()


def test_chain_identical_blocks_differ(rng):
    H = sylvester_build(2, 7)
    for _ in range(200):
        x = rng.integers(0, 7, 4)
        c = chained_block_transform(lambda b: hadamard_forward_naive(H, b), np.zeros(4), np.tile(x, 2), 7)
        if c[:4].any():
            assert not np.array_equal(c[:4], c[4:])


def test_chain_inverse_exhaustive_n2():
    H = sylvester_build(1, 7)
    iv = np.array([3, 5])
    fwd = lambda b: hadamard_forward_naive(H, b)
    inv = lambda b: hadamard_inverse(H, b)
    for x in itertools.product(range(7), repeat=4):
        c = chained_block_transform(fwd, iv, x, 7)
        assert chained_block_inverse(inv, iv, c, 7).tolist() == list(x)
    assert chained_block_inverse(inv, iv, [], 7).tolist() == []


def test_chain_roundtrip_random(rng):
    M = ntt_build(6, 7)
    for _ in range(1000):
        iv = rng.integers(0, 7, 6)
        x = rng.integers(0, 7, 6 * rng.integers(0, 8))
        c = chained_block_transform(lambda b: ntt_forward_naive(M, b), iv, x, 7)
        assert np.array_equal(chained_block_inverse(lambda b: ntt_inverse(M, b), iv, c, 7), x)


def test_chain_error_propagation(rng):
    H = sylvester_build(2, 7)
    x = rng.integers(0, 7, 40)
    iv = np.zeros(4, np.int64)
    c = chain_forward(H, iv, x)
    c[8:12] = (c[8:12] + rng.integers(1, 7, 4)) % 7  # corrupt block 2
    back = chain_inverse(H, iv, c)
    bad_blocks = sorted({i // 4 for i in np.flatnonzero(back != x)})
    assert bad_blocks == [2, 3]


def test_chain_misaligned():
    with pytest.raises(LengthNotAligned):
        chained_block_transform(lambda b: b, np.zeros(4), np.zeros(6), 7)


@pytest.mark.parametrize("T", [sylvester_build(2, 7), sylvester_build(5, 257), ntt_build(6, 7),
                               ntt_build(16, 257), ntt_build(10, 31)], ids=repr)
def test_fused_chain_matches_generic(backend, rng, T):
    n, p = T.n, T.p
    if hasattr(T, "m"):
        fwd, inv = (lambda b: hadamard_forward_fast(T, b)), (lambda b: hadamard_inverse(T, b))
    else:
        fwd, inv = (lambda b: ntt_forward_naive(T, b)), (lambda b: ntt_inverse(T, b))
    for _ in range(20):
        iv = rng.integers(0, p, n)
        x = rng.integers(0, p, n * 7)
        c = chain_forward(T, iv, x)
        assert np.array_equal(c, chained_block_transform(fwd, iv, x, p))
        assert np.array_equal(chain_inverse(T, iv, c), x)
        assert np.array_equal(chained_block_inverse(inv, iv, c, p), x)


def test_empty():
    cfg = PipelineConfig()
    assert pipeline_encrypt(cfg, []).tolist() == []
    assert pipeline_decrypt(cfg, []).tolist() == []


@pytest.mark.parametrize("L", [12, 24, 684])
def test_roundtrip_p7(backend, rng, L):
    cfg = PipelineConfig()
    for _ in range(100):
        x = rng.integers(0, 7, L)
        assert np.array_equal(pipeline_decrypt(cfg, pipeline_encrypt(cfg, x)), x)


def test_roundtrip_with_ivs(rng):
    cfg = PipelineConfig(p=31, qg=QuasigroupKey(isotope(31, 1), 5), h1_depth=3, ntt_order=6,
                         h2_depth=2, iv1=rng.integers(0, 31, 8), iv2=rng.integers(0, 31, 6),
                         iv3=rng.integers(0, 31, 4))
    for _ in range(100):
        x = rng.integers(0, 31, 24 * 5)
        y = pipeline_encrypt(cfg, x)
        assert np.array_equal(pipeline_decrypt(cfg, y), x)


def test_errors():
    cfg = PipelineConfig()
    with pytest.raises(LengthNotAligned):
        pipeline_encrypt(cfg, np.zeros(685, int))
    with pytest.raises(OutOfAlphabet):
        pipeline_encrypt(cfg, np.full(12, 7))
    with pytest.raises(LengthNotAligned):
        pipeline_decrypt(cfg, np.zeros(10, int))


def test_trace_phases(rng):
    cfg = PipelineConfig()
    x = rng.integers(0, 7, 684)
    seen = {}
    y = pipeline_encrypt(cfg, x, trace=lambda name, arr: seen.setdefault(name, arr.copy()))
    assert list(seen) == ["quasigroup", "hadamard1", "ntt", "hadamard2"]
    for arr in seen.values():
        assert arr.shape == x.shape
        assert arr.min() >= 0 and arr.max() < 7
    assert np.array_equal(seen["hadamard2"], y)
    back = {}
    pipeline_decrypt(cfg, y, trace=lambda name, arr: back.setdefault(name, arr.copy()))
    # decrypt's hadamard2 inverse output is encrypt's ntt output, and so on
    assert np.array_equal(back["hadamard2"], seen["ntt"])
    assert np.array_equal(back["ntt"], seen["hadamard1"])
    assert np.array_equal(back["hadamard1"], seen["quasigroup"])
    assert np.array_equal(back["quasigroup"], x)


def test_avalanche_block_structure(rng):
    cfg = PipelineConfig()
    n_by_phase = {"quasigroup": 1, "hadamard1": 4, "ntt": 6, "hadamard2": 2}
    for _ in range(50):
        x = rng.integers(0, 7, 120)
        i = int(rng.integers(0, 120))
        x2 = x.copy()
        x2[i] = (x2[i] + rng.integers(1, 7)) % 7
        a, b = {}, {}
        pipeline_encrypt(cfg, x, trace=lambda k, v: a.setdefault(k, v.copy()))
        pipeline_encrypt(cfg, x2, trace=lambda k, v: b.setdefault(k, v.copy()))
        start = i
        for phase, n in n_by_phase.items():
            # the changed region can only grow backwards to this phase's block boundary
            start = start // n * n
            assert np.array_equal(a[phase][:start], b[phase][:start])
            assert not np.array_equal(a[phase][start:start + n], b[phase][start:start + n])


def test_avalanche_fraction(rng):
    cfg = PipelineConfig()
    fractions = []
    for _ in range(100):
        x = rng.integers(0, 7, 684)
        x2 = x.copy()
        pos = int(rng.integers(0, cfg.lcm))
        x2[pos] = (x2[pos] + rng.integers(1, 7)) % 7
        fractions.append((to_bits(pipeline_encrypt(cfg, x), 7) != to_bits(pipeline_encrypt(cfg, x2), 7)).mean())
    assert 0.3 <= np.mean(fractions) <= 0.7


def test_decrypt_zero_ciphertext():
    cfg = PipelineConfig()
    z = np.zeros(24, np.int64)
    # inverse transforms of zero with zero IVs are zero, leaving only the quasigroup
    assert np.array_equal(pipeline_decrypt(cfg, z), qg_decrypt(cfg.qg, z))
    assert pipeline_decrypt(cfg, z).tolist()[:3] == [paper7().left_divide(3, 0), paper7().left_divide(0, 0),
                                                     paper7().left_divide(0, 0)]


def test_determinism():
    cfg = PipelineConfig()
    x = np.arange(684) % 7
    assert pipeline_encrypt(cfg, x).tobytes() == pipeline_encrypt(PipelineConfig(), x).tobytes()


def test_pad_to_alignment():
    cfg = PipelineConfig()
    assert pad_to_alignment(np.ones(685, int), cfg).shape == (696,)
    assert pad_to_alignment(np.ones(684, int), cfg).shape == (684,)
