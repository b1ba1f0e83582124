"""Sequence randomiser built from a quasigroup substitution, Hadamard and
number-theoretic transforms over Z/p, with autocorrelation and
block-frequency randomness measurements."""
from .errors import QhnError
from .hadamard import (HadamardMatrix, hadamard_forward_fast, hadamard_forward_naive,
                       hadamard_inverse, sylvester_build)
from .modmath import PrimeModulus, Residue, is_prime, mod_inverse, mod_pow
from .ntt import NttMatrix, find_primitive_nth_root, ntt_build, ntt_forward_fast, ntt_forward_naive, ntt_inverse
from .pipeline import PipelineConfig, check_length, pipeline_decrypt, pipeline_encrypt
from .quasigroup import QuasigroupKey, QuasigroupTable, qg_decrypt, qg_encrypt, qg_validate
from .randomness import analyze, autocorrelation, block_frequency_test, igamc, randomness_measure

__version__ = "0.1.0"
