"""Latin-square quasigroups and chained quasigroup encryption.

The product ``a * x`` is read from row ``a``, column ``x`` of the table.
Encryption chains each output into the next product::

    e[0] = seed * a[0],   e[i] = e[i-1] * a[i]

and decryption undoes it with left division ``a[i] = e[i-1] \\ e[i]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import FormatError, NotLatinSquare, OutOfAlphabet

# Order-7 table exactly as published. Rows are permutations but columns 4
# and 5 each repeat a symbol, so it is not a Latin square.
PAPER7_PRINTED = (
    (2, 1, 0, 5, 4, 6, 3),
    (1, 4, 3, 2, 0, 6, 5),
    (0, 5, 1, 6, 3, 4, 2),
    (4, 3, 6, 1, 2, 5, 0),
    (6, 2, 5, 0, 1, 3, 4),
    (3, 0, 2, 4, 5, 1, 6),
    (5, 6, 4, 3, 0, 2, 1),
)

# Published table with cells (1, 4) and (1, 5) swapped: the only single
# transposition within a row that yields a Latin square. Every product the
# worked examples rely on (6*3, 3*4 and the whole 3-seeded chain) is unchanged.
PAPER7 = (
    (2, 1, 0, 5, 4, 6, 3),
    (1, 4, 3, 2, 6, 0, 5),
    (0, 5, 1, 6, 3, 4, 2),
    (4, 3, 6, 1, 2, 5, 0),
    (6, 2, 5, 0, 1, 3, 4),
    (3, 0, 2, 4, 5, 1, 6),
    (5, 6, 4, 3, 0, 2, 1),
)


def _first_bad_line(arr: np.ndarray):
    q = arr.shape[0]
    want = np.arange(q)
    for i in range(q):
        if not np.array_equal(np.sort(arr[i]), want):
            return "row", i
    for j in range(q):
        if not np.array_equal(np.sort(arr[:, j]), want):
            return "column", j
    return None


class QuasigroupTable:
    """Validated, immutable Cayley table of a finite quasigroup.

    Construction raises :class:`NotLatinSquare` naming the first row (or,
    failing that, column) that is not a permutation of ``0..q-1``.
    """

    __slots__ = ("table", "ldiv")

    def __init__(self, table):
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise NotLatinSquare("shape", 0, f"table must be a non-empty square, got shape {arr.shape}")
        bad = _first_bad_line(arr)
        if bad is not None:
            raise NotLatinSquare(*bad)
        q = arr.shape[0]
        ldiv = np.empty_like(arr)
        rows = np.repeat(np.arange(q), q)
        ldiv[rows, arr.ravel()] = np.tile(np.arange(q), q)
        arr.setflags(write=False)
        ldiv.setflags(write=False)
        self.table = arr
        self.ldiv = ldiv

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __eq__(self, other):
        return isinstance(other, QuasigroupTable) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"QuasigroupTable(order={self.order})"

    def _check(self, *symbols):
        q = self.order
        for s in symbols:
            if not 0 <= s < q:
                raise OutOfAlphabet(f"symbol {s} outside [0, {q})")

    def mul(self, a: int, x: int) -> int:
        self._check(a, x)
        return int(self.table[a, x])

    def left_divide(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.ldiv[a, b])


def qg_validate(table) -> QuasigroupTable:
    return QuasigroupTable(table)


def qg_mul(t: QuasigroupTable, a: int, x: int) -> int:
    return t.mul(a, x)


def qg_left_divide(t: QuasigroupTable, a: int, b: int) -> int:
    """The unique x with ``a * x == b``."""
    return t.left_divide(a, b)


@dataclass(frozen=True)
class QuasigroupKey:
    table: QuasigroupTable
    seed: int

    def __post_init__(self):
        if not 0 <= self.seed < self.table.order:
            raise OutOfAlphabet(f"seed {self.seed} outside [0, {self.table.order})")


def _symbols(seq, q: int) -> np.ndarray:
    arr = np.asarray(seq, dtype=np.int64).reshape(-1)
    if arr.size and (arr.min() < 0 or arr.max() >= q):
        raise OutOfAlphabet(f"symbols must lie in [0, {q})")
    return arr


def qg_encrypt(key: QuasigroupKey, seq) -> np.ndarray:
    x = _symbols(seq, key.table.order)
    return _kernels.active.qg_encrypt(key.table.table, np.int64(key.seed), x)


def qg_decrypt(key: QuasigroupKey, seq) -> np.ndarray:
    e = _symbols(seq, key.table.order)
    return _kernels.active.qg_decrypt(key.table.ldiv, np.int64(key.seed), e)


# -- built-in tables ---------------------------------------------------------

def paper7() -> QuasigroupTable:
    return QuasigroupTable(PAPER7)


def cyclic(q: int) -> QuasigroupTable:
    """Addition table of Z/q."""
    i = np.arange(q)
    return QuasigroupTable((i[:, None] + i[None, :]) % q)


def isotope(q: int, seed: int) -> QuasigroupTable:
    """Random isotope of Z/q: ``a * x = gamma(alpha(a) + beta(x))``.

    Permutations come from numpy's PCG64 seeded with ``seed``, so the table
    is a deterministic function of ``(q, seed)``.
    """
    rng = np.random.default_rng(seed)
    alpha, beta, gamma = (rng.permutation(q) for _ in range(3))
    return QuasigroupTable(gamma[(alpha[:, None] + beta[None, :]) % q])


def builtin(name: str, q: int) -> QuasigroupTable:
    """Resolve ``paper7``, ``cyclic`` or ``isotope:<seed>`` at order q."""
    if name == "paper7":
        t = paper7()
        if q != 7:
            raise OutOfAlphabet(f"paper7 has order 7, need order {q}")
        return t
    if name == "cyclic":
        return cyclic(q)
    if name.startswith("isotope:"):
        return isotope(q, int(name.split(":", 1)[1]))
    raise KeyError(name)


# -- table file format: "q" line then q rows ----------------------------------

def parse_table(text: str) -> QuasigroupTable:
    tokens = text.split()
    try:
        nums = [int(t) for t in tokens]
    except ValueError as exc:
        raise FormatError(f"non-integer token in table file: {exc}") from None
    if not nums:
        raise FormatError("empty table file")
    q = nums[0]
    if q < 1 or len(nums) != 1 + q * q:
        raise FormatError(f"expected {q}x{q} entries after order line")
    return QuasigroupTable(np.array(nums[1:]).reshape(q, q))


def format_table(t: QuasigroupTable) -> str:
    lines = [str(t.order)]
    lines += [" ".join(str(v) for v in row) for row in t.table.tolist()]
    return "\n".join(lines) + "\n"


def load_table(path) -> QuasigroupTable:
    with open(path) as fh:
        return parse_table(fh.read())
