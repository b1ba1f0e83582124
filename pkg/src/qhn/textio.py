"""Plain-text file formats.

symbol stream   whitespace-separated decimal symbols
ciphertext      ``qhn1 p=<p> n1=<n1> n2=<n2> n3=<n3> len=<L>`` then a symbol
                stream; ``len`` is the pre-padding length
matrix grid     rows of whitespace-separated decimals, one row per line
config          ``key=value`` lines, ``#`` starts a comment
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FormatError
from .pipeline import PipelineConfig
from .quasigroup import QuasigroupKey, builtin, load_table

MAGIC = "qhn1"


def format_symbols(symbols) -> str:
    return " ".join(str(v) for v in np.asarray(symbols).reshape(-1).tolist()) + "\n"


def read_symbols(text: str) -> np.ndarray:
    try:
        return np.array([int(t) for t in text.split()], dtype=np.int64)
    except ValueError as exc:
        raise FormatError(f"bad symbol stream: {exc}") from None


def format_grid(entries) -> str:
    return "".join(" ".join(str(v) for v in row) + "\n" for row in np.asarray(entries).tolist())


def parse_grid(text: str) -> np.ndarray:
    rows = [[int(t) for t in line.split()] for line in text.splitlines() if line.strip()]
    if any(len(r) != len(rows[0]) for r in rows):
        raise FormatError("ragged grid")
    return np.array(rows, dtype=np.int64)


@dataclass(frozen=True)
class CipherHeader:
    p: int
    n1: int
    n2: int
    n3: int
    length: int

    def format(self) -> str:
        return (f"{MAGIC} p={self.p} n1={self.n1} n2={self.n2} "
                f"n3={self.n3} len={self.length}\n")

    @classmethod
    def for_config(cls, cfg: PipelineConfig, length: int) -> "CipherHeader":
        n1, n2, n3 = cfg.orders
        return cls(cfg.p, n1, n2, n3, length)

    def matches(self, cfg: PipelineConfig) -> bool:
        return (self.p, self.n1, self.n2, self.n3) == (cfg.p, *cfg.orders)


_HEADER = re.compile(
    rf"^{MAGIC} p=(\d+) n1=(\d+) n2=(\d+) n3=(\d+) len=(\d+)\s*$")


def format_ciphertext(header: CipherHeader, symbols) -> str:
    return header.format() + format_symbols(symbols)


def parse_ciphertext(text: str) -> tuple[CipherHeader | None, np.ndarray]:
    """Split off an optional header line; plain symbol streams pass through."""
    first, _, rest = text.partition("\n")
    if not first.startswith(MAGIC):
        return None, read_symbols(text)
    m = _HEADER.match(first)
    if not m:
        raise FormatError(f"malformed ciphertext header: {first!r}")
    header = CipherHeader(*(int(g) for g in m.groups()))
    body = read_symbols(rest)
    if header.length > body.shape[0]:
        raise FormatError(f"header len={header.length} exceeds body length {body.shape[0]}")
    return header, body


# -- pipeline config -------------------------------------------------------------

_INT_KEYS = ("p", "qg_seed", "h1_depth", "ntt_order", "h2_depth")
_KEYS = set(_INT_KEYS) | {"qg", "iv1", "iv2", "iv3"}


def parse_config(text: str, base_dir: str = ".") -> PipelineConfig:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        raw[key] = value
    try:
        ints = {k: int(raw[k]) for k in _INT_KEYS if k in raw}
        ivs = {k: [int(t) for t in raw[k].replace(",", " ").split()]
               for k in ("iv1", "iv2", "iv3") if k in raw}
    except ValueError as exc:
        raise ConfigError(f"bad integer in config: {exc}") from None

    p = ints.get("p", 7)
    name = raw.get("qg", "paper7" if p == 7 else "cyclic")
    try:
        table = builtin(name, p)
    except KeyError:
        path = name if os.path.isabs(name) else os.path.join(base_dir, name)
        table = load_table(path)
    seed = ints.get("qg_seed", 3 if name == "paper7" else 0)
    kwargs = {k: ints[k] for k in ("h1_depth", "ntt_order", "h2_depth") if k in ints}
    return PipelineConfig(p=p, qg=QuasigroupKey(table, seed), **kwargs, **ivs)


def load_config(path) -> PipelineConfig:
    with open(path) as fh:
        return parse_config(fh.read(), os.path.dirname(os.path.abspath(path)))
