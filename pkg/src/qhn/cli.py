"""``qhn`` command-line interface.

Exit status: 0 success, 1 validation error (bad config, misaligned length,
bad flags), 2 I/O error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench, randomness
from .errors import QhnError
from .pipeline import PipelineConfig, check_length, pad_to_alignment, pipeline_decrypt, pipeline_encrypt
from .sources import SourceSpec, generate
from .textio import CipherHeader, format_ciphertext, format_symbols, load_config, parse_ciphertext


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _config(args) -> PipelineConfig:
    return load_config(args.config) if args.config else PipelineConfig()


def cmd_gen(args):
    spec = SourceSpec(kind=args.kind, length=args.length, seed=args.seed,
                      prime=args.prime, path=args.path)
    out = generate(spec, args.p)
    if out.reduced:
        print(f"note: {out.reduced} packed symbols were >= p and reduced mod p", file=sys.stderr)
    _write(args.output, format_symbols(out.symbols))


def cmd_encrypt(args):
    cfg = _config(args)
    header, x = parse_ciphertext(_read(args.input))
    length = x.shape[0]
    if args.pad:
        x = pad_to_alignment(x, cfg)
    y = pipeline_encrypt(cfg, x)
    _write(args.output, format_ciphertext(CipherHeader.for_config(cfg, length), y))


def cmd_decrypt(args):
    cfg = _config(args)
    header, c = parse_ciphertext(_read(args.input))
    if header is not None and not header.matches(cfg):
        raise QhnError(f"ciphertext header {header.format().strip()!r} does not match config")
    x = pipeline_decrypt(cfg, c)
    if header is not None:
        x = x[: header.length]
    _write(args.output, format_symbols(x))


def cmd_analyze(args):
    header, s = parse_ciphertext(_read(args.input))
    p = args.p if args.p is not None else (header.p if header else 7)
    report = randomness.analyze(s, p, args.block_size)
    _write(args.output, report.to_text())
    if args.acf:
        _write(args.acf, report.autocorrelation_text())


def cmd_roundtrip(args):
    cfg = _config(args)
    if args.input:
        _, x = parse_ciphertext(_read(args.input))
    else:
        x = generate(SourceSpec("lcg", length=args.length, seed=args.seed), cfg.p).symbols
    check_length(cfg, x.shape[0])
    back = pipeline_decrypt(cfg, pipeline_encrypt(cfg, x))
    if np.array_equal(back, x):
        print(f"match ({x.shape[0]} symbols)")
        return 0
    print(f"mismatch at {int(np.flatnonzero(back != x)[0])}")
    return 1


def cmd_bench(args):
    sizes = [int(s) for s in args.sizes.split(",")]
    for n in sizes:
        if n < 1 or n & (n - 1):
            raise QhnError(f"bench sizes must be powers of two, got {n}")
    backends = None if args.backend == "all" else [args.backend]
    rows = bench.run(sizes, p=args.p, repeats=args.repeats, backends=backends)
    _write(args.output, bench.format_rows(rows))
    return 0 if all(r.equal for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qhn", description="Quasigroup/Hadamard/NTT sequence randomiser")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def io(p, need_input=True):
        if need_input:
            p.add_argument("-i", "--input", required=True, help="input file or '-'")
        p.add_argument("-o", "--output", default="-", help="output file (default stdout)")

    g = sub.add_parser("gen", help="write a source symbol stream")
    g.add_argument("--kind", required=True,
                   choices=["lcg", "dseq", "zeros", "ones", "zeros-last-one", "file"])
    g.add_argument("--length", type=int, default=684)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--prime", type=int, default=2029, help="d-sequence prime")
    g.add_argument("--path", help="source file for --kind file")
    g.add_argument("-p", type=int, default=7, help="symbol modulus")
    io(g, need_input=False)
    g.set_defaults(func=cmd_gen)

    for verb, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        e = sub.add_parser(verb, help=f"{verb} a symbol stream")
        e.add_argument("-c", "--config", help="key=value config file")
        if verb == "encrypt":
            e.add_argument("--pad", action="store_true",
                           help="zero-pad to the block lcm instead of rejecting")
        io(e)
        e.set_defaults(func=func)

    a = sub.add_parser("analyze", help="autocorrelation R and block-frequency test")
    a.add_argument("-p", type=int, default=None, help="modulus (default: header or 7)")
    a.add_argument("-M", "--block-size", type=int, default=randomness.DEFAULT_BLOCK_SIZE)
    a.add_argument("--acf", help="also write 'k C(k)' lines here")
    io(a)
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("roundtrip", help="encrypt, decrypt and compare")
    r.add_argument("-c", "--config")
    r.add_argument("-i", "--input", help="symbol file (default: LCG stream)")
    r.add_argument("--length", type=int, default=684)
    r.add_argument("--seed", type=int, default=1)
    r.set_defaults(func=cmd_roundtrip)

    b = sub.add_parser("bench", help="time naive vs fast kernels")
    b.add_argument("--sizes", default=",".join(map(str, bench.DEFAULT_SIZES)))
    b.add_argument("-p", type=int, default=bench.DEFAULT_P)
    b.add_argument("--repeats", type=int, default=20)
    b.add_argument("--backend", default="all", choices=["all", "numba", "numpy"])
    b.add_argument("-o", "--output", default="-")
    b.set_defaults(func=cmd_bench)
    return ap


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help and usage errors
        return int(exc.code or 0)
    try:
        rc = args.func(args)
    except QhnError as exc:
        print(f"qhn {args.verb}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"qhn {args.verb}: I/O error: {exc}", file=sys.stderr)
        return 2
    return rc or 0


def main():
    sys.exit(run())
