"""Command line: ``gcobord {multiplier,classify,certify,selftest}``.

Exit codes: 0 ok, 1 parse error, 2 precondition failure, 3 out of range,
4 property failure.  Set GCOBORD_VERBOSE=1 for progress logging.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .classify import METHODS, NotApplicableError, classify, is_dihedral, sylow_multiplier
from .extend import (CertificateError, decompose_abelian, dihedral_reduction_certificate,
                     genus_one_certificate, validate_certificate)
from .groups import GroupRangeError, GroupSpecError, build_group, commutator
from .homology import (DEFAULT_ORACLE_BOUND, NotInZError, OracleBoundError, bar_h2,
                       exterior_square, format_factors)
from .pairword import PairWord, SurfaceWord, from_surface, to_surface
from .selftest import DEFAULT_SEED, run_battery

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_RANGE, EXIT_PROPERTY = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(args, text: str) -> None:
    print(text)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")


def _group(spec: str):
    try:
        return build_group(spec)
    except GroupRangeError as e:
        raise CliError(EXIT_RANGE, str(e))
    except GroupSpecError as e:
        raise CliError(EXIT_PARSE, str(e))


def load_word(path: str, group_spec: str | None = None) -> PairWord:
    """Read a word file; files with "handles" are surface files."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise CliError(EXIT_PARSE, f"{path}: invalid JSON ({e})")
    spec = group_spec or data.get("group")
    if not spec:
        raise CliError(EXIT_PARSE, f"{path}: no group given")
    G = _group(spec)
    try:
        if "handles" in data:
            return from_surface(SurfaceWord.from_json(data, G))
        return PairWord.from_json(data, G)
    except NotInZError as e:
        raise CliError(EXIT_PRECONDITION, str(e))
    except (KeyError, TypeError, ValueError) as e:
        raise CliError(EXIT_PARSE, f"{path}: {e}")


def cmd_multiplier(args) -> int:
    G = _group(args.group)
    method = args.method or ("exterior" if G.is_abelian() and G.notation == "abelian-vector"
                             else "bar" if G.order <= args.oracle_bound else "sylow")
    if method == "exterior":
        if not G.is_abelian() or G.notation != "abelian-vector":
            raise CliError(EXIT_PRECONDITION, f"exterior method needs an abelian product, got {G.spec}")
        factors = exterior_square(G.meta["factors"]).invariant_factors
        lines = [format_factors(factors)]
    elif method == "bar":
        S = bar_h2(G, args.oracle_bound)
        lines = [format_factors(S.invariant_factors)]
    elif method == "sylow":
        r = sylow_multiplier(G, args.oracle_bound)
        lines = [format_factors(r["factors"])]
        lines += [f"{p}-part: {format_factors(f)}" for p, f in sorted(r["parts"].items())]
    else:
        raise CliError(EXIT_PARSE, f"unknown multiplier method {method!r} (bar, exterior, sylow)")
    lines.insert(1, f"method: {method}")
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    if not args.word:
        raise CliError(EXIT_PARSE, "classify needs --word FILE")
    w = load_word(args.word, args.group)
    if args.method and args.method not in METHODS:
        raise CliError(EXIT_PARSE, f"unknown method {args.method!r}; choose from {', '.join(METHODS)}")
    r = classify(w, method=args.method, oracle_bound=args.oracle_bound)
    lines = [r.describe(), f"method: {r.method}"]
    if r.sylow_components:
        for p in sorted(r.sylow_components):
            c = r.sylow_components[p]
            lines.append(f"{p}-component: {c} in {format_factors(c.factors)}")
    if r.method == "symmetric" and not r.details.get("constructive"):
        lines.append("note: part of the word was settled by the base classifier")
    if args.trace:
        if r.trace is None:
            raise CliError(EXIT_PRECONDITION, f"method {r.method} produces no rewrite trace")
        payload = {"word": w.to_json(), "trace": r.trace.to_json(w.group)}
        if r.details.get("subtraces"):
            payload["subtraces"] = [t.to_json(w.group) for t in r.details["subtraces"]]
        Path(args.trace).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_certify(args) -> int:
    if not args.word:
        raise CliError(EXIT_PARSE, "certify needs --word FILE")
    w = load_word(args.word, args.group)
    G = w.group
    try:
        if G.is_abelian():
            cert = decompose_abelian(to_surface(_positive(w)))
        elif is_dihedral(G):
            cert = dihedral_reduction_certificate(w)
        elif len(w) == 1 and w.letters[0][2] == 1 and not commutator(G, *w.letters[0][:2]):
            cert = genus_one_certificate(G, *w.letters[0][:2])
        else:
            raise CliError(EXIT_PRECONDITION,
                           f"no certificate construction for this word over {G.spec}")
    except CertificateError as e:
        raise CliError(EXIT_PRECONDITION, str(e))
    report = validate_certificate(cert, _positive(w) if cert.kind == "abelian" else w)
    if not report["passed"]:
        print(json.dumps(report, sort_keys=True), file=sys.stderr)
        return EXIT_PROPERTY
    _emit(args, cert.dumps())
    return EXIT_OK


def _positive(w: PairWord) -> PairWord:
    return PairWord(w.group, tuple((x, y, 1) if e == 1 else (y, x, 1) for x, y, e in w.letters))


def cmd_selftest(args) -> int:
    if not 0 <= args.seed < 2 ** 64:
        raise CliError(EXIT_PARSE, "seed must be a 64-bit unsigned integer")
    if args.iters < 0:
        raise CliError(EXIT_PARSE, "--iters must be non-negative")
    golden = None
    if args.word:
        try:
            golden = json.loads(Path(args.word).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise CliError(EXIT_PARSE, f"cannot read golden table {args.word}: {e}")
    if args.iters == 0:
        print("warning: --iters 0 skips every randomized property (vacuous pass)", file=sys.stderr)
    groups = [args.group] if args.group else None
    if groups:
        _group(args.group)
    kwargs = {"groups": groups} if groups else {}
    checks = run_battery(seed=args.seed, iters=args.iters, golden=golden,
                         oracle_bound=args.oracle_bound, **kwargs)
    lines = []
    failed = [c for c in checks if not c.passed]
    for c in checks:
        lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed (seed {args.seed})")
    _emit(args, "\n".join(lines))
    if failed:
        print("minimized reproducer:", file=sys.stderr)
        print(json.dumps(failed[0].reproducer, indent=2, sort_keys=True), file=sys.stderr)
        return EXIT_PROPERTY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gcobord", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (("multiplier", cmd_multiplier, "print M(G)"),
                            ("classify", cmd_classify, "classify a word in M(G)"),
                            ("certify", cmd_certify, "emit an extension certificate"),
                            ("selftest", cmd_selftest, "run the seeded property battery")):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--group", help="group spec, e.g. D8, S4, Z2xZ4")
        p.add_argument("--word", help="word or surface JSON file (selftest: golden table JSON)")
        p.add_argument("--method", help="classifier or multiplier method override")
        p.add_argument("--trace", help="write the rewrite trace JSON here")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--iters", type=int, default=100)
        p.add_argument("--oracle-bound", type=int, default=DEFAULT_ORACLE_BOUND)
        p.add_argument("--out", help="also write the printed output to this file")
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO if os.environ.get("GCOBORD_VERBOSE") else logging.WARNING,
                        format="%(name)s: %(message)s")
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    if args.command == "multiplier" and not args.group:
        print("error: multiplier needs --group", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except NotInZError as e:
        print(f"error: word is not in Z(G): {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NotApplicableError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OracleBoundError, GroupRangeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RANGE
    except GroupSpecError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
