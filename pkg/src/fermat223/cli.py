"""Command-line interface: ``fermat223 {verify,search,batch,table1,selftest}``.

Exit codes: 0 success, 1 criterion failed or exponent unresolved, 2 usage
error, 3 I/O error.  Tables, reports and certificates go to stdout (or the
``--out`` file); progress goes to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import selftest
from .certs import CertificateWriter, emit
from .criteria import (
    KINDS,
    SEARCH_KINDS,
    SearchConfig,
    Unresolved,
    check,
    check_kraus3,
    iter_witnesses,
    resolve,
)
from .modarith import is_prime

log = logging.getLogger("fermat223")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

TABLE1 = (31, 718)


def _prime_l(text: str) -> int:
    try:
        l = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if l <= 3 or not is_prime(l):
        raise argparse.ArgumentTypeError(f"l must be a prime > 3, got {l}")
    return l


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _criteria_list(text: str) -> tuple[str, ...]:
    kinds = tuple(part.strip() for part in text.split(",") if part.strip())
    bad = [kind for kind in kinds if kind not in SEARCH_KINDS]
    if bad or not kinds:
        raise argparse.ArgumentTypeError(f"criteria must be a comma list from {','.join(SEARCH_KINDS)}")
    return kinds


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("FERMAT223_THREADS", "1")))
    except ValueError:
        return 1


def table1_text() -> str:
    l, k = TABLE1
    rep = check_kraus3(l, k)
    lines = [f"alpha | a_p(E_alpha)^2 mod {l}"]
    lines += [f"{alpha} | {t}" for alpha, t in rep.alpha_traces]
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    if args.criterion in SEARCH_KINDS and args.k is None:
        args.parser.error(f"--k is required for --criterion {args.criterion}")
    rep = check(args.criterion, args.l, args.k or 0)
    print(rep.render())
    if rep.passed and args.emit:
        try:
            with CertificateWriter(args.emit) as writer:
                writer.write(emit(rep))
        except OSError as exc:
            print(f"error: cannot write {args.emit}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_search(args) -> int:
    found = []
    for rep in iter_witnesses(args.l, args.k_max, args.criteria):
        found.append(rep)
        print(f"k={rep.k} p={rep.p} criterion={rep.kind} a0_sq_mod_l={rep.a0_sq_mod_l} set_size={rep.set_size}")
        if not args.all_witnesses:
            break
    if not found:
        print(f"no witness for l={args.l} with k <= {args.k_max} ({','.join(args.criteria)})")
        return EXIT_FAIL
    return EXIT_OK


def run_batch(cfg: SearchConfig) -> list:
    """Resolve every prime l in [l_from, l_to]; results sorted by l."""
    ls = [l for l in range(max(cfg.l_from, 5), cfg.l_to + 1) if is_prime(l)]
    if cfg.threads > 1 and len(ls) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(resolve, ls, [cfg] * len(ls)))
    else:
        results = []
        for l in ls:
            results.append(resolve(l, cfg))
            log.debug("l=%d done", l)
    return sorted(results, key=lambda r: r.l)


def cmd_batch(args) -> int:
    try:
        cfg = SearchConfig(
            k_max=args.k_max, kinds=args.criteria, threads=args.threads, l_from=args.l_from, l_to=args.l_to
        )
    except ValueError as exc:
        args.parser.error(str(exc))
    start = time.monotonic()
    results = run_batch(cfg)
    log.info("resolved %d exponents in %.1fs", len(results), time.monotonic() - start)
    timestamp = int(os.environ.get("SOURCE_DATE_EPOCH", time.time()))
    unresolved = [r for r in results if isinstance(r, Unresolved)]
    try:
        with CertificateWriter(args.out) as writer:
            for rep in results:
                if not isinstance(rep, Unresolved):
                    writer.write(emit(rep, timestamp=timestamp))
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    for rep in results:
        if isinstance(rep, Unresolved):
            print(f"l={rep.l} unresolved (k <= {rep.k_max})" + (f": {rep.note}" if rep.note else ""))
        else:
            print(f"l={rep.l} {rep.kind}" + (f" k={rep.k} p={rep.p}" if rep.k else ""))
    print(f"exponents: {len(results)}; unresolved: {sorted(r.l for r in unresolved)}")
    return EXIT_FAIL if unresolved else EXIT_OK


def cmd_table1(args) -> int:
    sys.stdout.write(table1_text())
    return EXIT_OK


def cmd_selftest(args) -> int:
    names = args.suite or list(selftest.SUITES)
    unknown = [n for n in names if n not in selftest.SUITES]
    if unknown:
        args.parser.error(f"unknown suite(s) {unknown}; choose from {sorted(selftest.SUITES)}")
    failed = selftest.run(names)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fermat223", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="progress output on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="evaluate one criterion for (l, k)")
    p.add_argument("--l", type=_prime_l, required=True)
    p.add_argument("--k", type=_positive)
    p.add_argument("--criterion", choices=KINDS, default="chen")
    p.add_argument("--emit", metavar="PATH", help="append a certificate to PATH on pass")
    p.set_defaults(func=cmd_verify, parser=p)

    p = sub.add_parser("search", help="search k = 1..k_max for a witness")
    p.add_argument("--l", type=_prime_l, required=True)
    p.add_argument("--k-max", type=_positive, required=True)
    p.add_argument("--criteria", type=_criteria_list, default=SEARCH_KINDS)
    p.add_argument("--all-witnesses", action="store_true")
    p.set_defaults(func=cmd_search, parser=p)

    p = sub.add_parser("batch", help="resolve every prime l in a range and write certificates")
    p.add_argument("--l-from", type=int, required=True)
    p.add_argument("--l-to", type=int, required=True)
    p.add_argument("--k-max", type=_positive, default=2000)
    p.add_argument("--criteria", type=_criteria_list, default=SEARCH_KINDS)
    p.add_argument("--threads", type=_positive, default=_default_threads())
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_batch, parser=p)

    p = sub.add_parser("table1", help="recompute the S' table for l=31, k=718")
    p.set_defaults(func=cmd_table1, parser=p)

    p = sub.add_parser("selftest", help="run the embedded invariant suites")
    p.add_argument("--suite", action="append", metavar="NAME", help=f"one of {', '.join(selftest.SUITES)}")
    p.set_defaults(func=cmd_selftest, parser=p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr, format="%(message)s"
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
