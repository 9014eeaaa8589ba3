# --- START OF FILE chainforge/main.py ---

"""chainforge command line: report, classify, primes, oracle and selftest."""

import argparse
import logging
import re
import sys
from typing import Callable

from PySide6.QtCore import QCoreApplication

import catalog
import chains
import depth
import length
import oracle
from arithmetic import configure_cache
from enums import ClassifyTag, OutputFormat, VerdictKind
from errors import ChainforgeError
from model import OutputRecord, ResultsModel
from preferences_manager import PreferencesManager
from primes import CONDITIONS, search
from services import ClassificationService, ExportService, OracleService, PrimeSearchService

logger = logging.getLogger("chainforge")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 4

FIRST_TEN_ROW1 = [13, 43, 67, 173, 283, 317, 653, 787, 907, 1867]
U3_LENGTH9_4000 = [173, 317, 653, 2693, 3413, 3677]
GOLDEN_LENGTHS = {
    "L(2,7)": 5, "L(2,8)": 5, "L(2,9)": 5, "L(2,11)": 5, "L(2,19)": 5, "L(2,27)": 5, "L(2,29)": 5,
    "L(2,25)": 6, "L(2,125)": 6,
    "L(2,16)": 7, "L(2,32)": 7, "L(2,49)": 7, "L(2,121)": 7, "L(2,169)": 7,
    "L(2,81)": 9, "L(2,128)": 9, "L(2,2187)": 9,
    "A(5)": 4, "A(7)": 6, "A(8)": 9, "U(3,4)": 9, "L(3,4)": 9, "Sz(8)": 8,
}


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s [%(name)s] %(message)s"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)


def parse_count(text: str) -> int:
    """Integers written as 2000, 10^6 or 1e6."""
    text = text.strip().replace("_", "")
    m = re.fullmatch(r"(\d+)\^(\d+)", text)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    m = re.fullmatch(r"(\d+)[eE](\d+)", text)
    if m:
        return int(m.group(1)) * 10 ** int(m.group(2))
    if text.isdigit():
        return int(text)
    raise argparse.ArgumentTypeError(f"not a non-negative integer: '{text}'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    common.add_argument("--jobs", type=int, default=None, help="worker processes for scans and searches")
    common.add_argument("--why", action="store_true", help="include the rules and witnesses applied")
    common.add_argument("--output", metavar="PATH", default=None, help="write to PATH instead of stdout")
    common.add_argument("--save-defaults", action="store_true", help="persist --format and --jobs")

    parser = argparse.ArgumentParser(prog="chainforge",
                                     description="Lengths, depths and chain differences of finite groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", parents=[common], help="l, depth, cd and cr of a group")
    p_report.add_argument("group")

    p_classify = sub.add_parser("classify", parents=[common], help="scan simple groups against a classification")
    p_classify.add_argument("tag", help=", ".join(t.value for t in ClassifyTag))
    p_classify.add_argument("--q-max", type=parse_count, default=None)
    p_classify.add_argument("--max-order", type=parse_count, default=None)
    p_classify.add_argument("--family", action="append", default=None, choices=catalog.SCAN_FAMILIES)
    p_classify.add_argument("--l", dest="l_filter", type=int, default=None, help="length filter for length<=9")

    p_primes = sub.add_parser("primes", parents=[common], help="enumerate a named prime family")
    p_primes.add_argument("family", choices=sorted(CONDITIONS))
    p_primes.add_argument("--limit", type=parse_count, required=True)
    p_primes.add_argument("--block-size", type=parse_count, default=None)

    p_oracle = sub.add_parser("oracle", parents=[common], help="brute-force a small permutation group")
    p_oracle.add_argument("group")
    p_oracle.add_argument("--verify", action="store_true", help="compare with the formula engines")
    p_oracle.add_argument("--export-lattice", metavar="PATH", default=None)

    sub.add_parser("selftest", parents=[common], help="run the golden checks")
    return parser


# --- Commands ---

def cmd_report(args, prefs) -> list[OutputRecord]:
    g = catalog.parse_group_id(args.group)
    rep = chains.report(g)
    result = rep.to_dict(encode_json=True)
    provenance = [p for p in rep.provenance if p.startswith(("length:", "depth:"))]
    if args.why:
        provenance = rep.provenance
        result["witnesses"] = depth.depth_witnesses(g)
    return [OutputRecord("report", args.group, result, provenance)]


def cmd_classify(args, prefs) -> list[OutputRecord]:
    tag = ClassifyTag.parse(args.tag)
    if args.q_max is None and args.max_order is None:
        raise ValueError("classify needs --q-max or --max-order")
    service = ClassificationService()
    records = service.scan(tag, q_max=args.q_max, max_order=args.max_order, families=args.family,
                           l_filter=args.l_filter, jobs=prefs.jobs)
    rows = [r.to_dict() if args.why else {"tag": r.tag, "group": r.group} for r in records]
    query = " ".join(filter(None, [tag.value, f"q<={args.q_max}" if args.q_max else "",
                                   f"order<={args.max_order}" if args.max_order else ""]))
    return [OutputRecord("classify", query, {"count": len(rows), "rows": rows}, [f"classify:{tag.value}"])]


def cmd_primes(args, prefs) -> list[OutputRecord]:
    service = PrimeSearchService()
    block_size = args.block_size or prefs.block_size
    records = service.search(args.family, args.limit, prefs.jobs, block_size)
    if args.why or args.family == "appendix":
        rows = [r.to_dict(encode_json=True) for r in records]
    else:
        rows = [{"p": r.p} for r in records]
    provenance = [f"primes:{args.family}"]
    if args.why:
        provenance.append(CONDITIONS[args.family].anchor)
    return [OutputRecord("primes", f"{args.family} <= {args.limit}", {"count": len(rows), "rows": rows},
                         provenance)]


def cmd_oracle(args, prefs) -> list[OutputRecord]:
    g = catalog.parse_group_id(args.group)
    service = OracleService(order_cap=prefs.oracle_order_cap, join_budget=prefs.lattice_join_budget)
    report, verdict = service.run(g, verify=args.verify)
    result = report.to_dict(encode_json=True)
    if verdict is not None:
        result["verdict"] = verdict.to_dict(encode_json=True)
    if args.export_lattice:
        result["lattice_file"] = service.export_lattice(args.export_lattice)
    provenance = ["oracle:subgroup-lattice"]
    if verdict is not None and verdict.kind is VerdictKind.MISMATCH:
        logger.error("[Oracle] %s", "; ".join(verdict.mismatches))
    return [OutputRecord("oracle", args.group, result, provenance)]


def _selftest_checks() -> list[tuple[str, Callable[[], str | None]]]:
    """(name, check) pairs; a check returns None on success or a failure detail."""
    def first_ten():
        got = search("table5-row1", 2000)
        return None if got == FIRST_TEN_ROW1 else f"got {got}"

    def golden_lengths():
        bad = []
        for text, expected in GOLDEN_LENGTHS.items():
            value = length.length_of(catalog.parse_group_id(text)).value
            if not (value.is_exact and value.value == expected):
                bad.append(f"{text}={value}")
        return None if not bad else ", ".join(bad)

    def u3_list():
        got = search("u3-l9", 4000)
        return None if got == U3_LENGTH9_4000 else f"got {got}"

    def cd2_list():
        missing = [q for q in (7, 8, 11, 23, 27, 125) if not chains.cd2_simple(catalog.linear(2, q))]
        return None if not missing else f"missing q={missing}"

    def a5_oracle():
        _, lattice, rep = oracle.analyse(catalog.alternating(5))
        got = (rep.length, rep.depth, len(lattice))
        return None if got == (4, 3, 59) else f"(l, depth, subgroups) = {got}"

    return [("first-ten-row1", first_ten), ("table5-golden-lengths", golden_lengths),
            ("u3-length9-primes", u3_list), ("cd2-members", cd2_list), ("a5-oracle", a5_oracle)]


def cmd_selftest(args, prefs) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            detail = check()
        except ChainforgeError as e:
            detail = f"{type(e).__name__}: {e}"
        if detail is None:
            print(f"PASS {name}")
        else:
            failures += 1
            print(f"FAIL {name}: {detail}")
    return EXIT_OK if failures == 0 else EXIT_INTERNAL


COMMANDS = {"report": cmd_report, "classify": cmd_classify, "primes": cmd_primes, "oracle": cmd_oracle}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    configure_logging(args.verbose)
    _app = QCoreApplication.instance() or QCoreApplication([])

    manager = PreferencesManager()
    prefs = manager.load()
    if args.jobs is not None:
        prefs.jobs = max(1, args.jobs)
    if args.format is not None:
        prefs.output_format = args.format
    if args.save_defaults:
        manager.save_defaults(args.format, args.jobs)
    cache = configure_cache(prefs.cache_dir or None)

    try:
        if args.command == "selftest":
            return cmd_selftest(args, prefs)
        results = ResultsModel()
        results.extend(COMMANDS[args.command](args, prefs))
        fmt = OutputFormat(prefs.output_format)
        for record in results.records:
            record.format = fmt
        ExportService().write(results.records, fmt, args.output)
        return EXIT_OK
    except ChainforgeError as e:
        sys.stderr.write(f"chainforge: {e}\n")
        return e.exit_code
    except (ValueError, OSError) as e:
        sys.stderr.write(f"chainforge: {e}\n")
        return EXIT_USAGE
    finally:
        cache.save()


if __name__ == "__main__":
    sys.exit(main())

# --- END OF FILE chainforge/main.py ---
