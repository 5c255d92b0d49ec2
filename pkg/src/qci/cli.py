from __future__ import annotations

import argparse
import logging
import sys
from functools import lru_cache
from pathlib import Path
from typing import List, Optional

from .config import ConfigError, Settings, parse_switch, resolve_settings
from .filter import (
    FilterConfig,
    FilteredIdentitySet,
    build_database,
    expand_grouped,
    filter_count_table,
    filter_fixpoint,
)
from .formats import export, format_for, parse_word, read_identities, write_identities
from .gates import identity_holds
from .miner import RawIdentitySet, count_table, mine
from .simplifier import Simplifier

logger = logging.getLogger("qci")


def _filter_config(settings: Settings) -> FilterConfig:
    return FilterConfig(
        enable_drop_rotations=settings.drop_rotations,
        enable_grouping=settings.group,
        eps=settings.tolerance,
        keep_half_turns=settings.keep_half_turns,
    )


@lru_cache(maxsize=4)
def _default_database(tolerance: float, workers: int) -> FilteredIdentitySet:
    logger.info("No --db given, mining lengths <= 3 for the identity database")
    return build_database(3, FilterConfig(eps=tolerance), workers=workers)


def _write(out: Optional[Path], identities, settings: Settings, provenance=None, presorted=False) -> None:
    if out is None:
        sys.stdout.write(export(identities, settings.format or "text", provenance).decode("utf-8"))
        return
    count = write_identities(out, identities, settings.format, provenance, presorted=presorted)
    logger.info("Wrote %d identities to %s", count, out)


def cmd_mine(args: argparse.Namespace, settings: Settings) -> int:
    raw = mine(settings.max_len, settings.tolerance, workers=settings.workers)
    if raw.rejected:
        logger.warning("%d float matches failed exact verification", raw.rejected)
    _write(args.out, raw.iter_identities(), settings, presorted=True)
    print(count_table(raw).to_string(), file=sys.stderr if args.out is None else sys.stdout)
    return 0


def cmd_filter(args: argparse.Namespace, settings: Settings) -> int:
    raw = RawIdentitySet.from_identities(read_identities(args.input))
    filtered = filter_fixpoint(raw, _filter_config(settings))
    provenance = filtered.provenance if args.provenance else None
    _write(args.out, filtered.identities, settings, provenance)
    logger.info("Filtered counts (cumulative): %s", filtered.cumulative_counts())
    return 0


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    failures = 0
    identities = read_identities(args.input)
    for identity in identities:
        ok = all(identity_holds(instance) for instance in expand_grouped(identity))
        if not ok:
            failures += 1
            logger.warning("Identity does not hold: %s", identity)
        print(f"{'PASS' if ok else 'FAIL'}  {identity}")
    print(f"{len(identities) - failures}/{len(identities)} identities verified")
    return 0 if failures == 0 else 1


def cmd_counts(args: argparse.Namespace, settings: Settings) -> int:
    if format_for(args.input) == "text":
        logger.warning(
            "%s is a text file and carries no mined lengths; counting by rhs length. "
            "Write the filter output as JSON or CSV to count by mined length.",
            args.input,
        )
    identities = read_identities(args.input)
    table = FilteredIdentitySet(identities).counts_by_length
    max_len = max(table, default=0)
    cumulative, total = [], 0
    for n in range(1, max_len + 1):
        total += table.get(n, 0)
        cumulative.append(f"{'Length 1' if n == 1 else f'Length <={n}'}: {total}")
    print("\n".join(cumulative))
    return 0


def cmd_table(args: argparse.Namespace, settings: Settings) -> int:
    raw = mine(settings.max_len, settings.tolerance, workers=settings.workers)
    print(filter_count_table(raw).to_string())
    return 0


def cmd_simplify(args: argparse.Namespace, settings: Settings) -> int:
    word = parse_word(args.word)
    if settings.db is not None:
        db = FilteredIdentitySet(read_identities(Path(settings.db)))
    else:
        db = _default_database(settings.tolerance, settings.workers)
    result, trace = Simplifier(db).simplify(word)
    if args.trace and len(trace):
        print(trace.render())
    print(result)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qci", description="Mine, filter, verify and apply single-qubit circuit identities."
    )
    parser.add_argument("--config", type=Path, help="Plain key=value file with default flag values.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Repeat for more logging.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_common(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--tolerance", type=float, help="Float matching tolerance (default 1e-9).")
        p.add_argument("--workers", type=int, help="Worker processes for mining.")
        p.add_argument("--format", choices=["text", "json", "csv"], help="Output format.")
        return p

    p = with_common(sub.add_parser("mine", help="Enumerate all gate words and record matches."))
    p.add_argument("--max-len", type=int, help="Longest word length (default 3).")
    p.add_argument("--out", type=Path, help="Output file (suffix picks the format).")
    p.set_defaults(handler=cmd_mine)

    p = with_common(sub.add_parser("filter", help="Run the rewrite filter over a raw identity file."))
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--drop-rotations", type=parse_switch, metavar="{on,off}")
    p.add_argument("--group", type=parse_switch, metavar="{on,off}")
    p.add_argument("--keep-half-turns", type=parse_switch, metavar="{on,off}")
    p.add_argument("--provenance", action="store_true", help="Add applied steps to JSON output.")
    p.add_argument("--out", type=Path)
    p.set_defaults(handler=cmd_filter)

    p = with_common(sub.add_parser("verify", help="Check every identity exactly."))
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.set_defaults(handler=cmd_verify)

    p = with_common(sub.add_parser("counts", help="Cumulative identity counts per length."))
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.set_defaults(handler=cmd_counts)

    p = with_common(sub.add_parser("table", help="All four rows of the identity-count table."))
    p.add_argument("--max-len", type=int)
    p.set_defaults(handler=cmd_table)

    p = with_common(sub.add_parser("simplify", help="Shorten a gate word with the identity database."))
    p.add_argument("word", help='Gate word, e.g. "H X H".')
    p.add_argument("--trace", action="store_true")
    p.add_argument("--db", help="Identity file; mined and filtered on the fly when omitted.")
    p.set_defaults(handler=cmd_simplify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        settings = resolve_settings(vars(args), args.config)
        return args.handler(args, settings)
    except (ConfigError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
