"""Command line interface: build, stats, score, inspect.

Exit codes: 0 success, 1 fatal error (unreadable input, bad configuration),
2 scorer token mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .catalog import CatalogError
from .corpus import CorpusFormatError
from .dump import DumpError
from .pipeline import (
    PipelineConfig,
    PipelineError,
    run_build,
    run_inspect,
    run_score,
    run_stats,
)
from .scoring import TokenMismatchError

logger = logging.getLogger(__name__)

_FATAL_ERRORS = (
    PipelineError,
    CatalogError,
    CorpusFormatError,
    DumpError,
    OSError,
    ValueError,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="silverner", description="Silver-standard NER corpus tools")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", parents=[], help="build a corpus from a dump")
    build.add_argument("--dump", help="MediaWiki XML dump (plain or gzip)")
    build.add_argument("--catalog", help="entity catalog (JSON Lines)")
    build.add_argument("--out", help="output corpus path")
    build.add_argument("--workers", type=int, default=None, help="parallel workers")
    build.add_argument("--aux-cmd", default=None, help="auxiliary tagger command line")
    build.add_argument(
        "--with-origin", action="store_true", default=None, help="emit the origin column"
    )
    build.add_argument("--blocklist", default=None, help="template blocklist file")
    build.add_argument("--abbrev", default=None, help="abbreviation list file")
    build.add_argument(
        "--global-match",
        action="store_true",
        default=None,
        help="match the whole catalog instead of per-article candidates",
    )
    build.add_argument(
        "--no-figures", action="store_true", default=None, help="skip report figures"
    )
    build.add_argument("--config", default=None, help="JSON config file (flags win)")

    stats = sub.add_parser("stats", help="report statistics for a corpus")
    stats.add_argument("corpus", help="corpus file")
    stats.add_argument("--format", choices=("json", "text"), default="json")
    stats.add_argument(
        "--figures", action="store_true", help="also write figures next to the corpus"
    )

    scorecmd = sub.add_parser("score", help="score a predicted corpus against gold")
    scorecmd.add_argument("gold", help="gold corpus file")
    scorecmd.add_argument("pred", help="predicted corpus file")
    scorecmd.add_argument("--mode", choices=("strict", "partial"), default="strict")
    scorecmd.add_argument("--format", choices=("json", "text"), default="json")

    inspect = sub.add_parser("inspect", help="print sentences with inline entities")
    inspect.add_argument("corpus", help="corpus file")
    inspect.add_argument(
        "--range",
        dest="range_spec",
        default=None,
        help="sentence range START:STOP (half-open)",
    )
    inspect.add_argument("--limit", type=int, default=None, help="at most N sentences")
    return parser


_BUILD_DEFAULTS = {
    "dump": None,
    "catalog": None,
    "out": None,
    "workers": 1,
    "aux_cmd": None,
    "with_origin": False,
    "blocklist": None,
    "abbrev": None,
    "global_match": False,
    "figures": True,
}


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    merged = dict(_BUILD_DEFAULTS)
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise PipelineError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise PipelineError(f"config {args.config} is not a JSON object")
        unknown = set(loaded) - set(_BUILD_DEFAULTS)
        if unknown:
            raise PipelineError(f"unknown config keys: {sorted(unknown)}")
        merged.update(loaded)
    overrides = {
        "dump": args.dump,
        "catalog": args.catalog,
        "out": args.out,
        "workers": args.workers,
        "aux_cmd": args.aux_cmd,
        "with_origin": args.with_origin,
        "blocklist": args.blocklist,
        "abbrev": args.abbrev,
        "global_match": args.global_match,
        "figures": (False if args.no_figures else None),
    }
    merged.update({k: v for k, v in overrides.items() if v is not None})
    for key in ("dump", "catalog", "out"):
        if not merged[key]:
            raise PipelineError(f"missing required setting: --{key}")
    return PipelineConfig(**merged)


def _parse_range(spec: str | None, limit: int | None) -> tuple[int, int | None]:
    if spec is None:
        return 0, limit
    try:
        start_s, _, stop_s = spec.partition(":")
        start = int(start_s) if start_s else 0
        stop = int(stop_s) if stop_s else None
    except ValueError:
        raise PipelineError(f"bad --range {spec!r}, expected START:STOP") from None
    if limit is not None:
        stop = start + limit if stop is None else min(stop, start + limit)
    return start, stop


def _cmd_build(args) -> int:
    config = _build_config(args)
    result = run_build(config)
    print(
        f"wrote {result.output} ({result.sentences} sentences, {result.tokens} tokens, "
        f"{result.quarantined} articles quarantined)",
        file=sys.stderr,
    )
    return 0


def _render_score_text(result) -> str:
    lines = [
        f"mode       {result.mode}",
        f"precision  {result.precision:.4f}",
        f"recall     {result.recall:.4f}",
        f"f1         {result.f1:.4f}",
        f"entities   gold={result.gold} predicted={result.predicted}",
    ]
    for cls, s in sorted(result.per_class.items()):
        lines.append(
            f"  {cls}  P={s.precision:.4f} R={s.recall:.4f} F1={s.f1:.4f} "
            f"(gold={s.gold}, predicted={s.predicted})"
        )
    return "\n".join(lines) + "\n"


def _cmd_stats(args) -> int:
    sys.stdout.write(run_stats(args.corpus, format=args.format, figures=args.figures))
    return 0


def _cmd_score(args) -> int:
    result = run_score(args.gold, args.pred, mode=args.mode)
    if args.format == "json":
        sys.stdout.write(
            json.dumps(result.to_json_dict(), indent=2, sort_keys=True) + "\n"
        )
    else:
        sys.stdout.write(_render_score_text(result))
    return 0


def _cmd_inspect(args) -> int:
    start, stop = _parse_range(args.range_spec, args.limit)
    sys.stdout.write(run_inspect(args.corpus, start, stop))
    return 0


_HANDLERS = {
    "build": _cmd_build,
    "stats": _cmd_stats,
    "score": _cmd_score,
    "inspect": _cmd_inspect,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return _HANDLERS[args.command](args)
    except TokenMismatchError as exc:
        print(f"silverner: token mismatch: {exc}", file=sys.stderr)
        return 2
    except _FATAL_ERRORS as exc:
        print(f"silverner: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
