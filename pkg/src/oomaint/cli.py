"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 analysis failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .arisa import arisa_system_score, score_matrix
from .evolution import (
    DEFAULT_DELTA_MI,
    DEFAULT_DELTA_TDR,
    ManifestError,
    analyze_series,
    correlation_report,
    coverage_set,
    cross_model_class_correlation,
    key_versions,
    read_manifest,
    warn_cross_snapshot_arisa,
)
from .frontend import FactsError, ParseOptions, save_facts
from .frontend.facts import SCHEMA_VERSION, dumps
from .metrics import compute_metrics
from .pipeline import AnalysisError, analyze_snapshot, class_model_columns, load_snapshot
from .report import emit, write_text
from .sqale import RuleConfigError, analyze_debt, debt_by_package, default_rules, load_rules
from .tables import (
    analysis_sections,
    arisa_sections,
    class_correlation_section,
    correlation_section,
    coverage_section,
    failures_section,
    metrics_section,
    mi_section,
    scorecard_section,
    sqale_sections,
)

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2

# built-in values for options that may also come from a config file
DEFAULTS = {
    "ext": ".java",
    "encoding": "utf-8",
    "exclude": [],
    "jobs": None,  # filled with the processor count
    "format": "csv",
    "rules": None,
    "model": "all",
    "use_loc": False,
    "delta_tdr": DEFAULT_DELTA_TDR,
    "delta_mi": DEFAULT_DELTA_MI,
    "coverage_threshold": 0.5,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with option defaults; flags override it")
    common.add_argument("--ext", help="source file extension (default .java)")
    common.add_argument("--encoding", help="source file encoding (default utf-8)")
    common.add_argument("--exclude", action="append", metavar="GLOB",
                        help="skip files whose root-relative path matches GLOB (repeatable)")
    common.add_argument("--jobs", type=int, metavar="N", help="worker processes (default: processor count)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output file (parse) or directory")
    common.add_argument("--rules", help="rule-set TOML file for the debt model")
    common.add_argument("--use-loc", action="store_true", default=None,
                        help="use physical lines instead of statements in the MI")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = _Parser(prog="oomaint", description="Maintainability models for object-oriented source code.")
    parser.add_argument("--version", action="version",
                        version=f"oomaint {__version__} (facts schema {SCHEMA_VERSION})")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, help_text, source=True):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if source:
            p.add_argument("source", help="source directory or facts file")
        return p

    add("parse", "parse a source tree and write its facts file")
    add("metrics", "per-class metric table")
    add("mi", "Maintainability Index per system, package and class")
    add("arisa", "ARiSA class scores and system score")
    add("sqale", "rule issues, technical debt and SQALE grade")
    p = add("analyze", "all models on one snapshot")
    p.add_argument("--model", choices=("mi", "arisa", "sqale", "all"))
    add("correlate", "class-level rank correlation between the three models")
    p = add("history", "analyze an ordered list of versions", source=False)
    p.add_argument("--manifest", required=True, help="file with one 'label<TAB>path' line per version")
    p.add_argument("--delta-tdr", type=float, help="key-version TDR change (default 0.01)")
    p.add_argument("--delta-mi", type=float, help="key-version normalized MI change (default 5.0)")
    p.add_argument("--coverage-threshold", type=float, help="debt share covered per version (default 0.5)")
    return parser


def load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise AnalysisError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"config {path}: {exc}") from exc
    data = {k.replace("-", "_"): v for k, v in data.items()}
    unknown = sorted(set(data) - set(DEFAULTS))
    if unknown:
        raise UsageError(f"config {path}: unknown option(s): {', '.join(unknown)}")
    if isinstance(data.get("exclude"), str):
        data["exclude"] = [data["exclude"]]
    if data.get("rules"):
        rules = Path(data["rules"])
        data["rules"] = str(rules if rules.is_absolute() else Path(path).parent / rules)
    return data


def resolve_options(args: argparse.Namespace) -> dict:
    """Flag value if given, else config file value, else built-in default."""
    config = load_config(args.config)
    opts = {}
    for key, default in DEFAULTS.items():
        value = getattr(args, key, None)
        opts[key] = value if value is not None else config.get(key, default)
    if opts["jobs"] is None:
        opts["jobs"] = os.cpu_count() or 1
    if opts["jobs"] < 1:
        raise UsageError("--jobs must be at least 1")
    if opts["format"] not in ("csv", "json"):
        raise UsageError(f"unknown format {opts['format']!r}")
    if opts["model"] not in ("mi", "arisa", "sqale", "all"):
        raise UsageError(f"unknown model {opts['model']!r}")
    if not 0 < opts["coverage_threshold"] <= 1:
        raise UsageError("coverage threshold must be in (0, 1]")
    return opts


def _parse_options(opts: dict) -> ParseOptions:
    return ParseOptions(ext=opts["ext"], encoding=opts["encoding"], exclude=tuple(opts["exclude"]))


def _load(args, opts):
    snapshot, diagnostics = load_snapshot(args.source, _parse_options(opts), jobs=opts["jobs"])
    for d in diagnostics:
        if d.severity == "error" or args.verbose:
            print(str(d), file=sys.stderr)
    return snapshot


def _rules(opts):
    return load_rules(opts["rules"]) if opts["rules"] else default_rules()


def cmd_parse(args, opts) -> int:
    snapshot = _load(args, opts)
    if args.out:
        save_facts(snapshot, args.out)
    else:
        sys.stdout.write(dumps(snapshot))
    return EXIT_OK


def cmd_single(args, opts) -> int:
    snapshot = _load(args, opts)
    matrix = compute_metrics(snapshot)
    if args.command == "metrics":
        sections = [metrics_section(matrix)]
    elif args.command == "mi":
        sections = [mi_section(matrix, opts["use_loc"])]
    elif args.command == "arisa":
        if not matrix.rows:
            raise AnalysisError("ARiSA needs at least one class")
        flags, scores = score_matrix(matrix)
        sections = arisa_sections(flags, scores, arisa_system_score(s.maintainability for s in scores.values()))
    else:
        debt = analyze_debt(snapshot, matrix, _rules(opts))
        sections = sqale_sections(debt, debt_by_package(debt.issues))
    emit(sections, opts["format"], args.out, sys.stdout, args.command)
    return EXIT_OK


def cmd_analyze(args, opts) -> int:
    analysis = analyze_snapshot(_load(args, opts), _rules(opts), opts["use_loc"])
    emit(analysis_sections(analysis, opts["model"], opts["use_loc"]), opts["format"], args.out, sys.stdout, "analyze")
    return EXIT_OK


def cmd_correlate(args, opts) -> int:
    analysis = analyze_snapshot(_load(args, opts), _rules(opts), opts["use_loc"])
    matrix = cross_model_class_correlation(*class_model_columns(analysis))
    emit([class_correlation_section(matrix)], opts["format"], args.out, sys.stdout, "correlate")
    return EXIT_OK


def cmd_history(args, opts) -> int:
    if not args.out:
        raise UsageError("history needs --out DIR")
    manifest = read_manifest(args.manifest)
    series = analyze_series(manifest, _parse_options(opts), _rules(opts), jobs=opts["jobs"])
    for f in series.failures:
        print(f"warning: version {f.label} skipped: {f.message}", file=sys.stderr)
    if len(series) > 1:
        warn_cross_snapshot_arisa()

    sections = [scorecard_section(series)]
    if len(series) >= 3:
        sections.append(correlation_section(correlation_report(series)))
    else:
        print("warning: fewer than 3 versions, correlation table skipped", file=sys.stderr)
    used = set()
    for entry in series.entries:
        if not entry.by_package:
            continue
        section = coverage_section(entry.label, coverage_set(entry.by_package, opts["coverage_threshold"]))
        name, n = section.name, 2
        while section.name in used:
            section.name = f"{name}-{n}"
            n += 1
        used.add(section.name)
        sections.append(section)
    if series.failures:
        sections.append(failures_section(series))
    emit(sections, opts["format"], args.out, sys.stdout, "history")

    keys = key_versions(series, opts["delta_tdr"], opts["delta_mi"]) if len(series) >= 2 else []
    write_text(Path(args.out) / "key_versions.txt", "".join(f"{k}\n" for k in keys))
    return EXIT_OK


COMMANDS = {
    "parse": cmd_parse,
    "metrics": cmd_single,
    "mi": cmd_single,
    "arisa": cmd_single,
    "sqale": cmd_single,
    "analyze": cmd_analyze,
    "correlate": cmd_correlate,
    "history": cmd_history,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        opts = resolve_options(args)
        return COMMANDS[args.command](args, opts)
    except UsageError as exc:
        print(f"oomaint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AnalysisError, ManifestError, RuleConfigError, FactsError, OSError, ValueError) as exc:
        print(f"oomaint: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
