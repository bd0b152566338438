"""Report sections for each kind of result."""

from __future__ import annotations

import re

from .arisa import CRITERIA
from .evolution import CLASS_MODELS, MODELS, CorrelationReport, CoverageSet, VersionSeries
from .metrics import METRIC_NAMES, MetricMatrix
from .mi import MiResult, mi_for_scope
from .model import SizeVector
from .pipeline import Analysis
from .report import Section
from .sqale import DebtReport, Issue

ISSUE_HEADER = [
    "rule_id", "type", "severity", "tags", "file", "package", "class", "method", "line", "value",
    "remediation_minutes", "message",
]


def metrics_section(matrix: MetricMatrix) -> Section:
    rows = [[c, matrix.packages[c]] + [vec.metric(m) for m in METRIC_NAMES] for c, vec in matrix.rows.items()]
    return Section("metrics", ["class", "package", *METRIC_NAMES], rows)


def size_section(size: SizeVector) -> Section:
    return Section("size", ["packages", "classes", "methods", "statements", "lines"], [list(size.as_tuple())])


def _mi_row(scope: str, name: str, r: MiResult) -> list:
    return [scope, name, r.ave_v if r.applicable else None, r.ave_g if r.applicable else None,
            r.ave_stat if r.applicable else None, r.raw, r.normalized, r.label]


def mi_section(matrix: MetricMatrix, use_loc: bool = False) -> Section:
    rows = [_mi_row("system", "", mi_for_scope(matrix, "system", use_loc=use_loc))]
    for pkg in sorted(set(matrix.packages.values())):
        rows.append(_mi_row("package", pkg, mi_for_scope(matrix, "package", pkg, use_loc)))
    for cls in matrix.rows:
        rows.append(_mi_row("class", cls, mi_for_scope(matrix, "class", cls, use_loc)))
    return Section("mi", ["scope", "name", "ave_v", "ave_g", "ave_stat", "mi_raw", "mi_normalized", "label"], rows)


def arisa_sections(flags: dict, scores: dict, system: float) -> list[Section]:
    rows = []
    for cls, score in scores.items():
        rows.append([cls, *(score.criterion(c) for c in CRITERIA), score.maintainability,
                     ";".join(sorted(flags[cls]))])
    return [
        Section("arisa_classes", ["class", *CRITERIA, "maintainability", "flagged"], rows),
        Section("arisa_system", ["classes", "maintainability"], [[len(scores), system]]),
    ]


def issue_row(i: Issue) -> list:
    return [i.rule_id, i.type, i.severity, ";".join(i.tags), i.file, i.package, i.class_name, i.method,
            i.line, float(i.value), i.remediation_minutes, i.message]


def sqale_sections(debt: DebtReport, by_package: dict) -> list[Section]:
    summary = [[len(debt.issues), debt.td_minutes, debt.dev_time_minutes, debt.tdr,
                f"{debt.tdr * 100:.2f}", debt.grade]]
    return [
        Section("sqale_summary", ["issues", "td_minutes", "dev_time_minutes", "tdr", "tdr_percent", "grade"], summary),
        Section("sqale_packages", ["package", "minutes"], [[p, m] for p, m in by_package.items()]),
        Section("sqale_issues", ISSUE_HEADER, [issue_row(i) for i in debt.issues]),
    ]


def analysis_sections(a: Analysis, model: str = "all", use_loc: bool = False) -> list[Section]:
    sections = [size_section(a.size)]
    if model in ("mi", "all"):
        sections.append(mi_section(a.matrix, use_loc))
    if model in ("arisa", "all"):
        sections.extend(arisa_sections(a.flags, a.class_arisa, a.arisa_system))
    if model in ("sqale", "all"):
        sections.extend(sqale_sections(a.debt, a.by_package))
    return sections


def class_correlation_section(matrix: list) -> Section:
    rows = [[name, *matrix[i]] for i, name in enumerate(CLASS_MODELS)]
    return Section("class_correlation", ["model", *CLASS_MODELS], rows)


SCORECARD_HEADER = [
    "version", "packages", "classes", "methods", "statements", "lines", "mi_raw", "mi_normalized",
    "arisa", "td_minutes", "dev_time_minutes", "tdr", "grade",
]


def scorecard_section(series: VersionSeries) -> Section:
    rows = []
    for e in series.entries:
        rows.append([e.label, *e.size.as_tuple(), e.mi.raw, e.mi.normalized, e.arisa_system,
                     e.debt.td_minutes, e.debt.dev_time_minutes, e.debt.tdr, e.debt.grade])
    return Section("scorecards", SCORECARD_HEADER, rows)


def correlation_section(report: CorrelationReport) -> Section:
    return Section("correlation", ["size", *MODELS], [[s, *vals] for s, vals in report.rows()])


def coverage_section(label: str, cov: CoverageSet) -> Section:
    rows = [[p.package, p.minutes, p.cumulative_fraction] for p in cov.packages]
    return Section(f"coverage/{safe_name(label)}", ["package", "minutes", "cumulative_fraction"], rows)


def failures_section(series: VersionSeries) -> Section:
    return Section("failures", ["version", "source", "message"],
                   [[f.label, f.source, f.message] for f in series.failures])


def safe_name(label: str) -> str:
    """A version label usable as a file name."""
    name = re.sub(r"[^A-Za-z0-9._-]+", "_", label).strip("._")
    return name or "version"
