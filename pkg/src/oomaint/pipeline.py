"""Load one snapshot and run every model on it."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .arisa import arisa_system_score, score_matrix
from .frontend import ParseDiagnostic, ParseOptions, load_facts, parse_tree
from .metrics import MetricMatrix, compute_metrics
from .mi import MiResult, class_mi, mi_for_scope
from .model import SizeVector, Snapshot, size_vector
from .sqale import DebtReport, Rule, debt_by_class, debt_by_package, debt_report, production_loc, run_rules


class AnalysisError(Exception):
    """A snapshot cannot be loaded or has nothing to analyze."""


def load_snapshot(
    path, options: Optional[ParseOptions] = None, jobs: int = 1, version_label: str = ""
) -> tuple[Snapshot, list[ParseDiagnostic]]:
    """A directory is parsed as a source tree; any other file is read as a facts file."""
    path = Path(path)
    if path.is_dir():
        try:
            return parse_tree(path, options, jobs=jobs, version_label=version_label)
        except OSError as exc:
            raise AnalysisError(str(exc)) from exc
    if not path.exists():
        raise AnalysisError(f"no such file or directory: {path}")
    try:
        snapshot = load_facts(path)
    except OSError as exc:
        raise AnalysisError(f"cannot read {path}: {exc}") from exc
    except Exception as exc:  # FactsError and JSON errors alike
        raise AnalysisError(f"{path}: {exc}") from exc
    return snapshot, []


@dataclass(frozen=True)
class Analysis:
    snapshot: Snapshot
    size: SizeVector
    matrix: MetricMatrix
    mi: MiResult
    class_mi: dict
    flags: dict
    class_arisa: dict  # class -> ArisaScore
    arisa_system: float
    debt: DebtReport
    by_package: dict
    by_class: dict

    @property
    def label(self) -> str:
        return self.snapshot.version_label


def analyze_snapshot(snapshot: Snapshot, rules: Optional[list[Rule]] = None, use_loc: bool = False) -> Analysis:
    if not any(True for _ in snapshot.classes()):
        raise AnalysisError(f"snapshot {snapshot.version_label or snapshot.source_root!r} contains no classes")
    matrix = compute_metrics(snapshot)
    flags, scores = score_matrix(matrix)
    issues = run_rules(snapshot, matrix, rules)
    return Analysis(
        snapshot=snapshot,
        size=size_vector(snapshot),
        matrix=matrix,
        mi=mi_for_scope(matrix, "system", use_loc=use_loc),
        class_mi=class_mi(matrix, use_loc),
        flags=flags,
        class_arisa=scores,
        arisa_system=arisa_system_score(s.maintainability for s in scores.values()),
        debt=debt_report(issues, production_loc(snapshot)),
        by_package=debt_by_package(issues),
        by_class=debt_by_class(issues),
    )


def class_model_columns(analysis: Analysis) -> tuple[dict, dict, dict]:
    """Per-class raw MI, ARiSA maintainability and TD minutes."""
    classes = list(analysis.matrix.rows)
    mi = {c: analysis.class_mi[c].raw for c in classes}
    arisa = {c: analysis.class_arisa[c].maintainability for c in classes}
    td = {c: analysis.by_class.get(c, 0.0) for c in classes}
    return mi, arisa, td

