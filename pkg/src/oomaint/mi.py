"""Maintainability Index at method, class, package and system scope.

    MI = 171 - 5.2 ln(aveV) - 0.23 aveG - 16.2 ln(aveSTAT)

Averages are taken per method over methods that have a body. ``ln`` is
applied to ``max(x, 1)`` so empty or trivial methods stay finite. The
normalized value is the raw value clamped into [0, 100].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .metrics import MetricMatrix, cyclomatic_complexity, halstead_volume
from .model import MethodNode

POOR_THRESHOLD = 20.0


@dataclass(frozen=True)
class MiResult:
    ave_v: float
    ave_g: float
    ave_stat: float
    raw: float
    normalized: float
    applicable: bool = True

    @property
    def label(self) -> str:
        return mi_classify(self) if self.applicable else "n/a"


NOT_APPLICABLE = MiResult(0.0, 0.0, 0.0, math.nan, math.nan, applicable=False)


def _ln(x: float) -> float:
    return math.log(max(x, 1.0))


def mi_from_averages(ave_v: float, ave_g: float, ave_stat: float) -> MiResult:
    for name, value in (("ave_v", ave_v), ("ave_g", ave_g), ("ave_stat", ave_stat)):
        if value < 0 or math.isnan(value):
            raise ValueError(f"{name} must be non-negative, got {value}")
    raw = 171.0 - 5.2 * _ln(ave_v) - 0.23 * ave_g - 16.2 * _ln(ave_stat)
    return MiResult(ave_v, ave_g, ave_stat, raw, min(max(raw, 0.0), 100.0))


def mi_from_vectors(vectors, use_loc: bool = False) -> MiResult:
    """MI of the method population behind a set of class metric vectors."""
    vectors = list(vectors)
    n = sum(v.method_count for v in vectors)
    if n == 0:
        return NOT_APPLICABLE
    volume = sum(v.halstead_volume_total for v in vectors)
    paths = sum(v.decision_points_total + v.method_count for v in vectors)
    size = sum((v.method_lines_total if use_loc else v.statements_total) for v in vectors)
    return mi_from_averages(volume / n, paths / n, size / n)


def mi_for_scope(matrix: MetricMatrix, scope: str = "system", name: str = "", use_loc: bool = False) -> MiResult:
    """MI for ``scope`` in {"system", "package", "class"}; ``name`` selects the package or class.

    Raises ``KeyError`` when the named scope does not exist. A scope without
    any method body gives a not-applicable result.
    """
    if scope == "system":
        vectors = matrix.rows.values()
    elif scope == "package":
        if name not in set(matrix.packages.values()):
            raise KeyError(f"no such package: {name!r}")
        vectors = [v for c, v in matrix.rows.items() if matrix.packages[c] == name]
    elif scope == "class":
        if name not in matrix.rows:
            raise KeyError(f"no such class: {name!r}")
        vectors = [matrix.rows[name]]
    else:
        raise ValueError(f"unknown scope {scope!r}")
    return mi_from_vectors(vectors, use_loc=use_loc)


def mi_classify(result: MiResult) -> str:
    if not result.applicable:
        raise ValueError("MI is not applicable to a scope without methods")
    return "poor" if result.normalized < POOR_THRESHOLD else "acceptable"


def class_mi(matrix: MetricMatrix, use_loc: bool = False) -> dict[str, MiResult]:
    return {c: mi_from_vectors([v], use_loc) for c, v in matrix.rows.items()}


def method_mi(method: MethodNode, use_loc: bool = False) -> MiResult:
    if not method.has_body:
        return NOT_APPLICABLE
    size = method.line_count if use_loc else method.statements
    return mi_from_averages(halstead_volume(method), cyclomatic_complexity(method), size)
