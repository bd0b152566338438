"""ARiSA class-level maintainability from extreme metric values.

A class gets a flag for every metric whose value lies in the worst 15 % of
that metric's observed range across the snapshot (top for metrics that hurt
maintainability, bottom for LD and TCC). Each quality criterion scores the
weight of the flagged metrics over its total weight; the class score is the
mean of the four criteria, 0 meaning no extreme values and 1 meaning all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .metrics import METRIC_NAMES, MetricMatrix

CRITERIA = ("analyzability", "changeability", "stability", "testability")
EXTREME_FRACTION = 0.15
GEOMETRIC_EPSILON = 1e-4
# positions within 1e-9 of the cut-off count as on it
_TIE_TOLERANCE = 1e-9

# one chevron string per criterion, metrics in METRIC_NAMES order;
# "v" inverse influence, "^" direct influence, doubled when strong
_CHEVRONS = {
    #                cbo dac dit ld  lcom ilcom mpc noc tcc loc nam nom rfc wmc cyc len lod
    "analyzability": "vv  vv  vv  ^^  vv   vv    vv  v   ^^  vv  vv  vv  vv  vv  vv  vv  vv",
    "changeability": "vv  vv  vv  ^^  vv   vv    vv  vv  ^^  vv  vv  vv  vv  vv  vv  vv  vv",
    "stability":     "vv  vv  v   ^^  vv   vv    vv  v   ^^  v   v   v   v   v   vv  vv  v",
    "testability":   "vv  vv  vv  ^^  vv   vv    vv  v   ^^  vv  vv  vv  vv  vv  vv  vv  vv",
}
EXPECTED_WEIGHT_SUMS = {"analyzability": 33, "changeability": 34, "stability": 26, "testability": 33}


@dataclass(frozen=True)
class Influence:
    weight: int  # 1 or 2
    direction: str  # "inverse" or "direct"


class InfluenceTable:
    def __init__(self, chevrons: Mapping[str, str] = _CHEVRONS):
        self.influences: dict[str, dict[str, Influence]] = {}
        for criterion, row in chevrons.items():
            marks = row.split()
            if len(marks) != len(METRIC_NAMES):
                raise ValueError(f"{criterion}: expected {len(METRIC_NAMES)} entries, got {len(marks)}")
            self.influences[criterion] = {
                metric: Influence(len(mark), "direct" if mark[0] == "^" else "inverse")
                for metric, mark in zip(METRIC_NAMES, marks)
            }
        self._check()

    def _check(self) -> None:
        if tuple(self.influences) != CRITERIA:
            raise ValueError(f"criteria must be {CRITERIA}")
        for criterion, expected in EXPECTED_WEIGHT_SUMS.items():
            total = self.weight_sum(criterion)
            if total != expected:
                raise ValueError(f"{criterion} weights sum to {total}, expected {expected}")
        for metric in METRIC_NAMES:
            dirs = {self.influences[c][metric].direction for c in CRITERIA}
            want = {"direct"} if metric in ("ld", "tcc") else {"inverse"}
            if dirs != want:
                raise ValueError(f"{metric}: inconsistent influence direction {dirs}")

    def weight(self, criterion: str, metric: str) -> int:
        return self.influences[criterion][metric].weight

    def weight_sum(self, criterion: str) -> int:
        return sum(i.weight for i in self.influences[criterion].values())

    def direction(self, metric: str) -> str:
        return self.influences[CRITERIA[0]][metric].direction


DEFAULT_TABLE = InfluenceTable()


@dataclass(frozen=True)
class ArisaScore:
    analyzability: float
    changeability: float
    stability: float
    testability: float

    @property
    def maintainability(self) -> float:
        return (self.analyzability + self.changeability + self.stability + self.testability) / 4

    def criterion(self, name: str) -> float:
        return getattr(self, name)


def extreme_flags(matrix: MetricMatrix, table: InfluenceTable = DEFAULT_TABLE) -> dict[str, frozenset]:
    if not matrix.rows:
        raise ValueError("cannot compute extreme values over an empty metric matrix")
    flags: dict[str, set] = {c: set() for c in matrix.rows}
    for metric in METRIC_NAMES:
        column = matrix.column(metric)
        lo, hi = min(column.values()), max(column.values())
        if hi == lo:
            continue
        span = hi - lo
        inverse = table.direction(metric) == "inverse"
        for cls, value in column.items():
            position = (value - lo) / span
            if inverse and position >= 1 - EXTREME_FRACTION - _TIE_TOLERANCE:
                flags[cls].add(metric)
            elif not inverse and position <= EXTREME_FRACTION + _TIE_TOLERANCE:
                flags[cls].add(metric)
    return {c: frozenset(f) for c, f in flags.items()}


def arisa_class_score(flags: Iterable[str], table: InfluenceTable = DEFAULT_TABLE) -> ArisaScore:
    flags = set(flags)
    unknown = flags - set(METRIC_NAMES)
    if unknown:
        raise ValueError(f"unknown metrics: {sorted(unknown)}")
    return ArisaScore(
        *(sum(table.weight(c, m) for m in flags) / table.weight_sum(c) for c in CRITERIA)
    )


def arisa_system_score(class_scores: Iterable[float], epsilon: float = GEOMETRIC_EPSILON) -> float:
    """Geometric mean of ``score + epsilon``, minus ``epsilon``.

    The offset keeps a single zero-scored class from forcing the mean to 0.
    """
    scores = list(class_scores)
    if not scores:
        raise ValueError("system score needs at least one class score")
    for s in scores:
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"class score {s} outside [0, 1]")
    log_mean = math.fsum(math.log(s + epsilon) for s in scores) / len(scores)
    return min(max(math.exp(log_mean) - epsilon, 0.0), 1.0)


def score_matrix(matrix: MetricMatrix, table: InfluenceTable = DEFAULT_TABLE) -> tuple[dict, dict]:
    """Per-class flags and scores for a whole snapshot."""
    flags = extreme_flags(matrix, table)
    return flags, {c: arisa_class_score(f, table) for c, f in flags.items()}
