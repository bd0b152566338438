"""Maintainability across an ordered list of versions.

Every version is analyzed independently, so versions can be processed in
parallel; the series keeps manifest order. On top of the series this module
computes size/model rank correlations, flags key versions whose scores jump
and finds the packages that carry most of the technical debt.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .frontend import ParseOptions
from .mi import MiResult
from .model import SizeVector
from .pipeline import AnalysisError, analyze_snapshot, load_snapshot
from .sqale import DebtReport, Rule

SIZE_MEASURES = ("packages", "classes", "methods", "statements")
MODELS = ("mi", "arisa", "sqale")
DEFAULT_DELTA_TDR = 0.01
DEFAULT_DELTA_MI = 5.0
# absorbs float noise when a delta sits exactly on a threshold
_DELTA_TOLERANCE = 1e-12


class LengthMismatchError(ValueError):
    """Series differ in length or are too short to rank."""


class ConstantSeriesError(ValueError):
    """A series has a single distinct value, so its ranks carry no order."""


class ManifestError(ValueError):
    pass


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the mean of the ranks they span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise ConstantSeriesError("series has zero variance")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return min(max(r, -1.0), 1.0)


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise LengthMismatchError(f"series lengths differ: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise LengthMismatchError(f"need at least 2 observations, got {len(xs)}")
    if len(set(xs)) == 1:
        raise ConstantSeriesError("first series is constant")
    if len(set(ys)) == 1:
        raise ConstantSeriesError("second series is constant")
    return pearson(average_ranks(xs), average_ranks(ys))


def spearman_or_none(xs: Sequence[float], ys: Sequence[float], min_length: int = 3) -> Optional[float]:
    """Spearman over the pairs where both values are numbers; None when degenerate."""
    pairs = [(x, y) for x, y in zip(xs, ys) if not (math.isnan(x) or math.isnan(y))]
    if len(pairs) < min_length:
        return None
    try:
        return spearman([p[0] for p in pairs], [p[1] for p in pairs])
    except ValueError:
        return None


# -- series ----------------------------------------------------------------


@dataclass(frozen=True)
class VersionEntry:
    label: str
    size: SizeVector
    mi: MiResult
    arisa_system: float
    debt: DebtReport
    by_package: dict

    def model_score(self, model: str) -> float:
        if model == "mi":
            # raw MI: clamping at 100 would turn distinct values into ties
            return self.mi.raw
        if model == "arisa":
            return self.arisa_system
        if model == "sqale":
            return self.debt.tdr
        raise KeyError(model)

    def size_measure(self, measure: str) -> int:
        return getattr(self.size, "n_" + measure)


@dataclass(frozen=True)
class VersionFailure:
    label: str
    source: str
    message: str


@dataclass
class VersionSeries:
    entries: list[VersionEntry] = field(default_factory=list)
    failures: list[VersionFailure] = field(default_factory=list)

    def __post_init__(self):
        labels = [e.label for e in self.entries]
        if len(set(labels)) != len(labels):
            raise ValueError("version labels must be unique")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def labels(self) -> list[str]:
        return [e.label for e in self.entries]


def read_manifest(path) -> list[tuple[str, str]]:
    """``label<TAB>source`` per line; blank lines and ``#`` comments ignored.

    Relative sources are resolved against the manifest's directory.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    entries = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = raw.rstrip("\r\n").split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ManifestError(f"{path}:{n}: expected 'label<TAB>path'")
        label, source = parts[0].strip(), parts[1].strip()
        src = Path(source)
        if not src.is_absolute():
            src = path.parent / src
        entries.append((label, str(src)))
    labels = [label for label, _ in entries]
    dup = sorted({lb for lb in labels if labels.count(lb) > 1})
    if dup:
        raise ManifestError(f"{path}: duplicate version labels: {', '.join(dup)}")
    return entries


def _analyze_version(args) -> VersionEntry | VersionFailure:
    label, source, options, rules = args
    try:
        snapshot, _ = load_snapshot(source, options, jobs=1, version_label=label)
        a = analyze_snapshot(snapshot, rules)
    except (AnalysisError, ValueError) as exc:
        return VersionFailure(label, source, str(exc))
    return VersionEntry(label, a.size, a.mi, a.arisa_system, a.debt, a.by_package)


def analyze_series(
    manifest: Iterable[tuple[str, str]],
    options: Optional[ParseOptions] = None,
    rules: Optional[list[Rule]] = None,
    jobs: int = 1,
) -> VersionSeries:
    """Analyze every (label, source) pair; versions that fail are recorded and skipped."""
    work = [(label, source, options, rules) for label, source in manifest]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(work))) as pool:
            results = list(pool.map(_analyze_version, work))
    else:
        results = [_analyze_version(w) for w in work]
    series = VersionSeries(
        entries=[r for r in results if isinstance(r, VersionEntry)],
        failures=[r for r in results if isinstance(r, VersionFailure)],
    )
    if not series.entries:
        detail = "; ".join(f"{f.label}: {f.message}" for f in series.failures) or "empty manifest"
        raise AnalysisError(f"no version could be analyzed ({detail})")
    return series


# -- statistics ------------------------------------------------------------


@dataclass(frozen=True)
class CorrelationReport:
    """Spearman rho of each size measure against each model score; None marks a degenerate cell."""

    cells: dict  # (size measure, model) -> Optional[float]

    def get(self, size: str, model: str) -> Optional[float]:
        return self.cells[(size, model)]

    def rows(self) -> list[tuple[str, list[Optional[float]]]]:
        return [(s, [self.cells[(s, m)] for m in MODELS]) for s in SIZE_MEASURES]


def correlation_report(series: VersionSeries) -> CorrelationReport:
    if len(series) < 3:
        raise LengthMismatchError(f"correlation needs at least 3 versions, got {len(series)}")
    cells = {}
    for s in SIZE_MEASURES:
        xs = [float(e.size_measure(s)) for e in series.entries]
        for m in MODELS:
            ys = [e.model_score(m) for e in series.entries]
            cells[(s, m)] = None if any(math.isnan(y) for y in ys) else spearman_or_none(xs, ys)
    return CorrelationReport(cells)


def key_versions(
    series: VersionSeries, delta_tdr: float = DEFAULT_DELTA_TDR, delta_mi: float = DEFAULT_DELTA_MI
) -> list[str]:
    """Labels whose TDR or normalized MI moved by at least the given amount since the previous version."""
    flagged = []
    for prev, cur in zip(series.entries, series.entries[1:]):
        d_tdr = abs(cur.debt.tdr - prev.debt.tdr)
        d_mi = abs(cur.mi.normalized - prev.mi.normalized)  # NaN never compares true
        if d_tdr >= delta_tdr - _DELTA_TOLERANCE or d_mi >= delta_mi - _DELTA_TOLERANCE:
            flagged.append(cur.label)
    return flagged


@dataclass(frozen=True)
class CoverageEntry:
    package: str
    minutes: float
    cumulative_fraction: float


@dataclass(frozen=True)
class CoverageSet:
    threshold: float
    total_minutes: float
    packages: tuple[CoverageEntry, ...]

    @property
    def names(self) -> list[str]:
        return [p.package for p in self.packages]


def coverage_set(by_package: Mapping[str, float], threshold: float = 0.5) -> CoverageSet:
    """Fewest highest-debt packages whose share of the total reaches ``threshold``."""
    if not by_package:
        raise ValueError("coverage set of an empty package map")
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    total = math.fsum(by_package.values())
    if total <= 0:
        raise ValueError("coverage set needs a positive total")
    ranked = sorted(by_package.items(), key=lambda kv: (-kv[1], kv[0]))
    chosen = []
    running = []
    for name, minutes in ranked:
        running.append(minutes)
        share = math.fsum(running) / total
        chosen.append(CoverageEntry(name, minutes, share))
        if share >= threshold - _DELTA_TOLERANCE:
            break
    return CoverageSet(threshold, total, tuple(chosen))


CLASS_MODELS = ("mi", "arisa", "sqale")


def cross_model_class_correlation(
    class_mi: Mapping[str, float], class_arisa: Mapping[str, float], class_td: Mapping[str, float]
) -> list[list[Optional[float]]]:
    """Symmetric 3x3 Spearman matrix between per-class MI, ARiSA and TD (in CLASS_MODELS order).

    Classes without an MI value (no method bodies) drop out of the pairs
    involving MI only.
    """
    classes = sorted(class_arisa)
    if len(classes) < 3:
        raise LengthMismatchError(f"class correlation needs at least 3 classes, got {len(classes)}")
    columns = [
        [class_mi.get(c, math.nan) for c in classes],
        [class_arisa[c] for c in classes],
        [class_td.get(c, 0.0) for c in classes],
    ]
    out: list[list[Optional[float]]] = [[None] * 3 for _ in range(3)]
    for i in range(3):
        out[i][i] = 1.0
        for j in range(i + 1, 3):
            out[i][j] = out[j][i] = spearman_or_none(columns[i], columns[j])
    return out


def warn_cross_snapshot_arisa(stream=None) -> None:
    print(
        "warning: ARiSA scores are relative to each snapshot's own metric ranges; "
        "comparing them across versions or applications is not meaningful",
        file=stream or sys.stderr,
    )
