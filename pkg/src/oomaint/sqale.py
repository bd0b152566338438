"""Rule engine, technical debt and the SQALE letter grade.

Each rule measures one quantity per location (an expression, a method, a
class, a comment block) and raises an issue when the value exceeds the
rule's threshold. The issue's remediation time is

    constant_minutes + per_unit_minutes * (value - threshold)

Technical debt (TD) is the sum of remediation minutes; the technical debt
ratio (TDR) divides it by the development time, estimated at 30 minutes per
line of production code.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .metrics import MetricMatrix
from .model import ClassNode, MethodNode, Snapshot, size_vector

MINUTES_PER_LINE = 30
RULE_TYPES = ("maintainability", "reliability", "security")
SEVERITIES = ("info", "minor", "major", "critical", "blocker")
# (upper bound exclusive, grade); anything at or above the last bound is E
GRADE_BOUNDS = ((0.05, "A"), (0.10, "B"), (0.20, "C"), (0.50, "D"))


class RuleConfigError(ValueError):
    """A rule definition or rule-set file is invalid."""


@dataclass
class Rule:
    id: str
    type: str = "maintainability"
    severity: str = "major"
    tags: tuple[str, ...] = ()
    threshold: float = 0.0
    constant_minutes: float = 0.0
    per_unit_minutes: float = 0.0
    enabled: bool = True
    description: str = ""
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.type not in RULE_TYPES:
            raise RuleConfigError(f"rule {self.id}: unknown type {self.type!r}")
        if self.severity not in SEVERITIES:
            raise RuleConfigError(f"rule {self.id}: unknown severity {self.severity!r}")
        if self.constant_minutes < 0 or self.per_unit_minutes < 0:
            raise RuleConfigError(f"rule {self.id}: remediation minutes must be non-negative")
        self.tags = tuple(sorted(self.tags))

    def remediation(self, value: float) -> float:
        return self.constant_minutes + self.per_unit_minutes * (value - self.threshold)


@dataclass(frozen=True)
class Issue:
    rule_id: str
    type: str
    severity: str
    tags: tuple[str, ...]
    file: str
    package: str
    class_name: str
    method: str
    line: int
    value: float
    remediation_minutes: float
    message: str = ""

    @property
    def sort_key(self):
        return (self.file, self.line, self.rule_id, self.class_name, self.method, self.message)


@dataclass(frozen=True)
class DebtReport:
    issues: tuple[Issue, ...]
    td_minutes: float
    dev_time_minutes: float
    tdr: float
    grade: str


# -- measurements ----------------------------------------------------------
#
# A measure yields (class, method or None, line, value, message) for every
# location the rule looks at; the engine decides which ones are issues.

Measurement = tuple[ClassNode, Optional[MethodNode], int, float, str]
Measure = Callable[[Rule, Snapshot, MetricMatrix], Iterator[Measurement]]


def _methods(snapshot: Snapshot) -> Iterator[tuple[ClassNode, MethodNode]]:
    for cls in snapshot.classes():
        for m in cls.methods:
            yield cls, m


def _expression_complexity(rule, snapshot, matrix):
    counted = set(rule.options.get("operators", ("&&", "||", "?")))
    for cls, m in _methods(snapshot):
        for expr in m.expressions:
            n = sum(1 for op in expr.operators if op in counted)
            yield cls, m, expr.line, n, f"expression uses {n} operators"


def _method_complexity(rule, snapshot, matrix):
    for cls, m in _methods(snapshot):
        if m.has_body:
            cc = 1 + m.decision_points
            yield cls, m, m.line, cc, f"cyclomatic complexity {cc}"


def _method_length(rule, snapshot, matrix):
    for cls, m in _methods(snapshot):
        yield cls, m, m.line, m.statements, f"{m.statements} statements"


def _parameter_count(rule, snapshot, matrix):
    for cls, m in _methods(snapshot):
        n = len(m.parameter_type_names)
        yield cls, m, m.line, n, f"{n} parameters"


def _nesting_depth(rule, snapshot, matrix):
    for cls, m in _methods(snapshot):
        yield cls, m, m.line, m.max_nesting_depth, f"control flow nested {m.max_nesting_depth} deep"


def _class_length(rule, snapshot, matrix):
    for cls in snapshot.classes():
        if cls.is_top_level:
            yield cls, None, cls.line, cls.line_count, f"{cls.line_count} lines"


def _god_class(rule, snapshot, matrix):
    max_tcc = rule.options.get("max_tcc", 1 / 3)
    for cls in snapshot.classes():
        vec = matrix.rows.get(cls.qualified_name)
        if vec is not None and vec.tcc < max_tcc:
            yield cls, None, cls.line, vec.wmc, f"WMC {vec.wmc} with TCC {vec.tcc:.2f}"


def _duplicated_string_literal(rule, snapshot, matrix):
    min_length = rule.options.get("min_length", 5)
    for cls in snapshot.classes():
        counts = Counter(s for s, _ in cls.string_literals if len(s) >= min_length)
        first = {}
        for s, line in cls.string_literals:
            first.setdefault(s, line)
        for s in sorted(counts):
            yield cls, None, first[s], counts[s], f"string literal {s!r} repeated {counts[s]} times"


def _empty_catch_block(rule, snapshot, matrix):
    for cls, m in _methods(snapshot):
        for line in m.empty_catch_lines:
            yield cls, m, line, 1, "empty catch block"


def _commented_out_code(rule, snapshot, matrix):
    for cls in snapshot.classes():
        start = prev = None
        for line in list(cls.commented_code_lines) + [None]:
            if start is not None and (line is None or line != prev + 1):
                yield cls, None, start, 1, f"commented-out code, lines {start}-{prev}"
                start = None
            if line is not None:
                if start is None:
                    start = line
                prev = line


MEASURES: dict[str, Measure] = {
    "expression-complexity": _expression_complexity,
    "method-cyclomatic-complexity": _method_complexity,
    "method-length": _method_length,
    "parameter-count": _parameter_count,
    "nesting-depth": _nesting_depth,
    "class-length": _class_length,
    "god-class": _god_class,
    "duplicated-string-literal": _duplicated_string_literal,
    "empty-catch-block": _empty_catch_block,
    "commented-out-code": _commented_out_code,
}


def default_rules() -> list[Rule]:
    return [
        Rule("expression-complexity", severity="critical", tags=("brain-overload",),
             threshold=3, constant_minutes=5, per_unit_minutes=1,
             description="too many conditional operators in one expression",
             options={"operators": ["&&", "||", "?"]}),
        Rule("method-cyclomatic-complexity", severity="critical", tags=("brain-overload",),
             threshold=10, constant_minutes=10, per_unit_minutes=1,
             description="method has too many decision points"),
        Rule("method-length", severity="major", tags=("brain-overload",),
             threshold=30, constant_minutes=20,
             description="method has too many statements"),
        Rule("parameter-count", severity="major", tags=("brain-overload",),
             threshold=7, constant_minutes=20,
             description="method has too many parameters"),
        Rule("nesting-depth", severity="critical", tags=("brain-overload",),
             threshold=3, constant_minutes=10,
             description="control flow statements nested too deeply"),
        Rule("class-length", severity="major", tags=("brain-overload",),
             threshold=1000, constant_minutes=30,
             description="source file class is too long"),
        Rule("god-class", severity="major", tags=("brain-overload", "design"),
             threshold=46, constant_minutes=120,
             description="complex class with low cohesion (WMC >= 47, TCC < 1/3)",
             options={"max_tcc": 1 / 3}),
        Rule("duplicated-string-literal", severity="critical", tags=("design",),
             threshold=2, constant_minutes=2, per_unit_minutes=2,
             description="string literal repeated instead of a constant",
             options={"min_length": 5}),
        Rule("empty-catch-block", type="reliability", severity="major", tags=("error-handling",),
             threshold=0, constant_minutes=5,
             description="exception silently swallowed"),
        Rule("commented-out-code", severity="major", tags=("unused",),
             threshold=0, constant_minutes=5,
             description="block of commented-out code"),
    ]


_OVERRIDABLE = {"enabled", "threshold", "constant_minutes", "per_unit_minutes", "severity", "type", "tags", "options"}


def configure_rules(overrides: dict, base: Optional[list[Rule]] = None) -> list[Rule]:
    """Apply ``{rule_id: {key: value}}`` overrides to the built-in rules.

    Keys other than the known rule attributes are taken as rule options.
    """
    rules = {r.id: r for r in (base if base is not None else default_rules())}
    for rule_id, settings in sorted(overrides.items()):
        if rule_id not in rules:
            raise RuleConfigError(f"unknown rule {rule_id!r}")
        if not isinstance(settings, dict):
            raise RuleConfigError(f"rule {rule_id}: settings must be a table")
        rule = rules[rule_id]
        changes = {k: v for k, v in settings.items() if k in _OVERRIDABLE and k != "options"}
        options = dict(rule.options)
        options.update(settings.get("options", {}))
        options.update({k: v for k, v in settings.items() if k not in _OVERRIDABLE})
        for key in ("threshold", "constant_minutes", "per_unit_minutes"):
            if key in changes and not isinstance(changes[key], (int, float)):
                raise RuleConfigError(f"rule {rule_id}: {key} must be a number")
        if "tags" in changes:
            changes["tags"] = tuple(changes["tags"])
        rules[rule_id] = replace(rule, options=options, **changes)
    return list(rules.values())


def load_rules(path) -> list[Rule]:
    """Read a rule-set TOML file with one ``[rules.<id>]`` table per changed rule."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise RuleConfigError(f"{path}: {exc}") from exc
    return configure_rules(data.get("rules", {}))


def run_rules(snapshot: Snapshot, matrix: MetricMatrix, rules: Optional[Iterable[Rule]] = None) -> list[Issue]:
    rules = default_rules() if rules is None else list(rules)
    issues = []
    for rule in rules:
        if not rule.enabled:
            continue
        measure = MEASURES.get(rule.id)
        if measure is None:
            raise RuleConfigError(f"no measurement registered for rule {rule.id!r}")
        for cls, method, line, value, message in measure(rule, snapshot, matrix):
            if value > rule.threshold:
                issues.append(
                    Issue(
                        rule_id=rule.id,
                        type=rule.type,
                        severity=rule.severity,
                        tags=rule.tags,
                        file=cls.file,
                        package=cls.package_name,
                        class_name=cls.qualified_name,
                        method=method.name if method is not None else "",
                        line=line,
                        value=value,
                        remediation_minutes=rule.remediation(value),
                        message=message,
                    )
                )
    issues.sort(key=lambda i: i.sort_key)
    return issues


def grade_for(tdr: float) -> str:
    if math.isnan(tdr) or tdr < 0:
        raise ValueError(f"TDR must be non-negative, got {tdr}")
    for bound, grade in GRADE_BOUNDS:
        if tdr < bound:
            return grade
    return "E"


def debt_report(issues: Iterable[Issue], production_loc: int) -> DebtReport:
    if production_loc < 1:
        raise ValueError("TDR is undefined without production code (production_loc must be >= 1)")
    issues = tuple(issues)
    td = math.fsum(i.remediation_minutes for i in issues)
    dev_time = float(MINUTES_PER_LINE * production_loc)
    tdr = td / dev_time
    return DebtReport(issues, td, dev_time, tdr, grade_for(tdr))


def production_loc(snapshot: Snapshot) -> int:
    return size_vector(snapshot).n_lines


def analyze_debt(snapshot: Snapshot, matrix: MetricMatrix, rules: Optional[Iterable[Rule]] = None) -> DebtReport:
    return debt_report(run_rules(snapshot, matrix, rules), production_loc(snapshot))


def _sum_by(issues: Iterable[Issue], key) -> dict[str, float]:
    parts: dict[str, list] = {}
    for i in issues:
        parts.setdefault(key(i), []).append(i.remediation_minutes)
    return {k: math.fsum(v) for k, v in sorted(parts.items())}


def debt_by_package(issues: Iterable[Issue]) -> dict[str, float]:
    return _sum_by(issues, lambda i: i.package)


def debt_by_class(issues: Iterable[Issue]) -> dict[str, float]:
    return _sum_by(issues, lambda i: i.class_name)
