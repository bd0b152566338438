"""Class-level metrics: the 17 ARiSA metrics plus the ingredients of the MI.

The operational definitions below are fixed conventions:

* CBO  distinct other snapshot classes used as field, parameter or return
       type, or as a call target (inheritance alone does not couple)
* DAC  fields whose declared type is a snapshot class
* DIT  superclass edges up to the root; an external superclass counts one edge
* LD   own-field accesses / (own + foreign field accesses), 0 if none
* LCOM max(P - Q, 0) over method pairs (P share no field, Q share one or more)
* ILCOM connected components of methods linked by a shared field
* MPC  call sites whose target is not the class itself
* NOC  direct subclasses in the snapshot
* TCC  field-sharing method pairs / all method pairs, 0 below two methods
* LOC  physical lines of the class declaration
* NAM  fields + methods;  NOM  methods
* RFC  NOM + distinct (target, name) calls leaving the class
* WMC  sum of cyclomatic complexity
* CYC  size of the class's strongly connected component in the dependency graph
* LEN  mean character length of class, method and field names
* LOD  1 - documented / (1 + methods + fields)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from itertools import combinations
from typing import Optional

from .graph import component_sizes
from .model import UNKNOWN, ClassNode, MethodNode, Snapshot, TypeResolver, base_type_name

METRIC_NAMES = (
    "cbo", "dac", "dit", "ld", "lcom", "ilcom", "mpc", "noc", "tcc",
    "loc", "nam", "nom", "rfc", "wmc", "cyc", "len", "lod",
)


@dataclass(frozen=True)
class MetricVector:
    cbo: int = 0
    dac: int = 0
    dit: int = 0
    ld: float = 0.0
    lcom: int = 0
    ilcom: int = 0
    mpc: int = 0
    noc: int = 0
    tcc: float = 0.0
    loc: int = 1
    nam: int = 0
    nom: int = 0
    rfc: int = 0
    wmc: int = 0
    cyc: int = 1
    len: float = 0.0
    lod: float = 0.0
    # MI ingredients, summed over methods that have a body
    halstead_volume_total: float = 0.0
    decision_points_total: int = 0
    statements_total: int = 0
    method_count: int = 0
    method_lines_total: int = 0

    def metric(self, name: str) -> float:
        return getattr(self, name)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


COLUMNS = tuple(f.name for f in fields(MetricVector))


@dataclass(frozen=True)
class MetricMatrix:
    rows: dict  # qualified class name -> MetricVector, in snapshot order
    packages: dict  # qualified class name -> package name

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> dict:
        return {cls: getattr(vec, name) for cls, vec in self.rows.items()}

    def restrict(self, classes) -> "MetricMatrix":
        keep = [c for c in self.rows if c in set(classes)]
        return MetricMatrix({c: self.rows[c] for c in keep}, {c: self.packages[c] for c in keep})


def halstead_volume(method: MethodNode) -> float:
    length = method.operator_occurrences + method.operand_occurrences
    vocabulary = method.distinct_operators + method.distinct_operands
    if vocabulary <= 1:
        return 0.0
    return length * math.log2(vocabulary)


def cyclomatic_complexity(method: MethodNode) -> int:
    return 1 + method.decision_points


def _dependency_targets(cls: ClassNode, resolver: TypeResolver, with_inheritance: bool) -> set[str]:
    names = [f.declared_type_name for f in cls.fields]
    for m in cls.methods:
        names.extend(m.parameter_type_names)
        if m.return_type_name:
            names.append(m.return_type_name)
        names.extend(t for t, _ in m.calls)
    if with_inheritance:
        if cls.superclass_name:
            names.append(cls.superclass_name)
        names.extend(cls.implemented_interfaces)
    out = set()
    for n in names:
        r = resolver.resolve(n, cls)
        if r is not None and r != cls.qualified_name:
            out.add(r)
    return out


def dependency_graph(snapshot: Snapshot, resolver: Optional[TypeResolver] = None) -> dict[str, set[str]]:
    """Class dependency edges: inheritance, field/parameter/return types, call targets."""
    resolver = resolver or TypeResolver(snapshot)
    return {c.qualified_name: _dependency_targets(c, resolver, True) for c in snapshot.classes()}


def dependency_cycles(snapshot: Snapshot) -> dict[str, int]:
    graph = dependency_graph(snapshot)
    return component_sizes(graph.keys(), graph)


def _inheritance(snapshot: Snapshot, resolver: TypeResolver) -> tuple[dict, dict]:
    parent = {c.qualified_name: resolver.resolve(c.superclass_name, c) for c in snapshot.classes()}
    declared = {c.qualified_name: c.superclass_name is not None for c in snapshot.classes()}

    def depth(name: str) -> int:
        seen = set()
        d = 0
        while declared.get(name) and name not in seen:
            seen.add(name)
            d += 1
            name = parent.get(name)
            if name is None:
                break
        return d

    dit = {c: depth(c) for c in parent}
    noc = dict.fromkeys(parent, 0)
    for child, p in parent.items():
        if p is not None and p != child:
            noc[p] += 1
    return dit, noc


def _cohesion(method_fields: list[frozenset]) -> tuple[int, int, float]:
    n = len(method_fields)
    p = q = 0
    for a, b in combinations(method_fields, 2):
        if a & b:
            q += 1
        else:
            p += 1
    lcom = max(p - q, 0)
    tcc = q / (p + q) if n >= 2 else 0.0
    # union-find over methods sharing a field
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(n), 2):
        if method_fields[i] & method_fields[j]:
            parent[find(i)] = find(j)
    ilcom = len({find(i) for i in range(n)})
    return lcom, ilcom, tcc


def _name_length_mean(cls: ClassNode) -> float:
    names = [m.name for m in cls.methods] + [f.name for f in cls.fields]
    # anonymous classes have numeric names, local classes a numeric prefix
    class_name = cls.simple_name.lstrip("0123456789")
    if class_name:
        names.append(class_name)
    return sum(len(n) for n in names) / len(names) if names else 0.0


def class_metrics(
    cls: ClassNode, resolver: TypeResolver, dit: int, noc: int, cyc: int
) -> MetricVector:
    me = cls.qualified_name
    nom = len(cls.methods)
    own_sets = []
    own_total = foreign_total = 0
    for m in cls.methods:
        own = set(m.accessed_own_fields)
        foreign = 0
        for t, f in m.accessed_foreign_fields:
            if resolver.resolve(t, cls) == me:
                own.add(f)
            else:
                foreign += 1
        own_sets.append(frozenset(own))
        own_total += len(own)
        foreign_total += foreign
    ld = own_total / (own_total + foreign_total) if own_total + foreign_total else 0.0
    lcom, ilcom, tcc = _cohesion(own_sets)

    outgoing = set()
    mpc = 0
    for m in cls.methods:
        for target, name in m.calls:
            resolved = resolver.resolve(target, cls)
            if resolved == me:
                continue
            mpc += 1
            if resolved is None:
                resolved = UNKNOWN if target == UNKNOWN else base_type_name(target)
            outgoing.add((resolved, name))

    coupled = _dependency_targets(cls, resolver, with_inheritance=False)
    dac = sum(1 for f in cls.fields if resolver.resolve(f.declared_type_name, cls) is not None)
    documented = (
        int(cls.doc_comment_present)
        + sum(m.doc_comment_present for m in cls.methods)
        + sum(f.doc_comment_present for f in cls.fields)
    )
    bodied = [m for m in cls.methods if m.has_body]
    return MetricVector(
        cbo=len(coupled),
        dac=dac,
        dit=dit,
        ld=ld,
        lcom=lcom,
        ilcom=ilcom,
        mpc=mpc,
        noc=noc,
        tcc=tcc,
        loc=cls.line_count,
        nam=len(cls.fields) + nom,
        nom=nom,
        rfc=nom + len(outgoing),
        wmc=sum(cyclomatic_complexity(m) for m in cls.methods),
        cyc=cyc,
        len=_name_length_mean(cls),
        lod=1.0 - documented / (1 + nom + len(cls.fields)),
        halstead_volume_total=sum(halstead_volume(m) for m in bodied),
        decision_points_total=sum(m.decision_points for m in bodied),
        statements_total=sum(m.statements for m in bodied),
        method_count=len(bodied),
        method_lines_total=sum(m.line_count for m in bodied),
    )


def compute_metrics(snapshot: Snapshot, resolver: Optional[TypeResolver] = None) -> MetricMatrix:
    """Metric vector for every class; whole-graph measures (DIT, NOC, CYC) first."""
    resolver = resolver or TypeResolver(snapshot)
    dit, noc = _inheritance(snapshot, resolver)
    graph = dependency_graph(snapshot, resolver)
    cyc = component_sizes(graph.keys(), graph)
    rows = {}
    packages = {}
    for pkg in snapshot.packages:
        for cls in pkg.classes:
            q = cls.qualified_name
            rows[q] = class_metrics(cls, resolver, dit[q], noc[q], cyc[q])
            packages[q] = pkg.qualified_name
    return MetricMatrix(rows, packages)

