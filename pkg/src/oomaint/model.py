"""In-memory model of one parsed source snapshot.

Every node is a frozen dataclass holding tuples/frozensets, so a snapshot
can be shared between readers once built. Containers are re-sorted on
construction: packages and classes by qualified name, methods by
(name, parameter types, line).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

UNKNOWN = "<unknown>"
"""Target class recorded for calls whose receiver type cannot be resolved."""

PRIMITIVES = frozenset(
    ["boolean", "byte", "char", "short", "int", "long", "float", "double", "void", "var"]
)


class InvariantError(ValueError):
    """A snapshot violates one of its structural invariants."""

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"invariant '{invariant}' violated: {detail}")
        self.invariant = invariant


@dataclass(frozen=True)
class FieldDecl:
    name: str
    declared_type_name: str
    doc_comment_present: bool = False
    line: int = 0

    def __post_init__(self):
        if not self.name:
            raise InvariantError("field-name-non-empty", "field with empty name")


@dataclass(frozen=True)
class ExpressionFact:
    """Line and binary/ternary operator tokens of one full expression."""

    line: int
    operators: tuple[str, ...]


@dataclass(frozen=True)
class MethodNode:
    name: str
    parameter_type_names: tuple[str, ...] = ()
    return_type_name: Optional[str] = None  # None for constructors
    line: int = 0
    line_count: int = 1
    has_body: bool = True
    statements: int = 0
    decision_points: int = 0
    operator_occurrences: int = 0
    distinct_operators: int = 0
    operand_occurrences: int = 0
    distinct_operands: int = 0
    accessed_own_fields: frozenset[str] = frozenset()
    accessed_foreign_fields: frozenset[tuple[str, str]] = frozenset()
    # one entry per call site, so repeated calls are kept
    calls: tuple[tuple[str, str], ...] = ()
    doc_comment_present: bool = False
    max_nesting_depth: int = 0
    expressions: tuple[ExpressionFact, ...] = ()
    empty_catch_lines: tuple[int, ...] = ()

    def __post_init__(self):
        if self.distinct_operators > self.operator_occurrences:
            raise InvariantError("distinct-operators-le-occurrences", self.name)
        if self.distinct_operands > self.operand_occurrences:
            raise InvariantError("distinct-operands-le-occurrences", self.name)
        if self.statements < 0 or self.decision_points < 0:
            raise InvariantError("non-negative-counts", self.name)
        object.__setattr__(self, "parameter_type_names", tuple(self.parameter_type_names))
        object.__setattr__(self, "accessed_own_fields", frozenset(self.accessed_own_fields))
        object.__setattr__(
            self, "accessed_foreign_fields", frozenset(tuple(p) for p in self.accessed_foreign_fields)
        )
        object.__setattr__(self, "calls", tuple(sorted(tuple(c) for c in self.calls)))
        object.__setattr__(self, "expressions", tuple(self.expressions))
        object.__setattr__(self, "empty_catch_lines", tuple(self.empty_catch_lines))

    @property
    def invoked_methods(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.calls)

    @property
    def sort_key(self):
        return (self.name, self.parameter_type_names, self.line)


@dataclass(frozen=True)
class ClassNode:
    qualified_name: str
    kind: str = "class"
    superclass_name: Optional[str] = None
    implemented_interfaces: tuple[str, ...] = ()
    fields: tuple[FieldDecl, ...] = ()
    methods: tuple[MethodNode, ...] = ()
    doc_comment_present: bool = False
    line_count: int = 1
    file: str = ""
    line: int = 0
    # qualified name of the lexically enclosing class, for nested/local/anonymous classes
    outer_name: Optional[str] = None
    string_literals: tuple[tuple[str, int], ...] = ()
    commented_code_lines: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("class", "interface", "enum"):
            raise InvariantError("class-kind", f"{self.qualified_name}: {self.kind!r}")
        if self.line_count < 1:
            raise InvariantError("line-count-positive", self.qualified_name)
        object.__setattr__(self, "implemented_interfaces", tuple(self.implemented_interfaces))
        object.__setattr__(self, "fields", tuple(sorted(self.fields, key=lambda f: (f.name, f.line))))
        object.__setattr__(self, "methods", tuple(sorted(self.methods, key=lambda m: m.sort_key)))
        object.__setattr__(self, "string_literals", tuple(tuple(s) for s in self.string_literals))
        object.__setattr__(self, "commented_code_lines", tuple(self.commented_code_lines))

    @property
    def local_name(self) -> str:
        """Name relative to the package, e.g. ``Outer$Inner``."""
        return self.qualified_name.rsplit(".", 1)[-1]

    @property
    def simple_name(self) -> str:
        return self.local_name.rsplit("$", 1)[-1]

    @property
    def package_name(self) -> str:
        return self.qualified_name.rsplit(".", 1)[0] if "." in self.qualified_name else ""

    @property
    def is_top_level(self) -> bool:
        return self.outer_name is None


@dataclass(frozen=True)
class PackageNode:
    qualified_name: str
    classes: tuple[ClassNode, ...] = ()

    def __post_init__(self):
        classes = tuple(sorted(self.classes, key=lambda c: c.qualified_name))
        seen = set()
        for c in classes:
            if c.local_name in seen:
                raise InvariantError(
                    "class-names-unique-in-package", f"{c.local_name} in package {self.qualified_name!r}"
                )
            seen.add(c.local_name)
            if c.package_name != self.qualified_name:
                raise InvariantError(
                    "class-in-own-package", f"{c.qualified_name} listed under {self.qualified_name!r}"
                )
        object.__setattr__(self, "classes", classes)


@dataclass(frozen=True)
class Snapshot:
    version_label: str = ""
    packages: tuple[PackageNode, ...] = ()
    source_root: str = ""

    def __post_init__(self):
        packages = tuple(sorted(self.packages, key=lambda p: p.qualified_name))
        names = [p.qualified_name for p in packages]
        if len(set(names)) != len(names):
            dup = sorted(n for n in set(names) if names.count(n) > 1)
            raise InvariantError("package-names-unique", ", ".join(dup))
        qnames = [c.qualified_name for p in packages for c in p.classes]
        if len(set(qnames)) != len(qnames):
            dup = sorted(n for n in set(qnames) if qnames.count(n) > 1)
            raise InvariantError("class-names-unique", ", ".join(dup))
        object.__setattr__(self, "packages", packages)

    def classes(self) -> Iterator[ClassNode]:
        for p in self.packages:
            yield from p.classes

    def package_of(self, qualified_name: str) -> Optional[str]:
        for p in self.packages:
            for c in p.classes:
                if c.qualified_name == qualified_name:
                    return p.qualified_name
        return None


@dataclass(frozen=True)
class SizeVector:
    n_packages: int = 0
    n_classes: int = 0
    n_methods: int = 0
    n_statements: int = 0
    n_lines: int = 0

    def __add__(self, other: "SizeVector") -> "SizeVector":
        return SizeVector(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.n_packages, self.n_classes, self.n_methods, self.n_statements, self.n_lines)


def size_vector(snapshot: Snapshot) -> SizeVector:
    """Count packages, classes and methods and sum statements and lines.

    Lines are summed over top-level classes only; nested classes sit inside
    their outer class's line range.
    """
    classes = list(snapshot.classes())
    return SizeVector(
        n_packages=len(snapshot.packages),
        n_classes=len(classes),
        n_methods=sum(len(c.methods) for c in classes),
        n_statements=sum(m.statements for c in classes for m in c.methods),
        n_lines=sum(c.line_count for c in classes if c.is_top_level),
    )


def lookup_class(snapshot: Snapshot, qualified_name: str) -> Optional[ClassNode]:
    for c in snapshot.classes():
        if c.qualified_name == qualified_name:
            return c
    return None


def base_type_name(name: str) -> str:
    """Strip generic arguments, array dimensions and varargs from a type name."""
    depth = 0
    out = []
    for ch in name:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif depth == 0:
            out.append(ch)
    base = "".join(out).replace("...", "").replace("[]", "").strip()
    return base


@dataclass
class TypeResolver:
    """Maps type names as written in source onto snapshot classes.

    Lookup order: exact qualified name, classes nested in the referencing
    class or its enclosing classes, the referencing class's package, then a
    snapshot-wide match on the package-relative name when it is unique.
    """

    snapshot: Snapshot
    _by_qname: dict = field(init=False, repr=False)
    _by_local: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._by_qname = {c.qualified_name: c for c in self.snapshot.classes()}
        self._by_local = {}
        for c in self._by_qname.values():
            self._by_local.setdefault(c.local_name, []).append(c.qualified_name)
            if c.is_top_level is False:
                self._by_local.setdefault(c.simple_name, []).append(c.qualified_name)

    def resolve(self, name: Optional[str], context: Optional[ClassNode] = None) -> Optional[str]:
        if not name or name == UNKNOWN:
            return None
        base = base_type_name(name)
        if not base or base in PRIMITIVES:
            return None
        if base in self._by_qname:
            return base
        local = base.replace(".", "$")
        if context is not None:
            enclosing: Optional[str] = context.qualified_name
            while enclosing:
                cand = f"{enclosing}${local}"
                if cand in self._by_qname:
                    return cand
                node = self._by_qname.get(enclosing)
                enclosing = node.outer_name if node else None
            pkg = context.package_name
            cand = f"{pkg}.{local}" if pkg else local
            if cand in self._by_qname:
                return cand
        # a qualified name whose trailing parts are nested classes: a.b.Outer.Inner
        parts = base.split(".")
        for i in range(len(parts) - 1, 0, -1):
            cand = ".".join(parts[:i]) + "." + "$".join(parts[i:])
            if cand in self._by_qname:
                return cand
        matches = self._by_local.get(local, [])
        if len(set(matches)) == 1:
            return matches[0]
        return None

    def get(self, qualified_name: str) -> Optional[ClassNode]:
        return self._by_qname.get(qualified_name)


def referenced_type_names(cls: ClassNode) -> set[str]:
    """Every class name a class mentions in a position the models resolve."""
    names = set()
    if cls.superclass_name:
        names.add(cls.superclass_name)
    names.update(cls.implemented_interfaces)
    for f in cls.fields:
        names.add(f.declared_type_name)
    for m in cls.methods:
        names.update(m.parameter_type_names)
        if m.return_type_name:
            names.add(m.return_type_name)
        names.update(t for t, _ in m.calls)
        names.update(t for t, _ in m.accessed_foreign_fields)
    return {n for n in names if n and n != UNKNOWN and base_type_name(n) not in PRIMITIVES}
