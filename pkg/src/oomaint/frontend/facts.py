"""Code-facts interchange file: a JSON rendering of a :class:`Snapshot`.

Any front-end able to emit this document can feed the metric and model
pipeline. Files are written with sorted keys and sorted arrays so the same
snapshot always produces the same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..model import (
    ClassNode,
    ExpressionFact,
    FieldDecl,
    InvariantError,
    MethodNode,
    PackageNode,
    Snapshot,
    TypeResolver,
    referenced_type_names,
)

SCHEMA_VERSION = "oomaint-facts/1"


class FactsError(Exception):
    """A facts file cannot be read, has an unknown schema or breaks an invariant."""


def _method_doc(m: MethodNode) -> dict:
    return {
        "name": m.name,
        "parameter_type_names": list(m.parameter_type_names),
        "return_type_name": m.return_type_name,
        "line": m.line,
        "line_count": m.line_count,
        "has_body": m.has_body,
        "statements": m.statements,
        "decision_points": m.decision_points,
        "operator_occurrences": m.operator_occurrences,
        "distinct_operators": m.distinct_operators,
        "operand_occurrences": m.operand_occurrences,
        "distinct_operands": m.distinct_operands,
        "accessed_own_fields": sorted(m.accessed_own_fields),
        "accessed_foreign_fields": [list(p) for p in sorted(m.accessed_foreign_fields)],
        "calls": [list(c) for c in m.calls],
        "doc_comment_present": m.doc_comment_present,
        "max_nesting_depth": m.max_nesting_depth,
        "expressions": [{"line": e.line, "operators": list(e.operators)} for e in m.expressions],
        "empty_catch_lines": list(m.empty_catch_lines),
    }


def _class_doc(c: ClassNode) -> dict:
    return {
        "qualified_name": c.qualified_name,
        "kind": c.kind,
        "superclass_name": c.superclass_name,
        "implemented_interfaces": list(c.implemented_interfaces),
        "fields": [
            {"name": f.name, "declared_type_name": f.declared_type_name,
             "doc_comment_present": f.doc_comment_present, "line": f.line}
            for f in c.fields
        ],
        "methods": [_method_doc(m) for m in c.methods],
        "doc_comment_present": c.doc_comment_present,
        "line_count": c.line_count,
        "file": c.file,
        "line": c.line,
        "outer_name": c.outer_name,
        "string_literals": [[s, ln] for s, ln in c.string_literals],
        "commented_code_lines": list(c.commented_code_lines),
    }


def external_type_names(snapshot: Snapshot) -> list[str]:
    resolver = TypeResolver(snapshot)
    external = set()
    for c in snapshot.classes():
        for name in referenced_type_names(c):
            if resolver.resolve(name, c) is None:
                external.add(name)
    return sorted(external)


def snapshot_to_document(snapshot: Snapshot) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "snapshot": {
            "version_label": snapshot.version_label,
            "source_root": snapshot.source_root,
            "packages": [
                {"qualified_name": p.qualified_name, "classes": [_class_doc(c) for c in p.classes]}
                for p in snapshot.packages
            ],
            "external_types": external_type_names(snapshot),
        },
    }


def dumps(snapshot: Snapshot) -> str:
    return json.dumps(snapshot_to_document(snapshot), indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def save_facts(snapshot: Snapshot, file) -> None:
    Path(file).write_text(dumps(snapshot), encoding="utf-8")


def _method_from(d: dict) -> MethodNode:
    return MethodNode(
        name=d["name"],
        parameter_type_names=tuple(d["parameter_type_names"]),
        return_type_name=d["return_type_name"],
        line=d["line"],
        line_count=d["line_count"],
        has_body=d["has_body"],
        statements=d["statements"],
        decision_points=d["decision_points"],
        operator_occurrences=d["operator_occurrences"],
        distinct_operators=d["distinct_operators"],
        operand_occurrences=d["operand_occurrences"],
        distinct_operands=d["distinct_operands"],
        accessed_own_fields=frozenset(d["accessed_own_fields"]),
        accessed_foreign_fields=frozenset(tuple(p) for p in d["accessed_foreign_fields"]),
        calls=tuple(tuple(c) for c in d["calls"]),
        doc_comment_present=d["doc_comment_present"],
        max_nesting_depth=d["max_nesting_depth"],
        expressions=tuple(ExpressionFact(e["line"], tuple(e["operators"])) for e in d["expressions"]),
        empty_catch_lines=tuple(d["empty_catch_lines"]),
    )


def _class_from(d: dict) -> ClassNode:
    return ClassNode(
        qualified_name=d["qualified_name"],
        kind=d["kind"],
        superclass_name=d["superclass_name"],
        implemented_interfaces=tuple(d["implemented_interfaces"]),
        fields=tuple(
            FieldDecl(f["name"], f["declared_type_name"], f["doc_comment_present"], f["line"]) for f in d["fields"]
        ),
        methods=tuple(_method_from(m) for m in d["methods"]),
        doc_comment_present=d["doc_comment_present"],
        line_count=d["line_count"],
        file=d["file"],
        line=d["line"],
        outer_name=d["outer_name"],
        string_literals=tuple((s, ln) for s, ln in d["string_literals"]),
        commented_code_lines=tuple(d["commented_code_lines"]),
    )


def document_to_snapshot(doc) -> Snapshot:
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise FactsError("not a facts document: missing 'schema_version'")
    version = doc["schema_version"]
    if version != SCHEMA_VERSION:
        raise FactsError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION!r})")
    try:
        body = doc["snapshot"]
        snapshot = Snapshot(
            version_label=body["version_label"],
            source_root=body["source_root"],
            packages=tuple(
                PackageNode(p["qualified_name"], tuple(_class_from(c) for c in p["classes"]))
                for p in body["packages"]
            ),
        )
        external = set(body.get("external_types", []))
    except InvariantError as exc:
        raise FactsError(f"invalid facts (schema_version {version}): {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise FactsError(f"malformed facts document (schema_version {version}): {exc!r}") from exc

    resolver = TypeResolver(snapshot)
    for c in snapshot.classes():
        for name in sorted(referenced_type_names(c)):
            if name not in external and resolver.resolve(name, c) is None:
                raise FactsError(
                    f"invalid facts (schema_version {version}): invariant 'references-declared-or-external' "
                    f"violated: {c.qualified_name} references undeclared type {name!r}"
                )
    return snapshot


def loads(text: str) -> Snapshot:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FactsError(f"facts file is not valid JSON: {exc}") from exc
    return document_to_snapshot(doc)


def load_facts(file) -> Snapshot:
    try:
        text = Path(file).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FactsError(f"cannot read facts file {file}: {exc}") from exc
    return loads(text)
