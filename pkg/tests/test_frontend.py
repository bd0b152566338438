import json
import math
import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oomaint.frontend import FactsError, ParseOptions, load_facts, parse_source, parse_tree, save_facts
from oomaint.frontend.facts import SCHEMA_VERSION, dumps, loads, snapshot_to_document
from oomaint.frontend.lexer import LexError, tokenize
from oomaint.metrics import halstead_volume
from oomaint.model import ClassNode, FieldDecl, MethodNode, PackageNode, Snapshot

from conftest import MINI, write_tree

RICH = """package p;
import java.util.List;
/** Doc. */
public class Outer extends Base implements Runnable, Cloneable {
    /** doc field */
    private int a, b;
    static class Inner { int z; }
    public void run() {
        a = b + c;
        Runnable r = new Runnable() { public void run() { a++; } };
        class Local { void q() {} }
        for (int i = 0; i < 3; i++) {
            while (a > 0) {
                if (a > 2) { a--; }
            }
        }
        switch (a) { case 1: case 2: break; default: b = 1; }
        try { a = 1; } catch (Exception e) { }
        // a = a + 1;
        // b = 2;
        int x = a > 1 ? 2 : 3;
        helper(a, "hello");
    }
    void helper(int x, String s) { this.a = x; }
}
"""


def only_method(source):
    result = parse_source(source, "T.java")
    assert result.diagnostics == []
    (cls,) = result.classes
    (method,) = cls.methods
    return method


def test_empty_directory(tmp_path):
    snapshot, diagnostics = parse_tree(tmp_path)
    assert snapshot.packages == () and diagnostics == []


def test_single_class_fixture(tmp_path):
    write_tree(tmp_path, {"A.java": "class A { void m(){ if(x) y=1; } }"})
    snapshot, diagnostics = parse_tree(tmp_path)
    assert diagnostics == []
    (cls,) = list(snapshot.classes())
    (m,) = cls.methods
    assert (cls.qualified_name, m.decision_points, m.statements) == ("A", 1, 1)


def test_unsupported_construct_skipped_with_warning(tmp_path):
    plain = "package p;\nclass A { int f; void m(){ f=1; } void n(){} }\n"
    with_record = "package p;\nclass A { int f; void m(){ f=1; } record R(int x) {} void n(){} }\n"
    write_tree(tmp_path / "plain", {"p/A.java": plain})
    write_tree(tmp_path / "rec", {"p/A.java": with_record})
    base, d0 = parse_tree(tmp_path / "plain")
    other, d1 = parse_tree(tmp_path / "rec")
    assert d0 == []
    assert [d.severity for d in d1] == ["warning"]
    assert "record" in d1[0].message
    assert other.packages == base.packages


def test_malformed_member_is_skipped_not_fatal():
    result = parse_source("package p; class A { void m() { int x = ; } void k(){} }", "A.java")
    (cls,) = result.classes
    assert [m.name for m in cls.methods] == ["k"]
    assert [d.severity for d in result.diagnostics] == ["error"]


def test_truncated_file_is_skipped(tmp_path):
    write_tree(tmp_path, {"p/A.java": "package p; class A { void m() {", "p/B.java": "package p; class B {}"})
    snapshot, diagnostics = parse_tree(tmp_path)
    assert [c.qualified_name for c in snapshot.classes()] == ["p.B"]
    assert len(diagnostics) == 1 and diagnostics[0].file == "p/A.java" and diagnostics[0].severity == "error"


def test_duplicate_class_across_files(tmp_path):
    write_tree(tmp_path, {"a/A.java": "package p; class A {}", "b/A.java": "package p; class A { int x; }"})
    snapshot, diagnostics = parse_tree(tmp_path)
    (cls,) = list(snapshot.classes())
    assert cls.file == "a/A.java"
    assert "duplicate class p.A" in diagnostics[0].message


def test_unreadable_root(tmp_path):
    with pytest.raises(OSError):
        parse_tree(tmp_path / "missing")


def test_options_ext_exclude_encoding(tmp_path):
    write_tree(tmp_path, {"src/A.jx": "class A {}", "test/T.jx": "class T {}", "B.java": "class B {}"})
    (tmp_path / "L.jx").write_bytes("class L { String s = \"\xe9\"; }".encode("latin-1"))
    opts = ParseOptions(ext=".jx", encoding="latin-1", exclude=("test/*",))
    snapshot, diagnostics = parse_tree(tmp_path, opts)
    assert diagnostics == []
    assert [c.qualified_name for c in snapshot.classes()] == ["A", "L"]


def test_undecodable_file_reported(tmp_path):
    (tmp_path / "A.java").write_bytes(b"class A { String s = \"\xff\xfe\"; }")
    snapshot, diagnostics = parse_tree(tmp_path)
    assert snapshot.packages == ()
    assert diagnostics[0].severity == "error"


def test_class_flattening_and_structure():
    result = parse_source(RICH, "p/Outer.java")
    assert result.diagnostics == []
    by_name = {c.qualified_name: c for c in result.classes}
    assert sorted(by_name) == ["p.Outer", "p.Outer$1", "p.Outer$1Local", "p.Outer$Inner"]
    outer = by_name["p.Outer"]
    assert outer.superclass_name == "Base"
    assert outer.implemented_interfaces == ("Runnable", "Cloneable")
    assert outer.doc_comment_present
    assert [(f.name, f.declared_type_name, f.doc_comment_present) for f in outer.fields] == [
        ("a", "int", True), ("b", "int", True)]
    assert (outer.line, outer.line_count) == (4, 22)
    assert by_name["p.Outer$1"].superclass_name == "Runnable"
    assert by_name["p.Outer$Inner"].outer_name == "p.Outer"
    assert outer.commented_code_lines == (19, 20)
    assert outer.string_literals == (("hello", 22),)


def test_method_facts():
    outer = next(c for c in parse_source(RICH, "p/Outer.java").classes if c.qualified_name == "p.Outer")
    helper, run = outer.methods
    # for, while, if, two case labels, catch, ternary
    assert run.decision_points == 7
    assert run.max_nesting_depth == 3
    assert run.statements == 8
    assert run.empty_catch_lines == (18,)
    assert run.accessed_own_fields == {"a", "b"}
    assert ("p.Outer", "helper") in run.calls
    assert ("Runnable", "<init>") in run.calls
    assert helper.parameter_type_names == ("int", "String")
    assert helper.accessed_own_fields == {"a"}


def test_halstead_counts_for_assignment():
    m = only_method("class T { void m() { a = b + c; } }")
    assert (m.operator_occurrences, m.distinct_operators) == (2, 2)
    assert (m.operand_occurrences, m.distinct_operands) == (3, 3)
    assert math.isclose(halstead_volume(m), 5 * math.log2(5))


def test_empty_method_has_zero_volume():
    m = only_method("class T { void m() { } }")
    assert m.operator_occurrences == m.operand_occurrences == 0
    assert halstead_volume(m) == 0.0


def test_decision_point_counting():
    assert only_method("class T { void m() { x = 1; y = 2; } }").decision_points == 0
    assert only_method("class T { void m() { if (a) x(); while (b) y(); } }").decision_points == 2
    switch = "class T { void m() { switch (k) { case 1: a(); break; case 2: b(); break; case 3: c(); } } }"
    assert only_method(switch).decision_points == 3
    assert only_method("class T { boolean m() { return a && b || c; } }").decision_points == 2


def test_expression_operators_recorded():
    m = only_method("class T { boolean m() { return a && b || c && d || e && f; } }")
    (expr,) = m.expressions
    assert expr.operators.count("&&") + expr.operators.count("||") == 5


def test_abstract_and_interface_methods_have_no_body():
    result = parse_source("interface I { int f(); } abstract class A { abstract void g(); }", "I.java")
    for cls in result.classes:
        assert [m.has_body for m in cls.methods] == [False]


def test_enum_and_lambda_parse():
    src = """enum Color { RED, GREEN { int v() { return 2; } };
        int v() { return 1; }
        void each(java.util.List<String> xs) { xs.forEach(x -> { if (x != null) use(x); }); }
    }"""
    result = parse_source(src, "Color.java")
    assert result.diagnostics == []
    names = sorted(c.qualified_name for c in result.classes)
    assert names == ["Color", "Color$1"]
    color = next(c for c in result.classes if c.qualified_name == "Color")
    assert color.kind == "enum"
    each = next(m for m in color.methods if m.name == "each")
    assert each.decision_points == 1


def test_unterminated_block_comment():
    with pytest.raises(LexError):
        tokenize("class A { /* never closed }")


def test_parse_is_deterministic_across_jobs(tmp_path):
    a = parse_tree(MINI, jobs=1)
    b = parse_tree(MINI, jobs=3)
    assert a == b


# -- facts files ------------------------------------------------------------


def test_round_trip(tmp_path, mini_snapshot):
    path = tmp_path / "facts.json"
    save_facts(mini_snapshot, path)
    assert load_facts(path) == mini_snapshot


def test_saves_are_byte_identical_and_idempotent(tmp_path, mini_snapshot):
    first, second, third = tmp_path / "1.json", tmp_path / "2.json", tmp_path / "3.json"
    save_facts(mini_snapshot, first)
    save_facts(mini_snapshot, second)
    save_facts(load_facts(first), third)
    assert first.read_bytes() == second.read_bytes() == third.read_bytes()


def test_empty_snapshot_document():
    doc = json.loads(dumps(Snapshot()))
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["snapshot"]["packages"] == []
    assert loads(dumps(Snapshot())) == Snapshot()


def test_truncated_facts_file(tmp_path, mini_snapshot):
    text = dumps(mini_snapshot)
    path = tmp_path / "cut.json"
    path.write_text(text[: len(text) // 2])
    with pytest.raises(FactsError):
        load_facts(path)


def test_schema_mismatch_names_version(mini_snapshot):
    doc = snapshot_to_document(mini_snapshot)
    doc["schema_version"] = "oomaint-facts/99"
    with pytest.raises(FactsError, match="oomaint-facts/99"):
        loads(json.dumps(doc))


def test_duplicate_class_names_in_facts(mini_snapshot):
    doc = snapshot_to_document(mini_snapshot)
    pkg = doc["snapshot"]["packages"][0]
    pkg["classes"].append(pkg["classes"][0])
    with pytest.raises(FactsError, match="class-names-unique"):
        loads(json.dumps(doc))


def test_undeclared_reference_rejected(mini_snapshot):
    doc = snapshot_to_document(mini_snapshot)
    doc["snapshot"]["external_types"] = []
    with pytest.raises(FactsError, match="references-declared-or-external"):
        loads(json.dumps(doc))


def test_missing_file():
    with pytest.raises(FactsError):
        load_facts(os.path.join("no", "such", "file.json"))


names = st.from_regex(r"[A-Z][a-z]{0,5}", fullmatch=True)


@st.composite
def snapshots(draw):
    packages = []
    for pkg in draw(st.lists(st.from_regex(r"[a-z]{1,4}", fullmatch=True), unique=True, max_size=3)):
        classes = []
        for cname in draw(st.lists(names, unique=True, max_size=3)):
            occ = draw(st.integers(0, 20))
            methods = tuple(
                MethodNode(
                    m, ("int",) * draw(st.integers(0, 3)), "void",
                    statements=draw(st.integers(0, 9)), decision_points=draw(st.integers(0, 9)),
                    operator_occurrences=occ, distinct_operators=min(occ, 3),
                    accessed_own_fields=frozenset(draw(st.sets(st.sampled_from("xyz")))),
                    calls=((f"{pkg}.{cname}", m),) * draw(st.integers(0, 2)),
                )
                for m in draw(st.lists(st.from_regex(r"[a-z]{1,4}", fullmatch=True), unique=True, max_size=3))
            )
            fields = tuple(FieldDecl(f, "int", draw(st.booleans())) for f in draw(st.sets(st.sampled_from("xyz"))))
            classes.append(ClassNode(f"{pkg}.{cname}", methods=methods, fields=fields,
                                     line_count=draw(st.integers(1, 99))))
        packages.append(PackageNode(pkg, tuple(classes)))
    return Snapshot(draw(st.text(max_size=5)), tuple(packages), "root")


@settings(max_examples=60, deadline=None)
@given(snapshots())
def test_round_trip_property(snapshot):
    text = dumps(snapshot)
    again = loads(text)
    assert again == snapshot
    assert dumps(again) == text
