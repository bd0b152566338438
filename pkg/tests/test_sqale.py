import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oomaint.frontend import parse_source
from oomaint.metrics import compute_metrics
from oomaint.model import ClassNode, ExpressionFact, MethodNode, PackageNode, Snapshot
from oomaint.sqale import (
    Issue,
    Rule,
    RuleConfigError,
    analyze_debt,
    configure_rules,
    debt_by_class,
    debt_by_package,
    debt_report,
    default_rules,
    grade_for,
    load_rules,
    production_loc,
    run_rules,
)


def rules_by_id(ids):
    return [r for r in default_rules() if r.id in ids]


def snapshot_of(source, path="T.java"):
    result = parse_source(source, path)
    assert result.diagnostics == []
    by_pkg = {}
    for c in result.classes:
        by_pkg.setdefault(c.package_name, []).append(c)
    return Snapshot(packages=tuple(PackageNode(p, tuple(cs)) for p, cs in by_pkg.items()))


def issues_for(source, rule_ids):
    snap = snapshot_of(source)
    return run_rules(snap, compute_metrics(snap), rules_by_id(rule_ids))


def issue(package="p", minutes=1.0, cls="C"):
    return Issue("r", "maintainability", "major", (), "f", package, f"{package}.{cls}", "", 1, 1, minutes)


def test_empty_snapshot_no_issues():
    assert run_rules(Snapshot(), compute_metrics(Snapshot())) == []


def chain(k):
    names = [f"v{i}" for i in range(k + 1)]
    ops = ["&&" if i % 2 == 0 else "||" for i in range(k)]
    return " ".join(x for pair in zip(names, ops + [""]) for x in pair).strip()


def test_expression_complexity_five_operators():
    (i,) = issues_for(f"class T {{ boolean m() {{ return {chain(5)}; }} }}", {"expression-complexity"})
    assert (i.rule_id, i.value, i.remediation_minutes, i.severity) == ("expression-complexity", 5, 7, "critical")
    assert "brain-overload" in i.tags


@pytest.mark.parametrize("k", range(0, 11))
def test_expression_complexity_remediation(k):
    found = issues_for(f"class T {{ boolean m() {{ return {chain(k)}; }} }}", {"expression-complexity"})
    if k <= 3:
        assert found == []
    else:
        assert [i.remediation_minutes for i in found] == [5 + (k - 3)]


def test_ternary_counts_as_operator():
    found = issues_for("class T { int m() { return a && b || c ? d && e ? 1 : 2 : 3; } }", {"expression-complexity"})
    assert [i.value for i in found] == [5]  # && || ? && ?


def test_other_operators_not_counted():
    found = issues_for("class T { int m() { return a + b * c - d / e % f + g; } }", {"expression-complexity"})
    assert found == []


def test_method_complexity_fifteen():
    ifs = " ".join(f"if (x > {i}) y();" for i in range(14))
    (i,) = issues_for(f"class T {{ void m(int x) {{ {ifs} }} }}", {"method-cyclomatic-complexity"})
    assert (i.value, i.remediation_minutes) == (15, 15)
    assert issues_for("class T { void m(int x) { if (x > 1) y(); } }", {"method-cyclomatic-complexity"}) == []


def test_method_length_and_parameters_and_nesting():
    body = " ".join(f"a{i} = {i};" for i in range(31))
    (i,) = issues_for(f"class T {{ void m() {{ {body} }} }}", {"method-length"})
    assert (i.value, i.remediation_minutes) == (31, 20)
    params = ", ".join(f"int p{i}" for i in range(8))
    (i,) = issues_for(f"class T {{ void m({params}) {{ }} }}", {"parameter-count"})
    assert i.value == 8
    nested = "class T { void m() { if (a) { while (b) { for (;;) { if (c) { x(); } } } } } }"
    (i,) = issues_for(nested, {"nesting-depth"})
    assert (i.value, i.remediation_minutes) == (4, 10)


def test_empty_catch_is_reliability():
    (i,) = issues_for("class T { void m() { try { x(); } catch (Exception e) { } } }", {"empty-catch-block"})
    assert (i.type, i.method, i.remediation_minutes) == ("reliability", "m", 5)
    assert issues_for("class T { void m() { try { x(); } catch (Exception e) { y(); } } }", {"empty-catch-block"}) == []


def test_commented_out_code_blocks():
    src = "class T {\n  // x = 1;\n  // y = 2;\n  int f;\n  // plain words here\n  // return z;\n}\n"
    found = issues_for(src, {"commented-out-code"})
    assert [(i.line, i.remediation_minutes) for i in found] == [(2, 5), (6, 5)]
    assert found[0].tags == ("unused",)


def test_duplicated_string_literal():
    src = 'class T { void m() { a("hello"); a("hello"); a("hello"); a("hi"); a("hi"); a("hi"); } }'
    (i,) = issues_for(src, {"duplicated-string-literal"})
    assert (i.value, i.remediation_minutes) == (3, 4)


def test_god_class():
    ifs = " ".join(f"if (x > {i}) y();" for i in range(45))
    src = f"class G {{ int a; int b; void m(int x) {{ {ifs} }} void n() {{ a = 1; }} void o() {{ b = 1; }} }}"
    (i,) = issues_for(src, {"god-class"})
    assert i.value == 48 and i.remediation_minutes == 120


def test_class_length():
    body = "\n" * 1000
    (i,) = issues_for(f"class T {{{body}}}", {"class-length"})
    assert i.value == 1001


def test_issue_order_is_deterministic():
    src = "class T {\n void m() { try { } catch (Exception e) { }\n boolean z = a && b && c && d && e; }\n}"
    snap = snapshot_of(src)
    found = run_rules(snap, compute_metrics(snap))
    assert [(i.line, i.rule_id) for i in found] == sorted((i.line, i.rule_id) for i in found)
    assert found == run_rules(snap, compute_metrics(snap), list(reversed(default_rules())))


def test_disabled_rule():
    rules = configure_rules({"expression-complexity": {"enabled": False}})
    snap = snapshot_of(f"class T {{ boolean m() {{ return {chain(6)}; }} }}")
    assert run_rules(snap, compute_metrics(snap), rules) == []


def test_rule_file(tmp_path):
    path = tmp_path / "rules.toml"
    path.write_text(
        '[rules.expression-complexity]\nthreshold = 1\nconstant_minutes = 2\nper_unit_minutes = 3\n'
        'operators = ["&&", "||", "?", "+"]\n'
        '[rules.empty-catch-block]\nseverity = "critical"\n'
    )
    rules = {r.id: r for r in load_rules(path)}
    r = rules["expression-complexity"]
    assert (r.threshold, r.remediation(4)) == (1, 2 + 3 * 3)
    assert "+" in r.options["operators"]
    assert rules["empty-catch-block"].severity == "critical"
    assert len(rules) == len(default_rules())


def test_rule_file_errors(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[rules.no-such-rule]\nthreshold = 1\n")
    with pytest.raises(RuleConfigError):
        load_rules(bad)
    bad.write_text("[rules.method-length]\nconstant_minutes = -1\n")
    with pytest.raises(RuleConfigError):
        load_rules(bad)
    bad.write_text("[rules.method-length\n")
    with pytest.raises(RuleConfigError):
        load_rules(bad)


def test_rule_validation():
    with pytest.raises(RuleConfigError):
        Rule("x", severity="huge")
    with pytest.raises(RuleConfigError):
        Rule("x", type="style")
    with pytest.raises(RuleConfigError):
        Rule("x", per_unit_minutes=-1)


def test_grades():
    assert debt_report([], 1000).grade == "A"
    r = debt_report([issue(minutes=1500)], 1000)
    assert (r.dev_time_minutes, r.tdr, r.grade) == (30000, 0.05, "B")
    assert debt_report([issue(minutes=15000)], 1000).grade == "E"
    assert [grade_for(t) for t in (0.0499, 0.05, 0.0999, 0.10, 0.1999, 0.20, 0.4999, 0.5, 3.0)] == [
        "A", "B", "B", "C", "C", "D", "D", "E", "E"]


def test_no_production_code():
    with pytest.raises(ValueError):
        debt_report([], 0)


def test_debt_by_package():
    issues = [issue("a", 50), issue("b", 30), issue("c", 20)]
    assert debt_by_package(issues) == {"a": 50, "b": 30, "c": 20}
    assert debt_by_package([issue("a", 3), issue("a", 4)]) == {"a": 7}
    assert debt_by_package([]) == {}
    assert debt_by_class([issue("a", 3, "X"), issue("a", 4, "Y")]) == {"a.X": 3, "a.Y": 4}


def test_production_loc_is_top_level_lines(mini_snapshot, mini_matrix):
    assert production_loc(mini_snapshot) == 59
    assert analyze_debt(mini_snapshot, mini_matrix).dev_time_minutes == 59 * 30


minutes = st.floats(0.5, 500, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(minutes, max_size=10), st.lists(minutes, max_size=10), st.integers(1, 10000))
def test_td_additive(xs, ys, loc):
    a = debt_report([issue(minutes=m) for m in xs], loc)
    b = debt_report([issue(minutes=m) for m in ys], loc)
    both = debt_report([issue(minutes=m) for m in xs + ys], loc)
    assert both.td_minutes == pytest.approx(a.td_minutes + b.td_minutes)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 500), max_size=10), st.integers(1, 10000))
def test_tdr_scale_invariant(xs, loc):
    one = debt_report([issue(minutes=m) for m in xs], loc)
    two = debt_report([issue(minutes=m) for m in xs * 2], 2 * loc)
    assert one.tdr == pytest.approx(two.tdr) and one.grade == two.grade


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5))
def test_grade_monotone(a, b):
    lo, hi = sorted((a, b))
    assert grade_for(lo) <= grade_for(hi)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 20), st.integers(0, 40), st.floats(0, 20), st.floats(0, 5))
def test_remediation_formula(threshold, value, constant, per_unit):
    rule = Rule("expression-complexity", threshold=threshold, constant_minutes=constant,
                per_unit_minutes=per_unit, options={"operators": ["&&"]})
    m = MethodNode("m", expressions=(ExpressionFact(3, ("&&",) * value),))
    snap = Snapshot(packages=(PackageNode("p", (ClassNode("p.C", methods=(m,), file="C.java"),)),))
    found = run_rules(snap, compute_metrics(snap), [rule])
    if value > threshold:
        (i,) = found
        assert i.remediation_minutes == constant + per_unit * (value - threshold)
        assert (i.file, i.package, i.class_name, i.method, i.line) == ("C.java", "p", "p.C", "m", 3)
    else:
        assert found == []
