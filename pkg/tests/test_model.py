import dataclasses

import pytest

from oomaint.model import (
    ClassNode,
    FieldDecl,
    InvariantError,
    MethodNode,
    PackageNode,
    SizeVector,
    Snapshot,
    TypeResolver,
    base_type_name,
    lookup_class,
    size_vector,
)


def one_class_snapshot():
    methods = (MethodNode("a", statements=3), MethodNode("b", statements=3))
    cls = ClassNode("p.C", methods=methods, line_count=10)
    return Snapshot("v1", (PackageNode("p", (cls,)),))


def rename_package(snapshot, new):
    pkgs = []
    for p in snapshot.packages:
        classes = tuple(dataclasses.replace(c, qualified_name=f"{new}.{c.local_name}") for c in p.classes)
        pkgs.append(PackageNode(new, classes))
    return pkgs


def test_size_vector_empty():
    assert size_vector(Snapshot()) == SizeVector(0, 0, 0, 0, 0)


def test_size_vector_counts():
    assert size_vector(one_class_snapshot()).as_tuple() == (1, 1, 2, 6, 10)


def test_size_vector_doubles_under_renamed_copy():
    snap = one_class_snapshot()
    doubled = Snapshot("v1", snap.packages + tuple(rename_package(snap, "q")))
    assert size_vector(doubled).as_tuple() == tuple(2 * x for x in size_vector(snap).as_tuple())


def test_size_vector_nested_classes_lines_not_double_counted():
    outer = ClassNode("p.O", line_count=20)
    inner = ClassNode("p.O$I", line_count=5, outer_name="p.O")
    assert size_vector(Snapshot(packages=(PackageNode("p", (outer, inner)),))).n_lines == 20


def test_lookup_class():
    snap = one_class_snapshot()
    assert lookup_class(snap, "p.C").qualified_name == "p.C"
    assert lookup_class(snap, "p.D") is None
    assert lookup_class(snap, "p.c") is None


def test_duplicate_package_names_rejected():
    with pytest.raises(InvariantError) as err:
        Snapshot(packages=(PackageNode("p"), PackageNode("p")))
    assert err.value.invariant == "package-names-unique"


def test_duplicate_class_in_package_rejected():
    with pytest.raises(InvariantError) as err:
        PackageNode("p", (ClassNode("p.C"), ClassNode("p.C")))
    assert err.value.invariant == "class-names-unique-in-package"


def test_class_must_live_in_own_package():
    with pytest.raises(InvariantError):
        PackageNode("p", (ClassNode("q.C"),))


def test_node_invariants():
    with pytest.raises(InvariantError):
        FieldDecl("", "int")
    with pytest.raises(InvariantError):
        MethodNode("m", operator_occurrences=1, distinct_operators=2)
    with pytest.raises(InvariantError):
        MethodNode("m", statements=-1)
    with pytest.raises(InvariantError):
        ClassNode("p.C", line_count=0)
    with pytest.raises(InvariantError):
        ClassNode("p.C", kind="record")


def test_nodes_are_frozen():
    snap = one_class_snapshot()
    with pytest.raises(dataclasses.FrozenInstanceError):
        snap.version_label = "x"
    with pytest.raises(dataclasses.FrozenInstanceError):
        snap.packages[0].classes[0].methods[0].statements = 4


def test_iteration_order_is_lexicographic():
    snap = Snapshot(packages=(
        PackageNode("b", (ClassNode("b.Z"), ClassNode("b.A"))),
        PackageNode("a", (ClassNode("a.C"),)),
    ))
    assert [c.qualified_name for c in snap.classes()] == ["a.C", "b.A", "b.Z"]
    cls = ClassNode("p.C", methods=(MethodNode("z"), MethodNode("a")))
    assert [m.name for m in cls.methods] == ["a", "z"]


def test_base_type_name():
    assert base_type_name("List<Map<String, Foo>>") == "List"
    assert base_type_name("Foo[]") == "Foo"
    assert base_type_name("Foo...") == "Foo"
    assert base_type_name("a.b.Foo") == "a.b.Foo"


def test_type_resolver_lookup_order():
    snap = Snapshot(packages=(
        PackageNode("p", (ClassNode("p.A"), ClassNode("p.A$In", outer_name="p.A"), ClassNode("p.B"))),
        PackageNode("q", (ClassNode("q.B"), ClassNode("q.Only"))),
    ))
    r = TypeResolver(snap)
    a = lookup_class(snap, "p.A")
    assert r.resolve("In", a) == "p.A$In"
    assert r.resolve("B", a) == "p.B"
    assert r.resolve("Only", a) == "q.Only"
    assert r.resolve("q.B", a) == "q.B"
    assert r.resolve("p.A.In") == "p.A$In"
    assert r.resolve("B") is None  # ambiguous without context
    assert r.resolve("int", a) is None
    assert r.resolve("String", a) is None
