import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finicat.errors import CyclicGraph, InvalidCategory, InvalidGroupTable, UnknownMorphism, UnknownObject
from finicat.fincat import (
    FinCat,
    FinGraph,
    GroupTable,
    category_violations,
    chain,
    cyclic_group,
    delooping,
    discrete_category,
    free_category_on_acyclic_graph,
    opposite,
    parallel_pair_category,
    poset_category,
    span_category,
    subset_lattice,
    terminal_category,
    validate_category,
    validate_group,
)


def test_chain_has_triangular_hom_sets():
    c = chain(3)
    assert c.objects == ("0", "1", "2")
    assert len(c.morphisms) == 6
    assert c.hom("0", "2") == ("0->2",)
    assert c.hom("2", "0") == ()
    assert c.compose("1->2", "0->1") == "0->2"
    assert c.is_thin()


def test_terminal_and_discrete():
    t = terminal_category()
    assert t.objects == ("*",) and t.morphism_ids == ("id_*",)
    d = discrete_category(["a", "b"])
    assert all(d.is_identity(f) for f in d.morphism_ids)


def test_subset_lattice_counts():
    c = subset_lattice(["p", "q", "r"])
    assert len(c.objects) == 8
    # number of pairs A ⊆ B of subsets of a 3-set is 3^3
    assert len(c.morphisms) == 27
    assert c.hom("{p}", "{p,q}") == ("{p}->{p,q}",)


def test_free_category_paths_are_named_last_edge_first():
    g = FinGraph.of(["x", "y", "z"], [("u", "x", "y"), ("v", "y", "z"), ("w", "x", "z")])
    c = free_category_on_acyclic_graph(g)
    assert set(c.hom("x", "z")) == {"v.u", "w"}
    assert c.compose("v", "u") == "v.u"
    assert c.compose_path("v", "u", "id_x") == "v.u"


def test_free_category_rejects_cycles():
    with pytest.raises(CyclicGraph):
        free_category_on_acyclic_graph(FinGraph.of(["a", "b"], [("f", "a", "b"), ("g", "b", "a")]))


def test_edge_pairs_get_arrow_names():
    g = FinGraph.of(["a", "b"], [("a", "b")])
    assert g.edges == (("a->b", "a", "b"),)


def test_delooping_of_cyclic_group():
    c = delooping(cyclic_group(4))
    assert c.objects == ("*",)
    assert c.compose("3", "2") == "1"
    assert c.isomorphisms() == frozenset(c.morphism_ids)
    assert c.inverse("1") == "3"


def test_bad_group_table_rejected():
    g = GroupTable.from_rows(["e", "a"], [["e", "a"], ["a", "a"]], "e")
    with pytest.raises(InvalidGroupTable):
        validate_group(g)


def test_opposite_is_involutive_and_cached():
    c = span_category()
    op = opposite(c)
    assert opposite(op) is c
    assert op.dom("l") == "b" and op.cod("l") == "a"
    assert op.compose("id_a", "l") == "l"


def test_unknown_lookups_raise_typed_errors():
    c = chain(2)
    with pytest.raises(UnknownObject):
        c.id("nope")
    with pytest.raises(UnknownMorphism):
        c.dom("nope")


def test_missing_composite_is_reported():
    objects = ["a", "b", "c"]
    morphisms = [("id_a", "a", "a"), ("id_b", "b", "b"), ("id_c", "c", "c"), ("f", "a", "b"), ("g", "b", "c")]
    identity = {x: f"id_{x}" for x in objects}
    compose = {}
    for m, d, cd in morphisms:
        compose[identity[cd], m] = m
        compose[m, identity[d]] = m
    c = FinCat(objects, morphisms, identity, compose)
    kinds = {v.kind for v in category_violations(c)}
    assert "CompositionNotTotal" in kinds
    with pytest.raises(InvalidCategory):
        validate_category(c)


def test_associativity_failure_detected():
    # one object, three non-identity endomorphisms with a non-associative product
    elems = ["e", "a", "b"]
    table = {("e", x): x for x in elems} | {(x, "e"): x for x in elems}
    table |= {("a", "a"): "b", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "a"}
    c = FinCat(["*"], [(x, "*", "*") for x in elems], {"*": "e"}, table)
    # a(ab) = a·a = b while (aa)b = b·b = a
    assert "AssociativityViolation" in {v.kind for v in category_violations(c)}


def test_parallel_pair_shape():
    c = parallel_pair_category()
    assert c.hom("0", "1") == ("f", "g")


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 5).flatmap(
        lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    )
)
def test_random_posets_are_categories(data):
    n, rels = data
    elems = [str(i) for i in range(n)]
    # orient every relation upward so the result is a partial order
    rels = [(str(min(a, b)), str(max(a, b))) for a, b in rels if a != b]
    c = poset_category(elems, rels)
    assert category_violations(c) == []
    assert c.is_thin()
    assert opposite(c).is_thin()
    for g, f in c.composable_pairs():
        assert c.dom(c.compose(g, f)) == c.dom(f)
        assert c.cod(c.compose(g, f)) == c.cod(g)
