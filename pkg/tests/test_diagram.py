import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finicat.diagram import (
    NatTrans,
    compose_nat,
    enumerate_nat_trans,
    identity_nat,
    is_natural,
    make_presheaf,
    make_set_functor,
    nat_trans_search_size,
    validate_set_functor,
)
from finicat.errors import InvalidFunctor, SearchSpaceCapExceeded, SourceMismatch
from finicat.fincat import chain, cyclic_group, delooping, opposite, span_category

from randgen import random_diagram


def brute_nat_count(F, G):
    """Count natural transformations by trying every family of functions."""
    import itertools

    slots = [(x, a) for x in F.source.objects for a in F.value[x]]
    pools = [G.value[x] for x, _ in slots]
    count = 0
    for choice in itertools.product(*pools):
        comp = dict(zip(slots, choice))
        if all(
            G(m.id, comp[m.dom, a]) == comp[m.cod, F(m.id, a)]
            for m in F.source.morphisms
            for a in F.value[m.dom]
        ):
            count += 1
    return count


def test_identity_actions_are_filled_in():
    c = chain(2)
    F = make_set_functor(c, {"0": ["a"], "1": ["b"]}, {"0->1": {"a": "b"}})
    assert F("id_0", "a") == "a"


def test_non_functorial_action_rejected():
    g = delooping(cyclic_group(2))
    with pytest.raises(InvalidFunctor) as exc:
        make_set_functor(g, {"*": ["x", "y"]}, {"1": {"x": "x", "y": "x"}})
    assert "CompositionNotPreserved" in exc.value.kinds


def test_missing_action_rejected():
    with pytest.raises(InvalidFunctor):
        make_set_functor(chain(2), {"0": ["a"], "1": ["b"]}, {})


def test_presheaf_lives_on_opposite():
    c = chain(2)
    p = make_presheaf(c, {"0": ["u"], "1": ["x", "y"]}, {"0->1": {"x": "u", "y": "u"}})
    assert p.source is opposite(c)
    assert p.base is c


def test_nat_trans_count_on_group_actions():
    g = delooping(cyclic_group(2))
    swap = make_set_functor(g, {"*": ["1", "2"]}, {"1": {"1": "2", "2": "1"}})
    point = make_set_functor(g, {"*": ["*"]}, {"1": {"*": "*"}})
    assert len(enumerate_nat_trans(point, swap)) == 0
    assert len(enumerate_nat_trans(swap, point)) == 1
    assert len(enumerate_nat_trans(swap, swap)) == 2


def test_nat_trans_cap_and_source_checks():
    g = delooping(cyclic_group(2))
    big = make_set_functor(g, {"*": [str(i) for i in range(6)]}, {"1": {str(i): str(i) for i in range(6)}})
    assert nat_trans_search_size(big, big) == 6**6
    with pytest.raises(SearchSpaceCapExceeded):
        enumerate_nat_trans(big, big, cap=100)
    other = make_set_functor(chain(1), {"0": ["a"]}, {})
    with pytest.raises(SourceMismatch):
        enumerate_nat_trans(big, other)


def test_identity_and_composition_of_transformations():
    c = span_category()
    F = make_set_functor(c, {"a": ["p"], "b": ["x", "y"], "c": ["u"]}, {"l": {"p": "x"}, "r": {"p": "u"}})
    nats = enumerate_nat_trans(F, F)
    ident = identity_nat(F)
    assert ident in nats
    for alpha in nats:
        assert compose_nat(alpha, ident) == alpha
        for beta in nats:
            assert is_natural(compose_nat(beta, alpha))


def test_unnatural_family_detected():
    g = delooping(cyclic_group(2))
    swap = make_set_functor(g, {"*": ["1", "2"]}, {"1": {"1": "2", "2": "1"}})
    bad = NatTrans(swap, swap, {"*": {"1": "1", "2": "1"}})
    assert not is_natural(bad)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_enumeration_matches_brute_force(seed):
    rng = random.Random(seed)
    F = random_diagram(rng, max_total=4, max_objects=3)
    # the terminal functor: exactly one transformation into it
    G = make_set_functor(
        F.source,
        {x: ["t0"] for x in F.source.objects},
        {m.id: {"t0": "t0"} for m in F.source.morphisms},
    )
    nats = enumerate_nat_trans(F, F)
    assert len(nats) == brute_nat_count(F, F)
    assert len(set(nats)) == len(nats)
    assert len(enumerate_nat_trans(F, G)) == brute_nat_count(F, G) == 1
    validate_set_functor(F)
