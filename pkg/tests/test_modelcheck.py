import pytest

from finicat.errors import NonCommutingSquare
from finicat.fincat import chain, cyclic_group, delooping, opposite
from finicat.modelcheck import (
    AXIOMS,
    AxiomViolation,
    MorphismClasses,
    check_model_axioms,
    detect_cofibrant_fibrant,
    has_lift,
    resolve_class,
    retract_diagrams,
    reverify,
)


def classes(c, weq, cof, fib):
    return MorphismClasses.of(c, resolve_class(c, weq), resolve_class(c, cof), resolve_class(c, fib))


def is_lattice(c):
    if not c.is_thin():
        return False
    objs = c.objects
    for a in objs:
        for b in objs:
            ubs = [u for u in objs if c.hom(a, u) and c.hom(b, u)]
            lbs = [l for l in objs if c.hom(l, a) and c.hom(l, b)]
            if sum(all(c.hom(u, v) for v in ubs) for u in ubs) != 1:
                return False
            if sum(all(c.hom(v, l) for v in lbs) for l in lbs) != 1:
                return False
    return True


def test_corpus_lattices_detected(ws):
    lattices = {n for n, c in ws.categories.items() if is_lattice(c)}
    assert {"lattice2", "lattice3", "m3", "n5", "opens", "chain2", "chain3", "chain4", "terminal"} <= lattices
    assert "twotops" not in lattices and "span" not in lattices


def test_iso_all_all_holds_on_lattices(ws):
    for name, c in ws.categories.items():
        if is_lattice(c):
            for cat in (c, opposite(c)):
                report = check_model_axioms(classes(cat, "isos", "all", "all"))
                assert report.ok, (name, report.failed_axioms)


def test_identities_fib_fails_only_factorization():
    c = chain(2)
    report = check_model_axioms(classes(c, "isos", "all", "identities"))
    assert report.failed_axioms == ["factorization"]
    (v,) = report.violations["factorization"]
    assert v.data == {"h": "0->1", "kind": "trivial cofibration then fibration"}


def test_all_weak_equivalences_fail_lifting():
    report = check_model_axioms(classes(chain(2), "all", "all", "all"))
    assert report.failed_axioms == ["lifting"]


def test_two_of_three_violation():
    c = chain(3)
    report = check_model_axioms(classes(c, ["id_0", "id_1", "id_2", "0->1", "1->2"], "all", "all"))
    assert "two-of-three" in report.failed_axioms
    assert report.violations["two-of-three"][0].data == {"f": "0->1", "g": "1->2"}


def test_retract_violation_on_split_idempotent(ws):
    c = ws.categories["split"]
    diagrams = list(retract_diagrams(c, "id_A", "id_C"))
    assert {"f": "id_A", "g": "id_C", "i": "i", "r": "r", "j": "i", "s": "r"} in diagrams
    m = classes(c, ["id_C"], "all", "all")
    report = check_model_axioms(m)
    assert any(v.data["f"] == "id_A" for v in report.violations["retract"])


def test_every_witness_reverifies(ws):
    for cname, c in ws.categories.items():
        for spec in (("isos", "all", "identities"), ("all", "all", "all"), ("identities", "isos", "all")):
            m = classes(c, *spec)
            report = check_model_axioms(m)
            for v in report.all_violations():
                assert reverify(m, v), (cname, spec, v)


def test_reverify_rejects_fabricated_witness():
    c = chain(2)
    m = classes(c, "isos", "all", "all")
    fake = AxiomViolation("factorization", "bogus", {"h": "0->1", "kind": "cofibration then trivial fibration"})
    assert not reverify(m, fake)


def test_lift_search_and_noncommuting_square():
    c = chain(2)
    assert has_lift(c, "id_0", "0->1", "id_0", "0->1") == "id_0"
    assert has_lift(c, "0->1", "0->1", "id_0", "id_1") is None
    with pytest.raises(NonCommutingSquare):
        has_lift(c, "0->1", "id_1", "0->1", "0->1")


def test_group_category_every_class_isos():
    g = delooping(cyclic_group(3))
    assert check_model_axioms(classes(g, "all", "all", "all")).ok
    report = detect_cofibrant_fibrant(classes(g, "all", "all", "all"))
    assert report.cofibrant is None and report.fibrant is None


def test_cofibrant_and_fibrant_objects():
    c = chain(3)
    report = detect_cofibrant_fibrant(classes(c, "isos", "all", "identities"))
    assert report.initial == "0" and report.terminal == "2"
    assert report.cofibrant == ("0", "1", "2")
    assert report.fibrant == ("2",)


def test_class_keywords():
    c = chain(2)
    assert resolve_class(c, "ids") == frozenset({"id_0", "id_1"})
    with pytest.raises(ValueError):
        resolve_class(c, "most")
    with pytest.raises(ValueError):
        MorphismClasses.of(c, ["nope"], [], [])
    assert AXIOMS == ("two-of-three", "retract", "lifting", "factorization")
