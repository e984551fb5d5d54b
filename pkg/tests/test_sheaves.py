import time

import pytest

from finicat.diagram import enumerate_nat_trans, is_natural, make_presheaf
from finicat.errors import SourceMismatch
from finicat.fincat import chain
from finicat.sheaves import (
    NotASheaf,
    check_adjunction,
    check_separated,
    check_sheaf,
    matching_families,
    plus_construction,
    restrict,
    sheafify,
    verify_sheafification_universal,
)
from finicat.sites import generate_sieve, trivial_topology


def sizes(p):
    return {x: len(v) for x, v in p.value.items()}


def test_function_presheaf_is_a_sheaf(ws, site):
    assert check_sheaf(ws.presheaves["fn"], site).is_sheaf


def test_constant_presheaf_gluing_witness(ws, site, opens):
    p = ws.presheaves["constant2"]
    report = check_sheaf(p, site)
    assert not report.is_sheaf and report.is_separated
    (bad,) = report.failures()
    assert bad.object == "X" and bad.sieve == ("0->X", "U1->X", "U2->X")
    assert (bad.sections, bad.families) == (2, 4)
    assert all(w[0] == "not surjective" for w in bad.witnesses)


def test_matching_families_of_cover(ws, opens):
    p = ws.presheaves["fn"]
    s = generate_sieve(opens, "X", ["U1->X", "U2->X"])
    fams = matching_families(p, s)
    assert len(fams) == 4
    assert restrict(p, s, "01") in fams
    assert restrict(p, s, "01")["U2->X"] == "1"


def test_non_separated_presheaf(ws, site):
    report = check_separated(ws.presheaves["nonsep"], site)
    assert not report.is_separated
    (bad,) = report.failures(separated_only=True)
    assert bad.witnesses[0] == ("not injective", "s", "t")


def test_full_constant_presheaf_fails_on_empty_cover(ws, site):
    report = check_sheaf(ws.presheaves["constant2-full"], site)
    failing = {(ch.object, ch.sieve) for ch in report.failures(separated_only=True)}
    assert ("0", ()) in failing


def test_sheafify_constant_presheaf(ws, site):
    a = sheafify(ws.presheaves["constant2"], site)
    assert sizes(a.sheaf) == {"0": 1, "U1": 2, "U2": 2, "X": 4}
    assert check_sheaf(a.sheaf, site).is_sheaf
    assert is_natural(a.unit)


def test_first_plus_is_separated(ws, site):
    for name in ("constant2", "constant2-full", "nonsep", "fn"):
        first = plus_construction(ws.presheaves[name], site)
        assert check_separated(first.presheaf, site).is_separated, name


def test_sheafify_full_constant_presheaf(ws, site):
    a = sheafify(ws.presheaves["constant2-full"], site)
    assert sizes(a.first.presheaf) == {"0": 1, "U1": 2, "U2": 2, "X": 2}
    assert sizes(a.sheaf) == {"0": 1, "U1": 2, "U2": 2, "X": 4}


def test_sheafify_of_sheaf_is_isomorphic(ws, site):
    p = ws.presheaves["fn"]
    a = sheafify(p, site)
    assert sizes(a.sheaf) == sizes(p)
    assert all(len(set(a.unit.components[x].values())) == len(p.value[x]) for x in p.value)


def test_trivial_topology_makes_everything_a_sheaf(ws, opens):
    t = trivial_topology(opens)
    for name in ("constant2", "nonsep", "constant2-full"):
        assert check_sheaf(ws.presheaves[name], t).is_sheaf


def test_universal_property_on_site(ws, site):
    start = time.perf_counter()
    on_site = {n: p for n, p in ws.presheaves.items() if p.base == site.base}
    targets = {n: p for n, p in on_site.items() if check_sheaf(p, site).is_sheaf}
    targets.update({f"a({n})": sheafify(p, site).sheaf for n, p in on_site.items()})
    checked = 0
    for name, p in on_site.items():
        report = check_adjunction(p, site, targets)
        assert report.ok, name
        checked += len(report.triples)
    assert checked > 0
    assert time.perf_counter() - start < 10


def test_universal_rejects_non_sheaf_target(ws, site):
    p = ws.presheaves["constant2"]
    h = enumerate_nat_trans(p, p)[0]
    with pytest.raises(NotASheaf):
        verify_sheafification_universal(p, site, p, h)


def test_mismatched_base_rejected(ws, site):
    p = make_presheaf(chain(2), {"0": ["a"], "1": ["b"]}, {"0->1": {"b": "a"}})
    with pytest.raises(SourceMismatch):
        check_sheaf(p, site)
