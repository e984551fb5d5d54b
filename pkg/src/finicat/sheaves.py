"""Matching families, the sheaf condition and sheafification by the plus construction.

For a presheaf P and a sieve S on X, the sections ``P(X)`` map by
``e(x) = (P(f)(x))_{f in S}`` into the families ``(x_f)_{f in S}``.  A family
is matching when it is equalized by the two maps

    p: (x_f) -> (x_{f∘g})_{f,g}        a: (x_f) -> (P(g)(x_f))_{f,g}

with ``g`` ranging over every morphism into ``dom f`` (closure of S makes
restricting ``g`` to S unnecessary).  P is a sheaf when e is a bijection onto
the matching families for every covering sieve.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

from .diagram import (
    MAX_NAT_TRANS,
    NatTrans,
    SetFunctor,
    compose_nat,
    enumerate_nat_trans,
    iter_nat_trans,
    make_set_functor,
)
from .errors import FinicatError, SearchSpaceCapExceeded, SourceMismatch
from .fincat import poset_category
from .setcolim import colimit
from .sites import MAX_SIEVE_MORPHISMS, GrothendieckTopology, Sieve, maximal_sieve, pullback_sieve


class NotASheaf(FinicatError):
    pass


@dataclass(frozen=True)
class MatchingFamily:
    sieve: Sieve
    assignment: tuple[tuple[str, str], ...]  # (member, section over its domain), sorted by member

    def __getitem__(self, f: str) -> str:
        return dict(self.assignment)[f]

    def label(self) -> str:
        return "(" + ",".join(f"{f}={a}" for f, a in self.assignment) + ")"


def _check_base(p: SetFunctor, s: Sieve) -> None:
    if p.base != s.base:
        raise SourceMismatch("presheaf and sieve live on different categories")


def is_matching(p: SetFunctor, s: Sieve, assignment: Mapping[str, str]) -> bool:
    c = s.base
    for f in s.sorted_members:
        for g in c.morphisms_into(c.dom(f)):
            if assignment[c.compose(f, g)] != p(g, assignment[f]):
                return False
    return True


def iter_matching_families(p: SetFunctor, s: Sieve, cap: int = MAX_NAT_TRANS) -> Iterator[MatchingFamily]:
    _check_base(p, s)
    c = s.base
    members = s.sorted_members
    size = math.prod(len(p.value[c.dom(f)]) for f in members)
    if size > cap:
        raise SearchSpaceCapExceeded(f"matching families for {s.label()}", size, cap)
    pos = {f: i for i, f in enumerate(members)}
    # constraint x_{f∘g} = P(g)(x_f), tested once both slots are filled
    checks: list[list[tuple[int, str, int]]] = [[] for _ in members]
    for f in members:
        for g in c.morphisms_into(c.dom(f)):
            i, j = pos[f], pos[c.compose(f, g)]
            checks[max(i, j)].append((i, g, j))
    values: list[str] = [""] * len(members)

    def search(k: int) -> Iterator[MatchingFamily]:
        if k == len(members):
            yield MatchingFamily(s, tuple(zip(members, values)))
            return
        for a in p.value[c.dom(members[k])]:
            values[k] = a
            if all(values[j] == p(g, values[i]) for i, g, j in checks[k]):
                yield from search(k + 1)

    yield from search(0)


def matching_families(p: SetFunctor, s: Sieve, cap: int = MAX_NAT_TRANS) -> list[MatchingFamily]:
    return list(iter_matching_families(p, s, cap))


def restrict(p: SetFunctor, s: Sieve, x: str) -> MatchingFamily:
    """The map e: a section over the sieve's target to its family of restrictions."""
    return MatchingFamily(s, tuple((f, p(f, x)) for f in s.sorted_members))


def restrict_family(fam: MatchingFamily, smaller: Sieve) -> MatchingFamily:
    return MatchingFamily(smaller, tuple((f, a) for f, a in fam.assignment if f in smaller.members))


# -- sheaf condition --------------------------------------------------------


@dataclass(frozen=True)
class CoverCheck:
    object: str
    sieve: tuple[str, ...]
    sections: int
    families: int
    injective: bool
    surjective: bool
    witnesses: tuple[tuple[str, ...], ...] = ()

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


@dataclass
class SheafReport:
    checks: list[CoverCheck] = field(default_factory=list)

    @property
    def is_sheaf(self) -> bool:
        return all(ch.bijective for ch in self.checks)

    @property
    def is_separated(self) -> bool:
        return all(ch.injective for ch in self.checks)

    def failures(self, separated_only: bool = False) -> list[CoverCheck]:
        if separated_only:
            return [ch for ch in self.checks if not ch.injective]
        return [ch for ch in self.checks if not ch.bijective]


def _cover_check(p: SetFunctor, x: str, s: Sieve, cap: int) -> CoverCheck:
    fams = matching_families(p, s, cap)
    image: dict[MatchingFamily, str] = {}
    witnesses: list[tuple[str, ...]] = []
    injective = True
    for sec in p.value[x]:
        fam = restrict(p, s, sec)
        if fam in image:
            injective = False
            witnesses.append(("not injective", image[fam], sec))
        else:
            image[fam] = sec
    missing = [f for f in fams if f not in image]
    for fam in missing:
        witnesses.append(("not surjective", fam.label()))
    return CoverCheck(x, s.sorted_members, len(p.value[x]), len(fams), injective, not missing, tuple(witnesses))


def check_sheaf(p: SetFunctor, t: GrothendieckTopology, cap: int = MAX_NAT_TRANS) -> SheafReport:
    """Test e for bijectivity at every covering sieve of every object."""
    if p.base != t.base:
        raise SourceMismatch("presheaf and topology live on different categories")
    report = SheafReport()
    for x in t.base.objects:
        for s in t.covering(x):
            report.checks.append(_cover_check(p, x, s, cap))
    return report


def check_separated(p: SetFunctor, t: GrothendieckTopology, cap: int = MAX_NAT_TRANS) -> SheafReport:
    """Same report as :func:`check_sheaf`; read it through ``is_separated``."""
    return check_sheaf(p, t, cap)


# -- plus construction ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class PlusResult:
    presheaf: SetFunctor
    unit: NatTrans
    # element of P+(X) -> the (sieve, family) pairs it is the class of
    classes: Mapping[str, Mapping[str, tuple[MatchingFamily, ...]]]


def plus_construction(
    p: SetFunctor,
    t: GrothendieckTopology,
    cap: int = MAX_NAT_TRANS,
    sieve_cap: int = MAX_SIEVE_MORPHISMS,
) -> PlusResult:
    """``P+(X) = colim over covering sieves S of X (reverse inclusion) of Match(S, P)``."""
    if p.base != t.base:
        raise SourceMismatch("presheaf and topology live on different categories")
    c = t.base
    leg_of: dict[str, dict[MatchingFamily, str]] = {}
    classes: dict[str, dict[str, tuple[MatchingFamily, ...]]] = {}
    value: dict[str, list[str]] = {}
    for x in c.objects:
        sieves = t.covering(x)
        if len(c.morphisms_into(x)) > sieve_cap:
            raise SearchSpaceCapExceeded(f"sieves on {x}", len(c.morphisms_into(x)), sieve_cap)
        names = {s.label(): s for s in sieves}
        fams = {s.label(): matching_families(p, s, cap) for s in sieves}
        by_label = {
            name: {fam.label(): fam for fam in fs} for name, fs in fams.items()
        }
        for name, fs in fams.items():
            if len(by_label[name]) != len(fs):
                raise AssertionError(f"family labels collide on {name}")
        refinement = [
            (r, s) for r in names for s in names if r != s and names[s].members <= names[r].members
        ]
        shape = poset_category(list(names), refinement, name=f"cov({x})")
        action = {}
        for m in shape.morphisms:
            big, small = names[m.dom], names[m.cod]
            action[m.id] = {fam.label(): restrict_family(fam, small).label() for fam in fams[m.dom]}
        d = make_set_functor(shape, {n: list(by_label[n]) for n in names}, action)
        result = colimit(d)
        value[x] = list(result.apex)
        leg_of[x] = {
            by_label[n][lab]: result.leg(n, lab) for n in names for lab in by_label[n]
        }
        classes[x] = {
            el: tuple(by_label[n][lab] for n, lab in members)
            for el, members in result.classes.items()
        }

    acts: dict[str, dict[str, str]] = {}
    for m in c.morphisms:
        f, y, x = m.id, m.dom, m.cod
        table = {}
        for el, fams in classes[x].items():
            images = set()
            for fam in fams:
                pb = pullback_sieve(f, fam.sieve)
                moved = MatchingFamily(pb, tuple((h, fam[c.compose(f, h)]) for h in pb.sorted_members))
                images.add(leg_of[y][moved])
            if len(images) != 1:
                raise FinicatError(f"plus construction is not well defined along {f}; is the topology valid?")
            table[el] = images.pop()
        acts[f] = table
    plus = make_set_functor(p.source, value, acts)

    comps = {}
    for x in c.objects:
        top = maximal_sieve(c, x)
        comps[x] = {a: leg_of[x][restrict(p, top, a)] for a in p.value[x]}
    return PlusResult(plus, NatTrans(p, plus, comps), classes)


@dataclass(frozen=True, eq=False)
class Sheafification:
    sheaf: SetFunctor
    unit: NatTrans
    first: PlusResult
    second: PlusResult


def sheafify(
    p: SetFunctor,
    t: GrothendieckTopology,
    cap: int = MAX_NAT_TRANS,
    sieve_cap: int = MAX_SIEVE_MORPHISMS,
) -> Sheafification:
    first = plus_construction(p, t, cap, sieve_cap)
    second = plus_construction(first.presheaf, t, cap, sieve_cap)
    unit = compose_nat(second.unit, first.unit)
    return Sheafification(second.presheaf, unit, first, second)


@dataclass(frozen=True, eq=False)
class UniversalCheck:
    factorizations: tuple[NatTrans, ...]

    @property
    def count(self) -> int:
        return len(self.factorizations)

    @property
    def ok(self) -> bool:
        return len(self.factorizations) == 1


def verify_sheafification_universal(
    p: SetFunctor,
    t: GrothendieckTopology,
    f: SetFunctor,
    h: NatTrans,
    cap: int = MAX_NAT_TRANS,
    sheafified: Sheafification | None = None,
) -> UniversalCheck:
    """Count the ``k: aP -> f`` with ``k ∘ unit = h``; universality means exactly one."""
    if not check_sheaf(f, t, cap).is_sheaf:
        raise NotASheaf("the target presheaf is not a sheaf for this topology")
    a = sheafified or sheafify(p, t, cap)
    found = tuple(
        k for k in iter_nat_trans(a.sheaf, f, cap) if compose_nat(k, a.unit) == h
    )
    return UniversalCheck(found)


@dataclass
class AdjunctionReport:
    triples: list[tuple[str, int]] = field(default_factory=list)  # (description, #factorizations)

    @property
    def ok(self) -> bool:
        return all(n == 1 for _, n in self.triples)


def check_adjunction(
    p: SetFunctor,
    t: GrothendieckTopology,
    targets: Mapping[str, SetFunctor],
    cap: int = MAX_NAT_TRANS,
) -> AdjunctionReport:
    """Run :func:`verify_sheafification_universal` for every sheaf target and every ``h: p -> f``."""
    a = sheafify(p, t, cap)
    report = AdjunctionReport()
    for name, f in targets.items():
        if not check_sheaf(f, t, cap).is_sheaf:
            continue
        for i, h in enumerate(enumerate_nat_trans(p, f, cap)):
            res = verify_sheafification_universal(p, t, f, h, cap, sheafified=a)
            report.triples.append((f"{name}#{i}", res.count))
    return report
