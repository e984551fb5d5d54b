"""Sieves, their pullbacks, and Grothendieck topologies on finite categories."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    CodomainMismatch,
    InvalidSieve,
    SearchSpaceCapExceeded,
    TargetMismatch,
    Violation,
)
from .fincat import FinCat

MAX_SIEVE_MORPHISMS = 20


@dataclass(frozen=True)
class Sieve:
    """A set of morphisms into ``target`` closed under precomposition."""

    base: FinCat = field(compare=False, hash=False, repr=False)
    target: str
    members: frozenset[str]

    def __contains__(self, f: str) -> bool:
        return f in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    @property
    def sorted_members(self) -> tuple[str, ...]:
        return tuple(sorted(self.members))

    def is_maximal(self) -> bool:
        return len(self.members) == len(self.base.morphisms_into(self.target))

    def label(self) -> str:
        return "{" + ",".join(self.sorted_members) + "}"

    def sort_key(self) -> tuple:
        return (len(self.members), self.sorted_members)


def closure_violations(s: Sieve) -> list[Violation]:
    c = s.base
    out = []
    for f in s.sorted_members:
        if c.cod(f) != s.target:
            out.append(Violation("CodomainMismatch", f"{f} does not end at {s.target}", (f,)))
            continue
        for g in c.morphisms_into(c.dom(f)):
            if c.compose(f, g) not in s.members:
                out.append(Violation("NotClosed", f"{f}∘{g} missing from sieve", (f, g)))
    return out


def validate_sieve(s: Sieve) -> Sieve:
    bad = closure_violations(s)
    if bad:
        raise InvalidSieve(bad)
    return s


def generate_sieve(c: FinCat, x: str, generators: Iterable[str]) -> Sieve:
    """Smallest sieve on ``x`` containing ``generators``."""
    gens = list(generators)
    for f in gens:
        if c.cod(f) != x:
            raise CodomainMismatch(f"generator {f} does not have codomain {x}")
    c.id(x)
    members = {c.compose(f, g) for f in gens for g in c.morphisms_into(c.dom(f))}
    return Sieve(c, x, frozenset(members))


def maximal_sieve(c: FinCat, x: str) -> Sieve:
    return Sieve(c, x, frozenset(c.morphisms_into(x)))


def empty_sieve(c: FinCat, x: str) -> Sieve:
    c.id(x)
    return Sieve(c, x, frozenset())


def pullback_sieve(f: str, s: Sieve) -> Sieve:
    """``f*(S) = {g : f∘g ∈ S}`` for ``f: Y -> X`` and a sieve S on X."""
    c = s.base
    if c.cod(f) != s.target:
        raise TargetMismatch(f"{f} does not end at the sieve's target {s.target}")
    y = c.dom(f)
    return Sieve(c, y, frozenset(g for g in c.morphisms_into(y) if c.compose(f, g) in s.members))


def enumerate_sieves(c: FinCat, x: str, cap: int = MAX_SIEVE_MORPHISMS) -> list[Sieve]:
    """Every sieve on ``x``, ordered by size then by sorted member ids."""
    into = c.morphisms_into(x)
    if len(into) > cap:
        raise SearchSpaceCapExceeded(f"sieves on {x}", len(into), cap)
    return [Sieve(c, x, m) for m in _sieve_sets(c, x)]


@lru_cache(maxsize=256)
def _sieve_sets(c: FinCat, x: str) -> tuple[frozenset[str], ...]:
    principal = {f: generate_sieve(c, x, [f]).members for f in c.morphisms_into(x)}
    seen = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for s in frontier:
            for f, down in principal.items():
                if f not in s:
                    t = s | down
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return tuple(sorted(seen, key=lambda m: (len(m), sorted(m))))


# -- topologies ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GrothendieckTopology:
    base: FinCat
    covers: Mapping[str, frozenset[Sieve]]

    def covering(self, x: str) -> list[Sieve]:
        return sorted(self.covers.get(x, frozenset()), key=Sieve.sort_key)

    def is_covering(self, s: Sieve) -> bool:
        return s in self.covers.get(s.target, frozenset())

    def same_as(self, other: GrothendieckTopology) -> bool:
        objs = set(self.base.objects) | set(other.base.objects)
        return all(
            self.covers.get(x, frozenset()) == other.covers.get(x, frozenset()) for x in objs
        )

    def contains(self, other: GrothendieckTopology) -> bool:
        return all(
            other.covers.get(x, frozenset()) <= self.covers.get(x, frozenset())
            for x in other.base.objects
        )

    def serialize(self) -> dict[str, list[list[str]]]:
        return {x: [list(s.sorted_members) for s in self.covering(x)] for x in self.base.objects}


def topology_from_members(c: FinCat, covers: Mapping[str, Iterable[Iterable[str]]]) -> GrothendieckTopology:
    """Topology from explicit member lists; each list must already be a sieve."""
    out = {}
    for x in c.objects:
        sieves = set()
        for members in covers.get(x, ()):
            sieves.add(validate_sieve(Sieve(c, x, frozenset(members))))
        out[x] = frozenset(sieves)
    unknown = set(covers) - set(c.objects)
    if unknown:
        raise CodomainMismatch(f"covers given for unknown objects {sorted(unknown)}")
    return GrothendieckTopology(c, out)


def trivial_topology(c: FinCat) -> GrothendieckTopology:
    return GrothendieckTopology(c, {x: frozenset({maximal_sieve(c, x)}) for x in c.objects})


def all_sieves_topology(c: FinCat, cap: int = MAX_SIEVE_MORPHISMS) -> GrothendieckTopology:
    return GrothendieckTopology(c, {x: frozenset(enumerate_sieves(c, x, cap)) for x in c.objects})


@dataclass
class TopologyReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def axioms_failed(self) -> set[str]:
        return {v.kind for v in self.violations}


def check_topology_axioms(t: GrothendieckTopology, cap: int = MAX_SIEVE_MORPHISMS) -> TopologyReport:
    """Exhaustively test covering, base change and locality.

    Violation kinds are ``"covering"``, ``"base change"`` and ``"locality"``;
    witnesses are ``(X,)``, ``(f, S)`` and ``(X, S, R)`` with sieves given
    as sorted member tuples.
    """
    c = t.base
    report = TopologyReport()
    for x in c.objects:
        for s in t.covers.get(x, ()):
            for v in closure_violations(s):
                report.violations.append(Violation("not a sieve", f"{s.label()} on {x}: {v.message}", (x, s.sorted_members)))
    if report.violations:
        return report

    for x in c.objects:
        if not t.is_covering(maximal_sieve(c, x)):
            report.violations.append(Violation("covering", f"maximal sieve on {x} is not covering", (x,)))

    for m in c.morphisms:
        for s in t.covering(m.cod):
            pb = pullback_sieve(m.id, s)
            if not t.is_covering(pb):
                report.violations.append(
                    Violation(
                        "base change",
                        f"{m.id}*{s.label()} = {pb.label()} is not covering on {m.dom}",
                        (m.id, s.sorted_members),
                    )
                )

    for x in c.objects:
        covering = t.covering(x)
        if not covering:
            continue
        for r in enumerate_sieves(c, x, cap):
            if t.is_covering(r):
                continue
            for s in covering:
                if all(t.is_covering(pullback_sieve(f, r)) for f in s.sorted_members):
                    report.violations.append(
                        Violation(
                            "locality",
                            f"{r.label()} on {x} is locally covering along {s.label()} but not covering",
                            (x, s.sorted_members, r.sorted_members),
                        )
                    )
                    break
    return report


def saturate_coverage(
    c: FinCat,
    generating: Mapping[str, Iterable[Sequence[str]]],
    cap: int = MAX_SIEVE_MORPHISMS,
) -> GrothendieckTopology:
    """Smallest topology in which every generating family generates a covering sieve.

    Starts from the generated sieves plus all maximal sieves and adds sieves
    forced by base change and locality until nothing changes.
    """
    covers: dict[str, set[Sieve]] = {x: {maximal_sieve(c, x)} for x in c.objects}
    for x, families in generating.items():
        for fam in families:
            covers[x].add(generate_sieve(c, x, fam))
    all_sieves = {x: enumerate_sieves(c, x, cap) for x in c.objects}

    changed = True
    while changed:
        changed = False
        for m in c.morphisms:
            for s in list(covers[m.cod]):
                pb = pullback_sieve(m.id, s)
                if pb not in covers[m.dom]:
                    covers[m.dom].add(pb)
                    changed = True
        for x in c.objects:
            for r in all_sieves[x]:
                if r in covers[x]:
                    continue
                if any(
                    all(pullback_sieve(f, r) in covers[c.dom(f)] for f in s.members)
                    for s in list(covers[x])
                ):
                    covers[x].add(r)
                    changed = True
    return GrothendieckTopology(c, {x: frozenset(v) for x, v in covers.items()})


def enumerate_topologies(c: FinCat, cap: int = MAX_SIEVE_MORPHISMS, limit: int = 1 << 20) -> list[GrothendieckTopology]:
    """All Grothendieck topologies on ``c``, by filtering every assignment of sieve sets.

    Intended for tiny sites; raises when the number of candidate assignments
    exceeds ``limit``.
    """
    per_object = []
    total = 1
    for x in c.objects:
        others = [s for s in enumerate_sieves(c, x, cap) if not s.is_maximal()]
        per_object.append((x, maximal_sieve(c, x), others))
        total *= 2 ** len(others)
    if total > limit:
        raise SearchSpaceCapExceeded("topology candidates", total, limit)
    choices = []
    for x, top, others in per_object:
        subsets = [
            frozenset({top, *combo})
            for r in range(len(others) + 1)
            for combo in itertools.combinations(others, r)
        ]
        choices.append(subsets)
    out = []
    for combo in itertools.product(*choices):
        t = GrothendieckTopology(c, {x: s for (x, _, _), s in zip(per_object, combo)})
        if check_topology_axioms(t, cap).ok:
            out.append(t)
    return out
