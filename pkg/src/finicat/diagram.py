"""Functors between finite categories, Set-valued functors and natural transformations."""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass

from .errors import (
    InvalidFunctor,
    SearchSpaceCapExceeded,
    SourceMismatch,
    Violation,
)
from .fincat import FinCat, opposite

MAX_NAT_TRANS = 10**7


@dataclass(frozen=True, eq=False)
class FinFunctor:
    source: FinCat
    target: FinCat
    object_map: Mapping[str, str]
    morphism_map: Mapping[str, str]

    def __call__(self, f: str) -> str:
        return self.morphism_map[f]

    def obj(self, x: str) -> str:
        return self.object_map[x]


def functor_violations(F: FinFunctor) -> list[Violation]:
    out = []
    c, d = F.source, F.target
    for x in c.objects:
        if not d.has_object(F.object_map.get(x, "\0")):
            out.append(Violation("NonTotalAction", f"object {x} has no image in the target", (x,)))
    for m in c.morphisms:
        if not d.has_morphism(F.morphism_map.get(m.id, "\0")):
            out.append(Violation("NonTotalAction", f"morphism {m.id} has no image in the target", (m.id,)))
    if out:
        return out
    for m in c.morphisms:
        fm = d.morphism(F(m.id))
        if fm.dom != F.obj(m.dom) or fm.cod != F.obj(m.cod):
            out.append(Violation("DomCodMismatch", f"image of {m.id} has the wrong endpoints", (m.id,)))
    if out:
        return out
    for x in c.objects:
        if F(c.identity[x]) != d.identity[F.obj(x)]:
            out.append(Violation("IdentityNotPreserved", f"F(id_{x}) is not an identity", (c.identity[x],)))
    for g, f in c.composable_pairs():
        if F(c.compose(g, f)) != d.compose(F(g), F(f)):
            out.append(Violation("CompositionNotPreserved", f"F({g}∘{f}) != F({g})∘F({f})", (g, f)))
    return out


def validate_functor(F: FinFunctor) -> FinFunctor:
    violations = functor_violations(F)
    if violations:
        raise InvalidFunctor(violations)
    return F


@dataclass(frozen=True, eq=False)
class SetFunctor:
    """A functor ``source -> FinSet``.

    ``value[X]`` is a sorted tuple of string labels and ``action[f]`` maps
    each label of ``value[dom f]`` to a label of ``value[cod f]``.
    A presheaf on ``C`` is a SetFunctor whose source is ``opposite(C)``.
    """

    source: FinCat
    value: Mapping[str, tuple[str, ...]]
    action: Mapping[str, Mapping[str, str]]

    def __call__(self, f: str, a: str) -> str:
        return self.action[f][a]

    @property
    def size(self) -> int:
        return sum(len(v) for v in self.value.values())

    @property
    def base(self) -> FinCat:
        """The category a presheaf is defined on (the opposite of the source)."""
        return opposite(self.source)

    def same_as(self, other: SetFunctor) -> bool:
        return (
            self.source == other.source
            and {x: tuple(v) for x, v in self.value.items()} == {x: tuple(v) for x, v in other.value.items()}
            and {f: dict(a) for f, a in self.action.items()} == {f: dict(a) for f, a in other.action.items()}
        )


def make_set_functor(
    source: FinCat,
    value: Mapping[str, Sequence[str]],
    action: Mapping[str, Mapping[str, str]],
    validate: bool = True,
) -> SetFunctor:
    """Build a SetFunctor; identity actions may be omitted."""
    vals = {x: tuple(sorted(value.get(x, ()))) for x in source.objects}
    acts: dict[str, dict[str, str]] = {}
    for m in source.morphisms:
        if m.id in action:
            acts[m.id] = dict(action[m.id])
        elif source.is_identity(m.id):
            acts[m.id] = {a: a for a in vals[m.dom]}
    extra = set(value) - set(source.objects)
    F = SetFunctor(source, vals, acts)
    if extra:
        raise InvalidFunctor([Violation("NonTotalAction", f"values given for unknown objects {sorted(extra)}")])
    unknown = set(action) - set(source.morphism_ids)
    if unknown:
        raise InvalidFunctor([Violation("NonTotalAction", f"actions given for unknown morphisms {sorted(unknown)}")])
    return validate_set_functor(F) if validate else F


def make_presheaf(
    base: FinCat,
    value: Mapping[str, Sequence[str]],
    action: Mapping[str, Mapping[str, str]],
    validate: bool = True,
) -> SetFunctor:
    """Presheaf on ``base``: for ``f: X -> Y`` in base, ``action[f]`` maps value[Y] to value[X]."""
    return make_set_functor(opposite(base), value, action, validate)


def constant_functor(source: FinCat, labels: Sequence[str] = ("*",)) -> SetFunctor:
    vals = {x: tuple(sorted(labels)) for x in source.objects}
    acts = {m.id: {a: a for a in labels} for m in source.morphisms}
    return SetFunctor(source, vals, acts)


def set_functor_violations(F: SetFunctor) -> list[Violation]:
    out = []
    c = F.source
    for m in c.morphisms:
        act = F.action.get(m.id)
        if act is None:
            out.append(Violation("NonTotalAction", f"no action for {m.id}", (m.id,)))
            continue
        dom, cod = set(F.value[m.dom]), set(F.value[m.cod])
        if set(act) != dom or not set(act.values()) <= cod:
            out.append(Violation("NonTotalAction", f"action of {m.id} is not a function {m.dom} -> {m.cod}", (m.id,)))
    if out:
        return out
    for x in c.objects:
        i = c.identity[x]
        if any(F(i, a) != a for a in F.value[x]):
            out.append(Violation("IdentityNotPreserved", f"action of {i} is not the identity", (i,)))
    for g, f in c.composable_pairs():
        gf = c.compose(g, f)
        for a in F.value[c.dom(f)]:
            if F(gf, a) != F(g, F(f, a)):
                out.append(
                    Violation("CompositionNotPreserved", f"action({g}∘{f}) != action({g})∘action({f}) at {a}", (g, f))
                )
                break
    return out


def validate_set_functor(F: SetFunctor) -> SetFunctor:
    violations = set_functor_violations(F)
    if violations:
        raise InvalidFunctor(violations)
    return F


@dataclass(frozen=True, eq=False)
class NatTrans:
    source: SetFunctor
    target: SetFunctor
    components: Mapping[str, Mapping[str, str]]

    def __call__(self, x: str, a: str) -> str:
        return self.components[x][a]

    def key(self) -> tuple:
        return tuple(
            (x, tuple(sorted(self.components[x].items()))) for x in self.source.source.objects
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NatTrans):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def naturality_failures(alpha: NatTrans) -> list[tuple[str, str]]:
    """Pairs ``(f, a)`` where the naturality square for ``f`` fails at ``a``."""
    F, G = alpha.source, alpha.target
    bad = []
    for m in F.source.morphisms:
        for a in F.value[m.dom]:
            if G(m.id, alpha(m.dom, a)) != alpha(m.cod, F(m.id, a)):
                bad.append((m.id, a))
    return bad


def is_natural(alpha: NatTrans) -> bool:
    return not naturality_failures(alpha)


def identity_nat(F: SetFunctor) -> NatTrans:
    return NatTrans(F, F, {x: {a: a for a in F.value[x]} for x in F.source.objects})


def compose_nat(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """``beta`` after ``alpha``, componentwise."""
    comps = {
        x: {a: beta(x, alpha(x, a)) for a in alpha.source.value[x]}
        for x in alpha.source.source.objects
    }
    return NatTrans(alpha.source, beta.target, comps)


def nat_trans_search_size(F: SetFunctor, G: SetFunctor) -> int:
    return math.prod(len(G.value[x]) ** len(F.value[x]) for x in F.source.objects)


def iter_nat_trans(F: SetFunctor, G: SetFunctor, cap: int = MAX_NAT_TRANS) -> Iterator[NatTrans]:
    """Lazily enumerate ``Nat(F, G)`` in the documented order.

    Slots ``(X, a)`` are filled in object order then label order, trying
    target labels in sorted order; a naturality constraint is checked as soon
    as both of its slots are filled, so the search prunes early.
    """
    if F.source != G.source:
        raise SourceMismatch("natural transformations need functors on the same category")
    size = nat_trans_search_size(F, G)
    if size > cap:
        raise SearchSpaceCapExceeded("natural transformations", size, cap)
    c = F.source
    slots = [(x, a) for x in c.objects for a in F.value[x]]
    index = {s: i for i, s in enumerate(slots)}
    # constraint (m, a): G(m)(alpha_X(a)) == alpha_Y(F(m)(a)), checked at the later slot
    checks: list[list[tuple[int, str, int]]] = [[] for _ in slots]
    for m in c.morphisms:
        if c.is_identity(m.id):
            continue
        for a in F.value[m.dom]:
            i = index[m.dom, a]
            j = index[m.cod, F(m.id, a)]
            checks[max(i, j)].append((i, m.id, j))
    choices = [G.value[x] for x, _ in slots]
    assignment: list[str] = [""] * len(slots)

    def consistent(k: int) -> bool:
        return all(G(m, assignment[i]) == assignment[j] for i, m, j in checks[k])

    def build() -> NatTrans:
        comps: dict[str, dict[str, str]] = {x: {} for x in c.objects}
        for (x, a), b in zip(slots, assignment):
            comps[x][a] = b
        return NatTrans(F, G, comps)

    def search(k: int) -> Iterator[NatTrans]:
        if k == len(slots):
            yield build()
            return
        for b in choices[k]:
            assignment[k] = b
            if consistent(k):
                yield from search(k + 1)

    yield from search(0)


def enumerate_nat_trans(F: SetFunctor, G: SetFunctor, cap: int = MAX_NAT_TRANS) -> list[NatTrans]:
    """All natural transformations ``F -> G``, duplicate-free and deterministically ordered."""
    return list(iter_nat_trans(F, G, cap))
