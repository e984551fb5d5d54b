"""Representable presheaves, the Yoneda embedding and the category of elements."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from .diagram import (
    MAX_NAT_TRANS,
    FinFunctor,
    NatTrans,
    SetFunctor,
    enumerate_nat_trans,
    make_set_functor,
    validate_functor,
)
from .fincat import FinCat, opposite, validate_category
from .setcolim import colimit


def representable(c: FinCat, x: str) -> SetFunctor:
    """``Hom(-, x)`` as a presheaf; ``f: Z -> Y`` acts by ``g -> g∘f``."""
    c.id(x)
    value = {y: c.hom(y, x) for y in c.objects}
    action = {
        m.id: {g: c.compose(g, m.id) for g in value[m.cod]}
        for m in c.morphisms
    }
    return make_set_functor(opposite(c), value, action)


def yoneda_image(c: FinCat, f: str) -> NatTrans:
    """The transformation ``R_X -> R_Y`` given by postcomposition with ``f: X -> Y``."""
    x, y = c.dom(f), c.cod(f)
    rx, ry = representable(c, x), representable(c, y)
    comps = {z: {h: c.compose(f, h) for h in rx.value[z]} for z in c.objects}
    return NatTrans(rx, ry, comps)


@dataclass(frozen=True)
class YonedaPair:
    source: str
    target: str
    homs: int
    transformations: int
    bijective: bool


@dataclass
class YonedaReport:
    pairs: list[YonedaPair] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(p.bijective for p in self.pairs)

    @property
    def failing(self) -> list[YonedaPair]:
        return [p for p in self.pairs if not p.bijective]


def check_yoneda_full_faithful(c: FinCat, cap: int = MAX_NAT_TRANS) -> YonedaReport:
    """For each ``(X, Y)``, compare ``hom(X, Y)`` with the enumerated ``Nat(R_X, R_Y)``."""
    reps = {x: representable(c, x) for x in c.objects}
    report = YonedaReport()
    for x in c.objects:
        for y in c.objects:
            nats = enumerate_nat_trans(reps[x], reps[y], cap)
            images = [yoneda_image(c, f) for f in c.hom(x, y)]
            bijective = (
                len(nats) == len(images)
                and len(set(images)) == len(images)
                and set(images) == set(nats)
            )
            report.pairs.append(YonedaPair(x, y, len(images), len(nats), bijective))
    return report


@dataclass(frozen=True)
class YonedaLemmaReport:
    object: str
    transformations: int
    elements: int
    bijective: bool


def check_yoneda_lemma(p: SetFunctor, x: str, cap: int = MAX_NAT_TRANS) -> YonedaLemmaReport:
    """Evaluate each ``alpha: R_x -> p`` at ``id_x`` and test bijectivity onto ``p(x)``."""
    c = p.base
    r = representable(c, x)
    nats = enumerate_nat_trans(r, p, cap)
    idx = c.id(x)
    images = [alpha(x, idx) for alpha in nats]
    bijective = len(set(images)) == len(images) and set(images) == set(p.value[x])
    return YonedaLemmaReport(x, len(nats), len(p.value[x]), bijective)


# -- category of elements -------------------------------------------------


def element_object(x: str, a: str) -> str:
    return f"{x}:{a}"


@dataclass(frozen=True, eq=False)
class ElementsCategory:
    """Objects ``(X, x)``; an arrow ``(X, x) -> (Y, y)`` is ``f: X -> Y`` with ``p(f)(y) = x``.

    Arrow ids are ``"f@y"``.
    """

    base: FinCat
    presheaf: SetFunctor
    category: FinCat
    projection: FinFunctor
    elements: Mapping[str, tuple[str, str]]
    arrows: Mapping[str, tuple[str, str]]  # arrow id -> (base morphism, element at its codomain)


def category_of_elements(p: SetFunctor) -> ElementsCategory:
    c = p.base
    elements = {element_object(x, a): (x, a) for x in c.objects for a in p.value[x]}
    arrows: dict[str, tuple[str, str]] = {}
    morphisms = []
    for m in c.morphisms:
        for y in p.value[m.cod]:
            aid = f"{m.id}@{y}"
            arrows[aid] = (m.id, y)
            morphisms.append((aid, element_object(m.dom, p(m.id, y)), element_object(m.cod, y)))
    identity = {e: f"{c.identity[x]}@{a}" for e, (x, a) in elements.items()}
    compose = {}
    for gid, (g, z) in arrows.items():
        for fid, (f, y) in arrows.items():
            if c.cod(f) == c.dom(g) and p(g, z) == y:
                compose[gid, fid] = f"{c.compose(g, f)}@{z}"
    cat = validate_category(FinCat(elements, morphisms, identity, compose, name=f"el({c.name or 'P'})"))
    proj = FinFunctor(
        cat,
        c,
        {e: x for e, (x, _) in elements.items()},
        {aid: f for aid, (f, _) in arrows.items()},
    )
    validate_functor(proj)
    return ElementsCategory(c, p, cat, proj, elements, arrows)


@dataclass(frozen=True)
class DensityCheck:
    object: str
    colimit_size: int
    presheaf_size: int
    well_defined: bool
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.well_defined and self.injective and self.surjective


@dataclass
class DensityReport:
    checks: list[DensityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ch.bijective for ch in self.checks)


def check_canonical_colimit(p: SetFunctor) -> DensityReport:
    """Rebuild ``p`` as the colimit of representables over its category of elements.

    At each base object Z the diagram sends ``(X, x)`` to ``hom(Z, X)`` and an
    arrow ``f`` to postcomposition with ``f``; its colimit is compared with
    ``p(Z)`` through the cocone legs ``h -> p(h)(x)``.
    """
    el = category_of_elements(p)
    c, E = el.base, el.category
    report = DensityReport()
    for z in c.objects:
        value = {e: c.hom(z, x) for e, (x, _) in el.elements.items()}
        action = {
            aid: {h: c.compose(f, h) for h in value[E.dom(aid)]}
            for aid, (f, _) in el.arrows.items()
        }
        d = make_set_functor(E, value, action)
        result = colimit(d)
        comparison: dict[str, set[str]] = {}
        for apex_element, members in result.classes.items():
            comparison[apex_element] = {
                p(h, el.elements[e][1]) for e, h in members
            }
        well_defined = all(len(v) == 1 for v in comparison.values())
        images = [next(iter(v)) for v in comparison.values() if v]
        report.checks.append(
            DensityCheck(
                z,
                len(result.apex),
                len(p.value[z]),
                well_defined,
                len(set(images)) == len(images),
                set(images) == set(p.value[z]),
            )
        )
    return report
