"""Colimits and limits of finite Set-valued diagrams.

:func:`colimit` quotients the disjoint union of the diagram's sets by the
equivalence generated by ``(X, a) ~ (Y, F(f)(a))`` using union-find.
:func:`verify_universal` is an independent check that enumerates set
partitions and never touches the union-find path.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass

from .diagram import FinFunctor, SetFunctor, make_set_functor
from .errors import OracleCapExceeded, ShapeMismatch
from .fincat import FinCat, discrete_category, parallel_pair_category, span_category

MAX_PARTITION = 10

Element = tuple[str, str]  # (object id, label)


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        # keep the smaller element as root so representatives are canonical
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return {r: sorted(xs) for r, xs in out.items()}


@dataclass(frozen=True, eq=False)
class Cocone:
    diagram: SetFunctor
    apex: tuple[str, ...]
    legs: Mapping[str, Mapping[str, str]]


@dataclass(frozen=True, eq=False)
class ColimitResult:
    cocone: Cocone
    classes: Mapping[str, tuple[Element, ...]]

    @property
    def apex(self) -> tuple[str, ...]:
        return self.cocone.apex

    def leg(self, x: str, a: str) -> str:
        return self.cocone.legs[x][a]

    def partition(self) -> list[list[Element]]:
        return [list(self.classes[p]) for p in self.apex]


def element_label(x: str, a: str) -> str:
    return f"{x}:{a}"


def disjoint_union(d: SetFunctor) -> list[Element]:
    return [(x, a) for x in d.source.objects for a in d.value[x]]


def colimit(d: SetFunctor) -> ColimitResult:
    """Colimit of ``d`` in finite sets.

    Each apex element is named after the least ``(object, label)`` pair of
    its class, written ``"object:label"``.
    """
    elements = disjoint_union(d)
    uf = UnionFind(elements)
    for m in d.source.morphisms:
        for a in d.value[m.dom]:
            uf.union((m.dom, a), (m.cod, d(m.id, a)))
    classes = uf.classes()
    names = {root: element_label(*root) for root in classes}
    apex = tuple(sorted(names.values()))
    legs = {x: {a: names[uf.find((x, a))] for a in d.value[x]} for x in d.source.objects}
    return ColimitResult(
        Cocone(d, apex, legs),
        {names[r]: tuple(xs) for r, xs in classes.items()},
    )


def verify_cocone(c: Cocone) -> tuple[bool, tuple[str, str] | None]:
    """Check every triangle ``leg_Y ∘ F(f) = leg_X``; return the first failing ``(f, a)``."""
    d = c.diagram
    if set(c.legs) != set(d.source.objects) or any(
        set(c.legs[x]) != set(d.value[x]) for x in d.source.objects
    ):
        raise ShapeMismatch("legs do not match the diagram's objects and sets")
    apex = set(c.apex)
    for x in d.source.objects:
        if not set(c.legs[x].values()) <= apex:
            raise ShapeMismatch(f"leg at {x} leaves the apex")
    for m in d.source.morphisms:
        for a in d.value[m.dom]:
            if c.legs[m.cod][d(m.id, a)] != c.legs[m.dom][a]:
                return False, (m.id, a)
    return True, None


def set_partitions(n: int, same: Sequence[tuple[int, int]] = ()) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``n`` whose blocks respect ``same``.

    Each pair ``(i, j)`` in ``same`` forces elements i and j into one block;
    a pair is checked once both are placed.
    """
    by_late: list[list[int]] = [[] for _ in range(n)]
    for i, j in same:
        lo, hi = min(i, j), max(i, j)
        if lo != hi:
            by_late[hi].append(lo)
    labels = [0] * n

    def grow(k: int, blocks: int) -> Iterator[tuple[int, ...]]:
        if k == n:
            yield tuple(labels)
            return
        for b in range(blocks + 1):
            labels[k] = b
            if all(labels[lo] == b for lo in by_late[k]):
                yield from grow(k + 1, max(blocks, b + 1))

    if n == 0:
        yield ()
    else:
        yield from grow(0, 0)


def _refines(fine: Sequence[int], coarse: Sequence[int]) -> bool:
    seen: dict[int, int] = {}
    return all(seen.setdefault(f, c) == c for f, c in zip(fine, coarse))


def finest_commuting_partition(d: SetFunctor, max_partition: int = MAX_PARTITION) -> tuple[list[Element], tuple[int, ...]]:
    """Brute-force the finest partition of the disjoint union that every cocone factors through."""
    elements = disjoint_union(d)
    if len(elements) > max_partition:
        raise OracleCapExceeded("partition oracle", len(elements), max_partition)
    index = {e: i for i, e in enumerate(elements)}
    same = [
        (index[m.dom, a], index[m.cod, d(m.id, a)])
        for m in d.source.morphisms
        for a in d.value[m.dom]
    ]
    commuting = list(set_partitions(len(elements), same))
    most = max(len(set(p)) if p else 0 for p in commuting)
    finest = [p for p in commuting if (len(set(p)) if p else 0) == most]
    assert len(finest) == 1, "finest commuting partition is not unique"
    assert all(_refines(finest[0], p) for p in commuting), "finest partition does not refine all"
    return elements, finest[0]


def verify_universal(c: Cocone, max_partition: int = MAX_PARTITION) -> bool:
    """Is ``c`` a colimit cocone?  Decided by partition enumeration only."""
    ok, _ = verify_cocone(c)
    if not ok:
        return False
    elements, finest = finest_commuting_partition(c.diagram, max_partition)
    fibers = [c.legs[x][a] for x, a in elements]
    if set(fibers) != set(c.apex):
        return False
    # fiber partition must equal the finest one: same blocks both ways
    return _refines(fibers, finest) and _refines(finest, fibers)


# -- named shapes ------------------------------------------------------


def _is_span(c: FinCat) -> tuple[str, str, str, str, str] | None:
    arrows = [m for m in c.morphisms if not c.is_identity(m.id)]
    if len(c.objects) != 3 or len(arrows) != 2:
        return None
    f, g = arrows
    if f.dom != g.dom or f.cod == g.cod or f.dom in (f.cod, g.cod):
        return None
    return f.dom, f.cod, g.cod, f.id, g.id


def pushout(d: SetFunctor) -> ColimitResult:
    """Colimit of a span-shaped diagram."""
    if _is_span(d.source) is None:
        raise ShapeMismatch("pushout needs a diagram on a span  b <- a -> c")
    return colimit(d)


def span_diagram(
    apex: Sequence[str],
    left: Sequence[str],
    right: Sequence[str],
    f: Mapping[str, str],
    g: Mapping[str, str],
) -> SetFunctor:
    """The diagram ``left <-f- apex -g-> right`` on :func:`span_category`."""
    return make_set_functor(span_category(), {"a": apex, "b": left, "c": right}, {"l": f, "r": g})


def parallel_diagram(
    source: Sequence[str], target: Sequence[str], f: Mapping[str, str], g: Mapping[str, str]
) -> SetFunctor:
    return make_set_functor(parallel_pair_category(), {"0": source, "1": target}, {"f": f, "g": g})


def _is_parallel_pair(c: FinCat) -> bool:
    arrows = [m for m in c.morphisms if not c.is_identity(m.id)]
    return (
        len(c.objects) == 2
        and len(arrows) == 2
        and arrows[0].dom == arrows[1].dom != arrows[0].cod == arrows[1].cod
    )


def coequalizer(d: SetFunctor) -> ColimitResult:
    if not _is_parallel_pair(d.source):
        raise ShapeMismatch("coequalizer needs a diagram on a parallel pair")
    return colimit(d)


def coproduct(sets: Sequence[Sequence[str]]) -> ColimitResult:
    """Coproduct of the given sets; summand ``i`` becomes object ``str(i)``."""
    c = discrete_category([str(i) for i in range(len(sets))], name="discrete")
    return colimit(make_set_functor(c, {str(i): s for i, s in enumerate(sets)}, {}))


def is_discrete(c: FinCat) -> bool:
    return all(c.is_identity(f) for f in c.morphism_ids)


# -- limits ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LimitResult:
    diagram: SetFunctor
    tuples: tuple[tuple[str, ...], ...]  # one entry per source object, in object order
    legs: Mapping[str, Mapping[tuple[str, ...], str]]

    @property
    def size(self) -> int:
        return len(self.tuples)


def limit(d: SetFunctor) -> LimitResult:
    """All compatible families ``(x_X)`` with ``F(f)(x_X) = x_Y``, found by backtracking."""
    c = d.source
    objs = c.objects
    pos = {x: i for i, x in enumerate(objs)}
    checks: list[list[tuple[int, str, int]]] = [[] for _ in objs]
    for m in c.morphisms:
        i, j = pos[m.dom], pos[m.cod]
        checks[max(i, j)].append((i, m.id, j))
    found: list[tuple[str, ...]] = []
    current: list[str] = [""] * len(objs)

    def search(k: int) -> None:
        if k == len(objs):
            found.append(tuple(current))
            return
        for a in d.value[objs[k]]:
            current[k] = a
            if all(d(m, current[i]) == current[j] for i, m, j in checks[k]):
                search(k + 1)

    search(0)
    legs = {x: {t: t[pos[x]] for t in found} for x in objs}
    return LimitResult(d, tuple(found), legs)


# -- colimits inside an abstract finite category -------------------------


@dataclass(frozen=True)
class CategoricalCocone:
    apex: str
    legs: tuple[tuple[str, str], ...]  # (diagram object, morphism in the target)

    def leg(self, j: str) -> str:
        return dict(self.legs)[j]


def cocones_in_category(d: FinFunctor) -> list[CategoricalCocone]:
    """Every cocone over ``d`` inside its target category."""
    J, C = d.source, d.target
    objs = J.objects
    pos = {j: i for i, j in enumerate(objs)}
    checks: list[list[tuple[int, str, int]]] = [[] for _ in objs]
    for m in J.morphisms:
        i, k = pos[m.dom], pos[m.cod]
        checks[max(i, k)].append((i, d(m.id), k))
    out = []
    for n in C.objects:
        legs: list[str] = [""] * len(objs)

        def search(k: int) -> None:
            if k == len(objs):
                out.append(CategoricalCocone(n, tuple(zip(objs, legs))))
                return
            for leg in C.hom(d.obj(objs[k]), n):
                legs[k] = leg
                if all(C.compose(legs[t], fm) == legs[s] for s, fm, t in checks[k]):
                    search(k + 1)

        search(0)
    return out


def mediating_morphisms(C: FinCat, src: CategoricalCocone, dst: CategoricalCocone) -> list[str]:
    return [
        u
        for u in C.hom(src.apex, dst.apex)
        if all(C.compose(u, leg) == dst.leg(j) for j, leg in src.legs)
    ]


@dataclass(frozen=True)
class CategoricalColimit:
    cocone: CategoricalCocone
    universal_apexes: tuple[str, ...]

    @property
    def apex(self) -> str:
        return self.cocone.apex


def find_colimit_in_category(c: FinCat, d: FinFunctor) -> CategoricalColimit | None:
    """Search all cocones over ``d`` in ``c`` for a universal one.

    Returns ``None`` when no cocone is universal, i.e. the colimit does not
    exist in ``c``.  Among universal cocones the first apex in object order
    wins; all of them are checked to be isomorphic.
    """
    if d.target != c:
        raise ShapeMismatch("diagram does not land in the given category")
    cocones = cocones_in_category(d)
    universal = [
        lam
        for lam in cocones
        if all(len(mediating_morphisms(c, lam, mu)) == 1 for mu in cocones)
    ]
    if not universal:
        return None
    first = universal[0]
    for other in universal[1:]:
        (u,) = mediating_morphisms(c, first, other)
        assert c.is_iso(u), "two universal cocones with non-isomorphic apexes"
    return CategoricalColimit(first, tuple(sorted({u.apex for u in universal})))


def diagram_in_category(
    target: FinCat, shape: FinCat, object_map: Mapping[str, str], morphism_map: Mapping[str, str]
) -> FinFunctor:
    """Build a FinFunctor, defaulting identities to identities and, for thin targets, arrows to the unique arrow."""
    from .diagram import validate_functor

    mm = dict(morphism_map)
    for m in shape.morphisms:
        if m.id in mm:
            continue
        if shape.is_identity(m.id):
            mm[m.id] = target.identity[object_map[m.dom]]
        else:
            hom = target.hom(object_map[m.dom], object_map[m.cod])
            if len(hom) == 1:
                mm[m.id] = hom[0]
    return validate_functor(FinFunctor(shape, target, dict(object_map), mm))


def span_in(target: FinCat, a: str, b: str, c: str) -> FinFunctor:
    """The span ``b <- a -> c`` in a thin category."""
    return diagram_in_category(target, span_category(), {"a": a, "b": b, "c": c}, {})


def joins(p: FinCat, xs: Sequence[str]) -> list[str]:
    """Least upper bounds of ``xs`` in a thin category, computed directly."""
    ubs = [u for u in p.objects if all(p.hom(x, u) for x in xs)]
    return [u for u in ubs if all(p.hom(u, v) for v in ubs)]


def all_partitions(items: Sequence) -> Iterator[list[list]]:
    """Plain set partitions of ``items`` as lists of blocks (for tests and tooling)."""
    items = list(items)
    for rgs in set_partitions(len(items)):
        blocks: list[list] = [[] for _ in range(max(rgs, default=-1) + 1)]
        for item, b in zip(items, rgs):
            blocks[b].append(item)
        yield blocks


__all__ = [
    "Cocone",
    "ColimitResult",
    "LimitResult",
    "CategoricalColimit",
    "UnionFind",
    "colimit",
    "coequalizer",
    "coproduct",
    "pushout",
    "limit",
    "verify_cocone",
    "verify_universal",
    "find_colimit_in_category",
    "span_diagram",
    "parallel_diagram",
    "span_in",
    "joins",
]
