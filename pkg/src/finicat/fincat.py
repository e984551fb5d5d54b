"""Finite categories given by explicit composition tables.

A :class:`FinCat` stores its objects, its morphisms (each with a domain and
codomain), one identity per object and a total composition table keyed by
``(g, f)`` meaning "g after f".  Construction does not validate; call
:func:`validate_category` (every named constructor in this module does so).
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from .errors import (
    CyclicGraph,
    InvalidCategory,
    InvalidGroupTable,
    UnknownMorphism,
    UnknownObject,
    Violation,
)


@dataclass(frozen=True, order=True)
class Morphism:
    id: str
    dom: str
    cod: str


class FinCat:
    """A finite category.  Treat instances as immutable."""

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Iterable[Morphism | Sequence[str]],
        identity: Mapping[str, str],
        compose: Mapping[tuple[str, str], str],
        name: str | None = None,
    ):
        self.name = name
        self.objects: tuple[str, ...] = tuple(sorted(objects))
        morphs = [m if isinstance(m, Morphism) else Morphism(*m) for m in morphisms]
        self.morphisms: tuple[Morphism, ...] = tuple(sorted(morphs))
        self.identity: dict[str, str] = dict(identity)
        self.table: dict[tuple[str, str], str] = dict(compose)
        self._by_id = {m.id: m for m in self.morphisms}
        self._object_set = frozenset(self.objects)
        self._hom: dict[tuple[str, str], tuple[str, ...]] = {}
        for m in self.morphisms:
            self._hom.setdefault((m.dom, m.cod), ())
            self._hom[m.dom, m.cod] += (m.id,)
        self._op: FinCat | None = None

    # -- basic queries -------------------------------------------------

    @property
    def morphism_ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.morphisms)

    def has_object(self, x: str) -> bool:
        return x in self._object_set

    def has_morphism(self, f: str) -> bool:
        return f in self._by_id

    def _check_object(self, x: str) -> None:
        if x not in self._object_set:
            raise UnknownObject(f"unknown object {x!r}")

    def morphism(self, f: str) -> Morphism:
        try:
            return self._by_id[f]
        except KeyError:
            raise UnknownMorphism(f"unknown morphism {f!r}") from None

    def dom(self, f: str) -> str:
        return self.morphism(f).dom

    def cod(self, f: str) -> str:
        return self.morphism(f).cod

    def id(self, x: str) -> str:
        self._check_object(x)
        return self.identity[x]

    def is_identity(self, f: str) -> bool:
        m = self.morphism(f)
        return self.identity.get(m.dom) == f

    def compose(self, g: str, f: str) -> str:
        """Return ``g`` after ``f``."""
        if self.cod(f) != self.dom(g):
            raise ValueError(f"{g!r} and {f!r} are not composable")
        return self.table[g, f]

    def compose_path(self, *fs: str) -> str:
        """Compose right to left: ``compose_path(h, g, f)`` is h∘g∘f."""
        result = fs[-1]
        for g in reversed(fs[:-1]):
            result = self.compose(g, result)
        return result

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        self._check_object(x)
        self._check_object(y)
        return self._hom.get((x, y), ())

    def morphisms_into(self, x: str) -> tuple[str, ...]:
        self._check_object(x)
        return tuple(m.id for m in self.morphisms if m.cod == x)

    def morphisms_from(self, x: str) -> tuple[str, ...]:
        self._check_object(x)
        return tuple(m.id for m in self.morphisms if m.dom == x)

    def composable_pairs(self) -> Iterable[tuple[str, str]]:
        """All ``(g, f)`` with cod f = dom g."""
        for f in self.morphisms:
            for g in self.morphisms_from(f.cod):
                yield g, f.id

    def inverse(self, f: str) -> str | None:
        m = self.morphism(f)
        for g in self.hom(m.cod, m.dom):
            if (
                self.compose(g, f) == self.identity[m.dom]
                and self.compose(f, g) == self.identity[m.cod]
            ):
                return g
        return None

    def is_iso(self, f: str) -> bool:
        return self.inverse(f) is not None

    def isomorphisms(self) -> frozenset[str]:
        return frozenset(f for f in self.morphism_ids if self.is_iso(f))

    @property
    def op(self) -> FinCat:
        return opposite(self)

    def is_thin(self) -> bool:
        return all(len(fs) <= 1 for fs in self._hom.values())

    # -- equality ------------------------------------------------------

    def _key(self):
        return (
            self.objects,
            self.morphisms,
            tuple(sorted(self.identity.items())),
            tuple(sorted(self.table.items())),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinCat):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self) -> int:
        return hash((self.objects, self.morphisms))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<FinCat{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


# -- validation --------------------------------------------------------


def category_violations(c: FinCat) -> list[Violation]:
    """Every violated category law of ``c``; empty iff ``c`` is a category."""
    out: list[Violation] = []
    ids = [m.id for m in c.morphisms]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        out.append(Violation("DuplicateId", f"morphism id {dup!r} used twice", (dup,)))
    if len(set(c.objects)) != len(c.objects):
        out.append(Violation("DuplicateId", "repeated object id", ()))
    for m in c.morphisms:
        for end in (m.dom, m.cod):
            if not c.has_object(end):
                out.append(
                    Violation("DomCodMismatch", f"{m.id} refers to unknown object {end!r}", (m.id,))
                )
    for x in c.objects:
        i = c.identity.get(x)
        if i is None or not c.has_morphism(i):
            out.append(Violation("MissingIdentity", f"object {x!r} has no identity", (x,)))
        elif c.dom(i) != x or c.cod(i) != x:
            out.append(Violation("DomCodMismatch", f"identity {i} is not an endomorphism of {x}", (i,)))
    for key in sorted(c.identity):
        if not c.has_object(key):
            out.append(Violation("DomCodMismatch", f"identity given for unknown object {key!r}", (key,)))
    if out:
        return out

    for (g, f), h in sorted(c.table.items()):
        if not (c.has_morphism(g) and c.has_morphism(f)):
            out.append(Violation("CompositionNotTotal", f"table entry ({g}, {f}) names an unknown morphism", (g, f)))
        elif c.cod(f) != c.dom(g):
            out.append(Violation("DomCodMismatch", f"table entry ({g}, {f}) is not a composable pair", (g, f)))
        elif not c.has_morphism(h):
            out.append(Violation("CompositionNotTotal", f"{g}∘{f} = {h!r} is not a morphism", (g, f)))
        elif c.dom(h) != c.dom(f) or c.cod(h) != c.cod(g):
            out.append(
                Violation("DomCodMismatch", f"{g}∘{f} = {h} has the wrong domain or codomain", (g, f))
            )
    for g, f in c.composable_pairs():
        if (g, f) not in c.table:
            out.append(Violation("CompositionNotTotal", f"{g}∘{f} is undefined", (g, f)))
    if out:
        return out

    for m in c.morphisms:
        f = m.id
        if c.compose(c.identity[m.cod], f) != f:
            out.append(Violation("UnitLawViolation", f"id_{m.cod}∘{f} != {f}", (f,)))
        if c.compose(f, c.identity[m.dom]) != f:
            out.append(Violation("UnitLawViolation", f"{f}∘id_{m.dom} != {f}", (f,)))
    for g, f in c.composable_pairs():
        gf = c.compose(g, f)
        for h in c.morphisms_from(c.cod(g)):
            if c.compose(h, gf) != c.compose(c.compose(h, g), f):
                out.append(
                    Violation("AssociativityViolation", f"({h}∘{g})∘{f} != {h}∘({g}∘{f})", (h, g, f))
                )
    return out


def validate_category(c: FinCat) -> FinCat:
    """Return ``c`` unchanged if it satisfies the category laws, else raise."""
    violations = category_violations(c)
    if violations:
        raise InvalidCategory(violations)
    return c


# -- constructors ------------------------------------------------------


@dataclass(frozen=True)
class FinGraph:
    """Vertices plus named edges ``(name, source, target)``."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]

    @classmethod
    def of(cls, vertices: Iterable[str], edges: Iterable[Sequence[str]]) -> FinGraph:
        named = []
        for e in edges:
            if len(e) == 2:
                s, t = e
                named.append((f"{s}->{t}", s, t))
            else:
                named.append(tuple(e))
        return cls(tuple(vertices), tuple(named))


def free_category_on_acyclic_graph(g: FinGraph, name: str | None = None) -> FinCat:
    """Path category of an acyclic graph.

    The identity on ``v`` is ``id_v``, a one-edge path keeps the edge's name
    and longer paths are named ``"e3.e2.e1"`` (last edge first).
    """
    vertices = set(g.vertices)
    names = [e[0] for e in g.edges]
    if len(set(names)) != len(names):
        raise ValueError("edge names must be unique")
    for e, s, t in g.edges:
        if s not in vertices or t not in vertices:
            raise ValueError(f"edge {e!r} has an endpoint outside the vertex list")
    sorter = TopologicalSorter({v: set() for v in g.vertices})
    for _, s, t in g.edges:
        sorter.add(t, s)
    try:
        tuple(sorter.static_order())
    except CycleError as exc:
        raise CyclicGraph(f"graph has a directed cycle through {exc.args[1]}") from None

    out_edges: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertices}
    for e, s, t in g.edges:
        out_edges[s].append((e, t))

    paths: dict[str, tuple[str, str, tuple[str, ...]]] = {}
    identity = {}
    for v in g.vertices:
        identity[v] = f"id_{v}"
        paths[f"id_{v}"] = (v, v, ())
        stack = [(v, ())]
        while stack:
            end, path = stack.pop()
            for e, t in out_edges[end]:
                p = path + (e,)
                paths[".".join(reversed(p))] = (v, t, p)
                stack.append((t, p))
    by_edges = {p: pid for pid, (_, _, p) in paths.items() if p}

    compose = {}
    for fid, (fs, ft, fp) in paths.items():
        for gid, (gs, gt, gp) in paths.items():
            if ft != gs:
                continue
            if not fp:
                compose[gid, fid] = gid
            elif not gp:
                compose[gid, fid] = fid
            else:
                compose[gid, fid] = by_edges[fp + gp]
    morphisms = [(pid, s, t) for pid, (s, t, _) in paths.items()]
    return validate_category(FinCat(g.vertices, morphisms, identity, compose, name))


@dataclass(frozen=True)
class GroupTable:
    elements: tuple[str, ...]
    product: Mapping[tuple[str, str], str]
    unit: str

    def mul(self, a: str, b: str) -> str:
        return self.product[a, b]

    @classmethod
    def from_rows(cls, elements: Sequence[str], rows: Sequence[Sequence[str]], unit: str) -> GroupTable:
        elements = tuple(elements)
        product = {(a, b): rows[i][j] for i, a in enumerate(elements) for j, b in enumerate(elements)}
        return cls(elements, product, unit)


def validate_group(g: GroupTable) -> GroupTable:
    els = set(g.elements)
    if len(els) != len(g.elements):
        raise InvalidGroupTable("repeated element")
    if g.unit not in els:
        raise InvalidGroupTable(f"unit {g.unit!r} is not an element")
    for a, b in itertools.product(g.elements, repeat=2):
        if g.product.get((a, b)) not in els:
            raise InvalidGroupTable(f"product {a}*{b} is missing or not an element")
    for a in g.elements:
        if g.mul(g.unit, a) != a or g.mul(a, g.unit) != a:
            raise InvalidGroupTable(f"unit law fails at {a!r}")
        if not any(g.mul(a, b) == g.unit == g.mul(b, a) for b in g.elements):
            raise InvalidGroupTable(f"{a!r} has no inverse")
    for a, b, c in itertools.product(g.elements, repeat=3):
        if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)):
            raise InvalidGroupTable(f"associativity fails at ({a}, {b}, {c})")
    return g


def cyclic_group(n: int) -> GroupTable:
    """Z/n with elements ``"0"``..``"n-1"``."""
    if n < 1:
        raise ValueError("order must be positive")
    els = tuple(str(i) for i in range(n))
    product = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
    return GroupTable(els, product, "0")


def delooping(g: GroupTable, obj: str = "*", name: str | None = None) -> FinCat:
    """One-object category whose morphisms are the group elements."""
    validate_group(g)
    compose = {(a, b): g.mul(a, b) for a in g.elements for b in g.elements}
    morphisms = [(a, obj, obj) for a in g.elements]
    return validate_category(FinCat([obj], morphisms, {obj: g.unit}, compose, name))


def opposite(c: FinCat) -> FinCat:
    """Same ids with domain and codomain swapped.  ``opposite(opposite(c)) is c``."""
    if c._op is None:
        morphisms = [Morphism(m.id, m.cod, m.dom) for m in c.morphisms]
        compose = {(f, g): h for (g, f), h in c.table.items()}
        name = f"{c.name}^op" if c.name else None
        op = FinCat(c.objects, morphisms, c.identity, compose, name)
        op._op = c
        c._op = op
    return c._op


def hom_set(c: FinCat, x: str, y: str) -> frozenset[str]:
    return frozenset(c.hom(x, y))


def is_iso(c: FinCat, f: str) -> bool:
    return c.is_iso(f)


def poset_category(
    elements: Iterable[str], relations: Iterable[tuple[str, str]], name: str | None = None
) -> FinCat:
    """Thin category of the preorder generated by ``relations`` (pairs x ≤ y).

    Identities are ``id_x``; the arrow x ≤ y is named ``"x->y"``.
    """
    elements = list(elements)
    leq = {(x, x) for x in elements}
    leq.update((x, y) for x, y in relations)
    for x, y in leq:
        if x not in elements or y not in elements:
            raise UnknownObject(f"relation mentions unknown element in ({x}, {y})")
    # transitive closure, Warshall style
    for k in elements:
        for i in elements:
            if (i, k) in leq:
                for j in elements:
                    if (k, j) in leq:
                        leq.add((i, j))

    def arrow(x: str, y: str) -> str:
        return f"id_{x}" if x == y else f"{x}->{y}"

    morphisms = [(arrow(x, y), x, y) for x, y in leq]
    compose = {
        (arrow(y, z), arrow(x, y)): arrow(x, z)
        for x, y in leq
        for y2, z in leq
        if y == y2
    }
    identity = {x: arrow(x, x) for x in elements}
    return validate_category(FinCat(elements, morphisms, identity, compose, name))


def terminal_category(obj: str = "*") -> FinCat:
    return poset_category([obj], [], name="1")


def discrete_category(objects: Iterable[str], name: str | None = None) -> FinCat:
    return poset_category(objects, [], name)


def chain(n: int, name: str | None = None) -> FinCat:
    """The poset 0 < 1 < ... < n-1."""
    objs = [str(i) for i in range(n)]
    return poset_category(objs, zip(objs, objs[1:]), name or f"chain{n}")


def subset_lattice(labels: Sequence[str], name: str | None = None) -> FinCat:
    """Subsets of ``labels`` under inclusion; objects are written ``{a,b}``."""
    subsets = [frozenset(s) for r in range(len(labels) + 1) for s in itertools.combinations(labels, r)]

    def show(s: frozenset) -> str:
        return "{" + ",".join(sorted(s)) + "}"

    rel = [(show(a), show(b)) for a in subsets for b in subsets if a <= b and a != b]
    return poset_category([show(s) for s in subsets], rel, name)


def span_category() -> FinCat:
    """``b <- a -> c`` with arrows ``l: a->b`` and ``r: a->c``."""
    return free_category_on_acyclic_graph(
        FinGraph.of(["a", "b", "c"], [("l", "a", "b"), ("r", "a", "c")]), name="span"
    )


def parallel_pair_category() -> FinCat:
    """Two objects ``0``, ``1`` and two arrows ``f, g: 0 -> 1``."""
    return free_category_on_acyclic_graph(
        FinGraph.of(["0", "1"], [("f", "0", "1"), ("g", "0", "1")]), name="parallel"
    )
