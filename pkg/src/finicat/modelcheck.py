"""Exhaustive model-category axiom checks on a finite category.

Violations carry a ``data`` dict precise enough for :func:`reverify` to
recompute them from scratch.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Any

from .errors import NonCommutingSquare
from .fincat import FinCat

AXIOMS = ("two-of-three", "retract", "lifting", "factorization")


@dataclass(frozen=True, eq=False)
class MorphismClasses:
    base: FinCat
    weq: frozenset[str]
    cof: frozenset[str]
    fib: frozenset[str]

    def __post_init__(self):
        known = set(self.base.morphism_ids)
        for name in ("weq", "cof", "fib"):
            unknown = set(getattr(self, name)) - known
            if unknown:
                raise ValueError(f"{name} mentions unknown morphisms {sorted(unknown)}")

    @classmethod
    def of(cls, base: FinCat, weq: Iterable[str], cof: Iterable[str], fib: Iterable[str]) -> MorphismClasses:
        return cls(base, frozenset(weq), frozenset(cof), frozenset(fib))

    @property
    def trivial_cof(self) -> frozenset[str]:
        return self.cof & self.weq

    @property
    def trivial_fib(self) -> frozenset[str]:
        return self.fib & self.weq

    def named(self, cls_name: str) -> frozenset[str]:
        return getattr(self, cls_name)


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    message: str
    data: dict[str, Any] = field(hash=False)


@dataclass
class AxiomReport:
    violations: dict[str, list[AxiomViolation]] = field(default_factory=lambda: {a: [] for a in AXIOMS})
    checked: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    @property
    def failed_axioms(self) -> list[str]:
        return [a for a in AXIOMS if self.violations.get(a)]

    def all_violations(self) -> list[AxiomViolation]:
        return [v for a in AXIOMS for v in self.violations.get(a, [])]


def check_two_of_three(m: MorphismClasses) -> list[AxiomViolation]:
    c, w = m.base, m.weq
    out = []
    for g, f in c.composable_pairs():
        gf = c.compose(g, f)
        inside = [f in w, g in w, gf in w]
        if sum(inside) == 2:
            missing = ("f", "g", "g∘f")[inside.index(False)]
            out.append(
                AxiomViolation(
                    "two-of-three",
                    f"f={f}, g={g}, g∘f={gf}: {missing} is not a weak equivalence",
                    {"f": f, "g": g},
                )
            )
    return out


def retract_diagrams(c: FinCat, f: str, g: str) -> Iterable[dict[str, str]]:
    """All ``(i, r, j, s)`` exhibiting f: A->B as a retract of g: C->D."""
    a, b = c.dom(f), c.cod(f)
    cc, d = c.dom(g), c.cod(g)
    tops = [(i, r) for i in c.hom(a, cc) for r in c.hom(cc, a) if c.compose(r, i) == c.identity[a]]
    if not tops:
        return
    bottoms = [(j, s) for j in c.hom(b, d) for s in c.hom(d, b) if c.compose(s, j) == c.identity[b]]
    for i, r in tops:
        for j, s in bottoms:
            if c.compose(g, i) == c.compose(j, f) and c.compose(f, r) == c.compose(s, g):
                yield {"f": f, "g": g, "i": i, "r": r, "j": j, "s": s}


def check_retract_closed(c: FinCat, cls: Iterable[str], name: str = "class") -> list[AxiomViolation]:
    members = frozenset(cls)
    out = []
    for g in sorted(members):
        for f in c.morphism_ids:
            if f in members:
                continue
            for diagram in retract_diagrams(c, f, g):
                out.append(
                    AxiomViolation(
                        "retract",
                        f"{f} is a retract of {g} ∈ {name} but {f} ∉ {name}",
                        {**diagram, "class": name},
                    )
                )
                break
    return out


def square_commutes(c: FinCat, f: str, g: str, top: str, bottom: str) -> bool:
    return (
        c.dom(top) == c.dom(f)
        and c.cod(top) == c.dom(g)
        and c.dom(bottom) == c.cod(f)
        and c.cod(bottom) == c.cod(g)
        and c.compose(g, top) == c.compose(bottom, f)
    )


def has_lift(c: FinCat, f: str, g: str, top: str, bottom: str) -> str | None:
    """First ``l: cod f -> dom g`` (in id order) with ``l∘f = top`` and ``g∘l = bottom``."""
    if not square_commutes(c, f, g, top, bottom):
        raise NonCommutingSquare(f"square (f={f}, g={g}, top={top}, bottom={bottom}) does not commute")
    for lift in c.hom(c.cod(f), c.dom(g)):
        if c.compose(lift, f) == top and c.compose(g, lift) == bottom:
            return lift
    return None


def commuting_squares(c: FinCat, f: str, g: str) -> Iterable[tuple[str, str]]:
    for top in c.hom(c.dom(f), c.dom(g)):
        for bottom in c.hom(c.cod(f), c.cod(g)):
            if c.compose(g, top) == c.compose(bottom, f):
                yield top, bottom


def _lifting_pass(c: FinCat, lefts, rights, label: str) -> list[AxiomViolation]:
    out = []
    for f in sorted(lefts):
        for g in sorted(rights):
            for top, bottom in commuting_squares(c, f, g):
                if has_lift(c, f, g, top, bottom) is None:
                    out.append(
                        AxiomViolation(
                            "lifting",
                            f"{label}: no lift in square f={f}, g={g}, top={top}, bottom={bottom}",
                            {"f": f, "g": g, "top": top, "bottom": bottom, "pair": label},
                        )
                    )
    return out


def check_lifting(m: MorphismClasses) -> list[AxiomViolation]:
    c = m.base
    return _lifting_pass(c, m.trivial_cof, m.fib, "trivial cofibration vs fibration") + _lifting_pass(
        c, m.cof, m.trivial_fib, "cofibration vs trivial fibration"
    )


def factorizations(c: FinCat, h: str, left: frozenset[str], right: frozenset[str]) -> Iterable[tuple[str, str]]:
    a, b = c.dom(h), c.cod(h)
    for z in c.objects:
        for p in c.hom(a, z):
            if p not in left:
                continue
            for q in c.hom(z, b):
                if q in right and c.compose(q, p) == h:
                    yield p, q


def check_factorization(m: MorphismClasses) -> list[AxiomViolation]:
    """Existence of both factorizations for every morphism (functoriality not checked)."""
    c = m.base
    out = []
    kinds = [
        ("cofibration then trivial fibration", m.cof, m.trivial_fib),
        ("trivial cofibration then fibration", m.trivial_cof, m.fib),
    ]
    for h in c.morphism_ids:
        for label, left, right in kinds:
            if next(iter(factorizations(c, h, left, right)), None) is None:
                out.append(
                    AxiomViolation("factorization", f"{h} has no factorization as {label}", {"h": h, "kind": label})
                )
    return out


def check_model_axioms(m: MorphismClasses) -> AxiomReport:
    c = m.base
    report = AxiomReport(checked=AXIOMS)
    report.violations["two-of-three"] = check_two_of_three(m)
    report.violations["retract"] = (
        check_retract_closed(c, m.weq, "weq")
        + check_retract_closed(c, m.cof, "cof")
        + check_retract_closed(c, m.fib, "fib")
    )
    report.violations["lifting"] = check_lifting(m)
    report.violations["factorization"] = check_factorization(m)
    return report


# -- independent re-verification of witnesses ----------------------------------


def reverify(m: MorphismClasses, v: AxiomViolation) -> bool:
    """Recompute from the raw data whether ``v`` really is a violation."""
    c, d = m.base, v.data
    if v.axiom == "two-of-three":
        f, g = d["f"], d["g"]
        if c.cod(f) != c.dom(g):
            return False
        trio = [f in m.weq, g in m.weq, c.table[g, f] in m.weq]
        return trio.count(True) == 2
    if v.axiom == "retract":
        f, g, i, r, j, s = (d[k] for k in "fgirjs")
        cls = m.named(d["class"])
        table = c.table
        ident = c.identity
        return (
            g in cls
            and f not in cls
            and table.get((r, i)) == ident[c.dom(f)]
            and table.get((s, j)) == ident[c.cod(f)]
            and table.get((g, i)) == table.get((j, f))
            and table.get((f, r)) == table.get((s, g))
        )
    if v.axiom == "lifting":
        f, g, top, bottom = d["f"], d["g"], d["top"], d["bottom"]
        left, right = (
            (m.trivial_cof, m.fib) if d["pair"].startswith("trivial") else (m.cof, m.trivial_fib)
        )
        if f not in left or g not in right:
            return False
        if c.table.get((g, top)) != c.table.get((bottom, f)):
            return False
        return not any(
            c.table.get((l, f)) == top and c.table.get((g, l)) == bottom
            for l in c.morphism_ids
            if c.dom(l) == c.cod(f) and c.cod(l) == c.dom(g)
        )
    if v.axiom == "factorization":
        h = d["h"]
        if d["kind"].startswith("cofibration"):
            left, right = m.cof, m.trivial_fib
        else:
            left, right = m.trivial_cof, m.fib
        return not any(
            c.table.get((q, p)) == h for p in left for q in right if c.cod(p) == c.dom(q)
        )
    raise ValueError(f"unknown axiom {v.axiom!r}")


# -- cofibrant / fibrant objects ----------------------------------------------


def initial_objects(c: FinCat) -> list[str]:
    return [x for x in c.objects if all(len(c.hom(x, y)) == 1 for y in c.objects)]


def terminal_objects(c: FinCat) -> list[str]:
    return [x for x in c.objects if all(len(c.hom(y, x)) == 1 for y in c.objects)]


@dataclass(frozen=True)
class CofibrancyReport:
    initial: str | None
    terminal: str | None
    cofibrant: tuple[str, ...] | None  # None: no initial object, not applicable
    fibrant: tuple[str, ...] | None


def detect_cofibrant_fibrant(m: MorphismClasses) -> CofibrancyReport:
    c = m.base
    ini = next(iter(initial_objects(c)), None)
    ter = next(iter(terminal_objects(c)), None)
    cofibrant = fibrant = None
    if ini is not None:
        cofibrant = tuple(x for x in c.objects if c.hom(ini, x)[0] in m.cof)
    if ter is not None:
        fibrant = tuple(x for x in c.objects if c.hom(x, ter)[0] in m.fib)
    return CofibrancyReport(ini, ter, cofibrant, fibrant)


def resolve_class(c: FinCat, spec: str | Iterable[str]) -> frozenset[str]:
    """``"all"``, ``"isos"``, ``"identities"``/``"ids"``, or an explicit list of ids."""
    if isinstance(spec, str):
        key = spec.lower()
        if key == "all":
            return frozenset(c.morphism_ids)
        if key in ("isos", "isomorphisms"):
            return c.isomorphisms()
        if key in ("ids", "identities"):
            return frozenset(c.identity.values())
        raise ValueError(f"unknown class keyword {spec!r}")
    return frozenset(spec)
