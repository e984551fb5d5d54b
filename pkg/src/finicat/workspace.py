"""Loading description files into a validated workspace.

Every file is checked against ``schema.json`` first, then each entry is
built and validated by its module.  Any diagnostic aborts the load: there is
no partially loaded workspace.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator

from .diagram import FinFunctor, SetFunctor, make_presheaf, make_set_functor, validate_functor
from .errors import FinicatError, ReportError
from .finab import FgAbGroup, IntMatrix, abelian_group, cyclic
from .fincat import (
    FinCat,
    FinGraph,
    GroupTable,
    chain,
    cyclic_group,
    delooping,
    free_category_on_acyclic_graph,
    opposite,
    poset_category,
    subset_lattice,
    validate_category,
)
from .modelcheck import MorphismClasses, resolve_class
from .sites import (
    GrothendieckTopology,
    all_sieves_topology,
    saturate_coverage,
    topology_from_members,
    trivial_topology,
)

SCHEMA_ID = "finicat/1"
MAX_OBJECTS = 200
MAX_MORPHISMS = 2000

KINDS = ("categories", "groups", "matrices", "diagrams", "presheaves", "functors", "sites", "classes")


@dataclass(frozen=True)
class Diagnostic:
    file: str
    location: str
    kind: str  # ParseError | UnresolvedReference | ValidationFailed | DuplicateName
    message: str

    def __str__(self) -> str:
        return f"{self.file}:{self.location}: {self.kind}: {self.message}"


class WorkspaceError(FinicatError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass
class Site:
    name: str
    category: str
    topology: GrothendieckTopology
    source: str  # "generators", "covers" or "preset"


@dataclass
class Workspace:
    categories: dict[str, FinCat] = field(default_factory=dict)
    groups: dict[str, FgAbGroup] = field(default_factory=dict)
    matrices: dict[str, IntMatrix] = field(default_factory=dict)
    diagrams: dict[str, SetFunctor] = field(default_factory=dict)
    presheaves: dict[str, SetFunctor] = field(default_factory=dict)
    presheaf_base: dict[str, str] = field(default_factory=dict)
    functors: dict[str, FinFunctor] = field(default_factory=dict)
    sites: dict[str, Site] = field(default_factory=dict)
    classes: dict[str, tuple[str | None, dict[str, Any]]] = field(default_factory=dict)
    scenarios: list[dict[str, Any]] = field(default_factory=list)
    files: list[str] = field(default_factory=list)

    def morphism_classes(self, category: str, classes: str) -> MorphismClasses:
        c = self.categories[category]
        _, spec = self.classes[classes]
        return MorphismClasses(
            c,
            resolve_class(c, spec["weq"]),
            resolve_class(c, spec["cof"]),
            resolve_class(c, spec["fib"]),
        )


def _schema() -> dict:
    return json.loads(resources.files("finicat").joinpath("schema.json").read_text(encoding="utf-8"))


def corpus_paths() -> list[Path]:
    root = resources.files("finicat").joinpath("corpus")
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json"))


class _Loader:
    def __init__(self, max_objects: int, max_morphisms: int):
        self.ws = Workspace()
        self.diags: list[Diagnostic] = []
        self.origin: dict[tuple[str, str], str] = {}
        self.max_objects = max_objects
        self.max_morphisms = max_morphisms
        self.validator = Draft202012Validator(_schema())

    def error(self, file: str, loc: str, kind: str, msg: str) -> None:
        self.diags.append(Diagnostic(file, loc, kind, msg))

    def read(self, path: Path) -> dict | None:
        name = str(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            self.error(name, "line 0", "ParseError", f"unreadable: {exc.strerror}")
            return None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            self.error(name, f"line {exc.lineno} col {exc.colno}", "ParseError", exc.msg)
            return None
        errs = sorted(self.validator.iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
        for e in errs:
            self.error(name, _path(e.absolute_path), "ParseError", e.message)
        return None if errs else data

    def ref(self, kind: str, name: str, file: str, loc: str):
        table = getattr(self.ws, kind)
        if name not in table:
            self.error(file, loc, "UnresolvedReference", f"no {kind[:-1] if kind != 'classes' else 'class assignment'} named {name!r}")
            return None
        return table[name]

    def register(self, kind: str, name: str, file: str, loc: str) -> bool:
        key = (kind, name)
        if key in self.origin:
            self.error(file, loc, "DuplicateName", f"{kind} {name!r} already defined in {self.origin[key]}")
            return False
        self.origin[key] = file
        return True

    def guard(self, file: str, loc: str, build):
        try:
            return build()
        except ReportError as exc:
            for v in exc.violations:
                self.error(file, loc, "ValidationFailed", str(v))
        except (FinicatError, ValueError, KeyError) as exc:
            self.error(file, loc, "ValidationFailed", str(exc).strip("'\""))
        return None

    # -- builders ---------------------------------------------------------

    def category(self, spec: dict, file: str, loc: str, pending: dict) -> FinCat | None:
        if "opposite" in spec:
            base = self.resolve_category(spec["opposite"], file, loc, pending)
            return None if base is None else opposite(base)
        if "graph" in spec:
            g = spec["graph"]
            return free_category_on_acyclic_graph(FinGraph.of(g["vertices"], g["edges"]))
        if "group" in spec:
            g = spec["group"]
            return delooping(GroupTable.from_rows(g["elements"], g["table"], g["unit"]))
        if "cyclic" in spec:
            return delooping(cyclic_group(spec["cyclic"]))
        if "poset" in spec:
            p = spec["poset"]
            return poset_category(p["elements"], [tuple(r) for r in p.get("less", [])])
        if "chain" in spec:
            return chain(spec["chain"])
        if "subsets" in spec:
            return subset_lattice(spec["subsets"])
        objects = spec["objects"]
        morphisms = [tuple(m) for m in spec["morphisms"]]
        identity = dict(spec.get("identities", {}))
        known = {m[0] for m in morphisms}
        for x in objects:
            if x not in identity:
                identity[x] = f"id_{x}"
                if identity[x] not in known:
                    morphisms.append((identity[x], x, x))
        dom = {m[0]: m[1] for m in morphisms}
        cod = {m[0]: m[2] for m in morphisms}
        compose = {(g, f): h for g, f, h in spec.get("compose", [])}
        for f in dom:
            for x in objects:
                i = identity[x]
                if cod[f] == x:
                    compose.setdefault((i, f), f)
                if dom[f] == x:
                    compose.setdefault((f, i), f)
        return validate_category(FinCat(objects, morphisms, identity, compose))

    def resolve_category(self, name: str, file: str, loc: str, pending: dict) -> FinCat | None:
        if name in self.ws.categories:
            return self.ws.categories[name]
        if name in pending:
            pfile, pspec, ploc = pending.pop(name)
            self.build_category(name, pspec, pfile, ploc, pending)
            return self.ws.categories.get(name)
        self.error(file, loc, "UnresolvedReference", f"no category named {name!r}")
        return None

    def build_category(self, name: str, spec: dict, file: str, loc: str, pending: dict) -> None:
        c = self.guard(file, loc, lambda: self.category(spec, file, loc, pending))
        if c is None:
            return
        if len(c.objects) > self.max_objects or len(c.morphisms) > self.max_morphisms:
            self.error(file, loc, "ValidationFailed", f"category exceeds caps ({self.max_objects} objects, {self.max_morphisms} morphisms)")
            return
        c.name = c.name if c.name and c.name.endswith("^op") else name
        self.ws.categories[name] = c

    def set_functor(self, kind: str, name: str, spec: dict, file: str, loc: str) -> None:
        c = self.ref("categories", spec["category"], file, f"{loc}.category")
        if c is None:
            return
        build = make_presheaf if kind == "presheaves" else make_set_functor
        F = self.guard(file, loc, lambda: build(c, spec["values"], spec.get("actions", {})))
        if F is not None:
            getattr(self.ws, kind)[name] = F
            if kind == "presheaves":
                self.ws.presheaf_base[name] = spec["category"]

    def functor(self, name: str, spec: dict, file: str, loc: str) -> None:
        src = self.ref("categories", spec["source"], file, f"{loc}.source")
        tgt = self.ref("categories", spec["target"], file, f"{loc}.target")
        if src is None or tgt is None:
            return

        def build():
            from .setcolim import diagram_in_category

            return diagram_in_category(tgt, src, spec["objects"], spec.get("morphisms", {}))

        F = self.guard(file, loc, build)
        if F is not None:
            self.ws.functors[name] = F

    def site(self, name: str, spec: dict, file: str, loc: str) -> None:
        c = self.ref("categories", spec["category"], file, f"{loc}.category")
        if c is None:
            return
        if "generators" in spec:
            t = self.guard(file, loc, lambda: saturate_coverage(c, spec["generators"]))
            how = "generators"
        elif "covers" in spec:
            t = self.guard(file, loc, lambda: topology_from_members(c, spec["covers"]))
            how = "covers"
        else:
            t = self.guard(file, loc, lambda: (trivial_topology if spec["preset"] == "trivial" else all_sieves_topology)(c))
            how = "preset"
        if t is not None:
            self.ws.sites[name] = Site(name, spec["category"], t, how)

    def group(self, name: str, spec: dict, file: str, loc: str) -> None:
        forms = [k for k in ("cyclic", "presentation") if k in spec] + (["rank/torsion"] if {"rank", "torsion"} & set(spec) else [])
        if len(forms) != 1:
            self.error(file, loc, "ValidationFailed", "give exactly one of cyclic, presentation, rank/torsion")
            return
        if "cyclic" in spec:
            g = cyclic(spec["cyclic"])
        elif "presentation" in spec:
            rows = spec["presentation"]
            cols = len(rows[0]) if rows else 0
            if any(len(r) != cols for r in rows):
                self.error(file, f"{loc}.presentation", "ValidationFailed", "presentation rows differ in length")
                return
            if not rows and "generators" in spec:
                g = FgAbGroup(IntMatrix.zeros(spec["generators"], 0))
            else:
                g = FgAbGroup(IntMatrix.of(rows, cols))
        else:
            g = abelian_group(spec.get("rank", 0), spec.get("torsion", []))
        self.ws.groups[name] = g

    def matrix(self, name: str, rows: list, file: str, loc: str) -> None:
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            self.error(file, loc, "ValidationFailed", "matrix rows differ in length")
            return
        self.ws.matrices[name] = IntMatrix.of(rows, cols)

    def classes(self, name: str, spec: dict, file: str, loc: str) -> None:
        cat = spec.get("category")
        if cat is not None:
            c = self.ref("categories", cat, file, f"{loc}.category")
            if c is None:
                return
            for key in ("weq", "cof", "fib"):
                if isinstance(spec[key], list):
                    unknown = sorted(set(spec[key]) - set(c.morphism_ids))
                    if unknown:
                        self.error(file, f"{loc}.{key}", "UnresolvedReference", f"unknown morphisms {unknown}")
                        return
        self.ws.classes[name] = (cat, spec)

    # -- driver -------------------------------------------------------------

    def load(self, paths: Iterable[Path | str]) -> Workspace:
        docs = []
        for p in paths:
            p = Path(p)
            data = self.read(p)
            self.ws.files.append(str(p))
            if data is not None:
                docs.append((str(p), data))
        if self.diags:
            raise WorkspaceError(self.diags)

        pending = {}
        for file, data in docs:
            for name, spec in data.get("categories", {}).items():
                loc = f"categories.{name}"
                if self.register("categories", name, file, loc):
                    pending[name] = (file, spec, loc)
        while pending:
            name = next(iter(pending))
            file, spec, loc = pending.pop(name)
            self.build_category(name, spec, file, loc, pending)

        steps = [
            ("groups", self.group),
            ("matrices", self.matrix),
            ("diagrams", lambda n, s, f, l: self.set_functor("diagrams", n, s, f, l)),
            ("presheaves", lambda n, s, f, l: self.set_functor("presheaves", n, s, f, l)),
            ("functors", self.functor),
            ("sites", self.site),
            ("classes", self.classes),
        ]
        for kind, build in steps:
            for file, data in docs:
                for name, spec in data.get(kind, {}).items():
                    loc = f"{kind}.{name}"
                    if self.register(kind, name, file, loc):
                        build(name, spec, file, loc)
        for file, data in docs:
            for i, sc in enumerate(data.get("scenarios", [])):
                self.ws.scenarios.append({**sc, "file": file})
        if self.diags:
            raise WorkspaceError(self.diags)
        return self.ws


def _path(parts) -> str:
    out = "(root)"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def parse_workspace(
    paths: Iterable[Path | str],
    max_objects: int = MAX_OBJECTS,
    max_morphisms: int = MAX_MORPHISMS,
) -> Workspace:
    """Load and validate every file, or raise :class:`WorkspaceError` listing all diagnostics."""
    return _Loader(max_objects, max_morphisms).load(paths)


def load_corpus() -> Workspace:
    return parse_workspace(corpus_paths())
