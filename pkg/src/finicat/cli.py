"""Command-line front end.

Exit codes: 0 when everything was computed and every check passed, 1 when
the report contains at least one violation, 2 for input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

from . import finab, presheaf, setcolim, sheaves, sites
from .diagram import MAX_NAT_TRANS, SetFunctor
from .errors import FinicatError
from .modelcheck import check_model_axioms, detect_cofibrant_fibrant
from .workspace import (
    MAX_MORPHISMS,
    MAX_OBJECTS,
    Workspace,
    WorkspaceError,
    corpus_paths,
    parse_workspace,
)


class UsageError(FinicatError):
    pass


@dataclass
class Report:
    command: str
    lines: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def violation(self, text: str) -> None:
        self.violations.append(text)

    @property
    def exit_code(self) -> int:
        return 1 if self.violations else 0

    def render(self, as_json: bool) -> str:
        if as_json:
            payload = {
                "command": self.command,
                "result": self.data,
                "violations": self.violations,
                "status": "fail" if self.violations else "ok",
            }
            return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)
        out = [f"== {self.command}", *self.lines]
        if self.violations:
            out.append(f"FAIL: {len(self.violations)} violation(s)")
            out.extend(f"  ! {v}" for v in self.violations)
        else:
            out.append("OK")
        return "\n".join(out)


@dataclass
class Context:
    ws: Workspace
    max_partition: int
    max_nat_trans: int
    max_sieve_morphisms: int


def _get(table: dict, kind: str, name: str):
    if name not in table:
        raise UsageError(f"unknown {kind} {name!r}; known: {', '.join(sorted(table)) or '(none)'}")
    return table[name]


def _classes_text(result: setcolim.ColimitResult) -> list[str]:
    return [
        f"  {el} = {{{', '.join(f'{x}:{a}' for x, a in result.classes[el])}}}"
        for el in result.apex
    ]


def _colimit_report(rep: Report, ctx: Context, d: SetFunctor, result: setcolim.ColimitResult) -> None:
    rep.say(f"apex size: {len(result.apex)}")
    rep.lines.extend(_classes_text(result))
    rep.data["apex"] = list(result.apex)
    rep.data["classes"] = {el: [list(p) for p in result.classes[el]] for el in result.apex}
    ok, witness = setcolim.verify_cocone(result.cocone)
    if not ok:
        rep.violation(f"cocone does not commute at {witness}")
    if d.size <= ctx.max_partition:
        universal = setcolim.verify_universal(result.cocone, ctx.max_partition)
        rep.say(f"partition oracle: {'universal' if universal else 'NOT universal'}")
        rep.data["oracle"] = universal
        if not universal:
            rep.violation("partition oracle rejects the computed cocone")
    else:
        rep.say(f"partition oracle: skipped ({d.size} elements > {ctx.max_partition})")
        rep.data["oracle"] = None


def cmd_colimit(ctx: Context, name: str) -> Report:
    d = _get(ctx.ws.diagrams, "diagram", name)
    rep = Report(f"colimit {name}")
    _colimit_report(rep, ctx, d, setcolim.colimit(d))
    return rep


def cmd_pushout(ctx: Context, name: str) -> Report:
    d = _get(ctx.ws.diagrams, "diagram", name)
    rep = Report(f"pushout {name}")
    _colimit_report(rep, ctx, d, setcolim.pushout(d))
    return rep


def cmd_coequalizer(ctx: Context, name: str) -> Report:
    d = _get(ctx.ws.diagrams, "diagram", name)
    rep = Report(f"coequalizer {name}")
    _colimit_report(rep, ctx, d, setcolim.coequalizer(d))
    return rep


def cmd_orbit(ctx: Context, name: str) -> Report:
    d = _get(ctx.ws.diagrams, "diagram", name)
    if len(d.source.objects) != 1:
        raise UsageError("orbit needs a diagram on a one-object category (a group action)")
    rep = Report(f"orbit {name}")
    result = setcolim.colimit(d)
    rep.say(f"orbits: {len(result.apex)}")
    _colimit_report(rep, ctx, d, result)
    return rep


def cmd_limit(ctx: Context, name: str) -> Report:
    d = _get(ctx.ws.diagrams, "diagram", name)
    rep = Report(f"limit {name}")
    lim = setcolim.limit(d)
    objs = d.source.objects
    rep.say(f"limit size: {lim.size}  (tuples over {', '.join(objs)})")
    for t in lim.tuples:
        rep.say("  (" + ", ".join(t) + ")")
    rep.data["objects"] = list(objs)
    rep.data["tuples"] = [list(t) for t in lim.tuples]
    return rep


def cmd_find_colimit(ctx: Context, name: str) -> Report:
    F = _get(ctx.ws.functors, "functor", name)
    rep = Report(f"find-colimit {name}")
    found = setcolim.find_colimit_in_category(F.target, F)
    if found is None:
        cocones = setcolim.cocones_in_category(F)
        apexes = sorted({c.apex for c in cocones})
        rep.say("no colimit in this category")
        rep.data["colimit"] = None
        rep.data["cocone_apexes"] = apexes
        for c in cocones:
            counts = [len(setcolim.mediating_morphisms(F.target, c, other)) for other in cocones]
            bad = sum(1 for n in counts if n != 1)
            rep.violation(f"cocone with apex {c.apex} fails universality against {bad} cocone(s)")
    else:
        rep.say(f"colimit apex: {found.apex}")
        for j, leg in found.cocone.legs:
            rep.say(f"  leg {j}: {leg}")
        rep.data["colimit"] = found.apex
        rep.data["legs"] = dict(found.cocone.legs)
        rep.data["isomorphic_apexes"] = list(found.universal_apexes)
    return rep


def _group(ctx: Context, name: str) -> finab.FgAbGroup:
    if name in ctx.ws.groups:
        return ctx.ws.groups[name]
    g = finab.parse_group_name(name)
    if g is None:
        raise UsageError(f"unknown group {name!r}")
    return g


def _paren(g: finab.FgAbGroup) -> str:
    text = str(g)
    return f"({text})" if "⊕" in text else text


def cmd_tensor(ctx: Context, left: str, right: str) -> Report:
    a, b = _group(ctx, left), _group(ctx, right)
    rep = Report(f"tensor {left} {right}")
    t = finab.tensor_product(a, b)
    rep.say(f"{_paren(a)} ⊗ {_paren(b)} = {t}")
    rep.say(str(t))
    rank, factors = t.canonical
    rep.data.update(rank=rank, invariant_factors=list(factors), text=str(t))
    sym = finab.tensor_product(b, a)
    if sym.canonical != t.canonical:
        rep.violation(f"tensor product is not symmetric: {sym} vs {t}")
    return rep


def cmd_snf(ctx: Context, name: str) -> Report:
    m = _get(ctx.ws.matrices, "matrix", name)
    rep = Report(f"snf {name}")
    s, u, v = finab.smith_normal_form(m)
    rep.say(f"S = {s}")
    rep.say(f"U = {u}")
    rep.say(f"V = {v}")
    rep.data.update(S=s.tolist(), U=u.tolist(), V=v.tolist())
    if u @ m @ v != s:
        rep.violation("S != U·m·V")
    if u.det() not in (1, -1) or v.det() not in (1, -1):
        rep.violation("U or V is not unimodular")
    if not finab.is_smith_form(s):
        rep.violation("S is not in Smith normal form")
    g = finab.FgAbGroup(m)
    rep.say(f"cokernel: {g}")
    rep.data["cokernel"] = str(g)
    return rep


def cmd_yoneda(ctx: Context, name: str) -> Report:
    c = _get(ctx.ws.categories, "category", name)
    rep = Report(f"yoneda {name}")
    ff = presheaf.check_yoneda_full_faithful(c, ctx.max_nat_trans)
    rows = []
    for p in ff.pairs:
        rep.say(f"  Nat(R_{p.source}, R_{p.target}) = {p.transformations}, hom = {p.homs}")
        rows.append([p.source, p.target, p.homs, p.transformations, p.bijective])
        if not p.bijective:
            rep.violation(f"Yoneda map fails to be bijective at ({p.source}, {p.target})")
    rep.data["pairs"] = rows
    lemma = []
    for x in c.objects:
        for y in c.objects:
            r = presheaf.check_yoneda_lemma(presheaf.representable(c, y), x, ctx.max_nat_trans)
            lemma.append([x, y, r.transformations, r.elements, r.bijective])
            if not r.bijective:
                rep.violation(f"evaluation Nat(R_{x}, R_{y}) -> R_{y}({x}) is not bijective")
    rep.data["lemma"] = lemma
    rep.say(f"full and faithful on {len(c.objects)} objects: {'yes' if ff.ok else 'no'}")
    return rep


def cmd_canonical_colimit(ctx: Context, name: str) -> Report:
    p = _get(ctx.ws.presheaves, "presheaf", name)
    rep = Report(f"canonical-colimit {name}")
    density = presheaf.check_canonical_colimit(p)
    rows = []
    for ch in density.checks:
        rep.say(f"  {ch.object}: colimit {ch.colimit_size}, presheaf {ch.presheaf_size}, bijective {ch.bijective}")
        rows.append([ch.object, ch.colimit_size, ch.presheaf_size, ch.bijective])
        if not ch.bijective:
            rep.violation(f"comparison map at {ch.object} is not a bijection")
    rep.data["objects"] = rows
    return rep


def cmd_sieves(ctx: Context, cat: str, obj: str) -> Report:
    c = _get(ctx.ws.categories, "category", cat)
    if not c.has_object(obj):
        raise UsageError(f"category {cat!r} has no object {obj!r}")
    rep = Report(f"sieves {cat} {obj}")
    found = sites.enumerate_sieves(c, obj, ctx.max_sieve_morphisms)
    rep.say(f"{len(found)} sieve(s) on {obj}")
    for s in found:
        rep.say(f"  {s.label()}")
    rep.data["sieves"] = [list(s.sorted_members) for s in found]
    return rep


def _site(ctx: Context, name: str) -> sites.GrothendieckTopology:
    return _get(ctx.ws.sites, "site", name).topology


def _topology_lines(rep: Report, t: sites.GrothendieckTopology) -> None:
    for x in t.base.objects:
        rep.say(f"  {x}: " + " ".join(s.label() for s in t.covering(x)))
    rep.data["covers"] = t.serialize()


def cmd_topology_check(ctx: Context, name: str) -> Report:
    t = _site(ctx, name)
    rep = Report(f"topology-check {name}")
    _topology_lines(rep, t)
    result = sites.check_topology_axioms(t, ctx.max_sieve_morphisms)
    for v in result.violations:
        rep.violation(f"{v.kind}: {v.message}")
    rep.data["failed_axioms"] = sorted(result.axioms_failed)
    return rep


def cmd_saturate(ctx: Context, name: str) -> Report:
    site = _get(ctx.ws.sites, "site", name)
    rep = Report(f"saturate {name}")
    rep.say(f"topology generated from {site.source}:")
    _topology_lines(rep, site.topology)
    result = sites.check_topology_axioms(site.topology, ctx.max_sieve_morphisms)
    for v in result.violations:
        rep.violation(f"{v.kind}: {v.message}")
    return rep


def _presheaf_on(ctx: Context, site: str, name: str) -> tuple[sites.GrothendieckTopology, SetFunctor]:
    t = _site(ctx, site)
    p = _get(ctx.ws.presheaves, "presheaf", name)
    if p.base != t.base:
        raise UsageError(f"presheaf {name!r} is not defined on the category of site {site!r}")
    return t, p


def _sheaf_lines(rep: Report, report: sheaves.SheafReport, separated_only: bool = False) -> None:
    rows = []
    for ch in report.checks:
        cover = "{" + ",".join(ch.sieve) + "}"
        rep.say(
            f"  {ch.object} {cover}: {ch.sections} section(s), {ch.families} matching famil{'y' if ch.families == 1 else 'ies'}"
            f", injective={ch.injective}, surjective={ch.surjective}"
        )
        rows.append(
            {
                "object": ch.object,
                "sieve": list(ch.sieve),
                "sections": ch.sections,
                "families": ch.families,
                "injective": ch.injective,
                "surjective": ch.surjective,
                "witnesses": [list(w) for w in ch.witnesses],
            }
        )
        failed = not ch.injective if separated_only else not ch.bijective
        if failed:
            for w in ch.witnesses:
                if separated_only and w[0] != "not injective":
                    continue
                what = "gluing" if w[0] == "not surjective" else "locality"
                rep.violation(
                    f"({ch.object}, {cover}) {what} fails: {ch.sections} sections vs {ch.families} matching families; {w[0]} at {', '.join(w[1:])}"
                )
    rep.data["covers"] = rows


def cmd_sheaf_check(ctx: Context, site: str, name: str) -> Report:
    t, p = _presheaf_on(ctx, site, name)
    rep = Report(f"sheaf-check {site} {name}")
    result = sheaves.check_sheaf(p, t, ctx.max_nat_trans)
    _sheaf_lines(rep, result)
    rep.say(f"sheaf: {'yes' if result.is_sheaf else 'no'}; separated: {'yes' if result.is_separated else 'no'}")
    rep.data["sheaf"] = result.is_sheaf
    rep.data["separated"] = result.is_separated
    return rep


def cmd_sheafify(ctx: Context, site: str, name: str) -> Report:
    t, p = _presheaf_on(ctx, site, name)
    rep = Report(f"sheafify {site} {name}")
    a = sheaves.sheafify(p, t, ctx.max_nat_trans, ctx.max_sieve_morphisms)
    sizes = {x: len(a.sheaf.value[x]) for x in t.base.objects}
    plus_sizes = {x: len(a.first.presheaf.value[x]) for x in t.base.objects}
    rep.say("sizes after one plus: " + ", ".join(f"{x}:{n}" for x, n in plus_sizes.items()))
    rep.say("sizes of the sheafification: " + ", ".join(f"{x}:{n}" for x, n in sizes.items()))
    rep.data["plus_sizes"] = plus_sizes
    rep.data["sizes"] = sizes
    check = sheaves.check_sheaf(a.sheaf, t, ctx.max_nat_trans)
    if not check.is_sheaf:
        rep.violation("sheafification output fails the sheaf condition")
    if not sheaves.check_separated(a.first.presheaf, t, ctx.max_nat_trans).is_separated:
        rep.violation("first plus construction is not separated")
    return rep


def cmd_adjoint_check(ctx: Context, site: str, name: str, *targets: str) -> Report:
    t, p = _presheaf_on(ctx, site, name)
    rep = Report(f"adjoint-check {site} {name}")
    names = list(targets) or sorted(n for n, q in ctx.ws.presheaves.items() if q.base == t.base)
    chosen = {}
    for n in names:
        q = _get(ctx.ws.presheaves, "presheaf", n)
        if q.base != t.base:
            raise UsageError(f"presheaf {n!r} is not on the site's category")
        if sheaves.check_sheaf(q, t, ctx.max_nat_trans).is_sheaf:
            chosen[n] = q
    rep.say("sheaf targets: " + (", ".join(chosen) or "(none)"))
    result = sheaves.check_adjunction(p, t, chosen, ctx.max_nat_trans)
    rep.say(f"{len(result.triples)} morphism(s) h checked")
    for label, count in result.triples:
        if count != 1:
            rep.violation(f"{label}: {count} factorizations through the unit (expected exactly 1)")
    rep.data["targets"] = list(chosen)
    rep.data["checked"] = len(result.triples)
    return rep


def cmd_model_check(ctx: Context, cat: str, classes: str) -> Report:
    c = _get(ctx.ws.categories, "category", cat)
    bound, _ = _get(ctx.ws.classes, "class assignment", classes)
    if bound is not None and bound != cat:
        raise UsageError(f"class assignment {classes!r} is defined for category {bound!r}")
    m = ctx.ws.morphism_classes(cat, classes)
    rep = Report(f"model-check {cat} {classes}")
    rep.say(f"weq: {' '.join(sorted(m.weq))}")
    rep.say(f"cof: {' '.join(sorted(m.cof))}")
    rep.say(f"fib: {' '.join(sorted(m.fib))}")
    report = check_model_axioms(m)
    for axiom, vs in report.violations.items():
        rep.say(f"{axiom}: {'ok' if not vs else f'{len(vs)} violation(s)'}")
        for v in vs:
            rep.violation(f"{axiom}: {v.message}")
    rep.data["failed_axioms"] = report.failed_axioms
    if report.ok:
        rep.say("all axioms hold")
    det = detect_cofibrant_fibrant(m)
    rep.say(f"cofibrant: {'not applicable (no initial object)' if det.cofibrant is None else ' '.join(det.cofibrant)}")
    rep.say(f"fibrant: {'not applicable (no terminal object)' if det.fibrant is None else ' '.join(det.fibrant)}")
    rep.data["cofibrant"] = None if det.cofibrant is None else list(det.cofibrant)
    rep.data["fibrant"] = None if det.fibrant is None else list(det.fibrant)
    return rep


COMMANDS: dict[str, tuple[Callable[..., Report], list[str], str]] = {
    "colimit": (cmd_colimit, ["diagram"], "colimit of a Set-valued diagram"),
    "limit": (cmd_limit, ["diagram"], "limit of a Set-valued diagram"),
    "find-colimit": (cmd_find_colimit, ["functor"], "search a colimit inside a finite category"),
    "pushout": (cmd_pushout, ["diagram"], "pushout of a span-shaped diagram"),
    "coequalizer": (cmd_coequalizer, ["diagram"], "coequalizer of a parallel pair"),
    "orbit": (cmd_orbit, ["diagram"], "orbit set of a group action"),
    "tensor": (cmd_tensor, ["group", "group2"], "tensor product of abelian groups"),
    "snf": (cmd_snf, ["matrix"], "Smith normal form with checks"),
    "yoneda": (cmd_yoneda, ["category"], "Yoneda full-faithfulness and lemma"),
    "canonical-colimit": (cmd_canonical_colimit, ["presheaf"], "presheaf as colimit of representables"),
    "sieves": (cmd_sieves, ["category", "object"], "enumerate sieves on an object"),
    "topology-check": (cmd_topology_check, ["site"], "check the Grothendieck topology axioms"),
    "saturate": (cmd_saturate, ["site"], "show the topology generated by a site"),
    "sheaf-check": (cmd_sheaf_check, ["site", "presheaf"], "sheaf condition on every covering sieve"),
    "sheafify": (cmd_sheafify, ["site", "presheaf"], "sheafification by two plus constructions"),
    "adjoint-check": (cmd_adjoint_check, ["site", "presheaf"], "universal property of sheafification"),
    "model-check": (cmd_model_check, ["category", "classes"], "model-category axioms"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-w", "--workspace", action="append", default=[], metavar="FILE",
                        help="extra description file (repeatable)")
    common.add_argument("--no-corpus", action="store_true", help="do not load the bundled corpus")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-partition", type=int, default=setcolim.MAX_PARTITION)
    common.add_argument("--max-nat-trans", type=int, default=MAX_NAT_TRANS)
    common.add_argument("--max-sieve-morphisms", type=int, default=sites.MAX_SIEVE_MORPHISMS)
    common.add_argument("--max-objects", type=int, default=MAX_OBJECTS)
    common.add_argument("--max-morphisms", type=int, default=MAX_MORPHISMS)

    parser = argparse.ArgumentParser(prog="finicat", description="finite category computations")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, (_, args, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, parents=[common])
        for a in args:
            sp.add_argument(a)
        if name == "adjoint-check":
            sp.add_argument("targets", nargs="*", help="sheaf targets (default: every sheaf on the site)")
    sp = sub.add_parser("batch", help="run every scenario in the workspace", parents=[common])
    sp = sub.add_parser("list", help="list workspace contents", parents=[common])
    return parser


def _load(ns) -> Workspace:
    paths = [] if ns.no_corpus else corpus_paths()
    paths += ns.workspace
    return parse_workspace(paths, ns.max_objects, ns.max_morphisms)


def run_command(ctx: Context, argv: Sequence[str]) -> Report:
    if not argv or argv[0] not in COMMANDS:
        raise UsageError(f"unknown subcommand {argv[0] if argv else ''!r}")
    fn, params, _ = COMMANDS[argv[0]]
    args = list(argv[1:])
    if argv[0] == "adjoint-check":
        if len(args) < 2:
            raise UsageError("adjoint-check needs SITE PRESHEAF [TARGET ...]")
    elif len(args) != len(params):
        raise UsageError(f"{argv[0]} expects {len(params)} argument(s): {' '.join(p.upper() for p in params)}")
    return fn(ctx, *args)


def _run_batch(ctx: Context, as_json: bool, out) -> int:
    mismatches = 0
    results = []
    for sc in ctx.ws.scenarios:
        try:
            rep = run_command(ctx, sc["args"])
            code, text = rep.exit_code, rep.render(as_json)
        except (FinicatError, ValueError) as exc:
            code, text = 2, f"== {' '.join(sc['args'])}\nerror: {exc}"
        ok = code == sc["expect"]
        mismatches += not ok
        results.append((sc["name"], code, sc["expect"], ok))
        print(f"### scenario {sc['name']}: exit {code} (expected {sc['expect']}) {'match' if ok else 'MISMATCH'}", file=out)
        print(text, file=out)
    print(f"### {len(results) - mismatches}/{len(results)} scenarios matched", file=out)
    return 0 if mismatches == 0 else 1


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if ns.command is None:
        parser.print_help(file=err)
        return 2
    try:
        ws = _load(ns)
    except WorkspaceError as exc:
        for d in exc.diagnostics:
            print(str(d), file=err)
        return 2
    ctx = Context(ws, ns.max_partition, ns.max_nat_trans, ns.max_sieve_morphisms)
    if ns.command == "batch":
        return _run_batch(ctx, ns.json, out)
    if ns.command == "list":
        for kind in ("categories", "diagrams", "presheaves", "functors", "sites", "classes", "groups", "matrices"):
            print(f"{kind}: {' '.join(sorted(getattr(ws, kind)))}", file=out)
        return 0
    argv_cmd = [ns.command] + [getattr(ns, p) for p in COMMANDS[ns.command][1]]
    if ns.command == "adjoint-check":
        argv_cmd += ns.targets
    try:
        rep = run_command(ctx, argv_cmd)
    except (FinicatError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    print(rep.render(ns.json), file=out)
    return rep.exit_code


def main_entry() -> None:
    sys.exit(main())
