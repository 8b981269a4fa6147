"""Command-line surface.

Object arguments are file paths (loaded into the workspace under their
stem) or names of already-loaded objects.  Reports are deterministic;
--json adds a machine-readable copy.  Exit codes: 0 success, 1 a checked
property is false, 2 errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import files
from .completion import (complete, dense_closed_factorization, is_complete,
                         prodiscrete_criteria)
from .congruences import (CongruenceFilter, enumerate_congruences, filter_generated,
                          full_filter, open_congruences)
from .errors import TopactError
from .invariants import (categories_equivalent, dense_units, is_atomic,
                         joint_covering, morita_fingerprint, principal_site,
                         strict_joint_covering, zero_fixed_point_check)
from .monoid import (FiniteMonoid, idempotents, unit_indices, zero_element)
from .reflections import (continuous_subsets, is_topological_filter,
                          is_topological_monoid, mult_continuous_core,
                          powder_reflection, t0_quotient)
from .suite import exhaustive_suite
from .topology import (Topology, connected_components, minimal_base,
                       separation_report)
from .util import render_subset


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except TopactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topact",
        description="finite monoids with topologies: actions, reflections, "
                    "completions, sites")
    sub = parser.add_subparsers(dest="command")

    def add(name: str, func, *positional, filter_flag=False, out=True, dot=False):
        p = sub.add_parser(name)
        for arg in positional:
            p.add_argument(arg)
        if filter_flag:
            p.add_argument("--filter", default="all",
                           help="filter spec: all | open@<topology> | <file>")
        if out:
            p.add_argument("--out", help="directory for emitted object files")
        if dot:
            p.add_argument("--dot", action="store_true", help="emit a DOT graph")
        p.add_argument("--json", action="store_true", dest="as_json")
        p.set_defaults(func=func)
        return p

    p = sub.add_parser("validate")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.set_defaults(func=cmd_validate)

    add("analyze", cmd_analyze, "monoid_arg")
    sub.choices["analyze"].add_argument("topology_arg", nargs="?")
    add("congruences", cmd_congruences, "monoid_arg")
    add("act-topology", cmd_act_topology, "monoid_arg", "topology_arg")
    add("powder", cmd_powder, "monoid_arg", "topology_arg")
    add("t0", cmd_t0, "monoid_arg", "topology_arg")
    add("mult-core", cmd_mult_core, "monoid_arg", "topology_arg")
    add("complete", cmd_complete, "monoid_arg", filter_flag=True)
    p = add("factor-hom", cmd_factor_hom, "hom_arg")
    p.add_argument("--dense", nargs=2, metavar=("SRC_TOPOLOGY", "TGT_TOPOLOGY"),
                   help="also compute the dense-closed factorization")
    add("site", cmd_site, "monoid_arg", filter_flag=True, dot=True)
    add("morita", cmd_morita, "monoid_arg", "topology_arg",
        "monoid2_arg", "topology2_arg")

    p = sub.add_parser("check")
    p.add_argument("what", choices=["atomic", "jcp", "strict-jcp", "zero", "units",
                                    "complete", "powder", "topological-filter"])
    p.add_argument("monoid_arg")
    p.add_argument("topology_arg", nargs="?")
    p.add_argument("--filter", default="all")
    p.add_argument("--json", action="store_true", dest="as_json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suite")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--topologies", type=int, default=3)
    p.add_argument("--json", action="store_true", dest="as_json")
    p.set_defaults(func=cmd_suite)
    return parser


def _resolve(ws: files.Workspace, arg: str) -> str:
    path = Path(arg)
    if path.exists():
        return files.load_file(ws, path)
    return arg


def _monoid(ws: files.Workspace, arg: str) -> tuple[str, FiniteMonoid]:
    name = _resolve(ws, arg)
    return name, ws.monoid(name)


def _topology(ws: files.Workspace, arg: str, monoid: FiniteMonoid
              ) -> tuple[str, Topology]:
    name = _resolve(ws, arg)
    topo = ws.topology(name)
    if topo.carrier_size != monoid.order:
        raise TopactError(f"topology {name!r} lives on a different carrier")
    declared = ws.topology_carriers.get(name)
    if declared is not None and declared != monoid:
        raise TopactError(f"topology {name!r} was declared over a different monoid")
    return name, topo


def _filter(ws: files.Workspace, spec: str, monoid: FiniteMonoid) -> CongruenceFilter:
    if spec == "all":
        return full_filter(monoid)
    if spec.startswith("open@"):
        _, topo = _topology(ws, spec[len("open@"):], monoid)
        return open_congruences(monoid, topo)
    name = _resolve(ws, spec)
    if name in ws.filters:
        return ws.filters[name]
    if name in ws.congruences:
        return filter_generated(monoid, [ws.congruences[name]])
    raise files.UnknownName(f"filter spec {spec!r} names nothing loaded")


def _emit(args, report: dict, text: list[str]) -> None:
    for line in text:
        print(line)
    if getattr(args, "as_json", False):
        print(files.dump(report), end="")


def _write_out(args, name: str, obj: dict) -> None:
    out = getattr(args, "out", None)
    if out:
        directory = Path(out)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / f"{name}.json").write_text(files.dump(obj))


def _opens_text(topology: Topology, names: tuple[str, ...]) -> str:
    return " ".join(render_subset(u, names) for u in minimal_base(topology))


def cmd_validate(args) -> int:
    ws = files.Workspace()
    report = {}
    for f in args.files:
        name = files.load_file(ws, Path(f))
        kind = next(k for k, table in (
            ("monoid", ws.monoids), ("topology", ws.topologies), ("mset", ws.msets),
            ("congruence", ws.congruences), ("filter", ws.filters), ("hom", ws.homs),
        ) if name in table)
        print(f"{name}: OK ({kind})")
        report[name] = kind
    if args.as_json:
        print(files.dump(report), end="")
    return 0


def cmd_analyze(args) -> int:
    ws = files.Workspace()
    name, monoid = _monoid(ws, args.monoid_arg)
    names = monoid.elements
    lines = [
        f"monoid {name}: order {monoid.order}, identity {names[monoid.identity]}",
        f"commutative: {monoid.is_commutative()}",
        f"idempotents: {' '.join(names[e] for e in idempotents(monoid))}",
        f"units: {' '.join(names[u] for u in unit_indices(monoid))}",
    ]
    z = zero_element(monoid)
    lines.append(f"zero: {names[z] if z is not None else 'none'}")
    report: dict = {"order": monoid.order, "commutative": monoid.is_commutative(),
                    "idempotents": [names[e] for e in idempotents(monoid)],
                    "units": [names[u] for u in unit_indices(monoid)],
                    "zero": names[z] if z is not None else None}
    if args.topology_arg:
        tname, topo = _topology(ws, args.topology_arg, monoid)
        sep = separation_report(topo)
        comps = connected_components(topo)
        lines += [
            f"topology {tname}: {len(topo.opens)} opens, base {_opens_text(topo, names)}",
            f"T0: {sep.t0}  clopen base: {sep.clopen_base}  discrete: {sep.discrete}",
            f"components: {' '.join('{' + ','.join(names[i] for i in c) + '}' for c in comps)}",
            f"topological monoid: {is_topological_monoid(monoid, topo)}",
        ]
        report["topology"] = {"opens": len(topo.opens), "t0": sep.t0,
                              "clopen_base": sep.clopen_base,
                              "discrete": sep.discrete,
                              "topological_monoid": is_topological_monoid(monoid, topo)}
    _emit(args, report, lines)
    return 0


def cmd_congruences(args) -> int:
    ws = files.Workspace()
    name, monoid = _monoid(ws, args.monoid_arg)
    lattice = enumerate_congruences(monoid)
    lines = [f"right congruences of {name}: {len(lattice)}"]
    lines += [f"  {r.label()}" for r in lattice]
    _emit(args, {"count": len(lattice),
                 "congruences": [[list(map(monoid.elements.__getitem__, cls))
                                  for cls in r.classes()] for r in lattice]}, lines)
    return 0


def cmd_act_topology(args) -> int:
    ws = files.Workspace()
    name, monoid = _monoid(ws, args.monoid_arg)
    tname, topo = _topology(ws, args.topology_arg, monoid)
    report = continuous_subsets(monoid, topo)
    names = monoid.elements
    lines = [
        f"input topology {tname}: {len(topo.opens)} opens, "
        f"base {_opens_text(topo, names)}",
        f"continuous subsets of ({name}, {tname}): "
        f"{' '.join(render_subset(a, names) for a in report.continuous_sets)}",
        f"action topology base: {_opens_text(report.topology, names)}",
        f"is action topology: {report.is_action_topology}",
    ]
    _emit(args, {"continuous_sets": [render_subset(a, names)
                                     for a in report.continuous_sets],
                 "is_action_topology": report.is_action_topology}, lines)
    return 0


def cmd_powder(args) -> int:
    ws = files.Workspace()
    name, monoid = _monoid(ws, args.monoid_arg)
    tname, topo = _topology(ws, args.topology_arg, monoid)
    reflection = powder_reflection(monoid, topo)
    q = reflection.monoid
    lines = [
        f"powder reflection of ({name}, {tname}): order {q.order}",
        f"quotient elements: {' '.join(q.elements)}",
        f"projection: {' '.join(f'{a}->{q.elements[v]}' for a, v in zip(monoid.elements, reflection.projection.map))}",
        "quotient topology: discrete",
    ]
    _write_out(args, f"{name}_powder", files.monoid_to_obj(q))
    _emit(args, files.monoid_to_obj(q), lines)
    return 0


def cmd_t0(args) -> int:
    ws = files.Workspace()
    name, monoid = _monoid(ws, args.monoid_arg)
    tname, topo = _topology(ws, args.topology_arg, monoid)
    quotient, q_top, projection = t0_quotient(monoid, topo)
    lines = [
        f"T0 quotient of ({name}, {tname}): order {quotient.order}",
        f"projection: {' '.join(f'{a}->{quotient.elements[v]}' for a, v in zip(monoid.elements, projection.map))}",
        f"quotient topology base: {_opens_text(q_top, quotient.elements)}",
    ]
    _write_out(args, f"{name}_t0", files.monoid_to_obj(quotient))
    _emit(args, files.monoid_to_obj(quotient), lines)
    return 0


def cmd_mult_core(args) -> int:
    ws = files.Workspace()
    name, monoid = _monoid(ws, args.monoid_arg)
    tname, topo = _topology(ws, args.topology_arg, monoid)
    core = mult_continuous_core(monoid, topo)
    lines = [
        f"multiplication-continuous core of ({name}, {tname}): "
        f"{len(core.opens)} opens, base {_opens_text(core, monoid.elements)}",
    ]
    _emit(args, {"opens": len(core.opens)}, lines)
    return 0


def cmd_complete(args) -> int:
    ws = files.Workspace()
    name, monoid = _monoid(ws, args.monoid_arg)
    flt = _filter(ws, args.filter, monoid)
    cpl = complete(monoid, flt)
    crit = prodiscrete_criteria(monoid, flt)
    lines = [
        f"completion of {name} over filter with base {flt.least.label()}",
        f"L: order {cpl.monoid.order}, elements {' '.join(cpl.monoid.elements)}",
        f"u: {' '.join(f'{a}->{cpl.monoid.elements[v]}' for a, v in zip(monoid.elements, cpl.comparison.map))}",
        f"rho base: {_opens_text(cpl.topology, cpl.monoid.elements)}",
        f"criteria: discrete={crit.discrete} prodiscrete={crit.prodiscrete} group={crit.group}",
    ]
    _write_out(args, name, files.monoid_to_obj(monoid))
    _write_out(args, f"{name}_completion", files.monoid_to_obj(cpl.monoid))
    _write_out(args, f"{name}_completion_u",
               files.hom_to_obj(cpl.comparison, f"{name}.json",
                                f"{name}_completion.json"))
    _emit(args, {"L": files.monoid_to_obj(cpl.monoid),
                 "u": files.hom_to_obj(cpl.comparison, f"{name}.json",
                                       f"{name}_completion.json"),
                 "filter_base": [[list(map(monoid.elements.__getitem__, cls))
                                  for cls in r.classes()] for r in flt.base],
                 "criteria": {"discrete": crit.discrete,
                              "prodiscrete": crit.prodiscrete,
                              "group": crit.group}}, lines)
    return 0


def cmd_factor_hom(args) -> int:
    ws = files.Workspace()
    name = _resolve(ws, args.hom_arg)
    if name not in ws.homs:
        raise files.UnknownName(f"no hom named {name!r} is loaded")
    hom = ws.homs[name]
    from .monoid import factor_surjection_inclusion
    first, second = factor_surjection_inclusion(hom)
    lines = [
        f"surjection-inclusion factorization of {name}:",
        f"  corner monoid: {' '.join(first.target.elements)} "
        f"(identity {first.target.elements[first.target.identity]})",
        f"  monoid hom: {' '.join(f'{a}->{first.target.elements[v]}' for a, v in zip(hom.source.elements, first.map))}",
    ]
    report = {"corner": files.monoid_to_obj(first.target)}
    if args.dense:
        _, t_src = _topology(ws, args.dense[0], hom.source)
        _, t_tgt = _topology(ws, args.dense[1], hom.target)
        dense, closed = dense_closed_factorization(hom, t_src, t_tgt)
        lines += [
            "dense-closed factorization:",
            f"  closure of image: {' '.join(dense.target.elements)}",
        ]
        report["closure"] = files.monoid_to_obj(dense.target)
    _emit(args, report, lines)
    return 0


def cmd_site(args) -> int:
    ws = files.Workspace()
    name, monoid = _monoid(ws, args.monoid_arg)
    flt = _filter(ws, args.filter, monoid)
    site = principal_site(monoid, flt)
    lines = [f"principal site of {name}: {len(site.objects)} objects, "
             f"{site.arrow_count} arrows"]
    for i, obj in enumerate(site.objects):
        lines.append(f"  object {obj}")
    for f in range(site.arrow_count):
        marks = "".join(ch for ch, flag in
                        (("e", f in site.epis), ("m", f in site.monos)) if flag)
        lines.append(f"  {site.arrow_names[f]}: {site.objects[site.arrow_src[f]]}"
                     f" -> {site.objects[site.arrow_tgt[f]]}"
                     + (f" [{marks}]" if marks else ""))
    if args.dot:
        lines.append(site_dot(site))
    _emit(args, {"objects": list(site.objects),
                 "arrows": [[site.arrow_names[f], site.arrow_src[f], site.arrow_tgt[f]]
                            for f in range(site.arrow_count)]}, lines)
    return 0


def site_dot(site) -> str:
    out = ["digraph site {"]
    for i, obj in enumerate(site.objects):
        out.append(f'  n{i} [label="{obj}"];')
    for f in range(site.arrow_count):
        if f in site.identities:
            continue
        style = ' style=bold' if f in site.epis else ""
        out.append(f'  n{site.arrow_src[f]} -> n{site.arrow_tgt[f]} '
                   f'[label="{site.arrow_names[f]}"{style}];')
    out.append("}")
    return "\n".join(out)


def cmd_morita(args) -> int:
    ws = files.Workspace()
    name1, m1 = _monoid(ws, args.monoid_arg)
    _, t1 = _topology(ws, args.topology_arg, m1)
    name2, m2 = _monoid(ws, args.monoid2_arg)
    _, t2 = _topology(ws, args.topology2_arg, m2)
    site1 = principal_site(m1, open_congruences(m1, t1))
    site2 = principal_site(m2, open_congruences(m2, t2))
    verdict = categories_equivalent(site1, site2)
    lines = [
        f"site of {name1}: {len(site1.objects)} objects; "
        f"site of {name2}: {len(site2.objects)} objects",
        f"fingerprints equal: {morita_fingerprint(site1) == morita_fingerprint(site2)}",
        f"equivalent: {verdict.kind} ({verdict.reason})",
    ]
    _emit(args, {"verdict": verdict.kind, "reason": verdict.reason}, lines)
    return 1 if verdict.kind == "no" else 0


def cmd_check(args) -> int:
    ws = files.Workspace()
    name, monoid = _monoid(ws, args.monoid_arg)
    what = args.what
    verdict: bool
    detail = ""
    if what in ("atomic", "jcp", "strict-jcp", "zero", "topological-filter"):
        flt = _filter(ws, args.filter, monoid)
        if what == "atomic":
            verdict, witness = is_atomic(monoid, flt)
            if witness:
                detail = f" witness: ({witness[0].label()}, {monoid.elements[witness[1]]})"
        elif what == "jcp":
            verdict = joint_covering(principal_site(monoid, flt))
        elif what == "strict-jcp":
            verdict = strict_joint_covering(principal_site(monoid, flt))
        elif what == "zero":
            verdict = zero_fixed_point_check(monoid, flt)
        else:
            verdict, witness = is_topological_filter(monoid, flt)
            if witness is not None:
                detail = f" witness: {witness.label()}"
    else:
        if not args.topology_arg:
            raise TopactError(f"check {what} needs a topology argument")
        _, topo = _topology(ws, args.topology_arg, monoid)
        if what == "units":
            verdict = dense_units(monoid, topo)
        elif what == "complete":
            verdict = is_complete(monoid, topo)
        else:
            report = continuous_subsets(monoid, topo)
            verdict = report.is_action_topology and separation_report(topo).t0
    print(f"check {what} {name}: {'true' if verdict else 'false'}{detail}")
    if args.as_json:
        print(files.dump({"check": what, "verdict": verdict}), end="")
    return 0 if verdict else 1


def cmd_suite(args) -> int:
    summary = exhaustive_suite(args.order, args.topologies)
    for line in summary.lines():
        print(line)
    if args.as_json:
        print(files.dump({r.name: {"passed": r.passed, "failed": r.failed}
                          for r in summary.records.values()}), end="")
    return 0 if summary.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
