"""Command-line front end.

    cohconf analyze --geometry petersen
    cohconf config --geometry ag --q 2
    cohconf subgroups --geometry petersen --group builtin
    cohconf spectrum --geometry ag --q 3
    cohconf label --geometry petersen --group builtin --base 0 --label-direction to-base
    cohconf verify-relations --geometry petersen --preset petersen
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import algebra, architecture, cells, geometry, graph, groups

GEOMETRIES = ("pg", "ag", "clique", "petersen", "file")
PRESETS = ("hecke-a2", "aff", "circle", "petersen")
DEFAULT_SEED = architecture.DEFAULT_SEED


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    geometry: str | None = None
    q: int | None = None
    graph_path: str | None = None
    linespace_path: str | None = None
    group: str | None = None
    relations_path: str | None = None
    preset: str | None = None
    base: int = 0
    output: str = "text"
    label_direction: str = "from-base"
    dim_cap: int | None = None
    force: bool = False
    seed: int = DEFAULT_SEED
    threads: int = 1

    def validate(self) -> None:
        sources = [self.geometry not in (None, "file"), self.graph_path is not None, self.linespace_path is not None]
        if sum(sources) != 1:
            raise CliError("give exactly one graph source: --geometry, --input or --linespace")
        if self.geometry in ("pg", "ag", "clique") and self.q is None:
            raise CliError(f"--geometry {self.geometry} needs --q")


@dataclass
class Instance:
    g: graph.EdgeColouredGraph
    ls: geometry.LineSpace | None = None
    flag_index: dict | None = None
    action: groups.PermutationAction | None = None
    vertex_names: list[str] | None = None


def _load(cfg: RunConfig) -> Instance:
    cfg.validate()
    try:
        if cfg.graph_path:
            inst = Instance(graph.parse_graph(Path(cfg.graph_path).read_text()))
        elif cfg.linespace_path:
            ls = geometry.parse_linespace(Path(cfg.linespace_path).read_text())
            g, idx = geometry.chamber_system(ls)
            inst = Instance(g, ls, idx)
        else:
            builders = {
                "pg": lambda: geometry.projective_symmetries(cfg.q),
                "ag": lambda: geometry.affine_symmetries(cfg.q),
                "clique": lambda: geometry.clique_symmetries(cfg.q),
                "petersen": geometry.petersen_symmetries,
            }
            ls, g, idx, act = builders[cfg.geometry]()
            inst = Instance(g, ls, idx, act)
        if inst.flag_index:
            names = [""] * inst.g.vertex_count
            for f, i in inst.flag_index.items():
                names[i] = f"({f.p},{f.l})"
            inst.vertex_names = names
    except (OSError, ValueError) as exc:
        raise CliError(str(exc)) from None
    if cfg.group is not None:
        if cfg.group == "builtin":
            if inst.action is None:
                raise CliError("no builtin group for this graph source")
        else:
            try:
                inst.action = groups.parse_group(Path(cfg.group).read_text())
            except (OSError, ValueError) as exc:
                raise CliError(str(exc)) from None
    else:
        inst.action = None
    return inst


def _dim_cap(cfg: RunConfig, g: graph.EdgeColouredGraph) -> int:
    if cfg.dim_cap is not None:
        return cfg.dim_cap
    env = os.environ.get("COHCONF_DIM_CAP")
    if env:
        return int(env)
    return g.vertex_count ** 2


def _algebra(cfg: RunConfig, inst: Instance) -> algebra.AlgebraBasis:
    try:
        return algebra.algebra_closure(graph.adjacency_operators(inst.g), _dim_cap(cfg, inst.g))
    except algebra.DimensionCapExceeded as exc:
        raise CliError(str(exc)) from None


def _frac(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _configuration(cfg: RunConfig, inst: Instance, ab: algebra.AlgebraBasis) -> architecture.CoherentConfiguration:
    g = inst.g
    try:
        if inst.action is not None:
            return groups.architecture_from_action(g, inst.action, ab, cfg.base)
        if cfg.geometry == "ag" or (inst.ls is not None and inst.ls.is_affine_plane()):
            cands = architecture.canonical_affine_architecture(inst.ls, g, inst.flag_index)
        elif cfg.geometry == "pg" or (inst.ls is not None and inst.ls.is_projective_plane()):
            cands = architecture.canonical_projective_architecture(inst.ls, g, inst.flag_index)
        elif cfg.geometry == "clique":
            cands = architecture.canonical_clique_architecture(cfg.q, g, inst.flag_index)
        elif g.colour_count == 1:
            return architecture.distance_regular_architecture(g)
        else:
            raise CliError("no canonical construction for this source; pass --group")
        return architecture.verify_architecture(g, ab, cands)
    except (architecture.ArchitectureError, groups.GroupError) as exc:
        raise CliError(f"configuration failed: {exc}") from None


def _config_json(cc: architecture.CoherentConfiguration, ab: algebra.AlgebraBasis) -> dict:
    a = cc.intersection
    d1 = len(cc)
    return {
        "classes": d1,
        "dim": len(ab),
        "expressions": cc.expression_texts(),
        "coordinates": [[_frac(c) for c in e] for e in cc.expressions],
        "intersection": [[i, j, k, int(a[i, j, k])] for i in range(d1) for j in range(d1)
                         for k in range(d1) if a[i, j, k]],
        "transpose_perm": list(cc.transpose_perm),
        "sphere_sizes": cc.valencies(),
    }


def cmd_analyze(cfg: RunConfig) -> tuple[dict, list[str]]:
    inst = _load(cfg)
    g = inst.g
    ab = _algebra(cfg, inst)
    orders = graph.regularity_orders(g)
    report = {
        "vertices": g.vertex_count,
        "colours": g.colour_count,
        "chamber_system": graph.is_chamber_system(g),
        "regularity_orders": list(orders) if orders else None,
        "dim": len(ab),
        "basis": [algebra.format_word(w) for w in ab.words],
        "semisimple": algebra.gram_semisimplicity(ab),
    }
    failures = [] if report["semisimple"] else ["semisimple"]
    return report, failures


def cmd_config(cfg: RunConfig) -> tuple[dict, list[str]]:
    inst = _load(cfg)
    ab = _algebra(cfg, inst)
    cc = _configuration(cfg, inst, ab)
    failures = architecture.check_axioms(cc)
    if not architecture.intersection_counts_match(cc, seed=cfg.seed):
        failures.append("intersection_counts")
    return _config_json(cc, ab), failures


def cmd_subgroups(cfg: RunConfig) -> tuple[dict, list[str]]:
    inst = _load(cfg)
    ab = _algebra(cfg, inst)
    cc = _configuration(cfg, inst, ab)
    try:
        idems = cells.idempotents(cc, force=cfg.force)
    except cells.SearchTooLarge as exc:
        raise CliError(f"{exc}; pass --force") from None
    stab = groups.stabilizer(inst.action, cfg.base) if inst.action is not None else None
    poset = cells.subgroup_poset(cc, idems, stab)
    report = {
        "idempotents": [d.class_list for d in poset.subgroups],
        "hasse": [list(e) for e in poset.hasse],
        "orders": [d.order for d in poset.subgroups],
        "expressions": cc.expression_texts(),
    }
    return report, []


def cmd_spectrum(cfg: RunConfig) -> tuple[dict, list[str]]:
    inst = _load(cfg)
    if cfg.q is None:
        raise CliError("spectrum needs --q")
    ab = _algebra(cfg, inst)
    rep = architecture.affine_spectrum_certificate(inst.g, cfg.q)
    failures = rep.failing()
    try:
        mult = list(architecture.affine_multiplicities(inst.g, ab, cfg.q).as_tuple())
    except architecture.ArchitectureError:
        mult = None
        failures.append("multiplicities")
    report = {
        "q": cfg.q,
        "checks": [{"name": c.name, "expected": c.expected, "observed": c.observed, "passed": c.passed}
                   for c in rep.checks],
        "multiplicities": mult,
    }
    return report, failures


def cmd_label(cfg: RunConfig) -> tuple[dict, list[str]]:
    inst = _load(cfg)
    ab = _algebra(cfg, inst)
    cc = _configuration(cfg, inst, ab)
    if not 0 <= cfg.base < inst.g.vertex_count:
        raise CliError(f"base {cfg.base} out of range")
    lab = architecture.sphere_labels(cc, cfg.base, cfg.label_direction)
    texts = cc.expression_texts()
    names = inst.vertex_names or [str(v) for v in range(inst.g.vertex_count)]
    report = {
        "base": cfg.base,
        "direction": cfg.label_direction,
        "labels": [{"vertex": v, "name": names[v], "class": c, "expression": texts[c]}
                   for v, c in enumerate(lab.labels)],
        "sphere_sizes": lab.sphere_sizes(len(cc)),
    }
    return report, []


def cmd_verify_relations(cfg: RunConfig) -> tuple[dict, list[str]]:
    inst = _load(cfg)
    ab = _algebra(cfg, inst)
    if (cfg.preset is None) == (cfg.relations_path is None):
        raise CliError("give exactly one of --preset or --relations")
    if cfg.relations_path:
        try:
            rels = algebra.parse_relations(Path(cfg.relations_path).read_text())
        except (OSError, ValueError) as exc:
            raise CliError(str(exc)) from None
    else:
        if cfg.preset != "petersen" and cfg.q is None:
            raise CliError(f"preset {cfg.preset} needs --q")
        if cfg.preset == "hecke-a2":
            rels = algebra.presentation("hecke", coxeter=algebra.A2, q=cfg.q)
        elif cfg.preset == "aff":
            rels = algebra.presentation("aff", q=cfg.q)
        elif cfg.preset == "circle":
            rels = algebra.presentation("circle", q=cfg.q)
        else:
            rels = algebra.presentation("petersen")
    results = []
    for rel in rels:
        if any(c > len(ab.generators) for _, w in rel.terms for c in w):
            raise CliError(f"relation {rel} uses a generator the graph does not have")
        results.append({"relation": str(rel), "holds": algebra.check_relation(ab, rel)})
    return {"relations": results}, [r["relation"] for r in results if not r["holds"]]


COMMANDS = {
    "analyze": cmd_analyze,
    "config": cmd_config,
    "subgroups": cmd_subgroups,
    "spectrum": cmd_spectrum,
    "label": cmd_label,
    "verify-relations": cmd_verify_relations,
}


def _render_text(name: str, report: dict) -> str:
    lines = []
    if name == "analyze":
        lines.append(f"vertices {report['vertices']}")
        lines.append(f"colours {report['colours']}")
        lines.append(f"chamber_system {'yes' if report['chamber_system'] else 'no'}")
        ro = report["regularity_orders"]
        lines.append("regular " + (" ".join(map(str, ro)) if ro else "no"))
        lines.append(f"dim {report['dim']}")
        lines.append("basis " + " ".join(report["basis"]))
        lines.append(f"semisimple {'yes' if report['semisimple'] else 'no'}")
    elif name == "config":
        lines.append(f"classes {report['classes']}")
        lines.append(f"dim {report['dim']}")
        for i, (e, s) in enumerate(zip(report["expressions"], report["sphere_sizes"])):
            lines.append(f"class {i} size {s} transpose {report['transpose_perm'][i]}: {e}")
    elif name == "subgroups":
        lines.append(f"subgroups {len(report['idempotents'])}")
        for k, (cls, order) in enumerate(zip(report["idempotents"], report["orders"])):
            o = "" if order is None else f" order {order}"
            lines.append(f"{k}: classes {' '.join(map(str, cls))}{o}")
        for lo, hi in report["hasse"]:
            lines.append(f"cover {lo} < {hi}")
    elif name == "spectrum":
        for c in report["checks"]:
            lines.append(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']} expected {c['expected']} observed {c['observed']}")
        mult = report["multiplicities"]
        lines.append("multiplicities " + (" ".join(map(str, mult)) if mult else "inconsistent"))
    elif name == "label":
        for item in report["labels"]:
            lines.append(f"{item['vertex']} {item['name']} {item['class']} {item['expression']}")
        lines.append("sphere_sizes " + " ".join(map(str, report["sphere_sizes"])))
    elif name == "verify-relations":
        for r in report["relations"]:
            lines.append(f"{'holds' if r['holds'] else 'FAILS'}: {r['relation']} = 0")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cohconf", description="Chamber systems, adjacency algebras and coherent configurations.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--geometry", choices=GEOMETRIES)
        s.add_argument("--q", type=int)
        s.add_argument("--input", dest="graph_path", help="graph file")
        s.add_argument("--linespace", dest="linespace_path", help="line-space file")
        s.add_argument("--group", help="'builtin' or a group file")
        s.add_argument("--relations", dest="relations_path")
        s.add_argument("--preset", choices=PRESETS)
        s.add_argument("--base", type=int, default=0)
        s.add_argument("--format", dest="output", choices=("text", "json"), default="text")
        s.add_argument("--label-direction", choices=("from-base", "to-base"), default="from-base")
        s.add_argument("--dim-cap", type=int)
        s.add_argument("--force", action="store_true")
        s.add_argument("--seed", type=int, default=DEFAULT_SEED)
        s.add_argument("--threads", type=int, default=1)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k != "command"})
    try:
        report, failures = COMMANDS[args.command](cfg)
    except CliError as exc:
        print(json.dumps({"ok": False, "failures": [str(exc)]}) if cfg.output == "json" else f"error: {exc}",
              file=sys.stderr if cfg.output == "text" else sys.stdout)
        return 2
    if cfg.output == "json":
        report = {"ok": not failures, "failures": failures, **report}
        print(json.dumps(report, indent=1))
    else:
        print(_render_text(args.command, report))
        for f in failures:
            print(f"FAIL {f}", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
