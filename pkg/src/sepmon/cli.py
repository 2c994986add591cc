"""Command-line front end.

Every command reads one graph file (JSON, see the README) and writes
newline-delimited JSON records with sorted keys.  Exit status: 0 when
everything holds, 1 on a certified violation, 2 on an input error and 3 when
the only open outcomes are ``Unknown`` verdicts (bounds exhausted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import corpus
from .blocks import (
    building_blocks,
    eligible_pairs,
    pullback_data,
    verify_pullback_bounded,
)
from .cover import build_auxiliary, build_crowned_chain, satisfies_F, validate_cover
from .errors import SepMonError
from .graph import (
    SeparatedGraph,
    check_condition_F,
    classify_adaptable,
    condensation,
    load_graph,
    reduced_graph,
)
from .ktheory import check_kernel_cyclic_lemma, grothendieck_group
from .monoid import (
    Bounds,
    check_refinement,
    enumerate_classes,
    equal,
    is_square,
    parse_element,
    refinement_sweep,
)
from .pushout import corrupted_gamma, pairs_of_chain, validate_crowned_pair, verify_pushout_is_target

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3

FAILING = {"Fails", "Violation", "CounterexampleCandidate"}
OPEN = {"Unknown"}

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


@dataclass(frozen=True)
class RunConfig:
    depth: int = 8
    size: int = 64
    degree: int = 4
    fmt: str = "json"
    seed: int = 0

    def __post_init__(self):
        if min(self.depth, self.size, self.degree) < 0:
            raise ValueError("bounds must be non-negative")

    @property
    def bounds(self) -> Bounds:
        return Bounds(self.depth, self.size)


def _natural(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return n


def default_bounds() -> tuple[int, int, int]:
    """``(depth, size, degree)``, overridable through ``SEPMON_DEFAULT_BOUNDS``."""
    raw = os.environ.get("SEPMON_DEFAULT_BOUNDS")
    if not raw:
        return 8, 64, 4
    try:
        depth, size, degree = (int(x) for x in raw.split(","))
    except ValueError:
        raise SystemExit(f"SEPMON_DEFAULT_BOUNDS must be 'depth,size,degree', got {raw!r}")
    return depth, size, degree


def read_graph(path: str) -> SeparatedGraph:
    """A graph file, ``-`` for stdin, or ``corpus:NAME`` for a built-in example."""
    if path.startswith("corpus:"):
        name = path.split(":", 1)[1]
        if name not in corpus.CORPUS:
            raise SepMonError(f"no corpus entry {name!r}")
        return corpus.load(name)
    if path == "-":
        from .graph import parse_graph

        return parse_graph(sys.stdin.read())
    return load_graph(path)


def exit_code(records: list[dict]) -> int:
    statuses = {r.get("status") for r in records}
    if statuses & FAILING:
        return EXIT_VIOLATION
    if statuses & OPEN:
        return EXIT_UNKNOWN
    return EXIT_OK


# -- DOT ------------------------------------------------------------------------


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: SeparatedGraph, what: str = "graph") -> str:
    """Deterministic DOT text for the graph, its reduced graph or its poset."""
    P = condensation(g)
    lines = ["digraph G {"]
    if what == "graph":
        for v in sorted(g.vertices):
            lines.append(f"  {_q(v)};")
        for e in sorted(g.edges, key=lambda e: (e.src, g.group_index(e.id), e.id)):
            attrs = [f"label={_q(e.id)}", f"color={_q(PALETTE[g.group_index(e.id) % len(PALETTE)])}"]
            if P.component_of[e.src] != P.component_of[e.dst]:
                attrs.append("style=bold")
            lines.append(f"  {_q(e.src)} -> {_q(e.dst)} [{', '.join(attrs)}];")
    elif what == "reduced":
        R = reduced_graph(g)
        for lab in sorted(R.labels):
            lines.append(f"  {_q(lab)};")
        for eid, s, t in sorted(R.edges, key=lambda x: (R.labels[x[1]], x[0])):
            k = g.group_index(eid)
            lines.append(
                f"  {_q(R.labels[s])} -> {_q(R.labels[t])} "
                f"[label={_q(eid)}, color={_q(PALETTE[k % len(PALETTE)])}, style=bold];"
            )
    elif what == "poset":
        for c in sorted(range(len(P)), key=P.label):
            lines.append(f"  {_q(P.label(c))};")
        covers = sorted((P.label(c), P.label(d)) for c in range(len(P)) for d in P.lower_cover(c))
        for a, b in covers:
            lines.append(f"  {_q(a)} -> {_q(b)};")
    else:
        raise ValueError(f"unknown DOT view {what!r}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------


def cmd_validate(g: SeparatedGraph, cfg: RunConfig, args) -> list[dict]:
    from .errors import NotAdaptable

    P = condensation(g)
    rec = {
        "command": "validate",
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "components": [P.label(c) for c in range(len(P))],
    }
    try:
        dec = classify_adaptable(g, P)
    except NotAdaptable as exc:
        rec.update(adaptable=False, reason=exc.reason, detail=str(exc), status="Fails")
        return [rec]
    cf = check_condition_F(g, dec)
    rec.update(
        adaptable=True,
        free=sorted(P.label(c) for c in dec.free),
        regular=sorted(P.label(c) for c in dec.regular),
        conditionF=cf.to_json(P),
        status="Holds",
    )
    return [rec]


def _aux(g: SeparatedGraph, auxiliary: bool):
    if not auxiliary:
        return g
    return build_auxiliary(g)[0]


def cmd_cover(g, cfg, args):
    F, cov = build_auxiliary(g)
    v = validate_cover(F, g, cov.vmap, cov.emap)
    return [{
        "command": "cover",
        "auxiliary": F.to_json(),
        "map": cov.to_json(),
        "cover": v.to_json(),
        "conditionF": satisfies_F(F),
        "status": "Holds" if v and satisfies_F(F) else "Fails",
    }]


def cmd_chain(g, cfg, args):
    ch = build_crowned_chain(g)
    out = []
    for i, (step, p) in enumerate(zip(ch.to_json(), pairs_of_chain(ch))):
        v = validate_crowned_pair(p.g1, p.g2, p.cover, p.v1, p.v2)
        out.append({"command": "chain", "index": i, **step, "pair": v.to_json(), "status": v.status.value})
    out.append({"command": "chain", "length": len(ch), "status": "Holds"})
    return out


def cmd_blocks(g, cfg, args):
    blocks = building_blocks(g)
    return [{
        "command": "blocks",
        "count": len(blocks),
        "blocks": [B.to_json() for B in blocks],
        "status": "Holds",
    }]


def cmd_eq(g, cfg, args):
    v = equal(g, parse_element(args.x), parse_element(args.y), cfg.bounds)
    return [{"command": "eq", "x": args.x, "y": args.y, **v.to_json()}]


def cmd_enumerate(g, cfg, args):
    rep = enumerate_classes(g, cfg.degree, cfg.bounds)
    status = "Unknown" if rep.unknown_pairs else "Holds"
    return [{"command": "enumerate", "degree": cfg.degree, **rep.to_json(), "status": status}]


def cmd_refine(g, cfg, args):
    if args.elements:
        if len(args.elements) != 4:
            raise SepMonError("refine takes either no elements or exactly four: a b c d")
        a, b, c, d = (parse_element(x) for x in args.elements)
        v = check_refinement(g, a, b, c, d, cfg.bounds)
        ok = is_square(g, a, b, c, d, v.square, cfg.bounds)
        return [{"command": "refine", **v.to_json(), "verified": ok, "status": v.status.value if ok else "Fails"}]
    rep = refinement_sweep(g, cfg.degree, cfg.bounds, sample=args.sample, seed=cfg.seed)
    return [{"command": "refine", "degree": cfg.degree, **rep.to_json()}]


def _pullbacks(g, cfg, kernel_only=False):
    dec = classify_adaptable(g)
    out = []
    for J, v in eligible_pairs(g, dec):
        d = pullback_data(g, dec, J, v, bounds=cfg.bounds)
        base = {"J": sorted(J), "v": v, "r": d.r}
        if not kernel_only:
            rep = verify_pullback_bounded(d, cfg.degree, cfg.bounds)
            status = rep.status if all(d.checks.values()) else "Fails"
            out.append({"step": "pullback", **base, "checks": dict(sorted(d.checks.items())),
                        "degree": cfg.degree, **rep.to_json(), "status": status})
        for i in range(d.r):
            k = check_kernel_cyclic_lemma(d, i)
            out.append({"step": "kernel_lemma", **base, "i": i, **k.to_json()})
    return out


def _require_F(g):
    if not check_condition_F(g, classify_adaptable(g)):
        raise SepMonError("graph does not satisfy condition (F); pass --auxiliary to use its auxiliary graph")


def cmd_pullback_verify(g, cfg, args):
    g = _aux(g, args.auxiliary)
    _require_F(g)
    recs = [r for r in _pullbacks(g, cfg) if r["step"] == "pullback"]
    return [{"command": "pullback-verify", **r} for r in recs]


def cmd_kernel_lemma(g, cfg, args):
    g = _aux(g, args.auxiliary)
    _require_F(g)
    return [{"command": "kernel-lemma", **r} for r in _pullbacks(g, cfg, kernel_only=True)]


def _pushouts(g, cfg, negative_control=False):
    out = []
    for i, p in enumerate(pairs_of_chain(build_crowned_chain(g))):
        base = {"index": i, "crown": {"v1": p.v1, "v2": p.v2, "v": p.v}}
        rep = verify_pushout_is_target(p, cfg.bounds)
        out.append({"step": "pushout", **base, **rep.to_json()})
        if negative_control:
            neg = verify_pushout_is_target(p, cfg.bounds, gamma_override=corrupted_gamma(p))
            # the corrupted section must be rejected
            out.append({
                "step": "pushout_negative_control", **base,
                "report": neg.to_json(),
                "status": "Holds" if neg.status == "Fails" else "Fails",
            })
    return out


def cmd_pushout_verify(g, cfg, args):
    return [{"command": "pushout-verify", **r} for r in _pushouts(g, cfg, args.negative_control)]


def cmd_k0(g, cfg, args):
    G = grothendieck_group(g)
    return [{"command": "k0", "group": str(G), **G.to_json(), "status": "Holds"}]


def cmd_dot(g, cfg, args):
    return to_dot(g, args.what)


def cmd_pipeline(g: SeparatedGraph, cfg: RunConfig, name: str = "input") -> list[dict]:
    """Cover, crowned chain, pushouts, blocks, pullbacks, kernel lemma, K0 and
    the refinement sweep, one record per step."""
    recs: list[dict] = []
    dec = classify_adaptable(g)
    cf = check_condition_F(g, dec)
    recs.append({"step": "validate", "adaptable": True, "conditionF": cf.holds, "status": "Holds"})
    F, cov = build_auxiliary(g, dec)
    cv = validate_cover(F, g, cov.vmap, cov.emap)
    recs.append({
        "step": "cover", "vertices": len(F.vertices), "edges": len(F.edges),
        "conditionF": satisfies_F(F), "cover": cv.status.value,
        "status": "Holds" if cv and satisfies_F(F) else "Fails",
    })
    ch = build_crowned_chain(g, dec)
    comp = ch.composite()
    same = dict(comp.vmap) == dict(cov.vmap) and dict(comp.emap) == dict(cov.emap)
    recs.append({"step": "chain", "length": len(ch), "composite_matches_cover": same,
                 "status": "Holds" if same else "Fails"})
    for i, p in enumerate(pairs_of_chain(ch)):
        v = validate_crowned_pair(p.g1, p.g2, p.cover, p.v1, p.v2)
        recs.append({"step": "crowned_pair", "index": i, "crown": {"v1": p.v1, "v2": p.v2, "v": p.v},
                     "status": v.status.value, "clauses": v.clauses()})
    recs.extend(_pushouts(g, cfg))
    blocks = building_blocks(F)
    recs.append({"step": "blocks", "count": len(blocks), "blocks": [sorted(B.vertices) for B in blocks],
                 "status": "Holds"})
    recs.extend(_pullbacks(F, cfg))
    G = grothendieck_group(g)
    recs.append({"step": "k0", "group": str(G), **G.to_json(), "status": "Holds"})
    rep = refinement_sweep(g, cfg.degree, cfg.bounds)
    recs.append({"step": "refinement", "degree": cfg.degree, **rep.to_json()})
    for r in recs:
        r["graph"] = name
    summary = {"graph": name, "step": "summary", "records": len(recs)}
    code = exit_code(recs)
    summary["status"] = {EXIT_OK: "Verified", EXIT_VIOLATION: "Fails", EXIT_UNKNOWN: "Unknown"}[code]
    recs.append(summary)
    return recs


COMMANDS = {
    "validate": cmd_validate,
    "cover": cmd_cover,
    "chain": cmd_chain,
    "blocks": cmd_blocks,
    "eq": cmd_eq,
    "enumerate": cmd_enumerate,
    "refine": cmd_refine,
    "pullback-verify": cmd_pullback_verify,
    "pushout-verify": cmd_pushout_verify,
    "k0": cmd_k0,
    "kernel-lemma": cmd_kernel_lemma,
    "dot": cmd_dot,
}


def build_parser() -> argparse.ArgumentParser:
    depth, size, degree = default_bounds()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=_natural, default=depth, help="rewrite depth bound")
    common.add_argument("--size", type=_natural, default=size, help="element size bound")
    common.add_argument("--degree", type=_natural, default=degree, help="window degree bound")
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")

    ap = argparse.ArgumentParser(prog="sepmon", description="Separated graph monoids.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        return p

    p = add("pipeline", "run every check on a graph or on the built-in corpus")
    p.add_argument("path", nargs="?")
    p.add_argument("--corpus", action="store_true", help="run on every built-in corpus graph")
    for name, help_ in (
        ("validate", "adaptability and condition (F)"),
        ("cover", "auxiliary graph with condition (F) and its cover"),
        ("chain", "crowned chain from the auxiliary graph back to the input"),
        ("blocks", "building blocks"),
        ("k0", "Grothendieck group of the graph monoid"),
    ):
        add(name, help_).add_argument("path")
    p = add("eq", "decide x ~ y within the bounds")
    p.add_argument("path")
    p.add_argument("x")
    p.add_argument("y")
    add("enumerate", "equality classes of the degree window").add_argument("path")
    p = add("refine", "refinement square for a + b ~ c + d, or a sweep of the window")
    p.add_argument("path")
    p.add_argument("elements", nargs="*", metavar="a b c d")
    p.add_argument("--sample", type=_natural, default=None, help="check a random sample of equations")
    for name in ("pullback-verify", "kernel-lemma"):
        p = add(name, f"{name.replace('-', ' ')} at every eligible (J, v)")
        p.add_argument("path")
        p.add_argument("--auxiliary", action="store_true", help="work on the auxiliary graph")
    p = add("pushout-verify", "crowned pushouts along the crowned chain")
    p.add_argument("path")
    p.add_argument("--negative-control", action="store_true", help="also check that a corrupted section fails")
    p = add("dot", "DOT rendering")
    p.add_argument("path")
    p.add_argument("--what", choices=("graph", "reduced", "poset"), default="graph")
    return ap


def _text(rec: dict) -> str:
    head = rec.get("step") or rec.get("command", "")
    keys = [k for k in sorted(rec) if k not in ("step", "command", "status", "graph")]
    simple = [f"{k}={rec[k]}" for k in keys if isinstance(rec[k], (int, str, bool))]
    prefix = f"{rec['graph']} " if isinstance(rec.get("graph"), str) else ""
    return f"{prefix}{head}: {rec.get('status', '')} {' '.join(simple)}".rstrip()


def emit(records, fmt: str, out=None):
    out = out or sys.stdout
    for r in records:
        if fmt == "text":
            out.write(_text(r) + "\n")
        else:
            out.write(json.dumps(r, sort_keys=True) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.depth, args.size, args.degree, args.format, args.seed)
    try:
        if cfg.depth < 0 or cfg.size < 0 or cfg.degree < 0:
            raise SepMonError("bounds must be nonnegative")
        if args.command == "pipeline":
            if args.corpus:
                jobs = [(n, corpus.load(n)) for n in corpus.names()]
            elif args.path:
                jobs = [(args.path, read_graph(args.path))]
            else:
                raise SepMonError("pipeline needs a path or --corpus")
            records = [r for n, g in jobs for r in cmd_pipeline(g, cfg, n)]
        else:
            g = read_graph(args.path)
            if args.command == "dot" or cfg.fmt == "dot":
                if cfg.fmt == "dot" and args.command not in ("dot", "validate", "cover"):
                    raise SepMonError(f"--format dot is not available for {args.command}")
                if args.command == "cover":
                    g = build_auxiliary(g)[0]
                sys.stdout.write(to_dot(g, getattr(args, "what", "graph")))
                return EXIT_OK
            records = COMMANDS[args.command](g, cfg, args)
    except (SepMonError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(records, cfg.fmt)
    return exit_code(records)


if __name__ == "__main__":
    sys.exit(main())
