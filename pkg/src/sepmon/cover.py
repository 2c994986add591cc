"""Cover morphisms and the auxiliary graph satisfying condition (F).

The auxiliary graph is built by order-induction on the components, from the
bottom up.  When a component ``[v]`` is hit by ``r >= 2`` collapsed groups
coming from outside, the tree ``T(v)`` is replaced by ``r`` disjoint copies
and each group is rerouted to its own copy.  Copies of a vertex ``w`` are
named ``w#1, ..., w#r`` and copies of an edge ``e`` are ``e#1, ...``; the
rerouted edges keep their tokens.

The same construction, run with two copies at a time, yields a chain of
crowned pairs from the auxiliary graph back to the input graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import IllDefined
from .graph import (
    AdaptableDecoration,
    Edge,
    SeparatedGraph,
    build_separated_graph,
    check_condition_F,
    classify_adaptable,
    condensation,
    incoming_parts,
)
from .monoid import DEFAULT_BOUNDS, Bounds, MonoidElement, Status, hom_is_well_defined


@dataclass(frozen=True)
class CoverMap:
    src: SeparatedGraph
    dst: SeparatedGraph
    vmap: Mapping[str, str]
    emap: Mapping[str, str]

    def compose(self, after: "CoverMap") -> "CoverMap":
        """``after`` applied after ``self``."""
        return CoverMap(
            self.src,
            after.dst,
            {v: after.vmap[w] for v, w in self.vmap.items()},
            {e: after.emap[f] for e, f in self.emap.items()},
        )

    def is_bijective(self) -> bool:
        return len(set(self.vmap.values())) == len(self.vmap) and len(set(self.emap.values())) == len(self.emap)

    def to_json(self) -> dict:
        return {"vmap": dict(sorted(self.vmap.items())), "emap": dict(sorted(self.emap.items()))}


def identity_cover(g: SeparatedGraph) -> CoverMap:
    return CoverMap(g, g, {v: v for v in g.vertices}, {e.id: e.id for e in g.edges})


@dataclass(frozen=True)
class CoverVerdict:
    status: Status
    clause: str | None = None
    witness: str | None = None

    def __bool__(self):
        return self.status is Status.Holds

    def to_json(self) -> dict:
        out = {"status": self.status.value}
        if self.clause:
            out["clause"] = self.clause
            out["witness"] = self.witness
        return out


def _fail(clause, witness):
    return CoverVerdict(Status.Fails, clause, witness)


def validate_cover(src: SeparatedGraph, dst: SeparatedGraph, vmap: Mapping[str, str], emap: Mapping[str, str]) -> CoverVerdict:
    """Check the cover axioms; the first violated clause is reported."""
    for v in src.vertices:
        if v not in vmap or vmap[v] not in dst._groups:
            return _fail("totality", f"vertex {v!r}")
    for e in src.edges:
        if e.id not in emap or emap[e.id] not in dst.edge:
            return _fail("totality", f"edge {e.id!r}")
    for e in src.edges:
        f = dst.edge[emap[e.id]]
        if vmap[e.src] != f.src or vmap[e.dst] != f.dst:
            return _fail("homomorphism", f"edge {e.id!r} maps to {f.id!r}")
    miss_v = sorted(set(dst.vertices) - set(vmap.values()))
    if miss_v:
        return _fail("surjectivity", f"vertex {miss_v[0]!r} not hit")
    miss_e = sorted(set(dst.edge) - set(emap.values()))
    if miss_e:
        return _fail("surjectivity", f"edge {miss_e[0]!r} not hit")
    for v in src.vertices:
        image = [emap[e] for e in src.out_edges(v)]
        if len(set(image)) != len(image) or set(image) != set(dst.out_edges(vmap[v])):
            return _fail("fiber_bijection", f"edges leaving {v!r}")
        targets = set(dst.groups_at(vmap[v]))
        for X in src.groups_at(v):
            if frozenset(emap[e] for e in X) not in targets:
                return _fail("group_preservation", f"group {sorted(X)} at {v!r}")
    return CoverVerdict(Status.Holds)


def induced_monoid_hom(c: CoverMap, bounds: Bounds = DEFAULT_BOUNDS, check: bool = True) -> dict[str, MonoidElement]:
    """``a_w -> a_phi(w)``; with ``check`` the relations are verified in the target."""
    mapping = {v: MonoidElement.gen(w) for v, w in c.vmap.items()}
    if check:
        verdict = hom_is_well_defined(c.src, c.dst, mapping, bounds)
        if verdict.status is not Status.Holds:
            raise IllDefined(f"cover does not induce a homomorphism: {verdict.to_json()}")
    return mapping


# -- the copying step ------------------------------------------------------------


def _copy_tree(F: SeparatedGraph, tree: frozenset[str], component: frozenset[str], assignments):
    """Replace the tree by one copy per assignment.

    ``assignments`` is a list of ``(suffix, parts)``: a suffix ``None`` keeps
    the original tokens, and every edge of the given parts whose range lies
    in ``component`` is rerouted to that copy.  Returns the new graph and
    the projection back onto ``F``."""
    vmap: dict[str, str] = {v: v for v in F.vertices if v not in tree}
    emap: dict[str, str] = {}
    reroute: dict[str, str] = {}
    for suffix, parts in assignments:
        for X in parts:
            for e in X:
                if F.dst(e) in component:
                    reroute[e] = suffix or ""

    edges: list[Edge] = []
    for e in F.edges:
        if e.src in tree:
            continue
        if e.id in reroute:
            edges.append(Edge(e.id, e.src, e.dst + reroute[e.id]))
        else:
            edges.append(e)
        emap[e.id] = e.id
    groups = {v: [sorted(X) for X in gs] for v, gs in F.groups if v not in tree}

    for suffix, _ in assignments:
        s = suffix or ""
        for v in sorted(tree):
            vmap[v + s] = v
            groups[v + s] = [sorted(f + s for f in X) for X in F.groups_at(v)]
        for e in F.edges:
            if e.src in tree:
                edges.append(Edge(e.id + s, e.src + s, e.dst + s))
                emap[e.id + s] = e.id

    G = build_separated_graph(sorted(vmap), edges, groups)
    return G, CoverMap(G, F, vmap, emap)


def _part_edges(F: SeparatedGraph, dec: AdaptableDecoration, key) -> frozenset[str]:
    c, k = key
    comp = dec.poset.components[c]
    if k is not None:
        (v,) = comp
        return F.groups_at(v)[k]
    return frozenset(e for w in comp for e in F.out_edges(w))


@dataclass(frozen=True)
class _Step:
    before: SeparatedGraph
    v_bar: str
    tree: frozenset[str]
    component: frozenset[str]
    parts: tuple[frozenset[str], ...]


def _construction(g: SeparatedGraph, dec: AdaptableDecoration | None = None):
    """Run the order-induction; yields every step with ``r >= 2``."""
    dec = dec or classify_adaptable(g)
    I = dec.poset
    F = g
    psi = {v: v for v in g.vertices}
    epsi = {e.id: e.id for e in g.edges}
    done: set[int] = set()
    steps = []
    while len(done) < len(I):
        minimal = [c for c in range(len(I)) if c not in done and all(d in done for d in I.down(c) - {c})]
        c = min(minimal, key=lambda i: min(I.components[i]))
        done.add(c)
        v = min(I.components[c])
        (v_bar,) = [w for w in F.vertices if psi[w] == v]
        decF = classify_adaptable(F)
        cF = decF.component(v_bar)
        keys = incoming_parts(F, decF, cF)
        if len(keys) <= 1:
            continue
        parts = tuple(_part_edges(F, decF, k) for k in keys)
        PF = decF.poset
        tree = PF.vertices_of(PF.down(cF))
        comp = PF.components[cF]
        steps.append(_Step(F, v_bar, tree, comp, parts))
        F, cov = _copy_tree(F, tree, comp, [(f"#{j + 1}", [X]) for j, X in enumerate(parts)])
        psi = {w: psi[u] for w, u in cov.vmap.items()}
        epsi = {e: epsi[f] for e, f in cov.emap.items()}
    return F, psi, epsi, steps


def build_auxiliary(g: SeparatedGraph, dec: AdaptableDecoration | None = None) -> tuple[SeparatedGraph, CoverMap]:
    """An adaptable graph with condition (F) and a cover onto ``g``."""
    F, psi, epsi, _ = _construction(g, dec)
    return F, CoverMap(F, g, psi, epsi)


# -- crowned chains ----------------------------------------------------------------


@dataclass(frozen=True)
class CrownedChain:
    graphs: tuple[SeparatedGraph, ...]
    maps: tuple[CoverMap, ...]
    crowns: tuple[tuple[str, str, str], ...]

    def __len__(self):
        return len(self.maps)

    def composite(self) -> CoverMap:
        out = identity_cover(self.graphs[0])
        for m in self.maps:
            out = out.compose(m)
        return out

    def to_json(self) -> list[dict]:
        return [
            {"step": i, "source": self.graphs[i].to_json(), "map": m.to_json(),
             "crown": {"v1": c[0], "v2": c[1], "v": c[2]}}
            for i, (m, c) in enumerate(zip(self.maps, self.crowns))
        ]


def build_crowned_chain(g: SeparatedGraph, dec: AdaptableDecoration | None = None) -> CrownedChain:
    """Chain ``F_0 -> F_1 -> ... -> F_m = g`` of crowned pairs with ``F_0`` the auxiliary graph.

    A copying step with ``r`` groups becomes ``r - 1`` steps that each split
    off one copy: step ``k`` sends ``X_k`` to copy ``#k`` while the remaining
    groups keep the original tree, and the last step renames the two
    remaining trees ``#(r-1)`` and ``#r``."""
    _, _, _, steps = _construction(g, dec)
    forward: list[tuple[SeparatedGraph, SeparatedGraph, CoverMap, tuple[str, str, str]]] = []
    for st in steps:
        F = st.before
        r = len(st.parts)
        for k in range(1, r):
            if k < r - 1:
                assign = [(f"#{k}", [st.parts[k - 1]]), (None, list(st.parts[k:]))]
                crown = (st.v_bar + f"#{k}", st.v_bar, st.v_bar)
            else:
                assign = [(f"#{k}", [st.parts[k - 1]]), (f"#{r}", [st.parts[r - 1]])]
                crown = (st.v_bar + f"#{k}", st.v_bar + f"#{r}", st.v_bar)
            G, cov = _copy_tree(F, st.tree, st.component, assign)
            forward.append((G, F, cov, crown))
            F = G
    forward.reverse()
    graphs = tuple([f[0] for f in forward] + [g]) if forward else (g,)
    return CrownedChain(graphs, tuple(f[2] for f in forward), tuple(f[3] for f in forward))


def satisfies_F(g: SeparatedGraph) -> bool:
    return bool(check_condition_F(g, classify_adaptable(g, condensation(g))))
