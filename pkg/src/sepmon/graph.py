"""Separated graphs, their condensation posets and the structural checks.

A separated graph is a finite directed graph together with a partition of
the edges leaving each vertex into nonempty *groups*.  Every group ``X`` at
a vertex ``v`` contributes one defining relation ``a_v = sum(a_r(e), e in X)``
to the monoid of the graph (see :mod:`sepmon.monoid`).

All objects here are immutable and every ordering is lexicographic on the
string tokens, so results are reproducible.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    DanglingEndpoint,
    DuplicateToken,
    GroupNotPartition,
    NotAdaptable,
    NotHereditary,
    NotSaturated,
    ParseError,
    UnknownVertex,
)


class Edge(NamedTuple):
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class SeparatedGraph:
    """Validated separated graph; build it with :func:`build_separated_graph`.

    ``vertices`` and ``edges`` are sorted by token.  ``groups`` lists, for each
    vertex that emits edges, its groups in the order they were given.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    groups: tuple[tuple[str, tuple[frozenset[str], ...]], ...]

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _groups(self) -> dict[str, tuple[frozenset[str], ...]]:
        out = {v: () for v in self.vertices}
        out.update(dict(self.groups))
        return out

    @cached_property
    def _group_index(self) -> dict[str, int]:
        return {e: k for v, gs in self.groups for k, X in enumerate(gs) for e in X}

    @cached_property
    def _out(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e.id)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def _successors(self) -> dict[str, frozenset[str]]:
        return {v: frozenset(self.edge[e].dst for e in es) for v, es in self._out.items()}

    def groups_at(self, v: str) -> tuple[frozenset[str], ...]:
        return self._groups[v]

    def group_index(self, edge_id: str) -> int:
        """Position of the group containing ``edge_id`` within its source's groups."""
        return self._group_index[edge_id]

    def out_edges(self, v: str) -> tuple[str, ...]:
        return self._out[v]

    def successors(self, v: str) -> frozenset[str]:
        return self._successors[v]

    def is_sink(self, v: str) -> bool:
        return not self._out[v]

    def src(self, e: str) -> str:
        return self.edge[e].src

    def dst(self, e: str) -> str:
        return self.edge[e].dst

    def ranges(self, X: Iterable[str]) -> list[str]:
        """Multiset of ranges of the edges in ``X`` (sorted by edge token)."""
        return [self.edge[e].dst for e in sorted(X)]

    def relations(self) -> list[tuple[str, int, frozenset[str]]]:
        """All defining relations as ``(vertex, group index, group)``."""
        return [(v, k, X) for v in self.vertices for k, X in enumerate(self._groups[v])]

    def to_json(self) -> dict:
        return graph_to_json(self)

    def __repr__(self):
        return f"SeparatedGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def build_separated_graph(
    vertices: Iterable[str],
    edges: Iterable,
    groups: Mapping[str, Iterable[Iterable[str]]] | None = None,
) -> SeparatedGraph:
    """Validate raw data and return a :class:`SeparatedGraph`.

    ``edges`` holds ``(id, src, dst)`` triples or ``{"id", "src", "dst"}``
    mappings.  ``groups`` maps a vertex to its list of edge-id groups; sinks
    may be omitted.
    """
    verts = list(vertices)
    seen: set[str] = set()
    for v in verts:
        if v in seen:
            raise DuplicateToken(f"vertex {v!r} listed twice")
        seen.add(v)

    edge_list: list[Edge] = []
    edge_ids: set[str] = set()
    for raw in edges:
        e = Edge(raw["id"], raw["src"], raw["dst"]) if isinstance(raw, Mapping) else Edge(*raw)
        if e.id in edge_ids:
            raise DuplicateToken(f"edge {e.id!r} listed twice")
        edge_ids.add(e.id)
        for end in (e.src, e.dst):
            if end not in seen:
                raise DanglingEndpoint(f"edge {e.id!r} has endpoint {end!r} which is not a vertex")
        edge_list.append(e)
    by_id = {e.id: e for e in edge_list}

    groups = dict(groups or {})
    placed: dict[str, str] = {}
    norm: dict[str, tuple[frozenset[str], ...]] = {}
    for v, gs in groups.items():
        if v not in seen:
            raise GroupNotPartition(v, None, "groups given for an unknown vertex")
        out = []
        for X in gs:
            X = list(X)
            if not X:
                raise GroupNotPartition(v, None, "empty group")
            if len(set(X)) != len(X):
                raise GroupNotPartition(v, X[0], "edge repeated inside a group")
            for e in X:
                if e not in by_id:
                    raise GroupNotPartition(v, e, "unknown edge")
                if by_id[e].src != v:
                    raise GroupNotPartition(v, e, "edge does not start at this vertex")
                if e in placed:
                    raise GroupNotPartition(v, e, "edge appears in more than one group")
                placed[e] = v
            out.append(frozenset(X))
        if out:
            norm[v] = tuple(out)
    for e in edge_list:
        if e.id not in placed:
            raise GroupNotPartition(e.src, e.id, "edge is not covered by any group")

    return SeparatedGraph(
        vertices=tuple(sorted(verts)),
        edges=tuple(sorted(edge_list)),
        groups=tuple(sorted(norm.items())),
    )


# -- JSON ingestion ---------------------------------------------------------


def graph_from_json(obj: Mapping) -> SeparatedGraph:
    if not isinstance(obj, Mapping):
        raise ParseError("top-level JSON value must be an object")
    try:
        vertices = obj["vertices"]
        edges = obj.get("edges", [])
        groups = obj.get("groups", {})
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from None
    for raw in edges:
        if not isinstance(raw, Mapping) or not {"id", "src", "dst"} <= set(raw):
            raise ParseError(f"malformed edge record {raw!r}")
    return build_separated_graph(vertices, edges, groups)


def parse_graph(text: str) -> SeparatedGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return graph_from_json(obj)


def load_graph(path) -> SeparatedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def graph_to_json(g: SeparatedGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in g.edges],
        "groups": {v: [sorted(X) for X in gs] for v, gs in g.groups},
    }


# -- posets -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CondensationPoset:
    """Strongly connected components ordered by reachability.

    Component ``i <= j`` when some vertex of component ``j`` reaches some
    vertex of component ``i``.  Components are numbered in order of their
    least vertex token.
    """

    components: tuple[frozenset[str], ...]
    leq: frozenset[tuple[int, int]]
    component_of: Mapping[str, int] = field(repr=False)

    def __len__(self):
        return len(self.components)

    def le(self, i: int, j: int) -> bool:
        return (i, j) in self.leq

    def lt(self, i: int, j: int) -> bool:
        return i != j and (i, j) in self.leq

    @cached_property
    def _down(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(i for i in range(len(self)) if self.le(i, j)) for j in range(len(self)))

    @cached_property
    def _up(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(j for j in range(len(self)) if self.le(i, j)) for i in range(len(self)))

    def down(self, i: int) -> frozenset[int]:
        return self._down[i]

    def up(self, i: int) -> frozenset[int]:
        return self._up[i]

    def maximal(self) -> list[int]:
        return [i for i in range(len(self)) if len(self.up(i)) == 1]

    def minimal(self) -> list[int]:
        return [i for i in range(len(self)) if len(self.down(i)) == 1]

    def lower_cover(self, i: int) -> list[int]:
        below = self.down(i) - {i}
        return [q for q in sorted(below) if not any(self.lt(q, x) for x in below)]

    def label(self, i: int) -> str:
        return ",".join(sorted(self.components[i]))

    def vertices_of(self, idxs: Iterable[int]) -> frozenset[str]:
        return frozenset().union(*(self.components[i] for i in idxs))


def poset_from_covers(labels: Iterable[str], covers: Iterable[tuple[str, str]]) -> CondensationPoset:
    """Abstract poset on ``labels`` generated by ``(lower, upper)`` pairs."""
    labels = sorted(labels)
    idx = {x: i for i, x in enumerate(labels)}
    leq = {(i, i) for i in range(len(labels))}
    leq |= {(idx[a], idx[b]) for a, b in covers}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in [(p, q) for p in list(leq) for q in list(leq)]:
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True
    return CondensationPoset(tuple(frozenset([x]) for x in labels), frozenset(leq), idx)


def _reach(g: SeparatedGraph) -> dict[str, frozenset[str]]:
    reach = {}
    for v in g.vertices:
        seen = {v}
        todo = deque([v])
        while todo:
            u = todo.popleft()
            for w in g.successors(u):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        reach[v] = frozenset(seen)
    return reach


def condensation(g: SeparatedGraph) -> CondensationPoset:
    reach = _reach(g)
    comps: list[frozenset[str]] = []
    placed: set[str] = set()
    for v in g.vertices:  # sorted, so components come out ordered by least member
        if v in placed:
            continue
        comp = frozenset(w for w in reach[v] if v in reach[w])
        placed |= comp
        comps.append(comp)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    leq = frozenset(
        (comp_of[w], comp_of[v]) for v in g.vertices for w in reach[v]
    )
    return CondensationPoset(tuple(comps), leq, comp_of)


def is_forest(p: CondensationPoset) -> bool:
    """True when every up-set is a chain (each element lies in exactly one tree)."""
    for i in range(len(p)):
        above = sorted(p.up(i))
        for a, b in combinations(above, 2):
            if not (p.le(a, b) or p.le(b, a)):
                return False
    return True


def lower_subsets(p: CondensationPoset) -> list[frozenset[int]]:
    """The lattice of lower subsets, ordered by size then sorted members."""
    order = sorted(range(len(p)), key=lambda i: (len(p.down(i)), i))
    out: list[frozenset[int]] = []

    def grow(k: int, chosen: frozenset[int]):
        if k == len(order):
            out.append(chosen)
            return
        i = order[k]
        grow(k + 1, chosen)
        if p.down(i) - {i} <= chosen:
            grow(k + 1, chosen | {i})

    grow(0, frozenset())
    return sorted(out, key=lambda s: (len(s), sorted(s)))


# -- adaptability -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AdaptableDecoration:
    """Free/regular split of the components of an adaptable separated graph.

    ``loops[p]`` lists ``(group index, loop edge)`` for a non-minimal free
    component, ``connectors[p]`` the edges leaving component ``p`` and
    ``subgraph_edges[p]`` the edge set of the subgraph ``E_p``.
    """

    poset: CondensationPoset
    free: frozenset[int]
    regular: frozenset[int]
    loops: Mapping[int, tuple[tuple[int, str], ...]]
    connectors: Mapping[int, tuple[str, ...]]
    subgraph_edges: Mapping[int, frozenset[str]]

    def component(self, v: str) -> int:
        return self.poset.component_of[v]

    def is_free(self, v: str) -> bool:
        return self.poset.component_of[v] in self.free

    @cached_property
    def free_vertices(self) -> frozenset[str]:
        return self.poset.vertices_of(self.free)

    def parts_at(self, g: SeparatedGraph, v: str) -> list[tuple[tuple[int, int | None], frozenset[str]]]:
        """The collapsed groups at ``v``: every group for a free vertex, the
        whole edge set leaving the component for a regular one.  Each part is
        returned as ``(key, edges)`` with ``key = (component, group index or None)``."""
        c = self.component(v)
        if c in self.free:
            return [((c, k), X) for k, X in enumerate(g.groups_at(v))]
        edges = frozenset(e for w in self.poset.components[c] for e in g.out_edges(w))
        return [((c, None), edges)] if edges else []

    def part_key(self, g: SeparatedGraph, edge_id: str) -> tuple[int, int | None]:
        v = g.src(edge_id)
        c = self.component(v)
        return (c, g.group_index(edge_id)) if c in self.free else (c, None)


def classify_adaptable(g: SeparatedGraph, poset: CondensationPoset | None = None) -> AdaptableDecoration:
    """Split the components into free and regular ones, or raise :class:`NotAdaptable`."""
    p = poset or condensation(g)
    free, regular = set(), set()
    loops: dict[int, tuple[tuple[int, str], ...]] = {}
    connectors: dict[int, tuple[str, ...]] = {}
    sub: dict[int, frozenset[str]] = {}

    for c, comp in enumerate(p.components):
        out = [e for v in sorted(comp) for e in g.out_edges(v)]
        internal = frozenset(e for e in out if g.dst(e) in comp)
        conn = tuple(e for e in out if g.dst(e) not in comp)
        for e in conn:
            if not p.lt(p.component_of[g.dst(e)], c):
                raise NotAdaptable("ConnectorNotDescending", f"edge {e!r}")
        connectors[c] = conn

        if len(comp) > 1:
            for w in sorted(comp):
                if len(g.groups_at(w)) != 1:
                    raise NotAdaptable(
                        "MultiVertexComponentWithSeparation",
                        f"vertex {w!r} has {len(g.groups_at(w))} groups in a strongly connected component",
                    )
                n_int = sum(1 for e in g.out_edges(w) if e in internal)
                if n_int < 2:
                    raise NotAdaptable("RegularVertexTooFewEdges", f"vertex {w!r} has {n_int} internal edges")
            regular.add(c)
            sub[c] = internal
            continue

        (v,) = comp
        gs = g.groups_at(v)
        if not gs:
            free.add(c)
            sub[c] = frozenset()
            continue
        if len(gs) == 1 and len(internal) >= 2:
            regular.add(c)
            sub[c] = internal
            continue
        if not conn:
            raise NotAdaptable("MinimalFreeNotSink", f"vertex {v!r} is minimal but emits edges")
        lp = []
        for k, X in enumerate(gs):
            ls = sorted(e for e in X if e in internal)
            if len(ls) != 1:
                raise NotAdaptable(
                    "FreeGroupMissingLoop", f"group {k} at {v!r} holds {len(ls)} loops, expected exactly one"
                )
            if len(X) < 2:
                raise NotAdaptable("FreeGroupNoConnector", f"group {k} at {v!r} has no connector")
            lp.append((k, ls[0]))
        free.add(c)
        loops[c] = tuple(lp)
        sub[c] = internal

    return AdaptableDecoration(p, frozenset(free), frozenset(regular), loops, connectors, sub)


@dataclass(frozen=True)
class ConditionF:
    holds: bool
    component: tuple[str, ...] | None = None
    emitters: tuple[tuple[int, int | None], ...] = ()

    def __bool__(self):
        return self.holds

    def to_json(self, poset: CondensationPoset | None = None) -> dict:
        out = {"holds": self.holds}
        if not self.holds:
            out["component"] = list(self.component)
            out["emitters"] = [
                {"component": poset.label(c) if poset else c, "group": k} for c, k in self.emitters
            ]
        return out


def incoming_parts(g: SeparatedGraph, dec: AdaptableDecoration, c: int) -> list[tuple[int, int | None]]:
    """Keys of the collapsed groups outside component ``c`` that hit ``c``."""
    comp = dec.poset.components[c]
    keys = {
        dec.part_key(g, e.id)
        for e in g.edges
        if e.dst in comp and e.src not in comp
    }
    return sorted(keys, key=lambda k: (k[0], -1 if k[1] is None else k[1]))


def check_condition_F(g: SeparatedGraph, dec: AdaptableDecoration) -> ConditionF:
    for c in range(len(dec.poset)):
        keys = incoming_parts(g, dec, c)
        if len(keys) > 1:
            return ConditionF(False, tuple(sorted(dec.poset.components[c])), tuple(keys[:2]))
    return ConditionF(True)


# -- hereditary and saturated sets -------------------------------------------


@dataclass(frozen=True)
class HereditarySet:
    members: frozenset[str]
    hereditary: bool
    c_saturated: bool


def is_hereditary(g: SeparatedGraph, H: Iterable[str]) -> bool:
    H = set(H)
    return all(g.successors(v) <= H for v in H)


def is_c_saturated(g: SeparatedGraph, H: Iterable[str]) -> bool:
    H = set(H)
    for v in g.vertices:
        if v in H:
            continue
        for X in g.groups_at(v):
            if all(g.dst(e) in H for e in X):
                return False
    return True


def classify_subset(g: SeparatedGraph, H: Iterable[str]) -> HereditarySet:
    H = frozenset(H)
    _check_vertices(g, H)
    return HereditarySet(H, is_hereditary(g, H), is_c_saturated(g, H))


def hereditary_saturated_closure(g: SeparatedGraph, S: Iterable[str]) -> frozenset[str]:
    """Smallest hereditary C-saturated set containing ``S``."""
    H = set(S)
    while True:
        todo = deque(H)
        while todo:
            u = todo.popleft()
            for w in g.successors(u):
                if w not in H:
                    H.add(w)
                    todo.append(w)
        added = [
            v
            for v in g.vertices
            if v not in H and any(all(g.dst(e) in H for e in X) for X in g.groups_at(v))
        ]
        if not added:
            return frozenset(H)
        H.update(added)


def hereditary_saturated_subsets(g: SeparatedGraph) -> list[HereditarySet]:
    """Every hereditary C-saturated vertex set, smallest first.

    Hereditary sets are exactly unions of lower sets of components, so the
    lattice of lower subsets of the condensation is filtered for saturation.
    """
    p = condensation(g)
    out = []
    for L in lower_subsets(p):
        H = p.vertices_of(L)
        if is_c_saturated(g, H):
            out.append(HereditarySet(H, True, True))
    return sorted(out, key=lambda h: (len(h.members), sorted(h.members)))


def _check_vertices(g: SeparatedGraph, S: Iterable[str]):
    missing = set(S) - set(g.vertices)
    if missing:
        raise UnknownVertex(f"not vertices of the graph: {sorted(missing)}")


def _members(H) -> frozenset[str]:
    return H.members if isinstance(H, HereditarySet) else frozenset(H)


def restrict(g: SeparatedGraph, H) -> SeparatedGraph:
    """The restriction ``(E_H, C^H)`` to a hereditary vertex set."""
    H = _members(H)
    _check_vertices(g, H)
    if not is_hereditary(g, H):
        raise NotHereditary(f"{sorted(H)} is not hereditary")
    return SeparatedGraph(
        vertices=tuple(v for v in g.vertices if v in H),
        edges=tuple(e for e in g.edges if e.src in H),
        groups=tuple((v, gs) for v, gs in g.groups if v in H),
    )


def quotient(g: SeparatedGraph, H) -> SeparatedGraph:
    """The quotient ``(E/H, C/H)`` by a hereditary C-saturated set."""
    H = _members(H)
    _check_vertices(g, H)
    if not is_hereditary(g, H):
        raise NotHereditary(f"{sorted(H)} is not hereditary")
    if not is_c_saturated(g, H):
        raise NotSaturated(f"{sorted(H)} is not C-saturated")
    keep = [e for e in g.edges if e.dst not in H]
    kept = {e.id for e in keep}
    groups = []
    for v, gs in g.groups:
        if v in H:
            continue
        new = tuple(X & kept for X in gs)
        assert all(new), "saturation guarantees nonempty quotient groups"
        groups.append((v, new))
    return SeparatedGraph(
        vertices=tuple(v for v in g.vertices if v not in H),
        edges=tuple(keep),
        groups=tuple(groups),
    )


def tree_vertices(g: SeparatedGraph, v: str, strict: bool = False, poset: CondensationPoset | None = None):
    if v not in g._groups:
        raise UnknownVertex(v)
    p = poset or condensation(g)
    c = p.component_of[v]
    below = p.down(c) - ({c} if strict else set())
    return p.vertices_of(below)


def tree(g: SeparatedGraph, v: str, poset: CondensationPoset | None = None) -> SeparatedGraph:
    """Restriction to every vertex reachable from ``v``."""
    if v not in g._groups:
        raise UnknownVertex(v)
    return restrict(g, tree_vertices(g, v, poset=poset))


def strict_tree(g: SeparatedGraph, v: str, poset: CondensationPoset | None = None) -> SeparatedGraph:
    """Restriction to the vertices strictly below the component of ``v``."""
    if v not in g._groups:
        raise UnknownVertex(v)
    return restrict(g, tree_vertices(g, v, strict=True, poset=poset))


@dataclass(frozen=True)
class ReducedGraph:
    nodes: tuple[int, ...]
    labels: tuple[str, ...]
    edges: tuple[tuple[str, int, int], ...]


def reduced_graph(g: SeparatedGraph, dec: AdaptableDecoration | None = None) -> ReducedGraph:
    """Components as vertices, connectors as edges."""
    p = dec.poset if dec else condensation(g)
    edges = tuple(
        (e.id, p.component_of[e.src], p.component_of[e.dst])
        for e in g.edges
        if p.component_of[e.src] != p.component_of[e.dst]
    )
    return ReducedGraph(tuple(range(len(p))), tuple(p.label(i) for i in range(len(p))), edges)


# -- isomorphism up to token renaming ----------------------------------------


def _incidence(g: SeparatedGraph):
    import networkx as nx

    D = nx.DiGraph()
    for v in g.vertices:
        D.add_node(("v", v), kind="v")
        for k, X in enumerate(g.groups_at(v)):
            D.add_node(("g", v, k), kind="g")
            D.add_edge(("v", v), ("g", v, k))
            for e in X:
                D.add_node(("e", e), kind="e")
                D.add_edge(("g", v, k), ("e", e))
                D.add_edge(("e", e), ("v", g.dst(e)))
    return D


def find_isomorphism(g1: SeparatedGraph, g2: SeparatedGraph) -> tuple[dict, dict] | None:
    """A separated-graph isomorphism ``g1 -> g2`` as ``(vertex map, edge map)``,
    or ``None``.  Groups are matched as sets, so the order of groups is ignored."""
    from networkx.algorithms.isomorphism import DiGraphMatcher

    if (len(g1.vertices), len(g1.edges)) != (len(g2.vertices), len(g2.edges)):
        return None
    m = DiGraphMatcher(_incidence(g1), _incidence(g2), node_match=lambda a, b: a["kind"] == b["kind"])
    if not m.is_isomorphic():
        return None
    vmap = {a[1]: b[1] for a, b in m.mapping.items() if a[0] == "v"}
    emap = {a[1]: b[1] for a, b in m.mapping.items() if a[0] == "e"}
    return vmap, emap
