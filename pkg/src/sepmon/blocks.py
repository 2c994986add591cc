"""Building blocks, the families ``F_J`` and pullback data at a free vertex.

Fixing one group at every free non-sink vertex outside a lower subset ``J``
of the free part leaves an ordinary graph around those vertices; its
connected components form ``F_J``.  For ``J`` empty these are the building
blocks.  When ``v`` is a minimal free vertex outside ``J`` with several
groups, the member ``F`` of ``F_{J + v}`` through ``v`` is recovered from the
members ``F_1, ..., F_r`` of ``F_J`` through ``v`` as a pullback of monoids
over ``M(F/H)``, where ``H`` is the strict tree of ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .errors import InvalidChoice, NotAdaptable, NotLower, PreconditionViolated
from .graph import (
    AdaptableDecoration,
    SeparatedGraph,
    check_condition_F,
    classify_adaptable,
    quotient,
    restrict,
    tree_vertices,
)
from .monoid import (
    DEFAULT_BOUNDS,
    ZERO,
    Bounds,
    MonoidElement,
    Status,
    engine,
    enumerate_classes,
    hom_is_well_defined,
    induced_hom_apply,
    window,
)


def _free_lower(g: SeparatedGraph, dec: AdaptableDecoration, J) -> frozenset[str]:
    J = frozenset(J)
    free = dec.free_vertices
    extra = J - free
    if extra:
        raise NotLower(f"not free vertices: {sorted(extra)}")
    P = dec.poset
    for w in J:
        for u in P.vertices_of(P.down(P.component_of[w])):
            if u in free and u not in J:
                raise NotLower(f"{u!r} lies below {w!r} but is not in J")
    return J


def choice_domain(g: SeparatedGraph, dec: AdaptableDecoration, J) -> list[str]:
    """Free non-sink vertices outside ``J``, sorted."""
    J = frozenset(J)
    return sorted(v for v in dec.free_vertices if v not in J and not g.is_sink(v))


def graph_of_choice(g: SeparatedGraph, dec: AdaptableDecoration, J, choice: Mapping[str, int]) -> SeparatedGraph:
    """The separated graph ``E_phi``: the chosen group at each domain vertex
    and every edge at the remaining vertices.

    Vertices are the endpoints of those edges together with the isolated
    vertices of ``g``, so that ``J`` equal to the whole free part returns ``g``."""
    J = _free_lower(g, dec, J)
    dom = choice_domain(g, dec, J)
    if set(choice) != set(dom):
        raise InvalidChoice(f"choice must be defined exactly on {dom}, got {sorted(choice)}")
    groups: dict[str, list] = {}
    edges = []
    for v in g.vertices:
        gs = g.groups_at(v)
        if v in choice:
            k = choice[v]
            if not isinstance(k, int) or not 0 <= k < len(gs):
                raise InvalidChoice(f"group index {k!r} invalid at {v!r}")
            gs = (gs[k],)
        if gs:
            groups[v] = [sorted(X) for X in gs]
            edges.extend(g.edge[e] for X in gs for e in sorted(X))
    verts = {e.src for e in edges} | {e.dst for e in edges}
    verts |= {v for v in g.vertices if g.is_sink(v) and not any(e.dst == v for e in g.edges)}
    edges.sort(key=lambda e: e.id)
    return SeparatedGraph(
        vertices=tuple(sorted(verts)),
        edges=tuple(edges),
        groups=tuple((v, tuple(frozenset(X) for X in groups[v])) for v in sorted(verts) if groups.get(v)),
    )


def components(g: SeparatedGraph) -> list[SeparatedGraph]:
    """Weakly connected components, ordered by least vertex."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[max(a, b)] = min(a, b)
    comps: dict[str, set[str]] = {}
    for v in g.vertices:
        comps.setdefault(find(v), set()).add(v)
    out = []
    for root in sorted(comps, key=lambda r: min(comps[r])):
        S = frozenset(comps[root])
        out.append(restrict(g, S))
    return out


def choices(g: SeparatedGraph, dec: AdaptableDecoration, J) -> list[dict[str, int]]:
    """All choice functions for ``J`` in lexicographic order."""
    dom = choice_domain(g, dec, J)
    ranges = [range(len(g.groups_at(v))) for v in dom]
    return [dict(zip(dom, ks)) for ks in product(*ranges)]


def family_FJ(g: SeparatedGraph, dec: AdaptableDecoration, J) -> list[SeparatedGraph]:
    """Connected components of ``E_phi`` over every choice function, deduplicated."""
    J = _free_lower(g, dec, J)
    seen = {}
    for c in choices(g, dec, J):
        for comp in components(graph_of_choice(g, dec, J, c)):
            seen.setdefault(comp, None)
    return list(seen)


def building_blocks(g: SeparatedGraph, dec: AdaptableDecoration | None = None) -> list[SeparatedGraph]:
    dec = dec or classify_adaptable(g)
    return family_FJ(g, dec, frozenset())


def member_properties(g: SeparatedGraph, dec: AdaptableDecoration, J, F: SeparatedGraph) -> dict[str, bool]:
    """Properties (i)-(v) shared by all members of ``F_J``."""
    J = frozenset(J)
    connected = len(components(F)) == 1 if F.vertices else True
    try:
        cond_f = bool(check_condition_F(F, classify_adaptable(F)))
    except NotAdaptable:
        cond_f = False
    return {
        "connected_with_F": connected and cond_f,
        "subgraph": set(F.vertices) <= set(g.vertices) and set(F.edge) <= set(g.edge),
        "groups_subset": all(set(F.groups_at(v)) <= set(g.groups_at(v)) for v in F.vertices),
        "full_on_J": all(F.groups_at(v) == g.groups_at(v) for v in F.vertices if v in J),
        "single_off_J": all(
            len(F.groups_at(v)) == 1 for v in F.vertices if v not in J and not g.is_sink(v)
        ),
    }


# -- pullback data -------------------------------------------------------------


@dataclass(frozen=True)
class PullbackData:
    g: SeparatedGraph
    J: frozenset[str]
    v: str
    choice: Mapping[str, int]
    F: SeparatedGraph
    F_i: tuple[SeparatedGraph, ...]
    H: frozenset[str]
    H_i: tuple[frozenset[str], ...]
    X_prime: tuple[frozenset[str], ...]
    Fbar: SeparatedGraph
    theta_i: tuple[Mapping[str, MonoidElement], ...]
    rho_i: tuple[Mapping[str, MonoidElement], ...]
    checks: Mapping[str, bool] = field(default_factory=dict)

    @property
    def r(self) -> int:
        return len(self.F_i)

    def to_json(self) -> dict:
        return {
            "v": self.v,
            "J": sorted(self.J),
            "choice": dict(sorted(self.choice.items())),
            "F": sorted(self.F.vertices),
            "F_i": [sorted(Fi.vertices) for Fi in self.F_i],
            "H_i": [sorted(h) for h in self.H_i],
            "Fbar": self.Fbar.to_json(),
            "checks": dict(sorted(self.checks.items())),
        }


def _component_with(g: SeparatedGraph, v: str) -> SeparatedGraph:
    return next(c for c in components(g) if v in c.vertices)


def pullback_data(
    g: SeparatedGraph,
    dec: AdaptableDecoration | None,
    J,
    v: str,
    choice: Mapping[str, int] | None = None,
    bounds: Bounds = DEFAULT_BOUNDS,
) -> PullbackData:
    """Assemble ``F``, ``F_i``, ``H_i``, ``F/H`` and the maps ``theta_i``, ``rho_i``.

    ``choice`` covers the free non-sink vertices outside ``J + v`` and
    defaults to the first group everywhere.  Group indices are 0-based."""
    dec = dec or classify_adaptable(g)
    if not check_condition_F(g, dec):
        raise PreconditionViolated("condition_F", "the graph does not satisfy condition (F)")
    try:
        J = _free_lower(g, dec, J)
    except NotLower as e:
        raise PreconditionViolated("J_lower", str(e)) from None
    sinks = {w for w in g.vertices if g.is_sink(w)}
    if not sinks <= J:
        raise PreconditionViolated("J_contains_sinks", f"missing {sorted(sinks - J)}")
    if v not in dec.free_vertices or v in J:
        raise PreconditionViolated("v_free_outside_J", repr(v))
    P = dec.poset
    below = P.vertices_of(P.down(P.component_of[v])) - {v}
    if any(u in dec.free_vertices and u not in J for u in below):
        raise PreconditionViolated("v_minimal", f"{v!r} is not minimal outside J")
    r = len(g.groups_at(v))
    if r <= 1:
        raise PreconditionViolated("v_multiple_groups", f"{v!r} has {r} group(s)")

    J1 = J | {v}
    dom = choice_domain(g, dec, J1)
    choice = dict(choice) if choice is not None else {w: 0 for w in dom}
    F = _component_with(graph_of_choice(g, dec, J1, choice), v)
    F_i = tuple(_component_with(graph_of_choice(g, dec, J, {**choice, v: i}), v) for i in range(r))
    H = tree_vertices(F, v, strict=True)
    H_i = tuple(tree_vertices(Fi, v, strict=True) for Fi in F_i)
    X_prime = tuple(frozenset(e for e in X if g.dst(e) != v) for X in g.groups_at(v))
    Fbar = quotient(F, H)

    theta = tuple({w: MonoidElement.gen(w) if w in Fi.vertices else ZERO for w in F.vertices} for Fi in F_i)
    rho = tuple({w: ZERO if w in Hi else MonoidElement.gen(w) for w in Fi.vertices} for Fi, Hi in zip(F_i, H_i))

    union = frozenset().union(*H_i)
    outside = frozenset(F.vertices) - tree_vertices(F, v)
    checks = {
        "strict_tree_matches_graph": H == tree_vertices(g, v, strict=True),
        "strict_tree_disjoint_union": union == H and sum(len(h) for h in H_i) == len(H),
        "outside_tree_agrees": all(
            frozenset(Fi.vertices) - tree_vertices(Fi, v) == outside
            and all(Fi.groups_at(w) == F.groups_at(w) for w in outside)
            for Fi in F_i
        ),
        "rho_theta_agree": all(
            {w: induced_hom_apply(rho[i], theta[i][w]) for w in F.vertices}
            == {w: ZERO if w in H else MonoidElement.gen(w) for w in F.vertices}
            for i in range(r)
        ),
    }
    for i in range(r):
        checks[f"theta_{i}_well_defined"] = hom_is_well_defined(F, F_i[i], theta[i], bounds).status is Status.Holds
        checks[f"rho_{i}_well_defined"] = hom_is_well_defined(F_i[i], Fbar, rho[i], bounds).status is Status.Holds
    return PullbackData(g, J, v, choice, F, F_i, H, H_i, X_prime, Fbar, theta, rho, checks)


def eligible_pairs(g: SeparatedGraph, dec: AdaptableDecoration | None = None) -> list[tuple[frozenset[str], str]]:
    """Every ``(J, v)`` meeting the preconditions of :func:`pullback_data`."""
    dec = dec or classify_adaptable(g)
    if not check_condition_F(g, dec):
        return []
    free = dec.free_vertices
    sinks = frozenset(w for w in g.vertices if g.is_sink(w))
    P = dec.poset
    out = []
    Js = _free_lower_subsets(dec)
    for J in Js:
        if not sinks <= J:
            continue
        for v in sorted(free - J):
            if len(g.groups_at(v)) <= 1:
                continue
            below = P.vertices_of(P.down(P.component_of[v])) - {v}
            if all(u in J for u in below if u in free):
                out.append((J, v))
    return out


def _free_lower_subsets(dec: AdaptableDecoration) -> list[frozenset[str]]:
    free = sorted(dec.free_vertices)
    P = dec.poset
    below = {
        v: frozenset(u for u in P.vertices_of(P.down(P.component_of[v])) if u in dec.free_vertices)
        for v in free
    }
    out = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for S in frontier:
            for v in free:
                if v not in S and below[v] - {v} <= S:
                    T = S | {v}
                    if T not in out:
                        out.add(T)
                        nxt.append(T)
        frontier = nxt
    return sorted(out, key=lambda s: (len(s), sorted(s)))


# -- bounded pullback verification ---------------------------------------------


@dataclass(frozen=True)
class PullbackReport:
    status: str  # Verified / Violation / Unknown
    surjective_checked: int
    injective_checked: int
    witnesses: tuple = ()
    unresolved: tuple = ()

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "surjective_checked": self.surjective_checked,
            "injective_checked": self.injective_checked,
            "witnesses": [[str(x) for x in w] for w in self.witnesses],
            "unresolved": [[str(x) for x in w] for w in self.unresolved],
        }


def verify_pullback_bounded(d: PullbackData, degree_bound: int, eq_bounds: Bounds = DEFAULT_BOUNDS) -> PullbackReport:
    """Check on windows that ``z -> (theta_i(z))`` is a bijection onto the
    compatible tuples.

    Classes of the factors are taken at degree ``m * degree_bound`` with
    ``m = max(2, r)``, since a compatible tuple of degree-``D`` classes can
    need a preimage of degree ``r * D``.  The tuples tested for
    surjectivity use classes having a member of degree at most
    ``degree_bound``, and preimages are searched in the window of ``M(F)``
    of degree ``m * degree_bound``."""
    D2 = max(2, d.r) * degree_bound
    fac = [enumerate_classes(Fi, D2, eq_bounds) for Fi in d.F_i]
    bar = enumerate_classes(d.Fbar, D2, eq_bounds)
    top = enumerate_classes(d.F, D2, eq_bounds)

    def cid(report, x):
        return report.class_of[x]

    hits: dict[tuple[int, ...], list[MonoidElement]] = {}
    for z in window(d.F, D2):
        key = tuple(cid(fac[i], induced_hom_apply(d.theta_i[i], z)) for i in range(d.r))
        hits.setdefault(key, []).append(z)

    # surjectivity
    by_bar: list[dict[int, list[int]]] = []
    for i in range(d.r):
        groups: dict[int, list[int]] = {}
        for k, (rep, _) in enumerate(fac[i].classes):
            if rep.total <= degree_bound:
                groups.setdefault(cid(bar, induced_hom_apply(d.rho_i[i], rep)), []).append(k)
        by_bar.append(groups)
    surj = 0
    open_: list[tuple] = []
    common = set(by_bar[0])
    for groups in by_bar[1:]:
        common &= set(groups)
    for b in sorted(common):
        for tup in product(*(by_bar[i][b] for i in range(d.r))):
            surj += 1
            if tup not in hits:
                open_.append(("no_preimage",) + tuple(fac[i].classes[k][0] for i, k in enumerate(tup)))

    # injectivity
    inj = 0
    bad = []
    E = engine(d.F)
    for key, zs in sorted(hits.items()):
        first = zs[0]
        for z in zs[1:]:
            inj += 1
            if top.class_of[z] == top.class_of[first]:
                continue
            if E.refute(E.vec(first), E.vec(z)) is not None:
                bad.append(("not_injective", first, z))
            else:
                open_.append(("uncertified_pair", first, z))
    status = "Violation" if bad else ("Unknown" if open_ else "Verified")
    return PullbackReport(status, surj, inj, tuple(bad), tuple(open_))
