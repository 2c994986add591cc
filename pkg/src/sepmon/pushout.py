"""Crowned pairs and the crowned pushout of graph monoids.

A crowned pair is a cover ``phi: g1 -> g2`` that glues two disjoint,
isomorphic trees ``T(v1)`` and ``T(v2)`` of ``g1`` onto the tree ``T(v)`` of
``g2`` and is an isomorphism elsewhere.  Identifying ``a_w`` with
``a_psi(w)`` for ``w`` in ``T(v1)``, where ``psi`` is the tree isomorphism
through ``phi``, presents a monoid ``Q`` which is then checked to be
isomorphic to ``M(g2)`` through explicit maps ``rho`` and ``gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .cover import CoverMap, CrownedChain, validate_cover
from .errors import InvalidPair
from .graph import (
    AdaptableDecoration,
    SeparatedGraph,
    build_separated_graph,
    classify_adaptable,
    incoming_parts,
    tree_vertices,
)
from .monoid import (
    DEFAULT_BOUNDS,
    Bounds,
    MonoidElement,
    Status,
    enumerate_classes,
    equal,
    hom_is_well_defined,
    induced_hom_apply,
    relation_images,
)


@dataclass(frozen=True)
class CrownedPair:
    g1: SeparatedGraph
    g2: SeparatedGraph
    cover: CoverMap
    v1: str
    v2: str

    @property
    def v(self) -> str:
        return self.cover.vmap[self.v1]

    @property
    def T1(self) -> frozenset[str]:
        return tree_vertices(self.g1, self.v1)

    @property
    def T2(self) -> frozenset[str]:
        return tree_vertices(self.g1, self.v2)

    @property
    def Tv(self) -> frozenset[str]:
        return tree_vertices(self.g2, self.v)

    @property
    def outside1(self) -> frozenset[str]:
        return frozenset(self.g1.vertices) - self.T1 - self.T2

    @property
    def outside2(self) -> frozenset[str]:
        return frozenset(self.g2.vertices) - self.Tv


def crowned_pair(g1, g2, cover: CoverMap, v1: str, v2: str) -> CrownedPair:
    return CrownedPair(g1, g2, cover, v1, v2)


def pairs_of_chain(chain: CrownedChain) -> list[CrownedPair]:
    return [
        CrownedPair(m.src, m.dst, m, c[0], c[1])
        for m, c in zip(chain.maps, chain.crowns)
    ]


CLAUSES = ("cover", "crown", "i", "ii", "iii", "iv", "v", "lemma")


@dataclass(frozen=True)
class PairVerdict:
    status: Status
    clause: str | None = None
    witness: str | None = None
    lemma: Mapping[str, bool] = field(default_factory=dict)

    def __bool__(self):
        return self.status is Status.Holds

    def clauses(self) -> dict[str, str]:
        """Per-clause verdicts; clauses after the first failure are not evaluated."""
        out, state = {}, "Holds"
        for c in CLAUSES:
            if c == self.clause:
                out[c], state = "Fails", "NotChecked"
            else:
                out[c] = state
        return out

    def to_json(self) -> dict:
        out = {
            "status": self.status.value,
            "clauses": self.clauses(),
            "lemma": dict(sorted(self.lemma.items())),
        }
        if self.clause:
            out["clause"] = self.clause
            out["witness"] = self.witness
        return out


def _induced_edges(g: SeparatedGraph, S: frozenset[str]) -> frozenset[str]:
    return frozenset(e.id for e in g.edges if e.src in S and e.dst in S)


def _bijective_onto(m: Mapping[str, str], dom, cod) -> bool:
    img = [m[x] for x in dom]
    return len(set(img)) == len(img) and set(img) == set(cod)


def _parts(g: SeparatedGraph, dec: AdaptableDecoration, w: str):
    return [X for _, X in dec.parts_at(g, w)]


def validate_crowned_pair(g1: SeparatedGraph, g2: SeparatedGraph, cover: CoverMap, v1: str, v2: str) -> PairVerdict:
    """Check clauses (i)-(v) in order, then the derived properties of covers
    with (i)-(iv) as sanity assertions (reported under ``lemma``)."""
    p = CrownedPair(g1, g2, cover, v1, v2)
    fail = lambda clause, witness: PairVerdict(Status.Fails, clause, witness)  # noqa: E731
    cv = validate_cover(g1, g2, cover.vmap, cover.emap)
    if not cv:
        return fail("cover", cv.to_json())
    phi, phe = cover.vmap, cover.emap
    if v1 not in phi or v2 not in phi or phi[v1] != phi[v2]:
        return fail("crown", f"{v1!r} and {v2!r} do not share an image")
    v = p.v
    dec1, dec2 = classify_adaptable(g1), classify_adaptable(g2)
    P2 = dec2.poset

    # (i) unique external part into each component of the strict tree of v
    strict = tree_vertices(g2, v, strict=True)
    for c in sorted({P2.component_of[w] for w in strict}):
        keys = incoming_parts(g2, dec2, c)
        if len(keys) > 1:
            return fail("i", f"component {P2.label(c)} receives {len(keys)} parts")

    # (ii) disjoint trees
    T1, T2, Tv = p.T1, p.T2, p.Tv
    if T1 & T2:
        return fail("ii", f"trees share {sorted(T1 & T2)}")

    # (iii) phi maps each tree isomorphically onto T(v)
    for name, T in (("v1", T1), ("v2", T2)):
        edges = [e.id for e in g1.edges if e.src in T]
        tv_edges = [e.id for e in g2.edges if e.src in Tv]
        if not _bijective_onto(phi, T, Tv) or not _bijective_onto(phe, edges, tv_edges):
            return fail("iii", f"tree of {name} is not mapped isomorphically")

    # (iv) isomorphism off the trees
    O1, O2 = p.outside1, p.outside2
    if not _bijective_onto(phi, O1, O2) or not _bijective_onto(
        phe, _induced_edges(g1, O1), _induced_edges(g2, O2)
    ):
        return fail("iv", "phi is not an isomorphism off the trees")

    # (v) each lifted part reaching [v] hits exactly one of [v1], [v2]
    P1 = dec1.poset
    c1 = P1.components[P1.component_of[v1]]
    c2 = P1.components[P1.component_of[v2]]
    cv_ = P2.components[P2.component_of[v]]
    for w in sorted(O1):
        for Y in _parts(g1, dec1, w):
            X = {phe[e] for e in Y}
            if not any(g2.dst(e) in cv_ for e in X):
                continue
            hits = sum(1 for comp in (c1, c2) if any(g1.dst(e) in comp for e in Y))
            if hits != 1:
                return fail("v", f"part {sorted(Y)} at {w!r} reaches {hits} of the two crowns")

    lemma = _lemma_checks(p, dec1, dec2)
    if not all(lemma.values()):
        bad = sorted(k for k, ok in lemma.items() if not ok)
        return PairVerdict(Status.Fails, "lemma", ", ".join(bad), lemma)
    return PairVerdict(Status.Holds, lemma=lemma)


def _lemma_checks(p: CrownedPair, dec1, dec2) -> dict[str, bool]:
    g1, g2, phi, phe = p.g1, p.g2, p.cover.vmap, p.cover.emap
    out = {}
    out["free_regular_preserved"] = all(dec1.is_free(w) == dec2.is_free(phi[w]) for w in g1.vertices)
    ok2 = True
    for w in g1.vertices:
        targets = {X for X in _parts(g2, dec2, phi[w])}
        for Y in _parts(g1, dec1, w):
            img = [phe[e] for e in Y]
            if len(set(img)) != len(img) or frozenset(img) not in targets:
                ok2 = False
    out["parts_map_to_parts"] = ok2
    P1 = dec1.poset
    ok4 = True
    for root, T in ((p.v1, p.T1), (p.v2, p.T2)):
        strict = tree_vertices(g1, root, strict=True)
        for c in {P1.component_of[w] for w in strict}:
            keys = incoming_parts(g1, dec1, c)
            if len(keys) != 1 or not P1.vertices_of([keys[0][0]]) <= T:
                ok4 = False
    out["tree_predecessor_unique"] = ok4
    ok5 = True
    c1 = P1.components[P1.component_of[p.v1]]
    c2 = P1.components[P1.component_of[p.v2]]
    for w in p.outside1:
        for Y in _parts(g1, dec1, w):
            rng = {g1.dst(e) for e in Y}
            for T, comp in ((p.T1, c1), (p.T2, c2)):
                if rng & T and rng & (p.T1 | p.T2) != rng & comp:
                    ok5 = False
    out["parts_enter_trees_at_crown"] = ok5
    return out


# -- the crowned pushout -------------------------------------------------------


@dataclass(frozen=True)
class PushoutPresentation:
    """``Q`` as a separated graph on vertex classes.

    Each class is named by its member outside ``T(v2)``; ``relations`` lists
    ``(class, edges)`` after identifying the two trees."""

    pair: CrownedPair
    psi: Mapping[str, str]
    psi_edges: Mapping[str, str]
    cls: Mapping[str, str]
    graph: SeparatedGraph
    theta: Mapping[str, MonoidElement]

    @property
    def generators(self) -> tuple[str, ...]:
        return self.graph.vertices

    @property
    def relations(self) -> list[tuple[str, MonoidElement]]:
        return [
            (w, MonoidElement.of([(r, 1) for r in self.graph.ranges(X)]))
            for w, _, X in self.graph.relations()
        ]

    def as_separated_graph(self) -> SeparatedGraph:
        return self.graph

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [{"lhs": w, "rhs": str(rhs)} for w, rhs in self.relations],
            "psi": dict(sorted(self.psi.items())),
        }


def crowned_pushout(p: CrownedPair) -> PushoutPresentation:
    """Identify ``T(v1)`` with ``T(v2)`` through ``psi`` and collapse the relations."""
    verdict = validate_crowned_pair(p.g1, p.g2, p.cover, p.v1, p.v2)
    if not verdict:
        raise InvalidPair(f"not a crowned pair: {verdict.to_json()}")
    g1, phi, phe = p.g1, p.cover.vmap, p.cover.emap
    T1, T2 = p.T1, p.T2
    back_v = {phi[u]: u for u in T2}
    psi = {w: back_v[phi[w]] for w in sorted(T1)}
    back_e = {phe[e.id]: e.id for e in g1.edges if e.src in T2}
    psi_e = {e.id: back_e[phe[e.id]] for e in g1.edges if e.src in T1}

    inv_v = {u: w for w, u in psi.items()}
    inv_e = {f: e for e, f in psi_e.items()}
    cls = {u: inv_v.get(u, u) for u in g1.vertices}

    # relations of g1, with T(v2) edges rewritten by psi^{-1} and deduplicated
    kept: dict[tuple[str, frozenset[str]], None] = {}
    edges = {}
    for u, _, X in g1.relations():
        norm = frozenset(inv_e.get(e, e) for e in X)
        kept.setdefault((cls[u], norm), None)
    groups: dict[str, list[list[str]]] = {}
    for (c, X), _ in kept.items():
        groups.setdefault(c, []).append(sorted(X))
        for e in X:
            edges[e] = (e, c, cls[g1.dst(e)])
    verts = sorted(set(cls.values()))
    Q = build_separated_graph(verts, sorted(edges.values()), groups)
    theta = {u: MonoidElement.gen(cls[u]) for u in g1.vertices}
    return PushoutPresentation(p, psi, psi_e, cls, Q, theta)


# -- verification of the pushout ----------------------------------------------


@dataclass(frozen=True)
class PushoutReport:
    status: str  # Verified / Fails / Unknown
    cases: Mapping[str, Mapping[str, int]]
    rho: str
    gamma: str
    identities: Mapping[str, bool]
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "cases": {k: dict(v) for k, v in sorted(self.cases.items())},
            "rho": self.rho,
            "gamma": self.gamma,
            "identities": dict(sorted(self.identities.items())),
        }
        if self.witness:
            out["witness"] = self.witness
        return out


def pushout_maps(p: CrownedPair, Q: PushoutPresentation):
    """``rho: Q -> M(g2)`` and the section ``gamma: M(g2) -> Q``."""
    phi = p.cover.vmap
    rho = {c: MonoidElement.gen(phi[c]) for c in Q.generators}
    pre = {}
    for u in p.outside1 | p.T1:
        pre[phi[u]] = u
    gamma = {w: MonoidElement.gen(Q.cls[pre[w]]) for w in p.g2.vertices}
    return rho, gamma


def corrupted_gamma(p: CrownedPair, Q: PushoutPresentation | None = None) -> dict[str, MonoidElement]:
    """Negative control: swap the images of ``v`` and of the first vertex
    emitting a group that is split between the tree of ``v`` and the rest."""
    Q = Q or crowned_pushout(p)
    _, gamma = pushout_maps(p, Q)
    g2, Tv = p.g2, p.Tv
    w = next(
        (u for u, _, X in g2.relations() if u not in Tv and any(g2.dst(e) in Tv for e in X)),
        None,
    )
    if w is None:
        return gamma
    gamma = dict(gamma)
    gamma[p.v], gamma[w] = gamma[w], gamma[p.v]
    return gamma


def _case(p: CrownedPair, w: str, X) -> str:
    if w in p.Tv:
        return "tree"
    if not any(p.g2.dst(e) in p.Tv for e in X):
        return "outside"
    return "mixed"


def verify_pushout_is_target(
    p: CrownedPair, bounds: Bounds = DEFAULT_BOUNDS, gamma_override: Mapping[str, MonoidElement] | None = None
) -> PushoutReport:
    """Check that ``rho: Q -> M(g2)`` is an isomorphism with inverse ``gamma``.

    ``gamma`` is checked relation by relation, split into the three cases
    of relations inside ``T(v)``, relations missing ``T(v)`` and mixed ones."""
    Q = crowned_pushout(p)
    rho, gamma = pushout_maps(p, Q)
    if gamma_override is not None:
        gamma = dict(gamma_override)
    Qg = Q.graph

    theta_ok = hom_is_well_defined(p.g1, Qg, Q.theta, bounds).status
    rho_v = hom_is_well_defined(Qg, p.g2, rho, bounds)

    cases: dict[str, dict[str, int]] = {k: {"Holds": 0, "Fails": 0, "Unknown": 0} for k in ("tree", "outside", "mixed")}
    witness = None
    rels = {(w, k): X for w, k, X in p.g2.relations()}
    for w, k, lhs, rhs in relation_images(p.g2, gamma):
        case = _case(p, w, rels[(w, k)])
        st = equal(Qg, lhs, rhs, bounds).status
        key = {Status.EqualCertified: "Holds", Status.UnequalCertified: "Fails"}.get(st, "Unknown")
        cases[case][key] += 1
        if key == "Fails" and witness is None:
            witness = {"case": case, "vertex": w, "group": k, "lhs": str(lhs), "rhs": str(rhs)}
    gamma_status = "Fails" if any(c["Fails"] for c in cases.values()) else (
        "Unknown" if any(c["Unknown"] for c in cases.values()) else "Holds"
    )

    identities = {
        "theta_well_defined": theta_ok is Status.Holds,
        "gamma_rho_identity": all(
            induced_hom_apply(gamma, rho[c]) == MonoidElement.gen(c) for c in Q.generators
        ),
        "rho_gamma_identity": all(
            induced_hom_apply(rho, gamma[w]) == MonoidElement.gen(w) for w in p.g2.vertices
        ),
        "theta_identifies_trees": all(Q.theta[w] == Q.theta[u] for w, u in Q.psi.items()),
        "rho_surjective_on_generators": {
            x for m in rho.values() for x, _ in m.items()
        } == set(p.g2.vertices),
    }
    if rho_v.status is Status.Fails or gamma_status == "Fails" or not all(identities.values()):
        status = "Fails"
        if witness is None and rho_v.status is Status.Fails:
            witness = {"map": "rho", **rho_v.to_json()}
        elif witness is None:
            witness = {"identities": sorted(k for k, ok in identities.items() if not ok)}
    elif rho_v.status is Status.Unknown or gamma_status == "Unknown":
        status = "Unknown"
    else:
        status = "Verified"
    return PushoutReport(status, cases, rho_v.status.value, gamma_status, identities, witness)


def ideal_intersection_bounded(p: CrownedPair, degree: int = 3, bounds: Bounds = DEFAULT_BOUNDS) -> list[MonoidElement]:
    """Window classes of ``M(g1)`` certified to meet both ``M(T(v1))`` and ``M(T(v2))``.

    For a crowned pair the two order-ideals intersect trivially, so the
    returned list of class representatives should be empty."""
    T1, T2 = p.T1, p.T2
    bad = []
    for rep, members in enumerate_classes(p.g1, degree, bounds):
        if rep.is_zero():
            continue
        if any(m.support <= T1 for m in members) and any(m.support <= T2 for m in members):
            bad.append(rep)
    return bad
