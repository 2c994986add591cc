"""Elements of the graph monoid ``M(E,C)`` and bounded decision procedures.

``M(E,C)`` is the commutative monoid on generators ``a_v`` subject to
``a_v = sum(a_r(e), e in X)`` for each group ``X`` at ``v``.  Orienting every
relation left to right gives a rewriting relation ``->`` on ``N^{E^0}`` that
replaces one ``a_v`` by the ranges of one group at ``v``.  It is confluent,
so two vectors are equal in the monoid exactly when they have a common
reduct.  It rarely terminates, which is why every question below is answered
inside explicit search bounds and may come back ``Unknown``.

Inequality is certified by invariants that are constant on congruence
classes: the hereditary saturated closure of the support, the image in the
Grothendieck group, the images in the Grothendieck groups of the ideal
quotients ``M(E/H)`` and, once the closures agree on ``H``, the images in
the Grothendieck group of the order-ideal ``M(H)`` itself.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import product
from enum import Enum
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import ParseError, PreconditionUnverified, UnknownGenerator, UnknownVertex
from .graph import (
    AdaptableDecoration,
    SeparatedGraph,
    hereditary_saturated_closure,
    hereditary_saturated_subsets,
    quotient,
    restrict,
)
from .ktheory import grothendieck_group


class Status(str, Enum):
    EqualCertified = "EqualCertified"
    UnequalCertified = "UnequalCertified"
    LeqCertified = "LeqCertified"
    LeqRefuted = "LeqRefuted"
    Square = "Square"
    Holds = "Holds"
    Fails = "Fails"
    CounterexampleCandidate = "CounterexampleCandidate"
    Unknown = "Unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Bounds:
    depth: int = 8
    size: int = 64

    def __post_init__(self):
        if self.depth < 0 or self.size < 0:
            raise ValueError("bounds must be nonnegative")

    def to_json(self) -> dict:
        return {"depth": self.depth, "size": self.size}


DEFAULT_BOUNDS = Bounds()


# -- elements ------------------------------------------------------------------


@dataclass(frozen=True)
class MonoidElement:
    """A finitely supported vector over the vertices, ``sum(c * a_v)``.

    Stored as sorted ``(vertex, coefficient)`` pairs with positive
    coefficients; the graph is not referenced, so elements can be moved
    between monoids by :func:`induced_hom_apply`."""

    terms: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, coeffs: Mapping[str, int] | Iterable[tuple[str, int]] = ()) -> "MonoidElement":
        acc: dict[str, int] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for v, c in items:
            if c < 0:
                raise ValueError(f"negative coefficient {c} at {v!r}")
            acc[v] = acc.get(v, 0) + c
        return cls(tuple(sorted((v, c) for v, c in acc.items() if c)))

    @classmethod
    def gen(cls, v: str, n: int = 1) -> "MonoidElement":
        return cls(((v, n),) if n else ())

    @cached_property
    def _map(self) -> dict[str, int]:
        return dict(self.terms)

    def __getitem__(self, v: str) -> int:
        return self._map.get(v, 0)

    def items(self):
        return self.terms

    @property
    def total(self) -> int:
        return sum(c for _, c in self.terms)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MonoidElement") -> "MonoidElement":
        return MonoidElement.of(list(self.terms) + list(other.terms))

    def __sub__(self, other: "MonoidElement") -> "MonoidElement":
        acc = dict(self.terms)
        for v, c in other.terms:
            acc[v] = acc.get(v, 0) - c
        return MonoidElement.of(acc)

    def __mul__(self, n: int) -> "MonoidElement":
        return MonoidElement.of({v: n * c for v, c in self.terms})

    __rmul__ = __mul__

    def dominates(self, other: "MonoidElement") -> bool:
        return all(self[v] >= c for v, c in other.terms)

    def to_json(self) -> dict:
        return dict(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(v if c == 1 else f"{c}*{v}" for v, c in self.terms)

    def __repr__(self):
        return f"MonoidElement({self})"


ZERO = MonoidElement()

_TERM = re.compile(r"^\s*(?:(\d+)\s*\*\s*)?([^\s+*]+)\s*$")


def parse_element(text: str) -> MonoidElement:
    """Parse ``"2*a + p"``; ``"0"`` or an empty string is the zero element."""
    text = text.strip()
    if text in ("", "0"):
        return ZERO
    acc: dict[str, int] = {}
    for part in text.split("+"):
        m = _TERM.match(part)
        if not m:
            raise ParseError(f"cannot read term {part.strip()!r}")
        n = int(m.group(1)) if m.group(1) else 1
        acc[m.group(2)] = acc.get(m.group(2), 0) + n
    return MonoidElement.of(acc)


def as_element(x) -> MonoidElement:
    if isinstance(x, MonoidElement):
        return x
    if isinstance(x, str):
        return parse_element(x)
    if isinstance(x, Mapping):
        return MonoidElement.of({str(k): int(v) for k, v in x.items()})
    raise TypeError(f"cannot interpret {x!r} as a monoid element")


def graded_key(x: MonoidElement, vertices: tuple[str, ...]) -> tuple:
    """Graded lexicographic order: total first, then more weight on earlier vertices."""
    return (x.total, tuple(-x[v] for v in vertices))


# -- per-graph search engine ---------------------------------------------------

Vec = tuple[int, ...]


class Engine:
    """Dense-vector rewriting with cached bounded closures and invariants."""

    def __init__(self, g: SeparatedGraph):
        self.g = g
        self.vertices = g.vertices
        self.n = len(g.vertices)
        self.pos = {v: i for i, v in enumerate(g.vertices)}
        moves: list[list[tuple[int, tuple[tuple[int, int], ...]]]] = [[] for _ in range(self.n)]
        for v, k, X in g.relations():
            delta: dict[int, int] = {}
            for w in g.ranges(X):
                delta[self.pos[w]] = delta.get(self.pos[w], 0) + 1
            i = self.pos[v]
            delta[i] = delta.get(i, 0) - 1
            moves[i].append((k, tuple(sorted((j, d) for j, d in delta.items() if d))))
        self.moves = moves
        self._reach: dict[tuple[Vec, int, int], dict[Vec, tuple[int, Vec | None, tuple[int, int] | None]]] = {}
        self._sig: dict[Vec, tuple] = {}
        self._leq: dict[tuple[Vec, Vec, Bounds], "LeqVerdict"] = {}

    # conversions
    def vec(self, x) -> Vec:
        x = as_element(x)
        out = [0] * self.n
        for v, c in x.terms:
            if v not in self.pos:
                raise UnknownVertex(f"{v!r} is not a vertex of the graph")
            out[self.pos[v]] = c
        return tuple(out)

    def elt(self, x: Vec) -> MonoidElement:
        return MonoidElement(tuple((self.vertices[i], c) for i, c in enumerate(x) if c))

    @staticmethod
    def key(x: Vec) -> tuple:
        return (sum(x), tuple(-c for c in x))

    # rewriting
    def step(self, x: Vec) -> Iterator[tuple[tuple[int, int], Vec]]:
        for i, c in enumerate(x):
            if not c:
                continue
            for k, delta in self.moves[i]:
                if not delta:
                    continue
                y = list(x)
                for j, d in delta:
                    y[j] += d
                yield (i, k), tuple(y)

    def reach(self, x: Vec, depth: int, size: int):
        """Breadth-first closure: ``{y: (distance, parent, move)}``.

        The start is always included; other vectors only when their total
        does not exceed ``size``."""
        key = (x, depth, size)
        hit = self._reach.get(key)
        if hit is not None:
            return hit
        seen = {x: (0, None, None)}
        frontier = [x]
        for d in range(1, depth + 1):
            nxt = []
            for y in frontier:
                for mv, z in self.step(y):
                    if z not in seen and sum(z) <= size:
                        seen[z] = (d, y, mv)
                        nxt.append(z)
            if not nxt:
                break
            frontier = nxt
        self._reach[key] = seen
        return seen

    def trace(self, seen, target: Vec) -> list[tuple[int, int]]:
        """Moves leading from the start of ``seen`` to ``target``."""
        out = []
        y = target
        while seen[y][1] is not None:
            _, parent, mv = seen[y]
            out.append(mv)
            y = parent
        return out[::-1]

    def common_reduct(self, x: Vec, y: Vec, b: Bounds):
        rx = self.reach(x, b.depth, b.size)
        ry = self.reach(y, b.depth, b.size)
        small, big = (rx, ry) if len(rx) <= len(ry) else (ry, rx)
        best = None
        for z in small:
            if z in big:
                k = (rx[z][0] + ry[z][0], self.key(z))
                if best is None or k < best[0]:
                    best = (k, z)
        if best is None:
            return None
        z = best[1]
        return z, self.trace(rx, z), self.trace(ry, z)

    # invariants
    @cached_property
    def group(self):
        return grothendieck_group(self.g)

    @cached_property
    def ideals(self):
        out = []
        for H in hereditary_saturated_subsets(self.g):
            if not H.members or len(H.members) == self.n:
                continue
            Q = quotient(self.g, H)
            idx = [self.pos[v] for v in Q.vertices]
            out.append((H.members, idx, grothendieck_group(Q)))
        return out

    @lru_cache(maxsize=None)
    def closure(self, support: frozenset[int]) -> frozenset[str]:
        return hereditary_saturated_closure(self.g, [self.vertices[i] for i in support])

    @lru_cache(maxsize=None)
    def local(self, H: frozenset[str]):
        """Engine of the restriction to ``H`` and the positions of its vertices."""
        if len(H) == self.n:
            return None
        gH = restrict(self.g, H)
        return engine(gH), [self.pos[v] for v in gH.vertices]

    def signature(self, x: Vec) -> tuple:
        s = self._sig.get(x)
        if s is None:
            supp = frozenset(i for i, c in enumerate(x) if c)
            H = self.closure(supp)
            quots = tuple(G.image([x[i] for i in idx]) for _, idx, G in self.ideals)
            loc = self.local(H)
            if loc is not None:
                EH, idx = loc
                loc = EH.signature(tuple(x[i] for i in idx))[1:3]
            s = (H, self.group.image(list(x)), quots, loc)
            self._sig[x] = s
        return s

    def refute(self, x: Vec, y: Vec) -> dict | None:
        sx, sy = self.signature(x), self.signature(y)
        if sx[0] != sy[0]:
            return {"invariant": "support_closure", "x": sorted(sx[0]), "y": sorted(sy[0])}
        if sx[1] != sy[1]:
            return {"invariant": "grothendieck", "x": list(sx[1]), "y": list(sy[1])}
        for (H, _, _), qx, qy in zip(self.ideals, sx[2], sy[2]):
            if qx != qy:
                return {"invariant": "quotient_grothendieck", "ideal": sorted(H), "x": list(qx), "y": list(qy)}
        if sx[3] != sy[3]:
            # both supports generate the same order-ideal M(H), which embeds
            return {"invariant": "ideal_grothendieck", "ideal": sorted(sx[0]), "x": _flat(sx[3]), "y": _flat(sy[3])}
        return None

    def window(self, degree: int) -> list[Vec]:
        """All vectors of total at most ``degree`` in graded lexicographic order."""
        out: list[Vec] = []

        def fill(prefix: list[int], left: int, i: int):
            if i == self.n - 1:
                out.append(tuple(prefix + [left]))
                return
            for c in range(left, -1, -1):
                fill(prefix + [c], left - c, i + 1)

        for t in range(degree + 1):
            if self.n == 0:
                if t == 0:
                    out.append(())
                continue
            fill([], t, 0)
        return out


def _flat(sig) -> list:
    return [list(sig[0]), [list(q) for q in sig[1]]]


@lru_cache(maxsize=128)
def engine(g: SeparatedGraph) -> Engine:
    return Engine(g)


# -- rewriting -----------------------------------------------------------------


def one_step_rewrites(g: SeparatedGraph, elt) -> list[MonoidElement]:
    """Every element obtained by rewriting one generator with one of its groups."""
    E = engine(g)
    x = E.vec(elt)
    ys = {y for _, y in E.step(x)}
    return [E.elt(y) for y in sorted(ys, key=E.key)]


def reachable_set(g: SeparatedGraph, elt, depth_bound: int, size_bound: int) -> list[MonoidElement]:
    """Elements reachable in at most ``depth_bound`` steps with total at most
    ``size_bound``, in graded lexicographic order.  The start is always listed."""
    E = engine(g)
    seen = E.reach(E.vec(elt), depth_bound, size_bound)
    return [E.elt(y) for y in sorted(seen, key=E.key)]


def window(g: SeparatedGraph, degree: int) -> list[MonoidElement]:
    E = engine(g)
    return [E.elt(x) for x in E.window(degree)]


# -- equality and order --------------------------------------------------------


def _moves_json(E: Engine, moves) -> list[dict]:
    return [{"vertex": E.vertices[i], "group": k} for i, k in moves]


@dataclass(frozen=True)
class EqVerdict:
    status: Status
    certificate: dict = field(default_factory=dict)
    bounds: Bounds = DEFAULT_BOUNDS

    def __bool__(self):
        return self.status is Status.EqualCertified

    def to_json(self) -> dict:
        cert = {k: (str(v) if isinstance(v, MonoidElement) else v) for k, v in self.certificate.items()}
        return {"status": self.status.value, "certificate": cert, "bounds": self.bounds.to_json()}


def _equal_vec(E: Engine, x: Vec, y: Vec, b: Bounds) -> EqVerdict:
    if x == y:
        return EqVerdict(Status.EqualCertified, {"common_reduct": E.elt(x), "trace_x": [], "trace_y": []}, b)
    ref = E.refute(x, y)
    if ref is not None:
        return EqVerdict(Status.UnequalCertified, ref, b)
    hit = E.common_reduct(x, y, b)
    if hit is None:
        return EqVerdict(Status.Unknown, {}, b)
    z, tx, ty = hit
    return EqVerdict(
        Status.EqualCertified,
        {"common_reduct": E.elt(z), "trace_x": _moves_json(E, tx), "trace_y": _moves_json(E, ty)},
        b,
    )


def equal(g: SeparatedGraph, x, y, bounds: Bounds = DEFAULT_BOUNDS) -> EqVerdict:
    """Decide ``x ~ y`` in ``M(E,C)`` within the bounds.

    ``EqualCertified`` carries a common reduct with rewrite traces from both
    sides; ``UnequalCertified`` names the invariant that separates them."""
    E = engine(g)
    return _equal_vec(E, E.vec(x), E.vec(y), bounds)


@dataclass(frozen=True)
class LeqVerdict:
    status: Status
    z: MonoidElement | None = None
    reduct: MonoidElement | None = None
    bounds: Bounds = DEFAULT_BOUNDS

    def __bool__(self):
        return self.status is Status.LeqCertified

    def to_json(self) -> dict:
        out = {"status": self.status.value, "bounds": self.bounds.to_json()}
        if self.z is not None:
            out["z"] = str(self.z)
            out["reduct"] = str(self.reduct)
        return out


def _leq_vec(E: Engine, x: Vec, y: Vec, b: Bounds) -> LeqVerdict:
    hit = E._leq.get((x, y, b))
    if hit is not None:
        return hit
    if all(yi >= xi for xi, yi in zip(x, y)):
        out = LeqVerdict(Status.LeqCertified, E.elt(tuple(q - p for p, q in zip(x, y))), E.elt(y), b)
    elif not E.signature(x)[0] <= E.signature(y)[0]:
        out = LeqVerdict(Status.LeqRefuted, bounds=b)
    else:
        seen = E.reach(y, b.depth, b.size)
        best = None
        for g_ in seen:
            if all(gi >= xi for gi, xi in zip(g_, x)):
                k = (seen[g_][0], E.key(g_))
                if best is None or k < best[0]:
                    best = (k, g_)
        if best is None:
            out = LeqVerdict(Status.Unknown, bounds=b)
        else:
            g_ = best[1]
            z = tuple(gi - xi for gi, xi in zip(g_, x))
            out = LeqVerdict(Status.LeqCertified, E.elt(z), E.elt(g_), b)
    E._leq[(x, y, b)] = out
    return out


def leq(g: SeparatedGraph, x, y, bounds: Bounds = DEFAULT_BOUNDS) -> LeqVerdict:
    """Look for ``z`` with ``x + z ~ y``: a reduct of ``y`` dominating ``x``.

    ``LeqRefuted`` is returned when the closure of the support of ``x`` is
    not contained in that of ``y``, which rules out ``x <= y``."""
    E = engine(g)
    return _leq_vec(E, E.vec(x), E.vec(y), bounds)


# -- refinement ----------------------------------------------------------------


@dataclass(frozen=True)
class RefinementSquare:
    x: MonoidElement
    y: MonoidElement
    z: MonoidElement
    t: MonoidElement

    def to_json(self) -> dict:
        return {k: str(getattr(self, k)) for k in "xyzt"}


@dataclass(frozen=True)
class RefinementVerdict:
    status: Status
    square: RefinementSquare | None = None
    reducts: tuple[MonoidElement, ...] = ()

    def to_json(self) -> dict:
        out = {"status": self.status.value}
        if self.square:
            out["square"] = self.square.to_json()
            out["reducts"] = [str(r) for r in self.reducts]
        return out


def _split(E: Engine, a: Vec, b: Vec, moves) -> tuple[Vec, Vec]:
    """Replay rewrites of ``a + b`` on the two summands separately."""
    ca, cb = list(a), list(b)
    for i, k in moves:
        tgt = ca if ca[i] else cb
        delta = dict(E.moves[i])[k]
        for j, d in delta:
            tgt[j] += d
    return tuple(ca), tuple(cb)


def check_refinement(g: SeparatedGraph, a, b, c, d, bounds: Bounds = DEFAULT_BOUNDS) -> RefinementVerdict:
    """Find a refinement square for ``a + b ~ c + d``.

    The certified common reduct of ``a + b`` and ``c + d`` is split along the
    rewrite traces into ``ga + gb = gc + gd`` with ``a -> ga`` and so on; an
    identity of vectors refines coordinatewise, and each side of the square
    is then certified by the split reducts themselves."""
    E = engine(g)
    a, b, c, d = (E.vec(u) for u in (a, b, c, d))
    ab = tuple(p + q for p, q in zip(a, b))
    cd = tuple(p + q for p, q in zip(c, d))
    if ab == cd:
        ta, tc = [], []
    else:
        hit = E.common_reduct(ab, cd, bounds)
        if hit is None:
            raise PreconditionUnverified("a + b ~ c + d is not certified within the bounds")
        _, ta, tc = hit
    ga, gb = _split(E, a, b, ta)
    gc, gd = _split(E, c, d, tc)
    x = tuple(min(p, q) for p, q in zip(ga, gc))
    y = tuple(p - q for p, q in zip(ga, x))
    z = tuple(p - q for p, q in zip(gc, x))
    t = tuple(p - q for p, q in zip(gb, z))
    sq = RefinementSquare(E.elt(x), E.elt(y), E.elt(z), E.elt(t))
    return RefinementVerdict(Status.Square, sq, tuple(E.elt(u) for u in (ga, gb, gc, gd)))


def is_square(g: SeparatedGraph, a, b, c, d, sq: RefinementSquare, bounds: Bounds = DEFAULT_BOUNDS) -> bool:
    """All four sides of ``sq`` certified equal."""
    sides = ((a, sq.x + sq.y), (b, sq.z + sq.t), (c, sq.x + sq.z), (d, sq.y + sq.t))
    return all(equal(g, p, q, bounds).status is Status.EqualCertified for p, q in sides)


def _splits(x: Vec) -> list[tuple[Vec, Vec]]:
    """Unordered decompositions ``x = a + b``."""
    out = []
    for a in product(*(range(k + 1) for k in x)):
        b = tuple(p - q for p, q in zip(x, a))
        if a <= b:
            out.append((a, b))
    return out


def refinement_sweep(
    g: SeparatedGraph, degree: int = 4, bounds: Bounds = DEFAULT_BOUNDS, sample: int | None = None, seed: int = 0
) -> PropertyReport:
    """Refinement squares for every certified ``a + b ~ c + d`` of degree at most ``degree``.

    Equations are read off the window classes; each square found is checked
    side by side with :func:`is_square`.  A square failing that check is a
    witness, an equation whose reduct is out of bounds is unresolved.  With
    ``sample`` only that many equations, drawn with ``random.Random(seed)``,
    are checked."""
    E = engine(g)
    _, roots, groups = _classes_vec(E, degree, bounds)
    eqs = []
    for r in roots:
        dec = [ab for s in groups[r] for ab in _splits(s)]
        eqs.extend((p, q) for i, p in enumerate(dec) for q in dec[i + 1:])
    if sample is not None and sample < len(eqs):
        eqs = random.Random(seed).sample(eqs, sample)
    checked = 0
    bad, open_ = [], []
    for (a, b), (c, d) in eqs:
        checked += 1
        quad = tuple(E.elt(u) for u in (a, b, c, d))
        try:
            v = check_refinement(g, *quad, bounds=bounds)
        except PreconditionUnverified:
            open_.append(quad)
            continue
        if not is_square(g, *quad, v.square, bounds):
            bad.append(quad)
    if bad:
        return PropertyReport(Status.Fails, checked, tuple(bad), tuple(open_))
    return PropertyReport(Status.Unknown if open_ else Status.Holds, checked, (), tuple(open_))


# -- window classes ------------------------------------------------------------


@dataclass(frozen=True)
class ClassReport:
    classes: tuple[tuple[MonoidElement, tuple[MonoidElement, ...]], ...]
    unknown_pairs: tuple[tuple[MonoidElement, MonoidElement], ...]
    class_of: Mapping[MonoidElement, int] = field(repr=False, compare=False)

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def to_json(self) -> dict:
        return {
            "classes": [{"rep": str(r), "members": [str(m) for m in ms]} for r, ms in self.classes],
            "unknown_pairs": [[str(p), str(q)] for p, q in self.unknown_pairs],
        }


def _classes_vec(E: Engine, degree: int, b: Bounds):
    """Union-find over one multi-source search from the whole window.

    Every rewrite step ``y -> z`` met within ``b.depth`` steps of some window
    element (and with ``z`` of total at most ``b.size``) joins ``y`` and
    ``z``; each such step is an equality in the monoid, so every merge is
    certified.  The explored region is the union of the bounded closures of
    the window elements."""
    win = E.window(degree)
    parent: dict[Vec, Vec] = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while x != root:
            parent[x], x = root, parent[x]
        return root

    seen = set(win)
    frontier = list(win)
    for _ in range(b.depth):
        nxt = []
        for y in frontier:
            for _, z in E.step(y):
                if sum(z) > b.size:
                    continue
                ry, rz = find(y), find(z)
                if ry != rz:
                    parent[rz] = ry
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        if not nxt:
            break
        frontier = nxt
    groups: dict[Vec, list[Vec]] = {}
    for x in win:
        groups.setdefault(find(x), []).append(x)
    # re-key every class by its graded-lex least member
    groups = {ms[0]: ms for ms in groups.values()}
    roots = sorted(groups, key=E.key)
    return win, roots, groups


def enumerate_classes(g: SeparatedGraph, degree_bound: int, bounds: Bounds = DEFAULT_BOUNDS) -> ClassReport:
    """Partition the degree window by certified equality.

    Two window elements land in one class when a chain of rewrite steps
    inside the bounded search region links them.  Classes that no invariant separates but that were never
    merged are listed in ``unknown_pairs`` (by representative)."""
    E = engine(g)
    win, roots, groups = _classes_vec(E, degree_bound, bounds)
    classes = []
    class_of = {}
    for idx, r in enumerate(roots):
        members = tuple(E.elt(x) for x in groups[r])
        classes.append((members[0], members))
        for m in members:
            class_of[m] = idx
    unknown = []
    for i, r in enumerate(roots):
        for s in roots[i + 1:]:
            if E.refute(r, s) is None:
                unknown.append((E.elt(r), E.elt(s)))
    return ClassReport(tuple(classes), tuple(unknown), class_of)


# -- properties ----------------------------------------------------------------


@dataclass(frozen=True)
class PropertyReport:
    status: Status
    checked: int = 0
    witnesses: tuple = ()
    unresolved: tuple = ()

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "checked": self.checked,
            "witnesses": [[str(u) for u in w] for w in self.witnesses],
            "unresolved": [[str(u) for u in w] for w in self.unresolved],
        }


def is_prime_bounded(g: SeparatedGraph, v: str, bounds: Bounds = DEFAULT_BOUNDS, window_degree: int = 4) -> PropertyReport:
    """Check ``a_v <= x + y  =>  a_v <= x or a_v <= y`` on a window.

    Only certified premises count.  A case where both conclusions are
    refuted is a ``CounterexampleCandidate``; since the generators are known
    to be prime this would point to a bug in the search, not in the theory."""
    E = engine(g)
    p = E.vec(v)
    win = E.window(window_degree)
    checked = 0
    bad, open_ = [], []
    for i, x in enumerate(win):
        for y in win[i:]:
            lx = _leq_vec(E, p, x, bounds).status
            if lx is Status.LeqCertified:
                continue
            ly = _leq_vec(E, p, y, bounds).status
            if ly is Status.LeqCertified:
                continue
            s = tuple(a + b for a, b in zip(x, y))
            if _leq_vec(E, p, s, bounds).status is not Status.LeqCertified:
                continue
            checked += 1
            case = (E.elt(x), E.elt(y))
            if lx is Status.LeqRefuted and ly is Status.LeqRefuted:
                bad.append(case)
            else:
                open_.append(case)
    if bad:
        return PropertyReport(Status.CounterexampleCandidate, checked, tuple(bad), tuple(open_))
    return PropertyReport(Status.Unknown if open_ else Status.Holds, checked, (), tuple(open_))


def generator_kind(g: SeparatedGraph, dec: AdaptableDecoration, v: str) -> str:
    """``"Free"`` or ``"Regular"``, read off the component of ``v``."""
    if v not in dec.poset.component_of:
        raise UnknownVertex(v)
    return "Free" if dec.is_free(v) else "Regular"


def check_separativity_bounded(
    g: SeparatedGraph, bounds: Bounds = DEFAULT_BOUNDS, window_degree: int = 4, multiple: int = 4
) -> PropertyReport:
    """Search the window for ``a + c ~ b + c`` with ``c <= n a``, ``c <= m b``
    (``n, m <= multiple``) but ``a ~ b`` not certified.

    ``a + c ~ b + c`` forces equal invariants for ``a`` and ``b`` (the group
    images cancel ``c`` and the premise keeps the support closures equal),
    so pairs the invariants separate need no search.  Such a triple can
    therefore never be a certified violation; it is reported as unresolved."""
    E = engine(g)
    win, roots, groups = _classes_vec(E, window_degree, bounds)
    root = {x: r for r in roots for x in groups[r]}
    nonzero = [c for c in win if any(c)]
    checked = 0
    open_ = []
    for i, a in enumerate(win):
        for b in win[i + 1:]:
            checked += 1
            if root[a] == root[b] or E.refute(a, b) is not None:
                continue
            for c in nonzero:
                if not (_below_multiple(E, c, a, multiple, bounds) and _below_multiple(E, c, b, multiple, bounds)):
                    continue
                ac = tuple(p + q for p, q in zip(a, c))
                bc = tuple(p + q for p, q in zip(b, c))
                if _equal_vec(E, ac, bc, bounds).status is Status.EqualCertified:
                    open_.append((E.elt(a), E.elt(b), E.elt(c)))
                    break
    return PropertyReport(Status.Unknown if open_ else Status.Holds, checked, (), tuple(open_))


def _below_multiple(E: Engine, c: Vec, a: Vec, n: int, b: Bounds) -> bool:
    for k in range(1, n + 1):
        if _leq_vec(E, c, tuple(k * x for x in a), b).status is Status.LeqCertified:
            return True
    return False


# -- homomorphisms given on generators -----------------------------------------


def induced_hom_apply(mapping: Mapping[str, MonoidElement], elt) -> MonoidElement:
    """Linear extension of ``generator -> element``."""
    acc: dict[str, int] = {}
    for v, c in as_element(elt).terms:
        if v not in mapping:
            raise UnknownGenerator(f"no image for generator {v!r}")
        for w, d in as_element(mapping[v]).terms:
            acc[w] = acc.get(w, 0) + c * d
    return MonoidElement.of(acc)


@dataclass(frozen=True)
class HomVerdict:
    status: Status
    relation: tuple | None = None
    checked: int = 0
    unresolved: tuple = ()

    def __bool__(self):
        return self.status is Status.Holds

    def to_json(self) -> dict:
        out = {"status": self.status.value, "checked": self.checked}
        if self.relation is not None:
            v, k, lhs, rhs = self.relation
            out["relation"] = {"vertex": v, "group": k, "lhs": str(lhs), "rhs": str(rhs)}
        if self.unresolved:
            out["unresolved"] = [{"vertex": v, "group": k} for v, k in self.unresolved]
        return out


def relation_images(g_src: SeparatedGraph, mapping: Mapping[str, MonoidElement]):
    """Both sides of every defining relation of ``g_src`` pushed through ``mapping``."""
    for v in g_src.vertices:
        if v not in mapping:
            raise UnknownGenerator(f"mapping is not total: no image for {v!r}")
    for v, k, X in g_src.relations():
        lhs = as_element(mapping[v])
        rhs = ZERO
        for w in g_src.ranges(X):
            rhs = rhs + as_element(mapping[w])
        yield v, k, lhs, rhs


def hom_is_well_defined(
    g_src: SeparatedGraph, g_dst: SeparatedGraph, mapping: Mapping[str, MonoidElement], bounds: Bounds = DEFAULT_BOUNDS
) -> HomVerdict:
    """Check that every relation of the source maps to a certified equality."""
    n = 0
    open_ = []
    for v, k, lhs, rhs in relation_images(g_src, mapping):
        n += 1
        st = equal(g_dst, lhs, rhs, bounds).status
        if st is Status.UnequalCertified:
            return HomVerdict(Status.Fails, (v, k, lhs, rhs), n)
        if st is Status.Unknown:
            open_.append((v, k))
    return HomVerdict(Status.Unknown if open_ else Status.Holds, None, n, tuple(open_))
