"""Grothendieck groups of graph monoids through exact integer linear algebra.

``G(M(E,C))`` is the cokernel of the relation matrix whose rows are
``e_v - sum(e_r(e), e in X)``, one for each group ``X`` at ``v``.  The Smith
normal form ``U R V = S`` turns it into ``Z/d_1 + ... + Z/d_k + Z^f`` and the
columns of ``V`` give the projection from the generator lattice.

Matrices are plain lists of lists of Python ints, so there is no overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import IllDefinedAtGroupLevel, InvalidIndex
from .graph import SeparatedGraph, restrict

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def vecmat(x: Sequence[int], a: Matrix, cols: int) -> list[int]:
    out = [0] * cols
    for xi, row in zip(x, a):
        if xi:
            for j in range(cols):
                out[j] += xi * row[j]
    return out


# -- Smith normal form ---------------------------------------------------------


def _snf(a: Matrix, ncols: int):
    m, n = len(a), ncols
    S = [list(r) for r in a]
    U = identity(m)
    V = identity(n)
    Vi = identity(n)

    def swap_rows(i, j):
        if i != j:
            S[i], S[j] = S[j], S[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for r in S:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        S[dst] = [x + c * y for x, y in zip(S[dst], S[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        # col_dst += c * col_src
        for r in S:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]
        Vi[src] = [x - c * y for x, y in zip(Vi[src], Vi[dst])]

    for t in range(min(m, n)):
        cand = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not cand:
            break
        _, i, j = min(cand)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
            rest = [(abs(S[i][t]), i, t) for i in range(t + 1, m) if S[i][t]]
            rest += [(abs(S[t][j]), t, j) for j in range(t + 1, n) if S[t][j]]
            if rest:
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return S, U, V, Vi


def smith_normal_form(a: Matrix, ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(S, U, V)`` with ``U a V = S`` diagonal, ``d_1 | d_2 | ...``,
    ``U`` and ``V`` unimodular.  ``ncols`` is needed only for 0-row input."""
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    S, U, V, _ = _snf(a, n)
    return S, U, V


def invariant_factors(a: Matrix, ncols: int | None = None) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    S, _, _ = smith_normal_form(a, ncols)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


# -- Hermite normal form -------------------------------------------------------


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Row-style HNF of the lattice spanned by ``rows``: echelon form, positive
    pivots, entries above each pivot reduced into ``[0, pivot)``, zero rows dropped."""
    A = [list(r) for r in rows if any(r)]
    out: Matrix = []
    col = 0
    while A and col < ncols:
        nz = [r for r in A if r[col]]
        if not nz:
            col += 1
            continue
        # Euclid on the column until a single nonzero entry remains
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for k in range(col, ncols):
                    r[k] -= q * piv[k]
            nz = [r for r in nz if r[col]]
        piv = nz[0]
        if piv[col] < 0:
            piv[:] = [-x for x in piv]
        A = [r for r in A if r is not piv and any(r)]
        out.append(piv)
        col += 1
    for i, r in enumerate(out):
        c = next(k for k, x in enumerate(r) if x)
        for above in out[:i]:
            q = above[c] // r[c]
            if q:
                above[:] = [x - q * y for x, y in zip(above, r)]
    return out


def left_kernel(a: Matrix, ncols: int) -> Matrix:
    """A basis of ``{x : x a = 0}`` over the integers."""
    S, U, _ = smith_normal_form(a, ncols)
    rank = sum(1 for i in range(min(len(S), ncols)) if S[i][i])
    return [U[i] for i in range(rank, len(a))]


# -- groups --------------------------------------------------------------------


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z/d_1 + ... + Z/d_k + Z^free_rank`` presented as a cokernel.

    ``projection[g]`` is the canonical-coordinate image of generator ``g``
    (unreduced), ``lift[j]`` a lattice vector mapping onto coordinate ``j``.
    """

    generators: tuple[str, ...]
    free_rank: int
    torsion: tuple[int, ...]
    projection: tuple[tuple[int, ...], ...]
    lift: tuple[tuple[int, ...], ...]
    relations: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.torsion) + self.free_rank

    def index(self, gen: str) -> int:
        return self.generators.index(gen)

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        t = len(self.torsion)
        return tuple(c % self.torsion[j] if j < t else c for j, c in enumerate(coords))

    def image(self, vec) -> tuple[int, ...]:
        """Canonical coordinates of a lattice vector, given as a list over the
        generators or as a mapping ``generator -> coefficient``."""
        if isinstance(vec, Mapping) or hasattr(vec, "items"):
            items = [(self.generators.index(g), c) for g, c in vec.items()]
        else:
            items = list(enumerate(vec))
        out = [0] * self.rank
        for i, c in items:
            if c:
                row = self.projection[i]
                for j in range(self.rank):
                    out[j] += c * row[j]
        return self.reduce(out)

    def is_trivial(self) -> bool:
        return self.rank == 0

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) or "0"


def cokernel(relations: Sequence[Sequence[int]], generators: Sequence[str]) -> FgAbelianGroup:
    n = len(generators)
    R = [list(r) for r in relations]
    S, _, V, Vi = _snf(R, n)
    diag = [S[i][i] if i < len(S) else 0 for i in range(n)]
    torsion_idx = [i for i, d in enumerate(diag) if d >= 2]
    free_idx = [i for i, d in enumerate(diag) if d == 0]
    keep = torsion_idx + free_idx
    projection = tuple(tuple(V[g][j] for j in keep) for g in range(n))
    lift = tuple(tuple(Vi[j]) for j in keep)
    return FgAbelianGroup(
        generators=tuple(generators),
        free_rank=len(free_idx),
        torsion=tuple(diag[i] for i in torsion_idx),
        projection=projection,
        lift=lift,
        relations=tuple(tuple(r) for r in R),
    )


def relation_matrix(g: SeparatedGraph) -> Matrix:
    pos = {v: i for i, v in enumerate(g.vertices)}
    rows = []
    for v, _, X in g.relations():
        row = [0] * len(g.vertices)
        row[pos[v]] += 1
        for w in g.ranges(X):
            row[pos[w]] -= 1
        rows.append(row)
    return rows


@lru_cache(maxsize=512)
def grothendieck_group(g: SeparatedGraph) -> FgAbelianGroup:
    """``G(M(E,C))`` with its projection from ``Z^{E^0}``."""
    return cokernel(relation_matrix(g), g.vertices)


# -- homomorphisms -------------------------------------------------------------


@dataclass(frozen=True)
class GroupHom:
    src: FgAbelianGroup
    dst: FgAbelianGroup
    matrix: tuple[tuple[int, ...], ...]  # src canonical coords -> dst canonical coords

    def apply(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.dst.reduce(vecmat(coords, [list(r) for r in self.matrix], self.dst.rank))

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix]}


def _as_items(x):
    if isinstance(x, Mapping):
        return x.items()
    if hasattr(x, "items"):
        return x.items()
    return [(x, 1)]


def induced_group_hom(src: FgAbelianGroup, dst: FgAbelianGroup, mapping: Mapping) -> GroupHom:
    """Linearize ``generator -> element`` to a homomorphism of canonical forms.

    Images may be generator tokens, mappings ``token -> coefficient`` or
    :class:`~sepmon.monoid.MonoidElement` values."""
    n_dst = len(dst.generators)
    pos = {g: i for i, g in enumerate(dst.generators)}
    A = []
    for gen in src.generators:
        row = [0] * n_dst
        for w, c in _as_items(mapping[gen]):
            row[pos[w]] += c
        A.append(row)
    for rel in src.relations:
        img = vecmat(rel, A, n_dst)
        if any(dst.image(img)):
            raise IllDefinedAtGroupLevel(f"relation {list(rel)} maps to a nonzero class")
    M = []
    for lift in src.lift:
        M.append(dst.image(vecmat(lift, A, n_dst)))
    return GroupHom(src, dst, tuple(M))


def _torsion_rows(G: FgAbelianGroup) -> Matrix:
    return [[d if j == i else 0 for j in range(G.rank)] for i, d in enumerate(G.torsion)]


def subgroup_basis(G: FgAbelianGroup, gens: Sequence[Sequence[int]]) -> Matrix:
    """HNF of the preimage lattice in ``Z^rank`` of the subgroup spanned by ``gens``."""
    return hermite_normal_form([list(x) for x in gens] + _torsion_rows(G), G.rank)


def same_subgroup(G: FgAbelianGroup, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return subgroup_basis(G, a) == subgroup_basis(G, b)


def kernel(h: GroupHom) -> list[tuple[int, ...]]:
    """Generators of ``ker h`` in source canonical coordinates, Hermite-reduced."""
    k = h.src.rank
    B = [list(r) for r in h.matrix] + _torsion_rows(h.dst)
    if k == 0:
        return []
    K = left_kernel(B, h.dst.rank)
    gens = [r[:k] for r in K]
    out = []
    for r in subgroup_basis(h.src, gens):
        red = h.src.reduce(r)
        if any(red):
            out.append(red)
    return out


# -- the cyclic kernel lemma ---------------------------------------------------


@dataclass(frozen=True)
class KernelLemmaReport:
    status: str  # Verified / Fails
    kernel: tuple[tuple[int, ...], ...]
    expected: tuple[int, ...]
    group: FgAbelianGroup

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "kernel": [list(r) for r in self.kernel],
            "expected": list(self.expected),
            "group": self.group.to_json(),
        }


def kernel_cyclic_check(F: SeparatedGraph, H, element: Mapping[str, int]) -> KernelLemmaReport:
    """Compare ``ker(G(M(F_H)) -> G(M(F)))`` with the cyclic subgroup spanned
    by ``element`` (a vector over ``H``)."""
    H = frozenset(H)
    GH = grothendieck_group(restrict(F, H))
    GF = grothendieck_group(F)
    h = induced_group_hom(GH, GF, {w: w for w in GH.generators})
    K = kernel(h)
    x = GH.image(element) if GH.generators else ()
    ok = same_subgroup(GH, K, [x]) if GH.rank else True
    return KernelLemmaReport("Verified" if ok else "Fails", tuple(K), tuple(x), GH)


def check_kernel_cyclic_lemma(d, i: int) -> KernelLemmaReport:
    """Kernel check for the ``i``-th factor (0-based) of pullback data ``d``."""
    r = len(d.F_i)
    if not 0 <= i < r:
        raise InvalidIndex(f"factor index {i} outside 0..{r - 1}")
    Fi = d.F_i[i]
    elt: dict[str, int] = {}
    for w in Fi.ranges(d.X_prime[i]):
        elt[w] = elt.get(w, 0) + 1
    return kernel_cyclic_check(Fi, d.H_i[i], elt)
