from __future__ import annotations

import itertools
import random
from math import gcd

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import adaptable_graphs
from sepmon import corpus
from sepmon.blocks import pullback_data
from sepmon.cover import build_auxiliary
from sepmon.errors import IllDefinedAtGroupLevel, InvalidIndex
from sepmon.graph import build_separated_graph, classify_adaptable, quotient
from sepmon.ktheory import (
    check_kernel_cyclic_lemma,
    cokernel,
    grothendieck_group,
    hermite_normal_form,
    induced_group_hom,
    invariant_factors,
    kernel,
    matmul,
    relation_matrix,
    same_subgroup,
    smith_normal_form,
)
from sepmon.monoid import Status, equal, window


def minors_oracle(a):
    """Invariant factors from gcds of k x k minors: d_k = D_k / D_(k-1)."""
    M = sympy.Matrix(a)
    rows, cols = M.shape
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = gcd(g, int(M.extract(list(r), list(c)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def random_matrix(rng, max_dim=5):
    r, c = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]


def det(m):
    return int(sympy.Matrix(m).det())


# -- Smith normal form ---------------------------------------------------------------------


def test_snf_examples():
    S, _, _ = smith_normal_form([[1, 0], [0, 1]])
    assert S == [[1, 0], [0, 1]]
    S, _, _ = smith_normal_form([[0]])
    assert S == [[0]]
    S, _, _ = smith_normal_form([[2, 4], [6, 8]])
    assert S == [[2, 0], [0, 4]]


def test_snf_against_minors_and_unimodular():
    rng = random.Random(11)
    for _ in range(120):
        a = random_matrix(rng, 4)
        S, U, V = smith_normal_form(a)
        assert matmul(matmul(U, a), V) == S
        assert abs(det(U)) == 1 and abs(det(V)) == 1
        diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
        assert all(S[i][j] == 0 for i in range(len(S)) for j in range(len(S[0])) if i != j)
        nz = [d for d in diag if d]
        assert all(d > 0 for d in nz)
        assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
        assert invariant_factors(a) == minors_oracle(a)


def test_hnf_is_canonical():
    rows = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    H = hermite_normal_form(rows, 3)
    assert H == hermite_normal_form([[r[j] for j in range(3)] for r in reversed(rows)], 3)
    for i, r in enumerate(H):
        c = next(k for k, x in enumerate(r) if x)
        assert r[c] > 0
        assert all(0 <= above[c] < r[c] for above in H[:i])


# -- Grothendieck groups -----------------------------------------------------------------------


def test_group_examples(m_graph, intro):
    assert grothendieck_group(m_graph).to_json() == {"free_rank": 1, "torsion": []}
    assert str(grothendieck_group(corpus.load("two_sinks"))) == "Z^2"
    assert str(grothendieck_group(intro)) == "Z"


def test_torsion_appears():
    # v = v + 2w, w = w gives Z/2 on w
    g = build_separated_graph(
        ["v", "w"],
        [("l", "v", "v"), ("a", "v", "w"), ("b", "v", "w")],
        {"v": [["l", "a", "b"]]},
    )
    G = grothendieck_group(g)
    assert G.torsion == (2,) and G.free_rank == 1


@given(adaptable_graphs())
def test_projection_kills_relations(g):
    G = grothendieck_group(g)
    for row in relation_matrix(g):
        assert not any(G.image(row))


@given(adaptable_graphs())
def test_group_rank_matches_oracle(g):
    R = relation_matrix(g)
    n = len(g.vertices)
    G = grothendieck_group(g)
    inv = minors_oracle(R) if R else []
    assert G.free_rank == n - len(inv)
    assert list(G.torsion) == [d for d in inv if d > 1]


# -- homomorphisms and kernels ------------------------------------------------------------------


def test_identity_hom(intro):
    G = grothendieck_group(intro)
    h = induced_group_hom(G, G, {v: v for v in G.generators})
    assert [list(r) for r in h.matrix] == [[1]]
    assert kernel(h) == []


def test_cover_hom_sends_a1_to_a1(intro):
    F, cov = build_auxiliary(intro)
    GF, G = grothendieck_group(F), grothendieck_group(intro)
    h = induced_group_hom(GF, G, dict(cov.vmap))
    assert h.apply(GF.image({"1": 1})) == G.image({"1": 1})


def test_quotient_hom_kills_ideal(m_graph):
    Q = quotient(m_graph, ["a", "b"])
    G, GQ = grothendieck_group(m_graph), grothendieck_group(Q)
    h = induced_group_hom(G, GQ, {"p": "p", "a": {}, "b": {}})
    for v in ("a", "b"):
        assert not any(h.apply(G.image({v: 1})))
    assert any(h.apply(G.image({"p": 1})))


def test_ill_defined_at_group_level(m_graph):
    G = grothendieck_group(m_graph)
    T = grothendieck_group(corpus.load("two_sinks"))
    with pytest.raises(IllDefinedAtGroupLevel):
        induced_group_hom(G, T, {"p": "s", "a": "t", "b": {}})


def test_zero_hom_kernel():
    Z = cokernel([], ["x"])
    h = induced_group_hom(Z, Z, {"x": {}})
    assert kernel(h) == [(1,)]


def test_kernel_with_torsion_target():
    Z = cokernel([], ["x"])
    Z2 = cokernel([[2]], ["y"])
    h = induced_group_hom(Z, Z2, {"x": "y"})
    assert same_subgroup(Z, kernel(h), [(2,)])


@given(adaptable_graphs(), st.data())
def test_equal_elements_share_image(g, data):
    win = window(g, 2)
    x, y = data.draw(st.sampled_from(win)), data.draw(st.sampled_from(win))
    if equal(g, x, y).status is Status.EqualCertified:
        G = grothendieck_group(g)
        assert G.image(dict(x.items())) == G.image(dict(y.items()))


# -- the cyclic kernel lemma --------------------------------------------------------------------


def _intro_data():
    g = corpus.load("intro_tilde")
    dec = classify_adaptable(g)
    return pullback_data(g, dec, {"2#1", "2#2", "3#1", "3#2"}, "1")


def test_kernel_lemma_intro():
    d = _intro_data()
    rep = check_kernel_cyclic_lemma(d, 0)
    assert rep.status == "Verified"
    G = rep.group
    assert str(G) == "Z"
    x2 = G.image({"2#1": 1})
    assert same_subgroup(G, rep.kernel, [x2])
    assert check_kernel_cyclic_lemma(d, 1).status == "Verified"
    with pytest.raises(InvalidIndex):
        check_kernel_cyclic_lemma(d, 2)


def test_kernel_lemma_m_graph(m_graph):
    d = pullback_data(m_graph, classify_adaptable(m_graph), {"a", "b"}, "p")
    rep = check_kernel_cyclic_lemma(d, 0)
    assert rep.status == "Verified"
    assert same_subgroup(rep.group, rep.kernel, [rep.group.image({"a": 1})])


def test_kernel_lemma_empty_tree():
    g = corpus.load("free_over_regular")
    d = pullback_data(g, classify_adaptable(g), {"s"}, "p")
    assert all(check_kernel_cyclic_lemma(d, i).status == "Verified" for i in range(d.r))


def test_intro_tilde_group_on_both_sides():
    F, _ = build_auxiliary(corpus.load("intro"))
    assert str(grothendieck_group(F)) == "Z"
