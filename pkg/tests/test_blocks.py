from __future__ import annotations

import pytest
from hypothesis import given

from conftest import adaptable_graphs
from sepmon import corpus
from sepmon.blocks import (
    building_blocks,
    choices,
    components,
    eligible_pairs,
    family_FJ,
    graph_of_choice,
    member_properties,
    pullback_data,
    verify_pullback_bounded,
)
from sepmon.cover import build_auxiliary
from sepmon.errors import InvalidChoice, NotLower, PreconditionViolated
from sepmon.graph import classify_adaptable, tree_vertices
from sepmon.monoid import ZERO, MonoidElement, induced_hom_apply

TILDE_J = {"2#1", "2#2", "3#1", "3#2"}


def vsets(graphs):
    return [set(g.vertices) for g in graphs]


@pytest.fixture
def tilde_dec(intro_tilde):
    return classify_adaptable(intro_tilde)


# -- choice graphs and blocks ---------------------------------------------------------------


def test_blue_choice_on_tilde(intro_tilde, tilde_dec):
    E = graph_of_choice(intro_tilde, tilde_dec, set(), {"1": 0, "2#1": 0, "2#2": 0})
    assert set(E.vertices) == {"1", "2#1", "3#1", "2#2", "3#2"}
    assert vsets(components(E)) == [{"1", "2#1", "3#1"}, {"2#2", "3#2"}]


def same_graph(a, b):
    return (
        set(a.vertices) == set(b.vertices)
        and {e.id for e in a.edges} == {e.id for e in b.edges}
        and all(set(a.groups_at(v)) == set(b.groups_at(v)) for v in a.vertices)
    )


def test_full_J_gives_whole_graph(intro_tilde, tilde_dec):
    free = tilde_dec.free_vertices
    assert same_graph(graph_of_choice(intro_tilde, tilde_dec, free, {}), intro_tilde)
    (only,) = family_FJ(intro_tilde, tilde_dec, free)
    assert same_graph(only, intro_tilde)


def test_m_graph_choice(m_graph):
    dec = classify_adaptable(m_graph)
    E = graph_of_choice(m_graph, dec, set(), {"p": 0})
    # b is still a vertex of its own component; the block through p is {p, a}
    assert vsets(components(E))[0] == {"a", "p"}


def test_choice_errors(intro_tilde, tilde_dec):
    with pytest.raises(InvalidChoice):
        graph_of_choice(intro_tilde, tilde_dec, set(), {"1": 0})
    with pytest.raises(InvalidChoice):
        graph_of_choice(intro_tilde, tilde_dec, set(), {"1": 5, "2#1": 0, "2#2": 0})
    with pytest.raises(NotLower):
        graph_of_choice(intro_tilde, tilde_dec, {"2#1"}, {"1": 0, "2#2": 0})


def test_building_blocks_of_tilde(intro_tilde):
    got = vsets(building_blocks(intro_tilde))
    assert got == [{"1", "2#1", "3#1"}, {"2#2", "3#2"}, {"1", "2#2", "3#2"}, {"2#1", "3#1"}]


def test_building_blocks_of_m_graph(m_graph):
    blocks = building_blocks(m_graph)
    assert vsets(blocks) == [{"a", "p"}, {"b", "p"}]
    assert blocks[0].groups_at("p") == (frozenset({"lp1", "pa"}),)


def test_blocks_without_separation_are_components():
    g = corpus.load("shared_tree")
    assert building_blocks(g) == components(g)


def test_family_through_root(intro_tilde, tilde_dec):
    fam = family_FJ(intro_tilde, tilde_dec, TILDE_J)
    through = [set(F.vertices) for F in fam if "1" in F.vertices]
    assert through == [{"1", "2#1", "3#1"}, {"1", "2#2", "3#2"}]
    assert family_FJ(intro_tilde, tilde_dec, set()) == building_blocks(intro_tilde)


def test_choice_order_is_lexicographic(intro_tilde, tilde_dec):
    cs = choices(intro_tilde, tilde_dec, set())
    assert cs[0] == {"1": 0, "2#1": 0, "2#2": 0} and cs[1] == {"1": 1, "2#1": 0, "2#2": 0}


@given(adaptable_graphs())
def test_members_have_properties(g):
    F, _ = build_auxiliary(g)
    dec = classify_adaptable(F)
    free = sorted(dec.free_vertices)
    # J empty and J everything are always lower
    for J in (frozenset(), frozenset(free)):
        for M in family_FJ(F, dec, J):
            assert all(member_properties(F, dec, J, M).values())


# -- pullback data --------------------------------------------------------------------------


def test_tilde_pullback_data(intro_tilde, tilde_dec):
    d = pullback_data(intro_tilde, tilde_dec, TILDE_J, "1")
    assert d.F == intro_tilde
    assert vsets(d.F_i) == [{"1", "2#1", "3#1"}, {"1", "2#2", "3#2"}]
    assert d.H_i == (frozenset({"2#1", "3#1"}), frozenset({"2#2", "3#2"}))
    assert d.Fbar.vertices == ("1",)
    assert d.Fbar.groups_at("1") == (frozenset({"l1b"}), frozenset({"l1r"}))
    assert all(d.checks.values())


def test_m_graph_pullback_data(m_graph):
    d = pullback_data(m_graph, classify_adaptable(m_graph), {"a", "b"}, "p")
    assert vsets(d.F_i) == [{"a", "p"}, {"b", "p"}]
    assert d.Fbar.vertices == ("p",)
    assert all(d.checks.values())


def test_theta_rho_identities(intro_tilde, tilde_dec):
    d = pullback_data(intro_tilde, tilde_dec, TILDE_J, "1")
    for i in range(d.r):
        for w in d.H_i[i]:
            assert d.theta_i[i][w] == MonoidElement.gen(w)
        for j in range(d.r):
            if j != i:
                assert all(d.theta_i[i][w] == ZERO for w in d.H_i[j])
    composite = [
        {w: induced_hom_apply(d.rho_i[i], d.theta_i[i][w]) for w in d.F.vertices} for i in range(d.r)
    ]
    assert composite[0] == composite[1]


@pytest.mark.parametrize(
    "J, v, which",
    [
        (TILDE_J, "2#1", "v_free_outside_J"),
        ({"3#1", "3#2"}, "1", "v_minimal"),
        ({"3#1"}, "2#2", "J_contains_sinks"),
        ({"2#1", "3#1", "3#2"}, "2#2", "v_multiple_groups"),
        ({"2#1", "3#2"}, "1", "J_lower"),
    ],
)
def test_pullback_preconditions(intro_tilde, tilde_dec, J, v, which):
    with pytest.raises(PreconditionViolated) as exc:
        pullback_data(intro_tilde, tilde_dec, J, v)
    assert exc.value.which == which


def test_pullback_requires_condition_F(intro):
    with pytest.raises(PreconditionViolated) as exc:
        pullback_data(intro, None, {"3"}, "2")
    assert exc.value.which == "condition_F"


@given(adaptable_graphs(max_blocks=3))
def test_strict_trees_split(g):
    F, _ = build_auxiliary(g)
    dec = classify_adaptable(F)
    for J, v in eligible_pairs(F, dec):
        d = pullback_data(F, dec, J, v)
        assert tree_vertices(F, v, strict=True) == frozenset().union(*d.H_i)
        assert all(d.checks.values())


# -- bounded verification ----------------------------------------------------------------------


def test_verify_tilde_degree_3(intro_tilde, tilde_dec):
    d = pullback_data(intro_tilde, tilde_dec, TILDE_J, "1")
    rep = verify_pullback_bounded(d, 3)
    assert rep.status == "Verified"
    assert rep.surjective_checked > 0 and rep.injective_checked > 0


def test_verify_m_graph_degree_4(m_graph):
    d = pullback_data(m_graph, classify_adaptable(m_graph), {"a", "b"}, "p")
    assert verify_pullback_bounded(d, 4).status == "Verified"


def test_verify_empty_trees():
    # both groups at p loop into sinks it does not reach otherwise: trees are empty
    g = corpus.load("free_over_regular")
    d = pullback_data(g, classify_adaptable(g), {"s"}, "p")
    assert verify_pullback_bounded(d, 2).status == "Verified"


@given(adaptable_graphs(max_blocks=3))
def test_verify_random(g):
    F, _ = build_auxiliary(g)
    dec = classify_adaptable(F)
    for J, v in eligible_pairs(F, dec)[:2]:
        d = pullback_data(F, dec, J, v)
        assert verify_pullback_bounded(d, 2).status == "Verified"
