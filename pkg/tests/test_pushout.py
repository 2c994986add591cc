from __future__ import annotations

import json

import pytest
from hypothesis import given

from conftest import adaptable_graphs
from sepmon import corpus
from sepmon.cover import build_crowned_chain, identity_cover
from sepmon.errors import InvalidPair
from sepmon.graph import find_isomorphism
from sepmon.monoid import MonoidElement, Status, equal, induced_hom_apply, parse_element
from sepmon.pushout import (
    CLAUSES,
    corrupted_gamma,
    crowned_pair,
    crowned_pushout,
    ideal_intersection_bounded,
    pairs_of_chain,
    pushout_maps,
    validate_crowned_pair,
    verify_pushout_is_target,
)

E = parse_element


def intro_pair():
    (p,) = pairs_of_chain(build_crowned_chain(corpus.load("intro")))
    return p


# -- validation ---------------------------------------------------------------------------


def test_intro_pair_holds():
    p = intro_pair()
    v = validate_crowned_pair(p.g1, p.g2, p.cover, p.v1, p.v2)
    assert v.status is Status.Holds
    assert set(v.clauses().values()) == {"Holds"}
    assert (p.v1, p.v2, p.v) == ("2#1", "2#2", "2")
    assert p.T1 == {"2#1", "3#1"} and p.T2 == {"2#2", "3#2"}
    json.dumps(v.to_json())


def test_same_vertex_fails_disjointness():
    p = intro_pair()
    v = validate_crowned_pair(p.g1, p.g2, p.cover, p.v1, p.v1)
    assert v.status is Status.Fails and v.clause == "ii"
    after = CLAUSES[CLAUSES.index("ii") + 1 :]
    assert all(v.clauses()[c] == "NotChecked" for c in after)


def test_split_group_fails_last_clause():
    v = validate_crowned_pair(*corpus.load_pair("split_group"))
    assert v.status is Status.Fails and v.clause == "v"
    assert v.witness


def test_different_images_fail_crown(intro):
    p = intro_pair()
    v = validate_crowned_pair(p.g1, p.g2, p.cover, "2#1", "3#2")
    assert v.clause == "crown"


def test_identity_is_not_a_pair(m_graph):
    c = identity_cover(m_graph)
    v = validate_crowned_pair(m_graph, m_graph, c, "a", "b")
    assert v.status is Status.Fails and v.clause == "crown"


@pytest.mark.parametrize("name", ["m_merge", "sinks"])
def test_hand_built_pairs_hold(name):
    assert validate_crowned_pair(*corpus.load_pair(name)).status is Status.Holds


# -- presentation -------------------------------------------------------------------------


def test_intro_presentation():
    Q = crowned_pushout(intro_pair())
    assert Q.generators == ("1", "2#1", "3#1")
    assert Q.psi == {"2#1": "2#2", "3#1": "3#2"}
    assert sorted((v, str(x)) for v, x in Q.relations) == [
        ("1", "1 + 2#1"),
        ("1", "1 + 2#1"),
        ("2#1", "2#1 + 3#1"),
    ]
    # the presentation is the base graph again
    assert find_isomorphism(Q.as_separated_graph(), corpus.load("intro")) is not None
    json.dumps(Q.to_json())


def test_m_merge_presentation():
    Q = crowned_pushout(crowned_pair(*corpus.load_pair("m_merge")))
    assert Q.generators == ("a", "p")
    assert [(v, str(x)) for v, x in Q.relations] == [("p", "a + p"), ("p", "a + p")]


def test_invalid_pair_has_no_pushout():
    with pytest.raises(InvalidPair):
        crowned_pushout(crowned_pair(*corpus.load_pair("split_group")))


def test_theta_identifies_trees():
    p = intro_pair()
    Q = crowned_pushout(p)
    for w in p.T1:
        assert Q.cls[w] == Q.cls[Q.psi[w]] == w


# -- the pushout maps -----------------------------------------------------------------------


@pytest.mark.parametrize("name", ["m_merge", "sinks"])
def test_hand_built_pushouts_verify(name):
    rep = verify_pushout_is_target(crowned_pair(*corpus.load_pair(name)))
    assert rep.status == "Verified"


def test_intro_pushout_verified():
    rep = verify_pushout_is_target(intro_pair())
    assert rep.status == "Verified"
    assert all(rep.identities.values())
    assert rep.cases["tree"]["Holds"] == 1 and rep.cases["mixed"]["Holds"] == 2
    assert not any(c["Fails"] or c["Unknown"] for c in rep.cases.values())


def test_maps_are_mutually_inverse():
    p = intro_pair()
    Q = crowned_pushout(p)
    rho, gamma = pushout_maps(p, Q)
    for c in Q.generators:
        (w,) = rho[c].support
        assert gamma[w] == MonoidElement.gen(c)
    for w in p.g2.vertices:
        (c,) = gamma[w].support
        assert rho[c] == MonoidElement.gen(w)


def test_negative_control_fails():
    p = intro_pair()
    rep = verify_pushout_is_target(p, gamma_override=corrupted_gamma(p))
    assert rep.status == "Fails" and rep.witness


def test_ideal_intersection_is_trivial():
    assert ideal_intersection_bounded(intro_pair()) == []


@pytest.mark.parametrize("name", ["intro_three", "free_over_regular", "shared_tree"])
def test_corpus_chain_steps_verify(name):
    for p in pairs_of_chain(build_crowned_chain(corpus.load(name))):
        assert validate_crowned_pair(p.g1, p.g2, p.cover, p.v1, p.v2)
        assert verify_pushout_is_target(p).status == "Verified"


@given(adaptable_graphs(max_blocks=3))
def test_random_chain_steps_are_pushouts(g):
    for p in pairs_of_chain(build_crowned_chain(g)):
        rep = verify_pushout_is_target(p)
        assert rep.status == "Verified", rep.witness
        Q = crowned_pushout(p)
        rho, _ = pushout_maps(p, Q)
        # each relation of Q holds in the target after applying rho
        for v, x in Q.relations:
            img = induced_hom_apply(rho, x)
            assert equal(p.g2, rho[v], img).status is Status.EqualCertified
