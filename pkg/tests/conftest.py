from __future__ import annotations

import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sepmon import corpus
from sepmon.graph import build_separated_graph

settings.register_profile(
    "sepmon",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("sepmon")


@pytest.fixture
def m_graph():
    return corpus.load("m_graph")


@pytest.fixture
def intro():
    return corpus.load("intro")


@pytest.fixture
def intro_tilde():
    return corpus.load("intro_tilde")


@st.composite
def adaptable_graphs(draw, max_blocks: int = 4, max_groups: int = 3):
    """Random adaptable separated graphs built bottom-up.

    Block 0 is a sink.  Every later block is a sink, a free vertex whose
    groups each hold one loop plus connectors to earlier vertices, or a
    regular 2-cycle ``u <-> w`` with loops and one group per vertex."""
    n = draw(st.integers(1, max_blocks))
    verts: list[str] = []
    edges: list[tuple[str, str, str]] = []
    groups: dict[str, list[list[str]]] = {}
    ids = itertools.count()

    def new(src, dst):
        eid = f"e{next(ids)}"
        edges.append((eid, src, dst))
        return eid

    for i in range(n):
        kind = "sink" if i == 0 else draw(st.sampled_from(["sink", "free", "free", "regular"]))
        lower = list(verts)
        if kind == "sink":
            verts.append(f"v{i}")
        elif kind == "free":
            v = f"v{i}"
            verts.append(v)
            k = draw(st.integers(1, max_groups))
            groups[v] = []
            for _ in range(k):
                targets = draw(st.lists(st.sampled_from(lower), min_size=1, max_size=2))
                groups[v].append([new(v, v)] + [new(v, t) for t in targets])
        else:
            u, w = f"v{i}u", f"v{i}w"
            verts += [u, w]
            gu = [new(u, u), new(u, w)]
            gw = [new(w, w), new(w, u)]
            if lower and draw(st.booleans()):
                gu.append(new(u, draw(st.sampled_from(lower))))
            groups[u], groups[w] = [gu], [gw]
    return build_separated_graph(verts, edges, groups)


def powerset(items):
    items = list(items)
    return [frozenset(c) for r in range(len(items) + 1) for c in itertools.combinations(items, r)]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
