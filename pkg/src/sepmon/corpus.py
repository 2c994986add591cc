"""Small named separated graphs used by the test-suite, the acceptance run
and ``sepmon pipeline --corpus``.

Every entry is stored in the JSON ingestion format.  Edges are written as
``"id:src>dst"`` for brevity and expanded by :func:`graph_json`.
"""

from __future__ import annotations

from .graph import SeparatedGraph, graph_from_json


def _expand(vertices, edges, groups):
    out = []
    for entry in edges:
        eid, rest = entry.split(":")
        src, dst = rest.split(">")
        out.append({"id": eid, "src": src, "dst": dst})
    return {"vertices": list(vertices), "edges": out, "groups": groups}


CORPUS: dict[str, dict] = {
    # p = p + a = p + b
    "m_graph": _expand(
        ["p", "a", "b"],
        ["lp1:p>p", "pa:p>a", "lp2:p>p", "pb:p>b"],
        {"p": [["lp1", "pa"], ["lp2", "pb"]]},
    ),
    # the introductory example: two groups at 1 both reach 2
    "intro": _expand(
        ["1", "2", "3"],
        ["l1b:1>1", "e12b:1>2", "l1r:1>1", "e12r:1>2", "l2:2>2", "e23:2>3"],
        {"1": [["l1b", "e12b"], ["l1r", "e12r"]], "2": [["l2", "e23"]]},
    ),
    # its auxiliary graph, tokens as produced by the cover construction
    "intro_tilde": _expand(
        ["1", "2#1", "2#2", "3#1", "3#2"],
        [
            "l1b:1>1", "e12b:1>2#1", "l1r:1>1", "e12r:1>2#2",
            "l2#1:2#1>2#1", "e23#1:2#1>3#1", "l2#2:2#2>2#2", "e23#2:2#2>3#2",
        ],
        {
            "1": [["l1b", "e12b"], ["l1r", "e12r"]],
            "2#1": [["l2#1", "e23#1"]],
            "2#2": [["l2#2", "e23#2"]],
        },
    ),
    # three groups at 1 all reaching 2
    "intro_three": _expand(
        ["1", "2", "3"],
        [
            "l1a:1>1", "e12a:1>2", "l1b:1>1", "e12b:1>2", "l1c:1>1", "e12c:1>2",
            "l2:2>2", "e23:2>3",
        ],
        {"1": [["l1a", "e12a"], ["l1b", "e12b"], ["l1c", "e12c"]], "2": [["l2", "e23"]]},
    ),
    "sink": _expand(["s"], [], {}),
    "two_sinks": _expand(["s", "t"], [], {}),
    # ordinary graph monoid on a chain 1 -> 2 -> 3
    "free_chain": _expand(
        ["1", "2", "3"],
        ["l1:1>1", "e12:1>2", "l2:2>2", "e23:2>3"],
        {"1": [["l1", "e12"]], "2": [["l2", "e23"]]},
    ),
    # regular 2-cycle over a sink
    "regular_cycle": _expand(
        ["u", "w", "z"],
        ["uu:u>u", "uw:u>w", "ww:w>w", "wu:w>u", "wz:w>z"],
        {"u": [["uu", "uw"]], "w": [["ww", "wu", "wz"]]},
    ),
    # regular single vertex: a_v = 2 a_v + a_s
    "regular_loop": _expand(
        ["v", "s"],
        ["l1:v>v", "l2:v>v", "vs:v>s"],
        {"v": [["l1", "l2", "vs"]]},
    ),
    # free vertex with two groups above a regular component and a sink
    "free_over_regular": _expand(
        ["p", "u", "w", "s"],
        ["lp1:p>p", "pu:p>u", "lp2:p>p", "ps:p>s", "uu:u>u", "uw:u>w", "ww:w>w", "wu:w>u"],
        {"p": [["lp1", "pu"], ["lp2", "ps"]], "u": [["uu", "uw"]], "w": [["ww", "wu"]]},
    ),
    # two free vertices sharing a lower tree
    "shared_tree": _expand(
        ["x", "y", "z", "s"],
        ["lx:x>x", "xz:x>z", "ly:y>y", "yz:y>z", "lz:z>z", "zs:z>s"],
        {"x": [["lx", "xz"]], "y": [["ly", "yz"]], "z": [["lz", "zs"]]},
    ),
    # diamond: two groups at t reach a and b, both of which reach the sink c
    "diamond": _expand(
        ["t", "a", "b", "c"],
        ["lt1:t>t", "ta:t>a", "lt2:t>t", "tb:t>b", "la:a>a", "ac:a>c", "lb:b>b", "bc:b>c"],
        {"t": [["lt1", "ta"], ["lt2", "tb"]], "a": [["la", "ac"]], "b": [["lb", "bc"]]},
    ),
    # two groups at 1 both reach a regular 2-cycle
    "regular_target": _expand(
        ["1", "u", "w"],
        ["l1a:1>1", "e1a:1>u", "l1b:1>1", "e1b:1>u", "uu:u>u", "uw:u>w", "ww:w>w", "wu:w>u"],
        {"1": [["l1a", "e1a"], ["l1b", "e1b"]], "u": [["uu", "uw"]], "w": [["ww", "wu"]]},
    ),
    # a group with two connectors into different sinks next to a plain group
    "wide_group": _expand(
        ["p", "a", "b", "c"],
        ["lp1:p>p", "pa:p>a", "pb:p>b", "lp2:p>p", "pc:p>c"],
        {"p": [["lp1", "pa", "pb"], ["lp2", "pc"]]},
    ),
}


def graph_json(name: str) -> dict:
    return CORPUS[name]


def load(name: str) -> SeparatedGraph:
    return graph_from_json(CORPUS[name])


def names() -> list[str]:
    return sorted(CORPUS)


# -- hand-built crowned pairs ------------------------------------------------------

PAIRS: dict[str, dict] = {
    # p's groups reach sinks a and b, glued to a single sink c
    "m_merge": {
        "g1": "m_graph",
        "g2": _expand(
            ["p", "c"],
            ["lp1:p>p", "pa:p>c", "lp2:p>p", "pb:p>c"],
            {"p": [["lp1", "pa"], ["lp2", "pb"]]},
        ),
        "vmap": {"p": "p", "a": "c", "b": "c"},
        "v1": "a",
        "v2": "b",
    },
    # two sinks glued to one
    "sinks": {
        "g1": "two_sinks",
        "g2": "sink",
        "vmap": None,
        "v1": None,
        "v2": None,
    },
    # one group at 1 reaches both copies 2' and 2'': clause (v) fails
    "split_group": {
        "g1": _expand(
            ["1", "2'", "2''", "3'", "3''"],
            [
                "l1b:1>1", "x:1>2'", "y:1>2''", "l1r:1>1", "z:1>2''",
                "l2':2'>2'", "e23':2'>3'", "l2'':2''>2''", "e23'':2''>3''",
            ],
            {
                "1": [["l1b", "x", "y"], ["l1r", "z"]],
                "2'": [["l2'", "e23'"]],
                "2''": [["l2''", "e23''"]],
            },
        ),
        "g2": _expand(
            ["1", "2", "3"],
            ["l1b:1>1", "x:1>2", "y:1>2", "l1r:1>1", "z:1>2", "l2:2>2", "e23:2>3"],
            {"1": [["l1b", "x", "y"], ["l1r", "z"]], "2": [["l2", "e23"]]},
        ),
        "vmap": {"1": "1", "2'": "2", "2''": "2", "3'": "3", "3''": "3"},
        "v1": "2'",
        "v2": "2''",
    },
}


def _strip(token: str) -> str:
    return token.rstrip("'")


def load_pair(name: str):
    """``(g1, g2, CoverMap, v1, v2)`` for a hand-built pair; edge maps drop primes."""
    from .cover import CoverMap

    entry = PAIRS[name]
    g1 = load(entry["g1"]) if isinstance(entry["g1"], str) else graph_from_json(entry["g1"])
    g2 = load(entry["g2"]) if isinstance(entry["g2"], str) else graph_from_json(entry["g2"])
    vmap = entry["vmap"]
    if vmap is None:
        (t,) = g2.vertices
        vmap = {v: t for v in g1.vertices}
        v1, v2 = g1.vertices[0], g1.vertices[1]
    else:
        v1, v2 = entry["v1"], entry["v2"]
    emap = {e.id: _strip(e.id) for e in g1.edges}
    return g1, g2, CoverMap(g1, g2, vmap, emap), v1, v2


def pair_names() -> list[str]:
    return sorted(PAIRS)
