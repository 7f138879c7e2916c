"""Small named graphs and the amalgam diagrams built from them.

The names double as human-readable aliases for measure variables.
"""
from __future__ import annotations

from .amalgam import AmalgamDiagram, free_amalgam
from .graph import Graph
from .predim import GoodFunction

NAMED_GRAPHS = {
    "pt": Graph.empty("v1"),
    "edge": Graph.path("v1", "v2"),
    "2pts": Graph.empty("v1", "v2"),
    "P2": Graph.path("v1", "v2", "v3"),
    "edge+pt": Graph.from_edges([("v1", "v2")], ["v3"]),
    "P3": Graph.path("v1", "v2", "v3", "v4"),
    "P2+pt": Graph.from_edges([("v1", "v2"), ("v2", "v3")], ["v4"]),
    "T": Graph.from_edges([("v1", "v2"), ("v3", "v2"), ("v2", "v4"), ("v4", "v5")]),
    "C6": Graph.cycle("v1", "v2", "v3", "v4", "v5", "v6"),
}


def two_edges_over_vertex(cfg: GoodFunction | None = None) -> AmalgamDiagram:
    """Path v1-v2-v3 as edges v1v2 and v2v3 glued at v2."""
    return free_amalgam(Graph.path("v1", "v2"), Graph.path("v2", "v3"), {"v2": "v2"}, cfg)


def two_vertices(cfg: GoodFunction | None = None) -> AmalgamDiagram:
    return free_amalgam(Graph.empty("v1"), Graph.empty("v2"), {}, cfg)


def two_paths_over_edge(cfg: GoodFunction | None = None) -> AmalgamDiagram:
    """Path v1..v4 as v1v2v3 and v2v3v4 glued along the edge v2v3."""
    return free_amalgam(
        Graph.path("v1", "v2", "v3"), Graph.path("v2", "v3", "v4"), {"v2": "v2", "v3": "v3"}, cfg
    )


def edge_and_vertex(cfg: GoodFunction | None = None) -> AmalgamDiagram:
    """Edge v1v2 plus isolated v3, as {v1, v3} and v1v2 glued at v1."""
    return free_amalgam(Graph.empty("v1", "v3"), Graph.path("v1", "v2"), {"v1": "v1"}, cfg)


def two_edge_vertex_pairs(cfg: GoodFunction | None = None) -> AmalgamDiagram:
    """Path v1v2v3 plus isolated v4, as v1v2+v4 and v2v3+v4 over {v2, v4}."""
    b = Graph.from_edges([("v1", "v2")], ["v4"])
    c = Graph.from_edges([("v2", "v3")], ["v4"])
    return free_amalgam(b, c, {"v2": "v2", "v4": "v4"}, cfg)


def two_long_paths_over_path(cfg: GoodFunction | None = None) -> AmalgamDiagram:
    """Paths v1v2v4v5 and v3v2v4v5 glued along v2v4v5."""
    b = Graph.path("v1", "v2", "v4", "v5")
    c = Graph.path("v3", "v2", "v4", "v5")
    return free_amalgam(b, c, {"v2": "v2", "v4": "v4", "v5": "v5"}, cfg)


# Order matters for the measure system: each diagram introduces one new
# unknown given the ones before it.
STANDARD_DIAGRAMS = {
    "two_edges_over_vertex": two_edges_over_vertex,
    "two_vertices": two_vertices,
    "two_paths_over_edge": two_paths_over_edge,
    "edge_and_vertex": edge_and_vertex,
    "two_edge_vertex_pairs": two_edge_vertex_pairs,
    "two_long_paths_over_path": two_long_paths_over_path,
}


def triangle_base() -> Graph:
    """Path v2-u-v3 plus isolated v1."""
    return Graph.from_edges([("v2", "u"), ("u", "v3")], ["v1"])


def triangle_extension() -> Graph:
    """The base with w joined to u and v1."""
    return triangle_base().with_vertex("w", ("u", "v1"))
