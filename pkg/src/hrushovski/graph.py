"""Finite simple graphs with opaque string labels.

Everything here is immutable.  Internally a graph keeps its vertices in
sorted order and stores adjacency as integer bitmasks, so vertex subsets
are cheap to enumerate as ints.  The public API speaks in labels.
"""
from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property, lru_cache, total_ordering
from itertools import combinations
from pathlib import Path

from .errors import GraphFormatError

# Canonical labelling is an exhaustive search over vertex orderings; this is
# the largest graph it is meant for.
MAX_CANONICAL_VERTICES = 12


def _edge(u, v):
    if u == v:
        raise ValueError(f"loop at vertex {u!r}")
    return frozenset((u, v))


@dataclass(frozen=True)
class Graph:
    vertices: frozenset
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(frozenset(e) for e in self.edges))
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"malformed edge {sorted(e)!r}")
            if not e <= self.vertices:
                raise ValueError(f"edge {sorted(e)!r} has an endpoint outside the vertex set")

    @classmethod
    def from_edges(cls, edges=(), vertices=()):
        """Build a graph; edge endpoints are added to the vertex set."""
        es = {_edge(str(u), str(v)) for u, v in edges}
        vs = {str(v) for v in vertices}
        for e in es:
            vs |= e
        return cls(frozenset(vs), frozenset(es))

    @classmethod
    def path(cls, *labels):
        return cls.from_edges(zip(labels, labels[1:]), labels)

    @classmethod
    def cycle(cls, *labels):
        return cls.from_edges(zip(labels, labels[1:] + labels[:1]), labels)

    @classmethod
    def empty(cls, *labels):
        return cls.from_edges((), labels)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        es = ", ".join("-".join(sorted(e)) for e in sorted(self.edges, key=sorted))
        return f"Graph(V={sorted(self.vertices)}, E=[{es}])"

    # -- bitmask view -------------------------------------------------------

    @cached_property
    def order(self) -> tuple:
        return tuple(sorted(self.vertices))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.order)}

    @cached_property
    def adj(self) -> tuple:
        masks = [0] * len(self.order)
        idx = self.index
        for e in self.edges:
            u, v = (idx[x] for x in e)
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.order)) - 1

    def mask(self, subset: Iterable) -> int:
        idx = self.index
        m = 0
        for v in subset:
            try:
                m |= 1 << idx[v]
            except KeyError:
                raise ValueError(f"vertex {v!r} is not in the graph") from None
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(v for i, v in enumerate(self.order) if mask >> i & 1)

    def edge_count(self, mask: int | None = None) -> int:
        if mask is None:
            return len(self.edges)
        total = 0
        m = mask
        adj = self.adj
        while m:
            low = m & -m
            i = low.bit_length() - 1
            total += (adj[i] & mask).bit_count()
            m ^= low
        return total // 2

    # -- label-level operations --------------------------------------------

    def neighbors(self, v) -> frozenset:
        return self.labels(self.adj[self.index[v]])

    def degree(self, v) -> int:
        return self.adj[self.index[v]].bit_count()

    def has_edge(self, u, v) -> bool:
        return frozenset((u, v)) in self.edges

    def induced(self, subset: Iterable) -> Graph:
        s = frozenset(subset)
        missing = s - self.vertices
        if missing:
            raise ValueError(f"vertices {sorted(missing)!r} are not in the graph")
        return Graph(s, frozenset(e for e in self.edges if e <= s))

    def relabel(self, mapping: Mapping) -> Graph:
        """Rename vertices; labels missing from ``mapping`` are kept."""
        f = {v: str(mapping.get(v, v)) for v in self.vertices}
        if len(set(f.values())) != len(f):
            raise ValueError("relabelling is not injective")
        return Graph(frozenset(f.values()), frozenset(frozenset(f[x] for x in e) for e in self.edges))

    def with_vertex(self, label, neighbors: Iterable = ()) -> Graph:
        label = str(label)
        if label in self.vertices:
            raise ValueError(f"vertex {label!r} already present")
        nbrs = frozenset(neighbors)
        if not nbrs <= self.vertices:
            raise ValueError("new vertex attached outside the graph")
        return Graph(self.vertices | {label}, self.edges | {_edge(label, u) for u in nbrs})

    def union(self, other: Graph) -> Graph:
        """Union of vertex and edge sets; shared labels are identified."""
        return Graph(self.vertices | other.vertices, self.edges | other.edges)

    def fresh_label(self, stem="w") -> str:
        k = 1
        while f"{stem}{k}" in self.vertices:
            k += 1
        return f"{stem}{k}"


def induced_subgraph(g: Graph, subset: Iterable) -> Graph:
    return g.induced(subset)


def distance(g: Graph, u, v) -> int | float:
    """Shortest-path length from u to v, ``math.inf`` if disconnected."""
    for x in (u, v):
        if x not in g.vertices:
            raise ValueError(f"vertex {x!r} is not in the graph")
    target = 1 << g.index[v]
    seen = frontier = 1 << g.index[u]
    d = 0
    adj = g.adj
    while frontier:
        if frontier & target:
            return d
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj[low.bit_length() - 1]
            m ^= low
        frontier = nxt & ~seen
        seen |= frontier
        d += 1
    return math.inf


def max_distance_between(g: Graph, xs: Iterable, ys: Iterable) -> int | float:
    return max((distance(g, x, y) for x in xs for y in ys), default=0)


# -- canonical forms ----------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class CanonicalForm:
    """Isomorphism certificate.

    ``fixed`` lists the labels of vertices that were held pointwise; free
    vertices are numbered 0..k-1 and carry their colours in ``colors``.
    Edge endpoints are ``(0, label)`` for fixed and ``(1, i)`` for free
    vertices.
    """

    fixed: tuple
    colors: tuple
    edges: tuple

    def __lt__(self, other):
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return _cert_key(self) < _cert_key(other)

    @property
    def size(self):
        return len(self.fixed) + len(self.colors)

    def key(self) -> str:
        """Compact string key, unique per certificate."""
        def name(x):
            return f"@{x[1]}" if x[0] == 0 else str(x[1])
        parts = [f"n={self.size}"]
        if self.fixed:
            parts.append("fix=" + ",".join(self.fixed))
        if any(c is not None for c in self.colors):
            parts.append("col=" + ",".join(map(str, self.colors)))
        parts.append("e=" + ",".join(f"{name(a)}-{name(b)}" for a, b in self.edges))
        return ";".join(parts)


def _refine(adj, colors):
    n = len(colors)
    count = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in range(n) if adj[v] >> u & 1)))
            for v in range(n)
        ]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [ranks[s] for s in sigs]
        if len(ranks) == count:
            return colors
        count = len(ranks)


def _twins(adj, u, v):
    return adj[u] & ~(1 << v) == adj[v] & ~(1 << u)


def canonical_form(g: Graph, fixed: Iterable = (), colors: Mapping | None = None) -> CanonicalForm:
    """Canonical certificate of ``g`` with ``fixed`` held pointwise.

    Two graphs get equal certificates iff there is an isomorphism between
    them that is the identity on the fixed labels and preserves the optional
    vertex ``colors``.  Search is individualisation-refinement over all
    branches (no automorphism pruning beyond swapping twin vertices), so the
    cost is bounded by |V|! and the function refuses graphs larger than
    MAX_CANONICAL_VERTICES.
    """
    fixed = frozenset(fixed)
    if not fixed <= g.vertices:
        raise ValueError("fixed vertices must belong to the graph")
    if len(g) > MAX_CANONICAL_VERTICES:
        raise ValueError(f"canonical form supports at most {MAX_CANONICAL_VERTICES} vertices")
    colors = colors or {}
    order = g.order
    adj = g.adj
    n = len(order)
    init_keys = [(0, v, None) if v in fixed else (1, "", colors.get(v)) for v in order]
    ranks = {k: i for i, k in enumerate(sorted(set(init_keys), key=_sort_key))}
    start = [ranks[k] for k in init_keys]
    nfixed = len(fixed)
    fixed_labels = tuple(sorted(fixed))
    best = None

    def leaf(cols):
        pos = [0] * n
        for v, c in enumerate(cols):
            pos[v] = c
        def key(v):
            return (0, order[v]) if order[v] in fixed else (1, pos[v] - nfixed)
        edges = []
        for v in range(n):
            for u in range(v + 1, n):
                if adj[v] >> u & 1:
                    a, b = sorted((key(u), key(v)), key=_sort_key)
                    edges.append((a, b))
        edges.sort(key=lambda e: (_sort_key(e[0]), _sort_key(e[1])))
        free_colors = [None] * (n - nfixed)
        for v in range(n):
            if order[v] not in fixed:
                free_colors[pos[v] - nfixed] = colors.get(order[v])
        return CanonicalForm(fixed_labels, tuple(free_colors), tuple(edges))

    def search(cols):
        nonlocal best
        cols = _refine(adj, cols)
        if len(set(cols)) == n:
            cert = leaf(cols)
            if best is None or _cert_key(cert) < _cert_key(best):
                best = cert
            return
        sizes = {}
        for c in cols:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, k in sizes.items() if k > 1)
        cell = [v for v in range(n) if cols[v] == target]
        tried = []
        for v in cell:
            if any(_twins(adj, u, v) for u in tried):
                continue
            tried.append(v)
            search([2 * c + (1 if c == target and w != v else 0) for w, c in enumerate(cols)])

    search(start)
    return best


def _sort_key(x):
    # Total order over heterogeneous certificate atoms: compare type tags
    # before values so str and int never meet.
    if isinstance(x, tuple):
        return tuple(_sort_key(y) for y in x)
    if x is None:
        return (0,)
    if isinstance(x, (int, float)):
        return (1, x)
    return (2, str(x))


def _cert_key(cert):
    return _sort_key((cert.fixed, cert.colors, cert.edges))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return False
    if sorted(map(int.bit_count, g.adj)) != sorted(map(int.bit_count, h.adj)):
        return False
    return canonical_form(g) == canonical_form(h)


def count_automorphisms_fixing(g: Graph, base: Iterable = ()) -> int:
    """Number of automorphisms of ``g`` that fix every vertex of ``base``.

    Exhaustive backtracking over bijections of the free vertices; partial
    maps are abandoned as soon as an adjacency disagrees.
    """
    base = frozenset(base)
    if not base <= g.vertices:
        raise ValueError("base must be a subset of the vertex set")
    adj = g.adj
    base_idx = [g.index[b] for b in sorted(base)]
    free = [g.index[v] for v in g.order if v not in base]
    base_mask = sum(1 << b for b in base_idx)
    # Refined colouring with the base individualised restricts the images.
    start = [i + 1 if g.order[i] in base else 0 for i in range(len(g))]
    for rank, b in enumerate(base_idx):
        start[b] = rank + 1
    cols = _refine(adj, start)
    image = {}
    used = 0

    def extend(k):
        nonlocal used
        if k == len(free):
            return 1
        v = free[k]
        total = 0
        for w in free:
            if used >> w & 1 or cols[w] != cols[v]:
                continue
            if adj[v] & base_mask != adj[w] & base_mask:
                continue
            if any((adj[v] >> x & 1) != (adj[w] >> image[x] & 1) for x in free[:k]):
                continue
            image[v] = w
            used |= 1 << w
            total += extend(k + 1)
            used &= ~(1 << w)
            del image[v]
        return total

    return extend(0)


def automorphism_count_bruteforce(g: Graph, base: Iterable = ()) -> int:
    """Reference count by trying every permutation of the free vertices."""
    from itertools import permutations

    base = frozenset(base)
    free = [v for v in g.order if v not in base]
    count = 0
    for perm in permutations(free):
        f = dict(zip(free, perm))
        f.update((b, b) for b in base)
        if all(frozenset(f[x] for x in e) in g.edges for e in g.edges):
            count += 1
    return count


@lru_cache(maxsize=None)
def all_graphs(n: int) -> tuple:
    """One representative of every isomorphism class on ``n`` vertices.

    Vertices are labelled "0".."n-1".  Classes are grown one vertex at a
    time, which is complete because every graph on n vertices arises by
    adding a vertex to one on n-1.
    """
    if n == 0:
        return (Graph(frozenset(), frozenset()),)
    label = str(n - 1)
    seen = {}
    for h in all_graphs(n - 1):
        order = h.order
        for k in range(n):
            for nbrs in combinations(order, k):
                g = h.with_vertex(label, nbrs)
                seen.setdefault(canonical_form(g), g)
    return tuple(seen[c] for c in sorted(seen, key=_cert_key))


# -- text and JSON formats -----------------------------------------------------


def parse_graph_text(text: str) -> Graph:
    """Parse ``v <label>`` / ``e <a> <b>`` lines; ``#`` starts a comment."""
    vertices, edges = set(), []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            vertices.add(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            if parts[1] == parts[2]:
                raise GraphFormatError(f"loop at {parts[1]!r}", lineno)
            edges.append((lineno, parts[1], parts[2]))
        else:
            raise GraphFormatError(f"cannot parse {raw.strip()!r}", lineno)
    for lineno, a, b in edges:
        for x in (a, b):
            if x not in vertices:
                raise GraphFormatError(f"edge uses undeclared vertex {x!r}", lineno)
    return Graph.from_edges([(a, b) for _, a, b in edges], vertices)


def graph_from_json(obj) -> Graph:
    if not isinstance(obj, Mapping) or "vertices" not in obj:
        raise GraphFormatError("graph JSON needs a 'vertices' list")
    vertices = [str(v) for v in obj["vertices"]]
    edges = []
    for e in obj.get("edges", []):
        if len(e) != 2:
            raise GraphFormatError(f"malformed edge {e!r}")
        a, b = map(str, e)
        if a == b:
            raise GraphFormatError(f"loop at {a!r}")
        if a not in vertices or b not in vertices:
            raise GraphFormatError(f"edge {e!r} uses an undeclared vertex")
        edges.append((a, b))
    return Graph.from_edges(edges, vertices)


def parse_graph(text: str) -> Graph:
    """Accept either the line format or the JSON form."""
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(exc.msg, exc.lineno) from None
        return graph_from_json(obj)
    return parse_graph_text(text)


def load_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.order),
        "edges": sorted(sorted(e) for e in g.edges),
    }


def graph_to_text(g: Graph) -> str:
    lines = [f"v {v}" for v in g.order]
    lines += [f"e {a} {b}" for a, b in sorted(sorted(e) for e in g.edges)]
    return "\n".join(lines) + "\n"
