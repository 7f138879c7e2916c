"""Free amalgams, one-point extensions and eventual closures.

An eventual closure of ``B + C`` over ``A`` is a graph ``D`` in K_f that
contains the amalgam self-sufficiently at the same predimension and keeps
``A``, ``B`` and ``C`` d-closed.  For alpha = 2 and fewer than six extra
vertices such a ``D`` is reached from the amalgam by adding one vertex at a
time, each joined by exactly two edges, and every intermediate graph is
itself an eventual closure.  That turns the search into a breadth-first walk
over towers of one-point extensions with per-step pruning.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path

from .errors import GraphFormatError, PreconditionError, UnsupportedConfigError, WindowError
from .graph import Graph, canonical_form, distance, graph_from_json, graph_to_json
from .predim import (
    GoodFunction,
    compare_f,
    freely_amalgamated,
    in_class,
    in_class_after_adding,
    is_d_closed,
    is_self_sufficient,
    kf_graphs,
    max_size_at_predim,
    predimension,
)

# Towers longer than this are not guaranteed to decompose into one-point
# extensions, so the search would not be complete.
MAX_TOWER_DEPTH = 5


@dataclass(frozen=True)
class AmalgamDiagram:
    """``ambient`` is B + C glued along A = B & C with no edge from B-A to C-A."""

    ambient: Graph
    part_a: frozenset
    part_b: frozenset
    part_c: frozenset

    def __post_init__(self):
        for name in ("part_a", "part_b", "part_c"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        a, b, c = self.part_a, self.part_b, self.part_c
        if not (b | c) == self.ambient.vertices:
            raise PreconditionError("B and C must cover the ambient graph")
        if a != b & c:
            raise PreconditionError("A must equal the intersection of B and C")
        if not freely_amalgamated(self.ambient, b, c):
            raise PreconditionError("an edge joins B - A to C - A; the amalgam is not free")

    @property
    def graph_a(self) -> Graph:
        return self.ambient.induced(self.part_a)

    @property
    def graph_b(self) -> Graph:
        return self.ambient.induced(self.part_b)

    @property
    def graph_c(self) -> Graph:
        return self.ambient.induced(self.part_c)

    def check(self, cfg: GoodFunction) -> list:
        """Violated hypotheses as readable strings; empty when A <= B, C in K_f."""
        problems = []
        gb, gc = self.graph_b, self.graph_c
        if not is_d_closed(self.part_a, gb, cfg):
            problems.append("A is not d-closed in B")
        if not is_d_closed(self.part_a, gc, cfg):
            problems.append("A is not d-closed in C")
        if not in_class(gb, cfg):
            problems.append("B is not in K_f")
        if not in_class(gc, cfg):
            problems.append("C is not in K_f")
        return problems

    def relabel(self, mapping: Mapping) -> AmalgamDiagram:
        def f(s):
            return frozenset(str(mapping.get(v, v)) for v in s)
        return AmalgamDiagram(self.ambient.relabel(mapping), f(self.part_a), f(self.part_b), f(self.part_c))

    def to_json(self) -> dict:
        return {
            "ambient": graph_to_json(self.ambient),
            "A": sorted(self.part_a),
            "B": sorted(self.part_b),
            "C": sorted(self.part_c),
        }

    @classmethod
    def from_json(cls, obj) -> AmalgamDiagram:
        if not isinstance(obj, Mapping) or not {"ambient", "A", "B", "C"} <= obj.keys():
            raise GraphFormatError("diagram JSON needs 'ambient', 'A', 'B' and 'C'")
        g = graph_from_json(obj["ambient"])
        parts = [frozenset(map(str, obj[k])) for k in "ABC"]
        for k, p in zip("ABC", parts):
            if not p <= g.vertices:
                raise GraphFormatError(f"part {k} names vertices outside the ambient graph")
        return cls(g, *parts)

    @classmethod
    def load(cls, path) -> AmalgamDiagram:
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise GraphFormatError(exc.msg, exc.lineno) from None
        return cls.from_json(obj)


def free_amalgam(b: Graph, c: Graph, identification: Mapping, cfg: GoodFunction | None = None) -> AmalgamDiagram:
    """Glue ``c`` onto ``b`` along ``identification`` (B-label -> C-label).

    Identified vertices keep their B labels.  Other C vertices keep their
    labels unless they clash with B, in which case they are renamed.
    """
    cfg = cfg or GoodFunction()
    ident = {str(k): str(v) for k, v in identification.items()}
    if len(set(ident.values())) != len(ident):
        raise PreconditionError("identification is not injective")
    dom, img = frozenset(ident), frozenset(ident.values())
    if not dom <= b.vertices or not img <= c.vertices:
        raise PreconditionError("identification must map vertices of B to vertices of C")
    for x, y in combinations(sorted(dom), 2):
        if b.has_edge(x, y) != c.has_edge(ident[x], ident[y]):
            raise PreconditionError(f"identification does not preserve adjacency of {x} and {y}")
    if not is_d_closed(dom, b, cfg):
        raise PreconditionError("the base is not d-closed in B")
    if not is_d_closed(img, c, cfg):
        raise PreconditionError("the base is not d-closed in C")
    for g, side in ((b, "B"), (c, "C")):
        if not in_class(g, cfg):
            raise PreconditionError(f"{side} is not in K_f")

    back = {v: k for k, v in ident.items()}
    taken = set(b.vertices)
    rename = {}
    for v in c.order:
        if v in back:
            rename[v] = back[v]
        elif v in taken:
            k = 1
            while f"{v}'{k}" in taken or f"{v}'{k}" in c.vertices:
                k += 1
            rename[v] = f"{v}'{k}"
            taken.add(rename[v])
        else:
            rename[v] = v
            taken.add(v)
    c2 = c.relabel(rename)
    return AmalgamDiagram(b.union(c2), dom, b.vertices, c2.vertices)


# -- the free amalgamation property ------------------------------------------------


@dataclass(frozen=True)
class AmalgamationReport:
    passed: bool
    size_bound: int
    dots: tuple
    triples_checked: int
    counterexample: tuple | None = None

    def to_json(self) -> dict:
        def pt(p):
            return [p[0], str(p[1])]
        out = {
            "passed": self.passed,
            "size_bound": self.size_bound,
            "dots": [pt(d) for d in self.dots],
            "triples_checked": self.triples_checked,
        }
        if self.counterexample:
            p, q, r, s = self.counterexample
            out["counterexample"] = {"p": pt(p), "q": pt(q), "r": pt(r), "fourth": pt(s)}
        return out


def realizable_dots(cfg: GoodFunction, size_bound: int) -> tuple:
    """All (|X|, delta(X)) for X in K_f with |X| <= size_bound, including the empty graph."""
    dots = set()
    for n, graphs in kf_graphs(cfg, size_bound).items():
        for g in graphs:
            dots.add((n, predimension(g, cfg)))
    return tuple(sorted(dots))


def verify_free_amalgamation_property(cfg: GoodFunction, size_bound: int = 6) -> AmalgamationReport:
    """Parallelogram test on the realizable (size, predimension) dots.

    For dots p, q, r (q = r allowed) with p strictly below q and r in both
    coordinates, the point q + r - p is where the amalgam of the two larger
    graphs over the smaller one lands; it has to be on or above f.
    """
    dots = realizable_dots(cfg, size_bound)
    checked = 0
    for p in dots:
        above = [q for q in dots if q[0] > p[0] and q[1] > p[1]]
        for i, q in enumerate(above):
            for r in above[i:]:
                checked += 1
                s = (q[0] + r[0] - p[0], q[1] + r[1] - p[1])
                if compare_f(cfg, s[1], s[0]) < 0:
                    return AmalgamationReport(False, size_bound, dots, checked, (p, q, r, s))
    return AmalgamationReport(True, size_bound, dots, checked)


# -- one-point extensions -------------------------------------------------------------


def _require_alpha_two(cfg: GoodFunction):
    if cfg.alpha != 2:
        raise UnsupportedConfigError("one-point extensions are implemented for alpha = 2 only")


@lru_cache(maxsize=None)
def _cycle_in_class(cfg: GoodFunction, length: int) -> bool:
    return in_class(Graph.cycle(*map(str, range(length))), cfg)


def forbidden_attachment(cfg: GoodFunction, dist) -> bool:
    """Joining a new vertex to two points at this distance leaves K_f.

    The shortest path plus the new vertex is an induced cycle of length
    ``dist + 2``; K_f is hereditary, so if that cycle is outside the class
    so is every graph containing it.
    """
    return dist != float("inf") and not _cycle_in_class(cfg, dist + 2)


def _attachments(g: Graph, cfg: GoodFunction, closed: Sequence, prune: bool):
    """Admissible attachment pairs of a new vertex, as (x, y, extended graph)."""
    label = g.fresh_label("w")
    out = []
    for x, y in combinations(g.order, 2):
        # a constrained set stops being d-closed exactly when it holds both
        # attachment points
        if any(x in s and y in s for s in closed):
            continue
        if prune and forbidden_attachment(cfg, distance(g, x, y)):
            continue
        h = g.with_vertex(label, (x, y))
        if in_class_after_adding(h, label, cfg):
            out.append((x, y, h))
    return out


def one_point_extensions(g: Graph, cfg: GoodFunction, closed: Iterable = ()) -> list:
    """Every K_f graph from adding one vertex joined to two vertices of ``g``.

    One result per unordered attachment pair.  The new vertex is labelled
    with the first free ``w<k>``.  Optional ``closed`` subsets must stay
    d-closed.
    """
    _require_alpha_two(cfg)
    if not in_class(g, cfg):
        raise PreconditionError("one-point extensions are taken of K_f members")
    closed = [frozenset(s) for s in closed]
    return [h for _, _, h in _attachments(g, cfg, closed, prune=False)]


# -- eventual closures ---------------------------------------------------------------


@dataclass(frozen=True)
class EventualClosure:
    extension: Graph
    base: AmalgamDiagram
    tower: tuple = field(default=())

    @property
    def is_proper(self) -> bool:
        return len(self.extension) > len(self.base.ambient)

    @property
    def added(self) -> frozenset:
        return self.extension.vertices - self.base.ambient.vertices

    def to_json(self) -> dict:
        return {
            "extension": graph_to_json(self.extension),
            "tower": [{"vertex": v, "attached_to": list(pair)} for v, pair in self.tower],
        }


def _zero_extension_search(g: Graph, closed, cfg: GoodFunction, depth: int, prune: bool = True):
    """Breadth-first tower search; returns {certificate: (graph, tower)}."""
    found = {canonical_form(g, g.vertices): (g, ())}
    frontier = [(g, ())]
    for _ in range(depth):
        nxt = []
        for h, tower in frontier:
            for x, y, ext in _attachments(h, cfg, closed, prune):
                cert = canonical_form(ext, g.vertices)
                if cert in found:
                    continue
                (new,) = ext.vertices - h.vertices
                item = (ext, tower + ((new, (x, y)),))
                found[cert] = item
                nxt.append(item)
        frontier = nxt
    return found


def enumerate_zero_extensions(
    g: Graph,
    closed_constraints: Iterable,
    cfg: GoodFunction,
    depth_bound: int = MAX_TOWER_DEPTH,
    *,
    prune: bool = True,
    with_towers: bool = False,
) -> list:
    """All B >= g with g <=* B, delta(B) = delta(g), B in K_f, constraints d-closed.

    Results are up to isomorphism fixing ``g`` pointwise, sorted by that
    certificate, and include ``g`` itself.  ``prune=False`` switches off the
    short-cycle shortcut; the K_f test alone then decides.
    """
    _require_alpha_two(cfg)
    if depth_bound > MAX_TOWER_DEPTH:
        raise WindowError(
            f"depth {depth_bound} exceeds {MAX_TOWER_DEPTH}: extensions by six or more vertices at "
            "constant predimension need not be towers of one-point extensions"
        )
    if depth_bound < 0:
        raise PreconditionError("depth_bound must be non-negative")
    if not in_class(g, cfg):
        raise PreconditionError("the starting graph is not in K_f")
    closed = [frozenset(s) for s in closed_constraints]
    for s in closed:
        if not is_d_closed(s, g, cfg):
            raise PreconditionError(f"constraint {sorted(s)} is not d-closed in the starting graph")
    found = _zero_extension_search(g, closed, cfg, depth_bound, prune)
    items = [found[c] for c in sorted(found)]
    return items if with_towers else [h for h, _ in items]


def closure_window(diag: AmalgamDiagram, cfg: GoodFunction) -> int:
    """N - |amalgam|, where N is the largest size at the amalgam's predimension."""
    n = max_size_at_predim(cfg, predimension(diag.ambient, cfg))
    return n - len(diag.ambient)


def _window_or_raise(diag: AmalgamDiagram, cfg: GoodFunction) -> int:
    _require_alpha_two(cfg)
    gap = closure_window(diag, cfg)
    if gap > MAX_TOWER_DEPTH:
        raise WindowError(
            f"up to {gap} vertices could be added at this predimension; the tower search is only "
            f"complete below 6 added vertices (one-point decomposition of constant-predimension extensions)"
        )
    return max(gap, 0)


def eventual_closures(diag: AmalgamDiagram, cfg: GoodFunction, *, prune: bool = True) -> list:
    """Eventual closures of the amalgam, up to isomorphism over B | C.

    The improper closure (the amalgam itself) comes first when it qualifies;
    the rest follow in certificate order.
    """
    gap = _window_or_raise(diag, cfg)
    problems = diag.check(cfg)
    if problems:
        raise PreconditionError("; ".join(problems))
    if not in_class(diag.ambient, cfg):
        return []
    closed = [diag.part_a, diag.part_b, diag.part_c]
    items = enumerate_zero_extensions(diag.ambient, closed, cfg, gap, prune=prune, with_towers=True)
    return [EventualClosure(h, diag, tower) for h, tower in items]


def check_eventual_closure(ext: Graph, diag: AmalgamDiagram, cfg: GoodFunction) -> list:
    """Re-check the defining conditions directly; returns the failures."""
    amb = diag.ambient
    fails = []
    if not amb.vertices <= ext.vertices or ext.induced(amb.vertices) != amb:
        fails.append("extension does not contain the amalgam as an induced subgraph")
        return fails
    if not freely_amalgamated(ext, diag.part_b, diag.part_c):
        fails.append("B and C are not freely amalgamated in the extension")
    if not is_self_sufficient(amb.vertices, ext, cfg):
        fails.append("B | C is not self-sufficient in the extension")
    if predimension(ext, cfg) != predimension(amb, cfg):
        fails.append("predimension changed")
    for name, part in (("A", diag.part_a), ("B", diag.part_b), ("C", diag.part_c)):
        if not is_d_closed(part, ext, cfg):
            fails.append(f"{name} is not d-closed in the extension")
    if not in_class(ext, cfg):
        fails.append("extension is not in K_f")
    return fails


def one_point_closure_impossible(diag: AmalgamDiagram, cfg: GoodFunction) -> bool:
    """Sufficient test for "no proper eventual closure".

    Inside the window, a proper closure starts with a one-point closure whose
    new vertex is joined to some x in B - A and y in C - A; if every such
    pair is at a distance whose closing cycle is outside K_f, none exists.
    """
    if closure_window(diag, cfg) > MAX_TOWER_DEPTH:
        return False
    g = diag.ambient
    left = diag.part_b - diag.part_a
    right = diag.part_c - diag.part_a
    return all(forbidden_attachment(cfg, distance(g, x, y)) for x in left for y in right)


def has_no_proper_eventual_closure(diag: AmalgamDiagram, cfg: GoodFunction) -> bool:
    _window_or_raise(diag, cfg)
    if one_point_closure_impossible(diag, cfg):
        return True
    return not any(ec.is_proper for ec in eventual_closures(diag, cfg))
