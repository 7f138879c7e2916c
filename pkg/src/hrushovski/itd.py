"""Independence-theorem diagrams (ITDs) over K_f.

An ITD is a graph D with parts D0, D1, D2, D3 and D12, D13, D23 such that
the D_i meet pairwise in D0, each D_ij is an independent amalgam of D_i and
D_j over D0 (possibly with extra algebraic points), the D_ij meet pairwise in
the shared D_j, and every edge lies inside some D_ij.  K_f is closed under
ITDs iff every proper ITD D satisfies f(|D|) <= delta(D); this module
enumerates proper ITDs of small predimension to check that directly.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

from .amalgam import AmalgamDiagram, eventual_closures
from .errors import PreconditionError, UnsupportedConfigError
from .graph import Graph, canonical_form, graph_to_json
from .predim import (
    GoodFunction,
    as_fraction,
    closure,
    compare_f,
    freely_amalgamated,
    fraction_str,
    in_class,
    in_class_after_adding,
    is_d_closed,
    kf_graphs,
    max_size_at_predim,
    predimension,
)

PART_NAMES = ("0", "1", "2", "3", "12", "13", "23")
PAIRS = ((1, 2), (1, 3), (2, 3))

# Above this, the size arithmetic behind the finite check no longer closes
# and the growth condition on f takes over.
MAX_ENUMERATED_D12 = 5


def _pair_name(i, j):
    return f"{min(i, j)}{max(i, j)}"


@dataclass(frozen=True)
class ITDiagram:
    ambient: Graph
    parts: Mapping

    def __post_init__(self):
        parts = {str(k): frozenset(v) for k, v in self.parts.items()}
        missing = set(PART_NAMES) - parts.keys()
        if missing:
            raise ValueError(f"missing parts {sorted(missing)}")
        for k, p in parts.items():
            if not p <= self.ambient.vertices:
                raise ValueError(f"part {k} is not inside the ambient graph")
        object.__setattr__(self, "parts", parts)

    def part(self, name) -> frozenset:
        name = str(name)
        if len(name) == 2 and name[0] == "0":
            name = name[1]
        if len(name) == 2 and name[0] > name[1]:
            name = name[::-1]
        return self.parts[name]

    def induced(self, name) -> Graph:
        return self.ambient.induced(self.part(name))

    def predims(self, cfg: GoodFunction | None = None) -> dict:
        out = {k: predimension(self.ambient, cfg, self.part(k)) for k in PART_NAMES}
        out["D"] = predimension(self.ambient, cfg)
        return out

    def d12(self, cfg: GoodFunction | None = None) -> Fraction:
        return max(predimension(self.ambient, cfg, self.part(_pair_name(i, j))) for i, j in PAIRS)

    def restrict(self, subset) -> ITDiagram:
        s = frozenset(subset)
        return ITDiagram(self.ambient.induced(s), {k: v & s for k, v in self.parts.items()})

    def relabel(self, mapping) -> ITDiagram:
        def f(s):
            return frozenset(str(mapping.get(v, v)) for v in s)
        return ITDiagram(self.ambient.relabel(mapping), {k: f(v) for k, v in self.parts.items()})

    def region_colors(self) -> dict:
        """Colour each vertex by the smallest part holding it."""
        colors = {}
        for v in self.ambient.vertices:
            colors[v] = "D"
            for name in PART_NAMES:
                if v in self.parts[name]:
                    colors[v] = name
                    break
        return colors

    def canonical_key(self):
        """Certificate invariant under relabelling and under permuting 1, 2, 3."""
        best = None
        base = self.region_colors()
        for perm in permutations("123"):
            tr = str.maketrans("123", "".join(perm))
            colors = {}
            for v, c in base.items():
                c2 = c.translate(tr)
                colors[v] = "".join(sorted(c2)) if len(c2) == 2 else c2
            cert = canonical_form(self.ambient, colors=colors)
            if best is None or cert < best:
                best = cert
        return best

    def to_json(self, cfg: GoodFunction | None = None) -> dict:
        return {
            "ambient": graph_to_json(self.ambient),
            "parts": {k: sorted(self.parts[k]) for k in PART_NAMES},
            "predimensions": {k: fraction_str(v) for k, v in self.predims(cfg).items()},
        }


@dataclass
class AxiomReport:
    results: dict
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def failed(self) -> list:
        return [k for k, v in self.results.items() if not v]

    def to_json(self) -> dict:
        return {"passed": self.passed, "axioms": dict(self.results), "details": dict(self.details)}


def validate_itd(d: ITDiagram, cfg: GoodFunction) -> AxiomReport:
    """Check each ITD axiom on its own and report all of them."""
    res, det = {}, {}

    bad = [k for k in PART_NAMES if not in_class(d.induced(k), cfg)]
    res["parts_in_class"] = not bad
    if bad:
        det["parts_in_class"] = bad

    bad = [f"{i}{j}" for i, j in PAIRS if d.part(i) & d.part(j) != d.part(0)]
    res["singles_meet_in_base"] = not bad
    if bad:
        det["singles_meet_in_base"] = bad

    bad = []
    for i, j in PAIRS:
        dij = d.part(_pair_name(i, j))
        g = d.ambient.induced(dij)
        for k in (i, j):
            if not d.part(k) <= dij or not is_d_closed(d.part(k), g, cfg):
                bad.append(f"D{k} in D{_pair_name(i, j)}")
    res["singles_closed_in_pairs"] = not bad
    if bad:
        det["singles_closed_in_pairs"] = bad

    bad = []
    for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2), (2, 1, 3), (1, 3, 2), (3, 2, 1)):
        if d.part(_pair_name(i, j)) & d.part(_pair_name(j, k)) != d.part(j):
            bad.append(f"D{_pair_name(i, j)}&D{_pair_name(j, k)}")
    res["pairs_meet_in_singles"] = not bad
    if bad:
        det["pairs_meet_in_singles"] = sorted(set(bad))

    bad = []
    for i, j in PAIRS:
        dij = d.part(_pair_name(i, j))
        g = d.ambient.induced(dij)
        di, dj = d.part(i), d.part(j)
        if not (di | dj) <= dij:
            bad.append(_pair_name(i, j))
            continue
        cl = closure(di | dj, g, cfg)
        free = freely_amalgamated(g, di, dj)
        if not free or predimension(g, cfg, di | dj) != predimension(g, cfg, cl):
            bad.append(_pair_name(i, j))
    res["pairs_independent"] = not bad
    if bad:
        det["pairs_independent"] = bad

    pair_parts = [d.part(_pair_name(i, j)) for i, j in PAIRS]
    stray = [sorted(e) for e in d.ambient.edges if not any(e <= p for p in pair_parts)]
    res["edges_covered"] = not stray
    if stray:
        det["edges_covered"] = sorted(stray)
    return AxiomReport(res, det)


def validate_proper_itd(d: ITDiagram, cfg: GoodFunction) -> AxiomReport:
    rep = validate_itd(d, cfg)
    res, det = dict(rep.results), dict(rep.details)
    bad = [str(i) for i in (1, 2, 3) if not d.part(0) < d.part(i)]
    res["base_strictly_inside_singles"] = not bad
    if bad:
        det["base_strictly_inside_singles"] = bad
    bad = []
    for i, j in PAIRS:
        dij = d.part(_pair_name(i, j))
        union = d.part(i) | d.part(j)
        if not union < dij or closure(union, d.ambient, cfg) != dij:
            bad.append(_pair_name(i, j))
    res["pairs_are_proper_closures"] = not bad
    if bad:
        det["pairs_are_proper_closures"] = bad
    return AxiomReport(res, det)


# -- enumeration ------------------------------------------------------------------------


def _strict_closed_extensions(base: Graph, cfg: GoodFunction, max_predim) -> list:
    """Graphs B in K_f with base < B, base d-closed in B, delta(B) <= max_predim.

    Up to isomorphism fixing ``base`` pointwise.  Sizes are bounded by the
    largest K_f graph at predimension ``max_predim``; growth one vertex at a
    time is complete because K_f is hereditary.
    """
    if compare_f(cfg, max_predim, 1) < 0:
        return []
    limit = max_size_at_predim(cfg, max_predim)
    found = {}
    frontier = [base]
    for n in range(len(base) + 1, limit + 1):
        label = f"e{n}"
        nxt = {}
        for h in frontier:
            for k in range(1 << len(h)):
                nbrs = h.labels(k)
                g = h.with_vertex(label, nbrs)
                if not in_class_after_adding(g, label, cfg):
                    continue
                cert = canonical_form(g, base.vertices)
                nxt.setdefault(cert, g)
        frontier = list(nxt.values())
        for cert, g in nxt.items():
            if predimension(g, cfg) <= max_predim and is_d_closed(base.vertices, g, cfg):
                found[cert] = g
    return [found[c] for c in sorted(found)]


def min_size_at_predim(cfg: GoodFunction, d, larger_than: int = 0, max_size: int | None = None):
    """Smallest |B| > larger_than over K_f members B with delta(B) = d, or None."""
    d = as_fraction(d)
    top = max_size if max_size is not None else max_size_at_predim(cfg, d)
    levels = kf_graphs(cfg, top)
    for n in range(larger_than + 1, top + 1):
        if any(predimension(g, cfg) == d for g in levels[n]):
            return n
    return None


def beta_bound(cfg: GoodFunction, d0, d1, d2, d3, size0: int) -> int | None:
    """Inclusion-exclusion size bound for an ITD with these part predimensions."""
    ds = {1: as_fraction(d1), 2: as_fraction(d2), 3: as_fraction(d3)}
    total = size0
    for i, j in PAIRS:
        total += max_size_at_predim(cfg, ds[i] + ds[j] - d0)
    for i in (1, 2, 3):
        m = min_size_at_predim(cfg, ds[i], larger_than=size0)
        if m is None:
            return None
        total -= m
    return total


def _relabel_single(g: Graph, base: frozenset, tag: str) -> Graph:
    return g.relabel({v: f"{tag}{v}" for v in g.vertices if v not in base})


def enumerate_proper_itds(cfg: GoodFunction, d12_max) -> list:
    """Proper ITDs with every D_ij of predimension <= d12_max, up to isomorphism.

    The three singles D_i are strict closed extensions of D0; each D_ij is
    a proper eventual closure of D_i + D_j over D0; the diagram is their
    union with the extra points of different pairs kept apart.
    """
    d12_max = as_fraction(d12_max)
    if d12_max > MAX_ENUMERATED_D12:
        raise UnsupportedConfigError(
            f"d12_max > {MAX_ENUMERATED_D12} is not enumerated; that range is covered by the growth condition on f"
        )
    if cfg.alpha != 2:
        raise UnsupportedConfigError("ITD enumeration is implemented for alpha = 2 only")
    out = {}
    unit = compare_f(cfg, d12_max, 1)
    if unit < 0:
        return []
    base_limit = max_size_at_predim(cfg, d12_max)
    for n0, bases in kf_graphs(cfg, base_limit).items():
        for d0g in bases:
            d0g = d0g.relabel({v: f"b{v}" for v in d0g.vertices})
            d0 = predimension(d0g, cfg)
            # d_i > d0 for each i, so d_i + d_j - d0 <= d12_max caps each d_i
            singles = _strict_closed_extensions(d0g, cfg, d12_max - 1)
            singles = [(g, predimension(g, cfg)) for g in singles]
            for idx in product(range(len(singles)), repeat=3):
                if not (idx[0] <= idx[1] <= idx[2]):
                    continue
                chosen = [singles[k] for k in idx]
                if any(chosen[i - 1][1] + chosen[j - 1][1] - d0 > d12_max for i, j in PAIRS):
                    continue
                parts_i = {
                    i: _relabel_single(chosen[i - 1][0], d0g.vertices, f"s{i}_") for i in (1, 2, 3)
                }
                for diag in _glue_all(d0g, parts_i, cfg):
                    rep = validate_proper_itd(diag, cfg)
                    if rep.passed:
                        out.setdefault(diag.canonical_key(), diag)
    return [out[k] for k in sorted(out)]


def _glue_all(d0g: Graph, singles: dict, cfg: GoodFunction):
    options = {}
    for i, j in PAIRS:
        gi, gj = singles[i], singles[j]
        amb = gi.union(gj)
        diag = AmalgamDiagram(amb, d0g.vertices, gi.vertices, gj.vertices)
        tag = f"x{i}{j}_"
        proper = []
        for ec in eventual_closures(diag, cfg):
            if ec.is_proper:
                proper.append(ec.extension.relabel({v: f"{tag}{v}" for v in ec.added}))
        if not proper:
            return
        options[(i, j)] = proper
    for choice in product(*(options[p] for p in PAIRS)):
        g = choice[0].union(choice[1]).union(choice[2])
        parts = {"0": d0g.vertices}
        for i in (1, 2, 3):
            parts[str(i)] = singles[i].vertices
        for (i, j), h in zip(PAIRS, choice):
            parts[_pair_name(i, j)] = h.vertices
        yield ITDiagram(g, parts)


# -- reports ----------------------------------------------------------------------------


@dataclass
class GrowthReport:
    passed: bool
    k: int
    t_from: int
    t_to: int
    analytic: bool
    equalities: int
    failures: list

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "k": self.k,
            "range": [self.t_from, self.t_to],
            "analytic": self.analytic,
            "equalities": self.equalities,
            "failures": self.failures,
        }


def sitd_growth_check(cfg: GoodFunction, k: int, t_from: int, t_to: int) -> GrowthReport:
    """f(3t) <= f(t) + k for integers t in [t_from, t_to].

    In the log-3 tail f(3t) - f(t) is exactly 1, so those t are decided by
    comparing 1 with k; everything else goes through compare_f.
    """
    if t_from < 1:
        raise PreconditionError("t_from must be at least 1")
    if 3 * t_to > cfg.max_size:
        raise PreconditionError(f"f is only defined up to {cfg.max_size}; cannot test t = {t_to}")
    s_last = cfg.last_breakpoint[0]
    failures, eq = [], 0
    analytic = cfg.tail.kind == "log3"
    for t in range(t_from, t_to + 1):
        if analytic and t >= s_last:
            c = (k > 1) - (k < 1)  # sign of (f(t) + k) - f(3t)
        else:
            ft = cfg.rational_value(t)
            c = compare_f(cfg, ft + k, 3 * t)
        if c < 0:
            failures.append(t)
        elif c == 0:
            eq += 1
    return GrowthReport(not failures, k, t_from, t_to, analytic, eq, failures)


@dataclass
class ITDClosureReport:
    passed: bool
    d12_max: Fraction
    diagrams: list
    violations: list
    growth: GrowthReport | None = None

    def to_json(self, cfg: GoodFunction | None = None) -> dict:
        out = {
            "passed": self.passed,
            "d12_max": fraction_str(self.d12_max),
            "diagrams": [],
            "violations": [],
        }
        for d, ok in self.diagrams:
            entry = d.to_json(cfg)
            entry["in_class"] = ok
            entry["size"] = len(d.ambient)
            out["diagrams"].append(entry)
        out["violations"] = [d.to_json(cfg) for d in self.violations]
        if self.growth is not None:
            out["growth"] = self.growth.to_json()
        return out


def check_itd_closure(cfg: GoodFunction, d12_max, growth_to: int | None = None) -> ITDClosureReport:
    """Every proper ITD up to d12_max satisfies f(|D|) <= delta(D), plus the tail growth check."""
    d12_max = as_fraction(d12_max)
    diagrams = enumerate_proper_itds(cfg, d12_max)
    rows, bad = [], []
    for d in diagrams:
        ok = compare_f(cfg, predimension(d.ambient, cfg), len(d.ambient)) >= 0
        rows.append((d, ok))
        if not ok:
            bad.append(d)
    if growth_to is None:
        growth_to = 1000 if cfg.tail.kind == "log3" else max(6, int(cfg.max_size) // 3)
    growth = sitd_growth_check(cfg, 1, 6, growth_to) if 3 * growth_to <= cfg.max_size else None
    passed = not bad and (growth is None or growth.passed)
    return ITDClosureReport(passed, d12_max, rows, bad, growth)


def hexagon_itd() -> ITDiagram:
    """The 6-cycle a-p-b-q-c-r as an ITD with single-vertex D_i and empty D0."""
    g = Graph.cycle("a", "p", "b", "q", "c", "r")
    return ITDiagram(
        g,
        {
            "0": set(),
            "1": {"a"},
            "2": {"b"},
            "3": {"c"},
            "12": {"a", "p", "b"},
            "23": {"b", "q", "c"},
            "13": {"a", "r", "c"},
        },
    )
