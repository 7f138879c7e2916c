import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import delta, random_graphs, subsets
from hrushovski.errors import GraphFormatError, PreconditionError
from hrushovski.graph import Graph, all_graphs, canonical_form
from hrushovski.predim import (
    GoodFunction,
    Tail,
    class_violation,
    closure,
    compare_f,
    dimension,
    freely_amalgamated,
    in_class,
    is_d_closed,
    is_self_sufficient,
    kf_graphs,
    max_size_at_predim,
    predimension,
)

C6 = Graph.cycle("v1", "v2", "v3", "v4", "v5", "v6")
C4 = Graph.cycle("v1", "v2", "v3", "v4")


# -- independent oracles ---------------------------------------------------------


def f_oracle(n: int) -> mpmath.mpf:
    """The default control function, evaluated at 60 digits."""
    with mpmath.workdps(60):
        if n <= 4:
            return mpmath.mpf(n + 1)
        if n <= 6:
            return mpmath.mpf(5) + mpmath.mpf(n - 4) / 2
        return 6 + mpmath.log(mpmath.mpf(n) / 6, 3)


def closed_oracle(g: Graph, a) -> bool:
    a = frozenset(a)
    return all(delta(g, y) > delta(g, a) for y in subsets(g.vertices) if a < y)


def ss_oracle(g: Graph, a) -> bool:
    a = frozenset(a)
    return all(delta(g, y) >= delta(g, a) for y in subsets(g.vertices) if a <= y)


def closure_oracle(g: Graph, a):
    """Smallest d-closed superset, scanning supersets by size; asserts uniqueness."""
    a = frozenset(a)
    closed = [y for y in subsets(g.vertices) if a <= y and closed_oracle(g, y)]
    smallest = min(len(y) for y in closed)
    tops = [y for y in closed if len(y) == smallest]
    assert len(tops) == 1
    assert all(tops[0] <= y for y in closed)
    return tops[0]


def in_class_oracle(g: Graph) -> bool:
    for s in subsets(g.vertices):
        if s:
            with mpmath.workdps(60):
                if delta(g, s) < f_oracle(len(s)) - mpmath.mpf(10) ** -40:
                    return False
    return True


# -- control function ------------------------------------------------------------


def test_predimension_examples():
    assert predimension(Graph.empty("v")) == 2
    assert predimension(Graph.path("a", "b")) == 3
    assert predimension(C6) == 6
    assert predimension(C6, subset={"v1", "v2"}) == 3
    half = GoodFunction(alpha=Fraction(3, 2))
    assert predimension(C6, half) == 3


def test_compare_f_examples(cfg):
    assert compare_f(cfg, Fraction(11, 2), 5) == 0
    assert compare_f(cfg, 7, 18) == 0
    assert compare_f(cfg, 2, 1) == 0
    assert compare_f(cfg, 7, 19) == -1
    assert compare_f(cfg, 6, 7) == -1
    assert compare_f(cfg, 8, 54) == 0
    with pytest.raises(PreconditionError):
        compare_f(cfg, 2, 0)


def test_compare_f_against_high_precision(cfg):
    rng = random.Random(2)
    for _ in range(3000):
        n = rng.randint(1, 5000)
        d = Fraction(rng.randint(0, 400), rng.randint(1, 12))
        with mpmath.workdps(60):
            diff = mpmath.mpf(d.numerator) / d.denominator - f_oracle(n)
            if abs(diff) < mpmath.mpf(10) ** -30:
                continue
            expected = 1 if diff > 0 else -1
        assert compare_f(cfg, d, n) == expected, (d, n)


def test_max_size_at_predim(cfg):
    assert max_size_at_predim(cfg, 4) == 3
    assert max_size_at_predim(cfg, 6) == 6
    assert max_size_at_predim(cfg, 7) == 18
    assert max_size_at_predim(cfg, 8) == 54
    with pytest.raises(PreconditionError):
        max_size_at_predim(cfg, 1)


def test_good_function_validation():
    with pytest.raises(ValueError):
        GoodFunction(breakpoints=((1, 2), (4, 1)))
    with pytest.raises(ValueError):
        GoodFunction(breakpoints=((2, 2),))
    with pytest.raises(ValueError):
        GoodFunction.with_table(((1, 2), (4, 5), (6, 6)), ["13/2", 7])
    with pytest.raises(ValueError):
        GoodFunction.with_table(((1, 2), (4, 5), (6, 6)), [6, 7, 6])
    with pytest.raises(ValueError):
        Tail("cubic")
    # f(18) = 8 > f(6) + 1
    vals = [6] + [7] * 11 + [8]
    GoodFunction.with_table(((1, 2), (4, 5), (6, 6)), vals)
    with pytest.raises(ValueError, match="t=6"):
        GoodFunction.with_table(((1, 2), (4, 5), (6, 6)), vals, kind="slow")


def test_table_ends_are_errors():
    g = GoodFunction.with_table(((1, 2), (4, 5), (6, 6)), [6, "13/2"])
    assert compare_f(g, 7, 7) == 1
    with pytest.raises(PreconditionError):
        compare_f(g, 7, 8)


def test_config_json_round_trip(cfg):
    assert GoodFunction.from_json(cfg.to_json()) == cfg
    slow = GoodFunction.with_table(((1, 2), (4, 5), (6, 6)), [Fraction(7 * n - 6, n) for n in range(6, 40)], "slow")
    assert GoodFunction.from_json(slow.to_json()) == slow
    with pytest.raises(GraphFormatError):
        GoodFunction.from_json({"breakpoints": [[1]]})
    with pytest.raises(GraphFormatError):
        GoodFunction.from_json({"breakpoints": [[1, "2"], [4, "5"], [6, "6"]], "tail": {"kind": "table", "values": [[7, "6"]]}})


# -- membership ----------------------------------------------------------------------


def test_membership_examples(cfg):
    assert not in_class(Graph.cycle("a", "b", "c"), cfg)
    assert not in_class(C4, cfg)
    assert not in_class(Graph.cycle("a", "b", "c", "d", "e"), cfg)
    assert in_class(C6, cfg)
    assert in_class(Graph.empty(), cfg)
    assert class_violation(Graph.cycle("a", "b", "c"), cfg) == {"a", "b", "c"}
    k4_minus = Graph.from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c")], ["x"])
    assert len(class_violation(k4_minus, cfg)) == 3


def test_membership_against_oracle(cfg):
    for n in range(1, 7):
        for g in all_graphs(n):
            assert in_class(g, cfg) == in_class_oracle(g)
            assert (class_violation(g, cfg) is None) == in_class(g, cfg)
    for g in random_graphs(17, 200, 8, min_n=7):
        assert in_class(g, cfg) == in_class_oracle(g)


def test_kf_graphs_matches_filtered_enumeration(cfg):
    levels = kf_graphs(cfg, 7)
    for n in range(8):
        expected = {canonical_form(g) for g in all_graphs(n) if in_class_oracle(g)}
        assert {canonical_form(g) for g in levels[n]} == expected


# -- closedness and closure ----------------------------------------------------------


def test_closedness_examples(cfg):
    assert is_d_closed({"v1", "v4"}, C6, cfg)
    assert not is_d_closed({"v1", "v3"}, C6, cfg)
    assert is_d_closed(C6.vertices, C6, cfg)
    assert is_self_sufficient({"v1", "v3"}, C6, cfg)
    assert is_self_sufficient({"v1"}, C4, cfg)
    claw = Graph.from_edges([("c", "x"), ("c", "y"), ("c", "z")])
    assert not is_self_sufficient({"x", "y", "z"}, claw, cfg)


def test_closure_examples(cfg):
    assert closure({"v1", "v3"}, C6, cfg) == {"v1", "v2", "v3"}
    assert closure({"v1", "v4"}, C6, cfg) == {"v1", "v4"}
    assert closure(C6.vertices, C6, cfg) == C6.vertices
    assert dimension({"v1", "v3"}, C6, cfg) == 4
    assert dimension({"v1"}, C6, cfg) == 2
    assert dimension(set(), C6, cfg) == 0


def _graphs_for_properties():
    small = [g for n in range(1, 7) for g in all_graphs(n)]
    return small + random_graphs(23, 500, 8)


def test_predicates_against_oracle(cfg):
    for g in [h for n in range(1, 6) for h in all_graphs(n)] + random_graphs(29, 60, 7):
        for a in subsets(g.vertices):
            assert is_d_closed(a, g, cfg) == closed_oracle(g, a)
            assert is_self_sufficient(a, g, cfg) == ss_oracle(g, a)


def test_closure_against_oracle(cfg):
    rng = random.Random(31)
    for g in [h for n in range(1, 6) for h in all_graphs(n)] + random_graphs(37, 80, 8):
        picks = list(subsets(g.vertices)) if len(g) <= 4 else [
            frozenset(v for v in g.vertices if rng.random() < 0.4) for _ in range(6)
        ]
        for a in picks:
            assert closure(a, g, cfg) == closure_oracle(g, a)


def test_closure_laws(cfg):
    rng = random.Random(41)
    for g in _graphs_for_properties():
        vs = sorted(g.vertices)
        for _ in range(4):
            b = frozenset(v for v in vs if rng.random() < 0.5)
            a = frozenset(v for v in b if rng.random() < 0.5)
            ca, cb = closure(a, g, cfg), closure(b, g, cfg)
            assert a <= ca
            assert closure(ca, g, cfg) == ca
            assert ca <= cb
            assert (ca == a) == is_d_closed(a, g, cfg)
            assert is_d_closed(ca, g, cfg)


def _check_submodular(g, b, c):
    lhs = predimension(g, subset=b | c)
    rhs = predimension(g, subset=b) + predimension(g, subset=c) - predimension(g, subset=b & c)
    assert lhs <= rhs
    assert (lhs == rhs) == freely_amalgamated(g.induced(b | c), b, c)


def test_submodularity_exhaustive_small():
    for n in range(1, 6):
        for g in all_graphs(n):
            subs = list(subsets(g.vertices))
            for b in subs:
                for c in subs:
                    _check_submodular(g, b, c)


def test_submodularity_random():
    rng = random.Random(43)
    for g in random_graphs(47, 500, 8) + list(all_graphs(6)):
        vs = sorted(g.vertices)
        for _ in range(40):
            b = frozenset(v for v in vs if rng.random() < 0.5)
            c = frozenset(v for v in vs if rng.random() < 0.5)
            _check_submodular(g, b, c)


@st.composite
def graph_and_two_sets(draw):
    n = draw(st.integers(1, 9))
    vs = [f"x{i}" for i in range(n)]
    pairs = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    b = draw(st.frozensets(st.sampled_from(vs)))
    c = draw(st.frozensets(st.sampled_from(vs)))
    return Graph.from_edges(edges, vs), b, c


@settings(max_examples=300, deadline=None)
@given(graph_and_two_sets())
def test_submodularity_property(data):
    _check_submodular(*data)


@settings(max_examples=200, deadline=None)
@given(graph_and_two_sets())
def test_closure_is_largest_minimiser(data):
    g, a, _ = data
    cl = closure(a, g)
    best = min(predimension(g, subset=y) for y in subsets(g.vertices) if a <= y)
    assert predimension(g, subset=cl) == best
    assert is_self_sufficient(cl, g)


# -- the three basic lemmas on closed sets -------------------------------------------


class _Relation:
    """rel(A, D[X]) with both induced graphs and answers cached."""

    def __init__(self, g, rel, cfg):
        self.g, self.rel, self.cfg = g, rel, cfg
        self.graphs, self.memo = {}, {}

    def __call__(self, a, x):
        key = (a, x)
        if key not in self.memo:
            if x not in self.graphs:
                self.graphs[x] = self.g.induced(x)
            self.memo[key] = self.rel(a, self.graphs[x], self.cfg)
        return self.memo[key]


def _lemma_triples(g: Graph, rel, cfg, rng=None, samples=0):
    """Yield (part, A, B, premise, conclusion) for the three basic lemmas."""
    r = _Relation(g, rel, cfg)
    top = frozenset(g.vertices)
    if rng is None:
        subs = list(subsets(top))
        good = [a for a in subs if r(a, top)]
        part1 = ((a, b) for a in good for b in subs)
        part2 = ((a, b) for b in good for a in subsets(b))
        part3 = ((a, b) for a in good for b in good)
    else:
        vs = sorted(top)
        subs = [frozenset(v for v in vs if rng.random() < 0.5) for _ in range(samples)]
        # closures are closed in both senses; mix them with whatever random sets qualify
        good = [a for a in subs if r(a, top)] + [closure(a, g, cfg) for a in subs]
        part1 = ((rng.choice(good), rng.choice(subs)) for _ in range(samples))
        part2 = ((frozenset(v for v in b if rng.random() < 0.5), b) for b in (rng.choice(good) for _ in range(samples)))
        part3 = ((rng.choice(good), rng.choice(good)) for _ in range(samples))
    # 1: A <=' C and B inside C give A & B <=' B
    for a, b in part1:
        yield 1, a, b, True, r(a & b, b)
    # 2: A <=' B <=' C gives A <=' C
    for a, b in part2:
        yield 2, a, b, r(a, b), r(a, top)
    # 3: A, B <=' C gives A & B <=' C
    for a, b in part3:
        yield 3, a, b, True, r(a & b, top)


def _lemma_check(g, rel, cfg, rng=None, samples=0):
    for part, a, b, premise, conclusion in _lemma_triples(g, rel, cfg, rng, samples):
        assert not premise or conclusion, (part, g, sorted(a), sorted(b))


@pytest.mark.parametrize("rel", [is_d_closed, is_self_sufficient], ids=["closed", "self_sufficient"])
def test_basic_lemmas_all_small_graphs(rel, cfg):
    for n in range(1, 7):
        for g in all_graphs(n):
            _lemma_check(g, rel, cfg)


@pytest.mark.parametrize("rel", [is_d_closed, is_self_sufficient], ids=["closed", "self_sufficient"])
def test_basic_lemmas_random_graphs(rel, cfg):
    rng = random.Random(59)
    for g in random_graphs(53, 500, 8, min_n=7):
        _lemma_check(g, rel, cfg, rng, samples=15)
