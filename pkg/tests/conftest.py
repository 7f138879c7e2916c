import random
from fractions import Fraction
from itertools import combinations

import pytest

from hrushovski.graph import Graph


def random_graph(rng: random.Random, n: int, p: float | None = None) -> Graph:
    p = rng.random() if p is None else p
    labels = [f"v{i}" for i in range(n)]
    edges = [(a, b) for a, b in combinations(labels, 2) if rng.random() < p]
    return Graph.from_edges(edges, labels)


def random_graphs(seed: int, count: int, max_n: int, min_n: int = 1):
    rng = random.Random(seed)
    return [random_graph(rng, rng.randint(min_n, max_n)) for _ in range(count)]


def subsets(vertices):
    vs = sorted(vertices)
    for k in range(len(vs) + 1):
        for c in combinations(vs, k):
            yield frozenset(c)


def delta(g: Graph, s) -> int:
    s = frozenset(s)
    return 2 * len(s) - sum(1 for e in g.edges if e <= s)


def default_f(n):
    # exact enough for graphs of at most 8 vertices: f(7), f(8) lie strictly between 6 and 7
    return {1: 2, 2: 3, 3: 4, 4: 5, 5: Fraction(11, 2), 6: 6}.get(n, Fraction(61, 10))


def member(g: Graph, f=default_f) -> bool:
    return all(delta(g, s) >= f(len(s)) for s in subsets(g.vertices) if s)


def d_closed(g: Graph, a) -> bool:
    a = frozenset(a)
    return all(delta(g, y) > delta(g, a) for y in subsets(g.vertices) if a < y)


def self_sufficient(g: Graph, a) -> bool:
    a = frozenset(a)
    return all(delta(g, y) >= delta(g, a) for y in subsets(g.vertices) if a <= y)


def closure_scan(g: Graph, a):
    """Smallest d-closed superset, by a scan over supersets in size order."""
    a = frozenset(a)
    for y in sorted((y for y in subsets(g.vertices) if a <= y), key=len):
        if d_closed(g, y):
            return y


@pytest.fixture(scope="session")
def cfg():
    from hrushovski.predim import GoodFunction

    return GoodFunction()


# -- acceptance reporting ------------------------------------------------------------

_CRITERIA = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = mark.args
    status = "PASS" if rep.passed else "FAIL"
    _CRITERIA.append((number, f"{status} criterion {number}: {title} ({call.duration:.2f} s)"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_CRITERIA):
        terminalreporter.write_line(line)
