"""Measure equations for K_f and the elimination that forces the edge measure to 0.

A measure variable stands for mu(A), A a graph in K_f, and is identified by
the canonical form of A.  Equations are polynomial identities with rational
coefficients in these variables.  Two sources of equations are implemented:

* the amalgamation identity ``mu(B) mu(C) = mu(A) * sum_i mu(D_i) / |Aut(D_i / B C)|``
  over the eventual closures D_i of B + C over A;
* the triangle identity for three pairwise-independent 2-types,
  ``sum_p mu(p) * prod_i mu(x_i) = prod_{i<j} mu(p_ij)``, where p runs over
  the 3-types of maximal dimension completing the three pairs.

``reduce_system`` normalises mu(vertex) = 1, writes lambda for mu(edge), and
back-substitutes through a triangular system over Q(lambda) until a single
polynomial identity in lambda is left.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .amalgam import (
    AmalgamDiagram,
    MAX_TOWER_DEPTH,
    enumerate_zero_extensions,
    eventual_closures,
    has_no_proper_eventual_closure,
    verify_free_amalgamation_property,
)
from .catalog import NAMED_GRAPHS, STANDARD_DIAGRAMS, two_edge_vertex_pairs
from .errors import (
    NonTriangularSystemError,
    PreconditionError,
    WindowError,
    ZeroDenominatorError,
)
from .graph import (
    CanonicalForm,
    Graph,
    _cert_key,
    canonical_form,
    count_automorphisms_fixing,
    graph_to_json,
)
from .predim import GoodFunction, closure, dimension, in_class, is_d_closed, max_size_at_predim, predimension
from .upoly import RatFunc, UPoly, poly_gcd, positive_roots, refine_root, sign_at_root

# -- variables and polynomials -------------------------------------------------------


@lru_cache(maxsize=None)
def _alias_table() -> dict:
    return {canonical_form(g): name for name, g in NAMED_GRAPHS.items()}


@dataclass(frozen=True)
class MeasureVariable:
    """mu of an isomorphism class; equality is by canonical form only."""

    cert: CanonicalForm
    graph: Graph = field(compare=False, hash=False)
    alias: str = field(compare=False, hash=False, default="")

    def __lt__(self, other):
        return _cert_key(self.cert) < _cert_key(other.cert)

    @property
    def key(self) -> str:
        return self.cert.key()

    @property
    def name(self) -> str:
        return self.alias or f"[{self.key}]"

    def __repr__(self):
        return f"mu({self.name})"


def measure_variable(g: Graph, cfg: GoodFunction | None = None) -> MeasureVariable:
    if len(g) == 0:
        raise ValueError("the empty graph has measure 1 and no variable")
    if cfg is not None and not in_class(g, cfg):
        raise PreconditionError(f"{g!r} is not in K_f and has no measure")
    cert = canonical_form(g)
    return MeasureVariable(cert, g, _alias_table().get(cert, ""))


def named_variable(name: str) -> MeasureVariable:
    return measure_variable(NAMED_GRAPHS[name])


def _monomial(factors: Mapping) -> tuple:
    return tuple(sorted(((v, e) for v, e in factors.items() if e), key=lambda t: _cert_key(t[0].cert)))


class MeasurePolynomial:
    """Sparse polynomial: {monomial: Fraction}, monomial = sorted ((var, exp), ...)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def const(cls, c) -> MeasurePolynomial:
        return cls({(): c})

    @classmethod
    def var(cls, v: MeasureVariable, coeff=1) -> MeasurePolynomial:
        return cls({((v, 1),): coeff})

    @classmethod
    def of_graph(cls, g: Graph, cfg: GoodFunction | None = None, coeff=1) -> MeasurePolynomial:
        """mu(g), with mu(empty graph) = 1."""
        if len(g) == 0:
            return cls.const(coeff)
        return cls.var(measure_variable(g, cfg), coeff)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return MeasurePolynomial(out)

    def __neg__(self):
        return MeasurePolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MeasurePolynomial({m: c * other for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                f = dict(m1)
                for v, e in m2:
                    f[v] = f.get(v, 0) + e
                m = _monomial(f)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return MeasurePolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, MeasurePolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def variables(self) -> frozenset:
        return frozenset(v for m in self.terms for v, _ in m)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _sort_mono(t[0]))

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            body = "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts)

    __str__ = format

    def __repr__(self):
        return f"MeasurePolynomial({self})"

    def to_json(self) -> list:
        return [
            {"coeff": str(c), "factors": [[v.key, e] for v, e in mono]}
            for mono, c in self.sorted_terms()
        ]


def _sort_mono(mono):
    return tuple((_cert_key(v.cert), e) for v, e in mono)


@dataclass(frozen=True)
class MeasureEquation:
    lhs: MeasurePolynomial
    rhs: MeasurePolynomial
    source: str = ""
    detail: dict = field(default_factory=dict, compare=False, hash=False)

    def difference(self) -> MeasurePolynomial:
        return self.lhs - self.rhs

    def variables(self) -> frozenset:
        return self.lhs.variables() | self.rhs.variables()

    def format(self) -> str:
        return f"{self.lhs} = {self.rhs}"

    __str__ = format

    def weighted_degrees(self, cfg: GoodFunction | None = None) -> set:
        """Sum of delta(var) * exponent for every monomial on either side.

        Both sides measure sets of the same dimension, so a well-formed
        equation yields a single value.
        """
        out = set()
        for side in (self.lhs, self.rhs):
            for mono in side.terms:
                out.add(sum(predimension(v.graph, cfg) * e for v, e in mono))
        return out

    def to_json(self) -> dict:
        return {"source": self.source, "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(), "text": self.format()}


# -- typed graphs --------------------------------------------------------------------


@dataclass(frozen=True)
class TypedGraph:
    """A graph together with a tuple of distinguished vertices it is the closure of."""

    graph: Graph
    tuple: tuple

    def __post_init__(self):
        object.__setattr__(self, "tuple", tuple(str(v) for v in self.tuple))
        missing = set(self.tuple) - self.graph.vertices
        if missing:
            raise ValueError(f"tuple vertices {sorted(missing)} are not in the graph")

    def check_closure(self, cfg: GoodFunction | None = None):
        cl = closure(self.tuple, self.graph, cfg)
        if cl != self.graph.vertices:
            raise PreconditionError(
                f"the graph is not the closure of its tuple (closure is {sorted(cl)})"
            )


def type_measure_expression(t: TypedGraph, cfg: GoodFunction | None = None) -> MeasurePolynomial:
    """mu(tp(tuple)) = mu(graph) / |Aut(graph / tuple)|."""
    t.check_closure(cfg)
    aut = count_automorphisms_fixing(t.graph, t.tuple)
    return MeasurePolynomial.of_graph(t.graph, cfg, Fraction(1, aut))


# -- derivations ---------------------------------------------------------------------


def derive_amalgam_equation(diag: AmalgamDiagram, cfg: GoodFunction, source: str = "") -> MeasureEquation:
    """mu(B) mu(C) = mu(A) * sum over eventual closures D of mu(D)/|Aut(D/BC)|."""
    closures = eventual_closures(diag, cfg)
    base = diag.ambient.vertices
    total = MeasurePolynomial()
    for ec in closures:
        aut = count_automorphisms_fixing(ec.extension, base)
        total = total + MeasurePolynomial.of_graph(ec.extension, cfg, Fraction(1, aut))
    lhs = MeasurePolynomial.of_graph(diag.graph_b, cfg) * MeasurePolynomial.of_graph(diag.graph_c, cfg)
    rhs = MeasurePolynomial.of_graph(diag.graph_a, cfg) * total
    detail = {
        "diagram": diag.to_json(),
        "eventual_closures": [ec.to_json() for ec in closures],
    }
    return MeasureEquation(lhs, rhs, source or "amalgam", detail)


def derive_path_vertex_equation(cfg: GoodFunction) -> MeasureEquation:
    """Path of length two plus a vertex, as two (edge + vertex) graphs over two vertices.

    The amalgam has no proper eventual closure, which is checked, so the
    identity is mu(edge+pt)^2 = mu(2pts) * mu(P2+pt).
    """
    diag = two_edge_vertex_pairs(cfg)
    if not has_no_proper_eventual_closure(diag, cfg):
        raise PreconditionError("the path-plus-vertex amalgam unexpectedly has a proper eventual closure")
    return derive_amalgam_equation(diag, cfg, "amalgam two_edge_vertex_pairs")


def _pair_type_checks(t: TypedGraph, cfg: GoodFunction, name: str):
    if len(t.tuple) != 2:
        raise PreconditionError(f"{name}: a 2-type needs a tuple of length two")
    x, y = t.tuple
    if x == y:
        raise PreconditionError(f"{name}: a repeated vertex is not an independent pair")
    t.check_closure(cfg)
    for v in (x, y):
        if not is_d_closed({v}, t.graph, cfg):
            raise PreconditionError(f"{name}: only types whose single vertices are closed are supported")
    dx = dimension({x}, t.graph, cfg)
    dy = dimension({y}, t.graph, cfg)
    if predimension(t.graph, cfg) != dx + dy:
        raise PreconditionError(f"{name}: the pair is not independent (d(xy) != d(x) + d(y))")


def glue_pair_types(p12: TypedGraph, p23: TypedGraph, p13: TypedGraph):
    """Union of the three pair graphs on x1, x2, x3 with no further edges.

    Returns the glued graph and the vertex set each pair occupies.
    """
    pairs = {(1, 2): p12, (2, 3): p23, (1, 3): p13}
    vertices = {"x1", "x2", "x3"}
    edges = set()
    spans = {}
    counter = 0
    for (i, j), t in pairs.items():
        a, b = t.tuple
        names = {a: f"x{i}", b: f"x{j}"}
        for v in t.graph.order:
            if v not in names:
                counter += 1
                names[v] = f"u{counter}"
        vertices |= set(names.values())
        edges |= {frozenset(names[z] for z in e) for e in t.graph.edges}
        spans[(i, j)] = frozenset(names.values())
    return Graph(frozenset(vertices), frozenset(edges)), spans


def derive_triangle_equation(
    p12: TypedGraph, p23: TypedGraph, p13: TypedGraph, cfg: GoodFunction
) -> MeasureEquation:
    """(sum over completing 3-types p of mu(p)) * mu(x1) mu(x2) mu(x3) = mu(p12) mu(p23) mu(p13).

    The 3-types are the zero-extensions of the glued pair graphs that keep
    every pair and every single vertex closed; each contributes
    mu(closure) / |Aut(closure / x1 x2 x3)|.
    """
    for name, t in (("p12", p12), ("p23", p23), ("p13", p13)):
        _pair_type_checks(t, cfg, name)
    base, spans = glue_pair_types(p12, p23, p13)
    triple = ("x1", "x2", "x3")
    note = ""
    types = []
    if in_class(base, cfg):
        depth = max_size_at_predim(cfg, predimension(base, cfg)) - len(base)
        if depth > MAX_TOWER_DEPTH:
            raise WindowError(f"the glued base admits {depth} extra vertices; the tower search is incomplete there")
        constraints = list(spans.values()) + [{x} for x in triple]
        for c in constraints:
            if not is_d_closed(c, base, cfg):
                raise PreconditionError(f"{sorted(c)} is not closed in the glued base")
        seen = {}
        for ext in enumerate_zero_extensions(base, constraints, cfg, depth):
            seen.setdefault(canonical_form(ext, triple), ext)
        types = [seen[c] for c in sorted(seen)]
    else:
        note = "glued base is outside K_f: no completing type, the sum is empty"
    lhs = MeasurePolynomial()
    for ext in types:
        lhs = lhs + type_measure_expression(TypedGraph(ext, triple), cfg)
    singles = MeasurePolynomial.const(1)
    for _ in triple:
        singles = singles * MeasurePolynomial.of_graph(Graph.empty("x"), cfg)
    rhs = MeasurePolynomial.const(1)
    for t in (p12, p23, p13):
        rhs = rhs * type_measure_expression(t, cfg)
    detail = {
        "base": graph_to_json(base),
        "types": [graph_to_json(g) for g in types],
    }
    if note:
        detail["note"] = note
    return MeasureEquation(lhs * singles, rhs, "triangle", detail)


def far_pair() -> TypedGraph:
    """Two vertices at distance greater than two."""
    return TypedGraph(Graph.empty("a", "b"), ("a", "b"))


def near_pair() -> TypedGraph:
    """Two vertices at distance exactly two."""
    return TypedGraph(Graph.path("a", "m", "b"), ("a", "b"))


def standard_equations(cfg: GoodFunction) -> list:
    eqs = [derive_amalgam_equation(make(cfg), cfg, f"amalgam {name}") for name, make in STANDARD_DIAGRAMS.items()]
    eqs.append(derive_triangle_equation(far_pair(), far_pair(), near_pair(), cfg))
    return eqs


# -- elimination over Q(lambda) -------------------------------------------------------


LAMBDA = "lambda"


def _rf_json(r: RatFunc) -> dict:
    return {"num": [str(c) for c in r.num.coeffs], "den": [str(c) for c in r.den.coeffs]}


def _rf_from_json(obj) -> RatFunc:
    return RatFunc(UPoly(Fraction(c) for c in obj["num"]), UPoly(Fraction(c) for c in obj["den"]))


def _poly_json(p: UPoly) -> list:
    return [str(c) for c in p.coeffs]


class ParamPoly:
    """Polynomial in the unknowns with coefficients in Q(lambda)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    def unknowns(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def substitute(self, values: Mapping) -> ParamPoly:
        out = {}
        for mono, c in self.terms.items():
            keep = []
            for v, e in mono:
                if v in values:
                    c = c * values[v] ** e
                else:
                    keep.append((v, e))
            k = tuple(keep)
            out[k] = out.get(k, RatFunc(0)) + c
        return ParamPoly(out)

    def to_json(self) -> list:
        return [
            {"coeff": _rf_json(c), "factors": [[v.key, e] for v, e in mono]}
            for mono, c in sorted(self.terms.items(), key=lambda t: _sort_mono(t[0]))
        ]


def normalize(eq: MeasureEquation, unit: MeasureVariable, target: MeasureVariable) -> ParamPoly:
    """lhs - rhs with mu(unit) = 1 and mu(target) = lambda."""
    out = {}
    for mono, c in eq.difference().terms.items():
        coeff = RatFunc(c)
        keep = []
        for v, e in mono:
            if v == unit:
                continue
            if v == target:
                coeff = coeff * RatFunc(UPoly.monomial(e))
            else:
                keep.append((v, e))
        k = tuple(keep)
        out[k] = out.get(k, RatFunc(0)) + coeff
    return ParamPoly(out)


@dataclass
class Step:
    equation: int
    variable: MeasureVariable
    value: RatFunc


@dataclass
class Residual:
    equation: int
    terms: list  # RatFunc per term of the substituted equation
    denominator: UPoly
    raw: UPoly
    cancelled_power: int
    polynomial: UPoly


def _residual(index: int, pp: ParamPoly, values: Mapping) -> Residual:
    """Clear denominators term by term, then divide out the shared power of lambda."""
    terms = []
    for mono, c in sorted(pp.terms.items(), key=lambda t: _sort_mono(t[0])):
        for v, e in mono:
            c = c * values[v] ** e
        terms.append(c)
    den = UPoly.const(1)
    for t in terms:
        den = den * t.den // poly_gcd(den, t.den)
    nums = [t.num * (den // t.den) for t in terms]
    raw = UPoly()
    for n in nums:
        raw = raw + n
    nonzero = [n for n in nums if not n.is_zero()]
    # lambda > 0, so a power of lambda shared by every term can be divided out
    j = min((n.valuation() for n in nonzero), default=0)
    poly = raw.shift_down(j) if not raw.is_zero() else raw
    return Residual(index, terms, den, raw, j, poly)


UNDETERMINED = "undetermined"
FORCED_ZERO = "forced_zero"
INCONSISTENT = "inconsistent"
ADMITS_POSITIVE = "admits_positive_solution"


@dataclass
class NonMeasurabilityCertificate:
    equations: list
    unit: MeasureVariable
    target: MeasureVariable
    steps: list
    residuals: list
    final_polynomial: UPoly | None
    conclusion: str
    root_analysis: list = field(default_factory=list)
    gates: dict = field(default_factory=dict)

    @property
    def forces_zero(self) -> bool:
        return self.conclusion == FORCED_ZERO

    def statement(self) -> str:
        if self.conclusion == FORCED_ZERO:
            return (
                f"every solution with all measures positive needs lambda = mu({self.target.name}) = 0, "
                "which contradicts positivity"
            )
        if self.conclusion == INCONSISTENT:
            return "the system has no solution with all measures positive"
        if self.conclusion == UNDETERMINED:
            return "lambda is not determined by the system"
        return "the system admits a solution with lambda > 0 and every solved measure positive"

    def replay(self) -> UPoly | None:
        """Redo every recorded substitution and return the final polynomial."""
        return replay_certificate(self)

    def verify(self) -> bool:
        return self.replay() == self.final_polynomial

    def to_json(self) -> dict:
        variables = {}
        for eq in self.equations:
            for v in eq.variables():
                variables[v.key] = v.alias
        return {
            "normalization": {"unit": self.unit.key, "lambda": self.target.key},
            "variables": variables,
            "equations": [eq.to_json() for eq in self.equations],
            "steps": [
                {"equation": s.equation, "variable": s.variable.key, "alias": s.variable.alias,
                 "value": _rf_json(s.value), "text": s.value.format("lambda")}
                for s in self.steps
            ],
            "residuals": [
                {
                    "equation": r.equation,
                    "terms": [_rf_json(t) for t in r.terms],
                    "denominator": _poly_json(r.denominator),
                    "raw": _poly_json(r.raw),
                    "cancelled_lambda_power": r.cancelled_power,
                    "polynomial": _poly_json(r.polynomial),
                }
                for r in self.residuals
            ],
            "final_polynomial": None if self.final_polynomial is None else _poly_json(self.final_polynomial),
            "final_polynomial_text": None if self.final_polynomial is None else self.final_polynomial.format("lambda"),
            "conclusion": self.conclusion,
            "statement": self.statement(),
            "positive_roots": self.root_analysis,
            "gates": self.gates,
        }


def _solve_order(system: list, unit, target):
    """Yield (index, var, value) in triangular order and the leftover equations."""
    solved = {}
    steps = []
    pending = list(range(len(system)))
    progress = True
    while progress:
        progress = False
        for i in pending:
            pp = system[i].substitute(solved)
            unknown = pp.unknowns()
            if len(unknown) != 1:
                continue
            (v,) = unknown
            if any(e > 1 for m in pp.terms for _, e in m):
                continue
            a = pp.terms.get(((v, 1),), RatFunc(0))
            b = pp.terms.get((), RatFunc(0))
            if a.is_zero():
                raise ZeroDenominatorError(f"coefficient of {v.name} in equation {i} vanishes identically")
            solved[v] = -b / a
            steps.append(Step(i, v, solved[v]))
            pending.remove(i)
            progress = True
            break
    return solved, steps, pending


def reduce_system(
    equations: Sequence, target: MeasureVariable | None = None, unit: MeasureVariable | None = None
) -> NonMeasurabilityCertificate:
    """Triangular back-substitution over Q(lambda), then the sign analysis."""
    target = target or named_variable("edge")
    unit = unit or named_variable("pt")
    equations = list(equations)
    system = [normalize(eq, unit, target) for eq in equations]
    solved, steps, pending = _solve_order(system, unit, target)
    residuals = []
    stuck = set()
    for i in pending:
        pp = system[i].substitute(solved)
        if pp.unknowns():
            stuck |= pp.unknowns()
        else:
            residuals.append(_residual(i, system[i], solved))
    if stuck:
        names = sorted(v.name for v in stuck)
        raise NonTriangularSystemError(f"cannot eliminate {', '.join(names)} linearly", names)
    final, conclusion, roots = _conclude(residuals, steps)
    return NonMeasurabilityCertificate(equations, unit, target, steps, residuals, final, conclusion, roots)


def _combine(residuals) -> UPoly | None:
    if not residuals:
        return None
    p = residuals[0].polynomial
    for r in residuals[1:]:
        p = poly_gcd(p, r.polynomial)
    return p


def _conclude(residuals, steps):
    final = _combine(residuals)
    if final is None or final.is_zero():
        return final, UNDETERMINED, []
    analysis = []
    admissible = False
    for iv in positive_roots(final):
        lo, hi = refine_root(final, iv, Fraction(1, 10**12))
        negative = []
        for s in steps:
            if sign_at_root(s.value.den, final, (lo, hi)) == 0:
                negative.append(s.variable.name)
                continue
            sign = sign_at_root(s.value.num, final, (lo, hi)) * sign_at_root(s.value.den, final, (lo, hi))
            if sign <= 0:
                negative.append(s.variable.name)
        ok = not negative
        admissible |= ok
        analysis.append({
            "interval": [str(lo), str(hi)],
            "approx": float((lo + hi) / 2),
            "nonpositive_measures": negative,
        })
    if admissible:
        return final, ADMITS_POSITIVE, analysis
    if final(Fraction(0)) == 0:
        return final, FORCED_ZERO, analysis
    return final, INCONSISTENT, analysis


def replay_certificate(cert: NonMeasurabilityCertificate) -> UPoly | None:
    """Independent re-run of the recorded steps in the recorded order."""
    system = [normalize(eq, cert.unit, cert.target) for eq in cert.equations]
    values = {}
    for s in cert.steps:
        pp = system[s.equation].substitute(values)
        if pp.unknowns() != {s.variable}:
            raise ValueError(f"step for {s.variable.name} does not isolate that variable")
        a = pp.terms.get(((s.variable, 1),), RatFunc(0))
        b = pp.terms.get((), RatFunc(0))
        value = -b / a
        if value != s.value:
            raise ValueError(f"recorded value of {s.variable.name} does not replay")
        values[s.variable] = value
    residuals = []
    for r in cert.residuals:
        if system[r.equation].substitute(values).unknowns():
            raise ValueError(f"equation {r.equation} still has unknowns after the recorded steps")
        residuals.append(_residual(r.equation, system[r.equation], values))
    return _combine(residuals)


def numeric_root_scan(p: UPoly, lo=1e-12, hi=1.0, samples=200001) -> list:
    """Floating-point cross-check: real roots of ``p`` in (lo, hi].

    Combines numpy's companion-matrix roots with a sign-change scan on a
    uniform grid; returns approximate root locations.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    coeffs = [float(c) for c in reversed(p.coeffs)]
    found = []
    if len(coeffs) > 1:
        for r in np.roots(coeffs):
            if abs(r.imag) < 1e-9 and lo < r.real <= hi:
                found.append(float(r.real))
    xs = np.linspace(lo, hi, samples)
    ys = np.polyval(coeffs, xs)
    flips = np.nonzero(np.sign(ys[:-1]) * np.sign(ys[1:]) < 0)[0]
    found.extend(float(xs[i]) for i in flips)
    found.extend(float(x) for x, y in zip(xs, ys) if y == 0)
    return sorted(found)


# -- the full pipeline ------------------------------------------------------------------


class GateError(PreconditionError):
    """The control function fails a check the construction depends on."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


def growth_range(cfg: GoodFunction) -> tuple:
    """The t-range on which the growth gate is checked."""
    if cfg.tail.kind == "log3":
        return 6, 1000
    return 6, max(6, int(cfg.max_size) // 3)


def prove_nonmeasurability(cfg: GoodFunction | None = None, size_bound: int = 6) -> NonMeasurabilityCertificate:
    from .itd import sitd_growth_check

    cfg = cfg or GoodFunction()
    amalg = verify_free_amalgamation_property(cfg, size_bound)
    if not amalg.passed:
        p, q, r, s = amalg.counterexample
        raise GateError(
            f"free amalgamation check fails: dots p={_dot(p)}, q={_dot(q)}, r={_dot(r)} give {_dot(s)} below f",
            amalg.to_json(),
        )
    t_from, t_to = growth_range(cfg)
    growth = sitd_growth_check(cfg, 1, t_from, t_to)
    if not growth.passed:
        raise GateError(f"growth check f(3t) <= f(t) + 1 fails at t = {growth.failures[0]}", growth.to_json())
    eqs = standard_equations(cfg)
    cert = reduce_system(eqs)
    cert.gates = {"free_amalgamation": amalg.to_json() | {"dots": len(amalg.dots)}, "growth": growth.to_json()}
    return cert


def _dot(p) -> str:
    return f"({p[0]}, {p[1]})"
