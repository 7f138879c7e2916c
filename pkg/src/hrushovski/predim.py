"""Predimension calculus for graphs.

``delta(A) = alpha*|A| - |E(A)|``.  The control function ``f`` is a
``GoodFunction``: piecewise linear through rational breakpoints, then a tail.
With the log-base-3 tail ``f`` takes irrational values, so nothing here ever
evaluates ``f(n)`` as a float for a decision; every comparison goes through
``compare_f``, which reduces to exact integer arithmetic.

Subset scans are exponential in the number of vertices outside the given
set.  Ambient graphs are capped at ``MAX_SCAN_VERTICES``.
"""
from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import GraphFormatError, PreconditionError
from .graph import Graph

MAX_SCAN_VERTICES = 20


def as_fraction(x) -> Fraction:
    """Read a rational from an int, Fraction or a "p/q" / decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals; use a 'p/q' string")
    raise TypeError(f"cannot read {x!r} as a rational")


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Tail:
    """Behaviour of f past the last breakpoint.

    kind "log3": f(n) = v + log_3(n / s) where (s, v) is the last breakpoint.
    kind "table": explicit values at consecutive integer sizes starting at
    the last breakpoint size.  kind "slow": a table that must also satisfy
    f(3t) <= f(t) + 1 wherever both sides are tabulated (t >= its start).
    """

    kind: str = "log3"
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("log3", "table", "slow"):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))
        if self.kind != "log3" and not self.values:
            raise ValueError("table tails need at least one value")


@dataclass(frozen=True)
class GoodFunction:
    alpha: Fraction = Fraction(2)
    breakpoints: tuple = ((1, Fraction(2)), (4, Fraction(5)), (6, Fraction(6)))
    tail: Tail = field(default_factory=Tail)

    def __post_init__(self):
        alpha = as_fraction(self.alpha)
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        object.__setattr__(self, "alpha", alpha)
        bps = tuple((int(s), as_fraction(v)) for s, v in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if not bps or bps[0][0] != 1:
            raise ValueError("the first breakpoint must be at size 1")
        for (s0, v0), (s1, v1) in zip(bps, bps[1:]):
            if s1 <= s0:
                raise ValueError("breakpoint sizes must increase")
            if v1 < v0:
                raise ValueError("breakpoint values must be non-decreasing")
        if self.tail.kind != "log3":
            vals = self.tail.values
            if vals[0] != bps[-1][1]:
                raise ValueError(
                    f"tail starts at {fraction_str(vals[0])}, expected the last breakpoint "
                    f"value {fraction_str(bps[-1][1])}"
                )
            if any(b < a for a, b in zip(vals, vals[1:])):
                raise ValueError("tail table must be non-decreasing")
            if self.tail.kind == "slow":
                bad = self._table_growth_violation()
                if bad is not None:
                    raise ValueError(f"slow tail violates f(3t) <= f(t) + 1 at t={bad}")

    # -- construction helpers --------------------------------------------------

    @classmethod
    def default(cls) -> GoodFunction:
        return cls()

    @classmethod
    def with_table(cls, breakpoints, values, kind="table", alpha=2) -> GoodFunction:
        return cls(Fraction(alpha), tuple(breakpoints), Tail(kind, tuple(values)))

    @classmethod
    def from_json(cls, obj) -> GoodFunction:
        try:
            tail = obj.get("tail", {"kind": "log3"})
            kind = tail.get("kind", "log3")
            values = tuple(v for _, v in sorted((int(s), v) for s, v in tail.get("values", ())))
            if kind != "log3":
                sizes = sorted(int(s) for s, _ in tail["values"])
                last = int(obj.get("breakpoints", [[6]])[-1][0])
                if sizes != list(range(last, last + len(sizes))):
                    raise ValueError("tail sizes must be consecutive from the last breakpoint")
            return cls(
                as_fraction(obj.get("alpha", 2)),
                tuple((int(s), as_fraction(v)) for s, v in obj.get("breakpoints", cls().breakpoints)),
                Tail(kind, values),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise GraphFormatError(f"bad good-function config: {exc}") from None

    @classmethod
    def load(cls, path) -> GoodFunction:
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise GraphFormatError(exc.msg, exc.lineno) from None
        return cls.from_json(obj)

    def to_json(self) -> dict:
        out = {
            "alpha": fraction_str(self.alpha),
            "breakpoints": [[s, fraction_str(v)] for s, v in self.breakpoints],
            "tail": {"kind": self.tail.kind},
        }
        if self.tail.kind != "log3":
            s0 = self.last_breakpoint[0]
            out["tail"]["values"] = [[s0 + i, fraction_str(v)] for i, v in enumerate(self.tail.values)]
        return out

    # -- evaluation --------------------------------------------------------------

    @property
    def last_breakpoint(self):
        return self.breakpoints[-1]

    @property
    def max_size(self) -> int | float:
        """Largest size at which f is defined (inf for the log tail)."""
        if self.tail.kind == "log3":
            return math.inf
        return self.last_breakpoint[0] + len(self.tail.values) - 1

    def rational_value(self, n: int) -> Fraction | None:
        """f(n) when it is rational, else None (log tail off powers of 3)."""
        if n < 1:
            raise PreconditionError("f is only consulted at sizes n >= 1")
        s_last, v_last = self.last_breakpoint
        if n <= s_last:
            for (s0, v0), (s1, v1) in zip(self.breakpoints, self.breakpoints[1:]):
                if s0 <= n <= s1:
                    return v0 + (v1 - v0) * Fraction(n - s0, s1 - s0)
            return v_last  # single breakpoint at n == 1
        if self.tail.kind == "log3":
            q, r = divmod(n, s_last)
            if r:
                return None
            k = 0
            while q % 3 == 0:
                q //= 3
                k += 1
            return v_last + k if q == 1 else None
        offset = n - s_last
        if offset >= len(self.tail.values):
            raise PreconditionError(f"tail table ends at size {self.max_size}; f({n}) is undefined")
        return self.tail.values[offset]

    def approx(self, n: int) -> float:
        """Float value of f(n), for display only."""
        val = self.rational_value(n)
        if val is not None:
            return float(val)
        s_last, v_last = self.last_breakpoint
        return float(v_last) + math.log(n / s_last, 3)

    def _table_growth_violation(self):
        s0 = self.last_breakpoint[0]
        start = max(s0, 6)
        for t in range(start, self.max_size // 3 + 1):
            if self.rational_value(3 * t) > self.rational_value(t) + 1:
                return t
        return None


def compare_f(cfg: GoodFunction, d, n: int) -> int:
    """Sign of ``d - f(n)``: 1, 0 or -1, computed exactly."""
    if n < 1:
        raise PreconditionError("compare_f needs n >= 1; the empty graph is in K_f by fiat")
    d = as_fraction(d)
    val = cfg.rational_value(n)
    if val is not None:
        return (d > val) - (d < val)
    # log tail: d >= f(n)  <=>  s * 3**(d - v) >= n.  With d - v = p/q this is
    # s**q * 3**p >= n**q, cleared of negative powers.
    s, v = cfg.last_breakpoint
    e = d - v
    p, q = e.numerator, e.denominator
    lhs, rhs = s**q, n**q
    if p >= 0:
        lhs *= 3**p
    else:
        rhs *= 3 ** (-p)
    return (lhs > rhs) - (lhs < rhs)


def max_size_at_predim(cfg: GoodFunction, d) -> int:
    """Largest n with f(n) <= d."""
    d = as_fraction(d)
    if compare_f(cfg, d, 1) < 0:
        raise PreconditionError(f"no graph has predimension {fraction_str(d)} < f(1)")
    n = 1
    while True:
        if n + 1 > cfg.max_size:
            raise PreconditionError(
                f"f is tabulated only up to size {cfg.max_size}; cannot bound sizes at predimension {fraction_str(d)}"
            )
        if compare_f(cfg, d, n + 1) < 0:
            return n
        n += 1


# -- predimension ----------------------------------------------------------------


def predimension(g: Graph, cfg: GoodFunction | None = None, subset: Iterable | None = None) -> Fraction:
    alpha = cfg.alpha if cfg is not None else Fraction(2)
    if subset is None:
        return alpha * len(g) - len(g.edges)
    m = g.mask(subset)
    return alpha * m.bit_count() - g.edge_count(m)


def _delta(g: Graph, mask: int, alpha: Fraction) -> Fraction:
    return alpha * mask.bit_count() - g.edge_count(mask)


def _submasks(mask: int):
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _check_scan(g: Graph):
    if len(g) > MAX_SCAN_VERTICES:
        raise PreconditionError(f"subset scans are limited to {MAX_SCAN_VERTICES} vertices")


def _alpha(cfg):
    return cfg.alpha if cfg is not None else Fraction(2)


def class_violation(g: Graph, cfg: GoodFunction) -> frozenset | None:
    """Smallest vertex set whose induced subgraph has delta < f(size), or None."""
    _check_scan(g)
    alpha = cfg.alpha
    n = len(g)
    full = g.full_mask
    by_size = sorted((m for m in _submasks(full) if m), key=lambda m: (m.bit_count(), m))
    for m in by_size:
        if compare_f(cfg, _delta(g, m, alpha), m.bit_count()) < 0:
            return g.labels(m)
    return None


def in_class(g: Graph, cfg: GoodFunction) -> bool:
    """Membership in K_f: every nonempty induced subgraph lies on or above f."""
    _check_scan(g)
    alpha = cfg.alpha
    for m in _submasks(g.full_mask):
        if m and compare_f(cfg, _delta(g, m, alpha), m.bit_count()) < 0:
            return False
    return True


def in_class_after_adding(g: Graph, vertex, cfg: GoodFunction) -> bool:
    """K_f test for ``g`` when ``g - vertex`` is already known to be in K_f."""
    _check_scan(g)
    alpha = cfg.alpha
    bit = 1 << g.index[vertex]
    for m in _submasks(g.full_mask & ~bit):
        mm = m | bit
        if compare_f(cfg, _delta(g, mm, alpha), mm.bit_count()) < 0:
            return False
    return True


def _min_over_supersets(g: Graph, base: int, alpha: Fraction, strict: bool):
    rest = g.full_mask & ~base
    best = None
    for extra in _submasks(rest):
        if strict and not extra:
            continue
        val = _delta(g, base | extra, alpha)
        if best is None or val < best:
            best = val
    return best


def is_d_closed(a: Iterable, d: Graph, cfg: GoodFunction | None = None) -> bool:
    """A <= D: every strict superset inside D has strictly larger delta."""
    _check_scan(d)
    alpha = _alpha(cfg)
    base = d.mask(a)
    if base == d.full_mask:
        return True
    return _min_over_supersets(d, base, alpha, strict=True) > _delta(d, base, alpha)


def is_self_sufficient(a: Iterable, d: Graph, cfg: GoodFunction | None = None) -> bool:
    """A <=* D: no superset inside D has smaller delta."""
    _check_scan(d)
    alpha = _alpha(cfg)
    base = d.mask(a)
    return _min_over_supersets(d, base, alpha, strict=False) >= _delta(d, base, alpha)


def closure(a: Iterable, d: Graph, cfg: GoodFunction | None = None) -> frozenset:
    """cl_D(A), the smallest d-closed subset of D containing A.

    By submodularity the supersets of A attaining the minimum delta are
    closed under union, and the largest of them is exactly the closure; one
    pass over the subsets of D - A finds it.
    """
    _check_scan(d)
    alpha = _alpha(cfg)
    base = d.mask(a)
    rest = d.full_mask & ~base
    best_val, best = None, base
    for extra in _submasks(rest):
        m = base | extra
        val = _delta(d, m, alpha)
        if best_val is None or val < best_val:
            best_val, best = val, m
        elif val == best_val:
            best |= m
    return d.labels(best)


def dimension(a: Iterable, d: Graph, cfg: GoodFunction | None = None) -> Fraction:
    """d_D(A) = delta(cl_D(A)); zero for the empty set."""
    cl = closure(a, d, cfg)
    return predimension(d, cfg, cl)


def freely_amalgamated(g: Graph, b: Iterable, c: Iterable) -> bool:
    """No edge of ``g`` joins B - C to C - B."""
    b, c = frozenset(b), frozenset(c)
    left, right = b - c, c - b
    return not any((e & left) and (e & right) for e in g.edges)


def kf_graphs(cfg: GoodFunction, max_size: int) -> dict:
    """Isomorphism-class representatives of K_f by size, up to ``max_size``.

    K_f is hereditary, so every member on n vertices extends a member on
    n - 1; growing level by level and testing only subsets that contain the
    new vertex is complete.
    """
    from .graph import canonical_form

    levels = {0: [Graph(frozenset(), frozenset())]}
    for n in range(1, max_size + 1):
        label = str(n - 1)
        seen = {}
        for h in levels[n - 1]:
            for nbr_mask in _submasks(h.full_mask):
                g = h.with_vertex(label, h.labels(nbr_mask))
                if in_class_after_adding(g, label, cfg):
                    seen.setdefault(canonical_form(g), g)
        levels[n] = [seen[c] for c in sorted(seen)]
    return levels
