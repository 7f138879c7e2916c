"""Univariate polynomials and rational functions over Q.

Just enough exact algebra for triangular elimination in one parameter:
arithmetic, gcd, Sturm sequences and real-root isolation.  Coefficients are
``Fraction`` and stored low degree first, with no trailing zeros.
"""
from __future__ import annotations

from collections.abc import Iterable
from fractions import Fraction


class UPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> UPoly:
        return cls([c])

    @classmethod
    def x(cls) -> UPoly:
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, c=1) -> UPoly:
        return cls([0] * k + [c])

    # -- basic shape --------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def valuation(self) -> int:
        """Multiplicity of 0 as a root; the zero polynomial has none."""
        if not self.coeffs:
            raise ValueError("the zero polynomial has no valuation")
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k

    def shift_down(self, k: int) -> UPoly:
        """Divide by x**k; the low coefficients must be zero."""
        if any(self.coeffs[:k]):
            raise ValueError(f"not divisible by x^{k}")
        return UPoly(self.coeffs[k:])

    def monic(self) -> UPoly:
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UPoly(c / lc for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UPoly.const(other)
        return isinstance(other, UPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UPoly({self})"

    def __str__(self):
        return self.format()

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> UPoly:
        if isinstance(other, UPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out, base = UPoly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: UPoly):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lc = other.lead()
        d = other.degree
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k] / lc
            if c:
                q[k - d] = c
                for i, y in enumerate(other.coeffs):
                    rem[k - d + i] -= c * y
        return UPoly(q), UPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> UPoly:
        return UPoly(k * c for k, c in enumerate(self.coeffs) if k)


def poly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd; gcd(0, 0) is 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree(p: UPoly) -> UPoly:
    if p.degree < 1:
        return p
    return p // poly_gcd(p, p.derivative())


# -- real roots --------------------------------------------------------------------


def sturm_sequence(p: UPoly) -> list:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: UPoly, lo, hi, seq=None) -> int:
    """Distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    seq = seq or sturm_sequence(p)
    return _sign_changes([q(Fraction(lo)) for q in seq]) - _sign_changes([q(Fraction(hi)) for q in seq])


def root_bound(p: UPoly) -> Fraction:
    """Cauchy bound: every real root has absolute value below it."""
    lc = abs(p.lead())
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_roots(p: UPoly, lo, hi) -> list:
    """Disjoint intervals (a, b], each holding exactly one root of ``p`` in (lo, hi]."""
    s = squarefree(p)
    if s.degree < 1:
        return []
    seq = sturm_sequence(s)
    out = []
    stack = [(Fraction(lo), Fraction(hi))]
    while stack:
        a, b = stack.pop()
        n = count_roots(s, a, b, seq)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.extend([(m, b), (a, m)])
    return sorted(out)


def positive_roots(p: UPoly) -> list:
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    return isolate_roots(p, 0, root_bound(p))


def sign_at_root(g: UPoly, p: UPoly, interval) -> int:
    """Sign of ``g`` at the unique root of ``p`` inside ``interval``.

    ``g`` vanishes there iff gcd(p, g) has a root in the interval; otherwise
    the interval is bisected until ``g`` has no root in it, and any interior
    point gives the sign.
    """
    a, b = map(Fraction, interval)
    s = squarefree(p)
    if g.is_zero():
        return 0
    common = poly_gcd(s, g)
    if common.degree >= 1 and count_roots(common, a, b) == 1:
        return 0
    s_seq = sturm_sequence(s)
    while count_roots(g, a, b) > 0 or g(b) == 0:
        m = (a + b) / 2
        if s(m) == 0:
            return 1 if g(m) > 0 else -1
        if count_roots(s, a, m, s_seq) == 1:
            b = m
        else:
            a = m
    v = g(b)
    return 1 if v > 0 else -1


def refine_root(p: UPoly, interval, width=Fraction(1, 10**15)):
    """Narrow an isolating interval to the given width."""
    a, b = map(Fraction, interval)
    s = squarefree(p)
    seq = sturm_sequence(s)
    while b - a > width:
        m = (a + b) / 2
        if count_roots(s, a, m, seq) == 1:
            b = m
        else:
            a = m
    return a, b


class RatFunc:
    """Reduced fraction of polynomials with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, UPoly) else UPoly.const(num)
        den = UPoly.const(1) if den is None else (den if isinstance(den, UPoly) else UPoly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = UPoly(), UPoly.const(1)
            return
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        lc = den.lead()
        self.num = UPoly(c / lc for c in num.coeffs)
        self.den = den.monic()

    @classmethod
    def x(cls) -> RatFunc:
        return cls(UPoly.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, UPoly)):
            other = RatFunc(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self})"

    def format(self, var: str = "x") -> str:
        if self.den == UPoly.const(1):
            return self.num.format(var)
        return f"({self.num.format(var)})/({self.den.format(var)})"

    __str__ = format

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction, UPoly)):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(1) / (self ** (-k))
        return RatFunc(self.num**k, self.den**k)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num(x) / d
