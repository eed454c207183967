"""Certified isolation and refinement of real roots of rational polynomials.

Roots are bracketed by Bernstein-coefficient sign variations over an interval
and narrowed by de Casteljau bisection.  All interval endpoints stay rational;
sign evaluations run on primitive integer coefficient lists for speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .algebra import UnivarPoly, integer_coeffs
from .errors import EmptyDomain, NonSquarefree, ZeroPolynomial


@dataclass(frozen=True)
class RootInterval:
    """A rational interval certified to contain exactly one real root."""

    lo: Fraction
    hi: Fraction
    exact: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")
        if self.exact != (self.lo == self.hi):
            raise ValueError("exact flag must match lo == hi")

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2


@dataclass(frozen=True)
class BernsteinPoly:
    """Bernstein-basis coefficients of a polynomial over [a, b]."""

    a: Fraction
    b: Fraction
    coeffs: tuple

    def __post_init__(self):
        if self.a >= self.b:
            raise ValueError("Bernstein domain must have positive width")

    @property
    def degree(self):
        return len(self.coeffs) - 1


def to_bernstein(p, a, b, degree=None):
    """Exact change of basis from monomial to Bernstein form over [a, b].

    ``degree`` raises the basis degree above deg(p) when a fixed-size
    representation is needed (tensor forms); it may not truncate.
    """
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        raise EmptyDomain(f"degenerate Bernstein domain [{a}, {b}]")
    n = max(p.degree, 0) if degree is None else degree
    if n < p.degree:
        raise ValueError("requested Bernstein degree is below deg(p)")
    # coefficients of q(t) = p(a + (b-a) t)
    w = b - a
    q = [Fraction(0)] * (n + 1)
    if p.coeffs:
        acc = [p.coeffs[-1]]
        for c in reversed(p.coeffs[:-1]):
            nxt = [Fraction(0)] * (len(acc) + 1)
            for i, v in enumerate(acc):
                nxt[i] += v * a
                nxt[i + 1] += v * w
            nxt[0] += c
            acc = nxt
        for i, v in enumerate(acc):
            q[i] = v
    coeffs = tuple(
        sum((Fraction(comb(j, i), comb(n, i)) * q[i] for i in range(j + 1)), Fraction(0))
        for j in range(n + 1)
    )
    return BernsteinPoly(a, b, coeffs)


def sign_variations(bp):
    """Strict sign changes in the coefficient sequence, zeros ignored."""
    coeffs = bp.coeffs if isinstance(bp, BernsteinPoly) else bp
    count = 0
    prev = 0
    for c in coeffs:
        if c == 0:
            continue
        s = 1 if c > 0 else -1
        if prev and s != prev:
            count += 1
        prev = s
    return count


def split(bp, m):
    """De Casteljau subdivision of a Bernstein polynomial at a < m < b."""
    m = Fraction(m)
    if not bp.a < m < bp.b:
        raise ValueError("split point must be interior")
    lam = (m - bp.a) / (bp.b - bp.a)
    mu = 1 - lam
    row = list(bp.coeffs)
    n = len(row) - 1
    left = [row[0]]
    right = [row[n]]
    for k in range(n):
        row = [mu * row[i] + lam * row[i + 1] for i in range(len(row) - 1)]
        left.append(row[0])
        right.append(row[-1])
    right.reverse()
    return BernsteinPoly(bp.a, m, tuple(left)), BernsteinPoly(m, bp.b, tuple(right))


def bernstein_eval(bp, x):
    """Value of the represented polynomial at x (de Casteljau)."""
    lam = (Fraction(x) - bp.a) / (bp.b - bp.a)
    mu = 1 - lam
    row = list(bp.coeffs)
    while len(row) > 1:
        row = [mu * row[i] + lam * row[i + 1] for i in range(len(row) - 1)]
    return row[0]


def root_bound(p):
    """Cauchy bound: every real root lies in [-B, B]."""
    if p.is_zero:
        raise ZeroPolynomial("root bound of the zero polynomial")
    if p.degree == 0:
        return Fraction(1)
    lead = abs(p.leading)
    m = max((abs(c) for c in p.coeffs[:-1]), default=Fraction(0))
    return 1 + m / lead


# -- integer machinery ---------------------------------------------------------


def _sign_at(ints, x):
    """Sign of the polynomial with integer coefficients `ints` at rational x."""
    if not ints:
        return 0
    num, den = x.numerator, x.denominator
    acc = ints[-1]
    q = 1
    for c in reversed(ints[:-1]):
        q *= den
        acc = acc * num + c * q
    return (acc > 0) - (acc < 0)


def _int_bernstein(p, a, b):
    """Bernstein coefficients over [a, b] scaled to a primitive integer list."""
    bp = to_bernstein(p, a, b)
    den = 1
    for c in bp.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in bp.coeffs]
    return _strip(ints)


def _strip(ints):
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _half(ints):
    """Split integer Bernstein coefficients at the domain midpoint.

    Returns (left, right, apex) where apex is the (scaled) value at the
    midpoint; all scales are positive so signs and variation counts carry over.
    """
    n = len(ints) - 1
    row = list(ints)
    left = [row[0] << n]
    right = [row[n] << n]
    for k in range(1, n + 1):
        row = [row[i] + row[i + 1] for i in range(len(row) - 1)]
        left.append(row[0] << (n - k))
        right.append(row[-1] << (n - k))
    right.reverse()
    apex = row[0]
    return _strip(left), _strip(right), apex


def _depth_limit(ints):
    # Generous slack over root-separation bounds; only repeated roots hit it.
    bits = max(v.bit_length() for v in ints if v) if any(ints) else 1
    return 64 + 2 * bits + 8 * len(ints)


def isolate_roots(p, lo=None, hi=None, counters=None):
    """Sorted disjoint intervals, one per real root of squarefree p in [lo, hi].

    The default range is the Cauchy bound.  A midpoint that is itself a root
    is reported as an exact (zero-width) interval.  Raises NonSquarefree when
    bisection fails to separate roots within the depth budget, which for
    rational input happens exactly when p has a repeated root.
    """
    if p.is_zero:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    if counters is not None:
        counters.isolation_calls += 1
    if p.degree == 0:
        return []
    if lo is None or hi is None:
        bound = root_bound(p)
        lo = -bound if lo is None else Fraction(lo)
        hi = bound if hi is None else Fraction(hi)
    else:
        lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise EmptyDomain(f"isolation range [{lo}, {hi}] is empty")

    pints = integer_coeffs(p)
    items = []
    if _sign_at(pints, lo) == 0:
        items.append(("exact", lo))
    if _sign_at(pints, hi) == 0:
        items.append(("exact", hi))

    limit = _depth_limit(pints)
    stack = [(lo, hi, _int_bernstein(p, lo, hi), 0)]
    while stack:
        a, b, bern, depth = stack.pop()
        v = sign_variations(bern)
        if v == 0:
            continue
        if v == 1:
            items.append(("open", a, b, bern))
            continue
        if depth >= limit:
            raise NonSquarefree(
                f"bisection did not separate roots near [{a}, {b}]; repeated root likely"
            )
        m = (a + b) / 2
        left, right, apex = _half(bern)
        if apex == 0:
            items.append(("exact", m))
        stack.append((a, m, left, depth + 1))
        stack.append((m, b, right, depth + 1))

    items.sort(key=lambda it: (it[1], it[1]) if it[0] == "exact" else (it[1], it[2]))

    out = []
    for item in items:
        if item[0] == "exact":
            out.append(RootInterval(item[1], item[1], True))
            continue
        a, b, bern = item[1], item[2], item[3]
        exact_hit = None
        # move endpoints off roots of p (those roots belong to neighbours)
        while _sign_at(pints, a) == 0 or _sign_at(pints, b) == 0:
            m = (a + b) / 2
            left, right, apex = _half(bern)
            if apex == 0:
                exact_hit = m
                break
            if sign_variations(left) == 1:
                b, bern = m, left
            else:
                a, bern = m, right
        if exact_hit is not None:
            out.append(RootInterval(exact_hit, exact_hit, True))
            continue
        # keep intervals disjoint from the previous one
        while out and out[-1].hi >= a:
            m = (a + b) / 2
            left, right, apex = _half(bern)
            if apex == 0:
                exact_hit = m
                break
            if sign_variations(right) == 1:
                a, bern = m, right
            else:
                b, bern = m, left
        if exact_hit is not None:
            out.append(RootInterval(exact_hit, exact_hit, True))
        else:
            out.append(RootInterval(a, b, False))
    return out


def refine_interval(p, iv, eps):
    """Narrow a certified root interval to width <= eps by sign bisection."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if iv.exact:
        return iv
    ints = integer_coeffs(p)
    lo, hi = iv.lo, iv.hi
    s_lo = _sign_at(ints, lo)
    if s_lo == 0:
        return RootInterval(lo, lo, True)
    if _sign_at(ints, hi) == 0:
        return RootInterval(hi, hi, True)
    if _sign_at(ints, hi) == s_lo:
        raise ValueError("interval is not certified by an endpoint sign change")
    while hi - lo > eps:
        m = (lo + hi) / 2
        sm = _sign_at(ints, m)
        if sm == 0:
            return RootInterval(m, m, True)
        if sm == s_lo:
            lo = m
        else:
            hi = m
    return RootInterval(lo, hi, False)
