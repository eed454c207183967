"""Exact polynomial arithmetic over the rationals.

Dense univariate and bivariate polynomials with ``Fraction`` coefficients:
Horner evaluation, derivatives, slices, squarefree parts, coordinate shears,
and resultants computed by a subresultant polynomial-remainder sequence.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import ZeroPolynomial

Rat = Fraction


def _rat(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"coefficient must be int or Fraction, not {type(v).__name__}")


class UnivarPoly:
    """Dense polynomial in one variable; coefficient index equals exponent.

    The empty coefficient tuple is the zero polynomial.  Invariant: the last
    stored coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls((1,))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def variable(cls):
        return cls((0, 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_constant(self):
        return len(self.coeffs) <= 1

    @property
    def leading(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UnivarPoly((other,))
        if not isinstance(other, UnivarPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UnivarPoly({list(self.coeffs)!r})"

    def __neg__(self):
        return UnivarPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UnivarPoly((other,))
        if not isinstance(other, UnivarPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UnivarPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, UnivarPoly) else UnivarPoly((-_rat(other),)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _rat(other)
            if c == 0:
                return UnivarPoly()
            return UnivarPoly(tuple(x * c for x in self.coeffs))
        if not isinstance(other, UnivarPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UnivarPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return UnivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent")
        result = UnivarPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self, order=1):
        cs = self.coeffs
        for _ in range(order):
            cs = tuple(cs[i] * i for i in range(1, len(cs)))
        return UnivarPoly(cs)

    def monic(self):
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        return UnivarPoly(tuple(c / lead for c in self.coeffs))

    def divmod(self, other):
        """Long division over the rationals: self = q*other + r with deg r < deg other."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        nb = len(other.coeffs)
        if len(r) < nb:
            return UnivarPoly(), self
        q = [Fraction(0)] * (len(r) - nb + 1)
        binv = 1 / other.leading
        while len(r) >= nb:
            c = r[-1] * binv
            k = len(r) - nb
            q[k] = c
            for i, bc in enumerate(other.coeffs):
                r[k + i] -= c * bc
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        return UnivarPoly(q), UnivarPoly(r)


def eval_univar(p, x, counters=None):
    """Evaluate p at x by Horner's rule: deg(p) multiplications and additions."""
    if not p.coeffs:
        return Fraction(0)
    x = _rat(x)
    acc = p.coeffs[-1]
    for c in reversed(p.coeffs[:-1]):
        acc = acc * x + c
    if counters is not None:
        counters.rational_ops += 2 * p.degree
    return acc


def exact_div_univar(a, b):
    q, r = a.divmod(b)
    if not r.is_zero:
        raise ValueError("polynomial division is not exact")
    return q


def gcd_univar(a, b):
    """Monic gcd over Q[t]; gcd(0, 0) = 0."""
    while not b.is_zero:
        _, r = a.divmod(b)
        a, b = b, r.monic()
    return a.monic()


def integer_coeffs(p):
    """Primitive integer coefficient list sharing p's signs; () for zero."""
    if not p.coeffs:
        return []
    from math import gcd, lcm

    den = 1
    for c in p.coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


class BivarPoly:
    """Dense bivariate polynomial; ``rows[i][j]`` is the coefficient of x^i y^j.

    Rows form a rectangle trimmed so the last row and last column are not
    all zero.  The empty rectangle is the zero polynomial.
    """

    __slots__ = ("rows",)

    def __init__(self, rows=()):
        rows = [list(map(_rat, row)) for row in rows]
        width = max((len(r) for r in rows), default=0)
        for r in rows:
            r.extend([Fraction(0)] * (width - len(r)))
        while rows and all(c == 0 for c in rows[-1]):
            rows.pop()
        if rows:
            width = len(rows[0])
            while width and all(r[width - 1] == 0 for r in rows):
                width -= 1
            rows = [r[:width] for r in rows]
            if width == 0:
                rows = []
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, c):
        return cls(((c,),))

    @classmethod
    def x(cls):
        return cls(((0,), (1,)))

    @classmethod
    def y(cls):
        return cls(((0, 1),))

    @classmethod
    def from_terms(cls, terms):
        """Build from {(x_exp, y_exp): coefficient}."""
        if not terms:
            return cls()
        dx = max(i for i, _ in terms)
        dy = max(j for _, j in terms)
        rows = [[Fraction(0)] * (dy + 1) for _ in range(dx + 1)]
        for (i, j), c in terms.items():
            rows[i][j] += _rat(c)
        return cls(rows)

    @property
    def is_zero(self):
        return not self.rows

    @property
    def deg_x(self):
        return len(self.rows) - 1

    @property
    def deg_y(self):
        return len(self.rows[0]) - 1 if self.rows else -1

    @property
    def total_degree(self):
        d = -1
        for i, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if c and i + j > d:
                    d = i + j
        return d

    def coeff(self, i, j):
        if 0 <= i < len(self.rows) and 0 <= j < len(self.rows[i]):
            return self.rows[i][j]
        return Fraction(0)

    def terms(self):
        for i, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if c:
                    yield (i, j), c

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BivarPoly.constant(other)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"BivarPoly({dict(self.terms())!r})"

    def __neg__(self):
        return BivarPoly(tuple(tuple(-c for c in row) for row in self.rows))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BivarPoly.constant(other)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        nx = max(len(self.rows), len(other.rows))
        ny = max(self.deg_y, other.deg_y) + 1
        rows = [[self.coeff(i, j) + other.coeff(i, j) for j in range(ny)] for i in range(nx)]
        return BivarPoly(rows)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BivarPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _rat(other)
            if c == 0:
                return BivarPoly()
            return BivarPoly(tuple(tuple(v * c for v in row) for row in self.rows))
        if not isinstance(other, BivarPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return BivarPoly()
        nx = self.deg_x + other.deg_x + 1
        ny = self.deg_y + other.deg_y + 1
        rows = [[Fraction(0)] * ny for _ in range(nx)]
        for (i, j), a in self.terms():
            for (k, l), b in other.terms():
                rows[i + k][j + l] += a * b
        return BivarPoly(rows)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative exponent")
        result = BivarPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def y_coeffs(self):
        """Coefficients of powers of y, each a polynomial in x."""
        if not self.rows:
            return ()
        return tuple(
            UnivarPoly(tuple(row[j] for row in self.rows)) for j in range(self.deg_y + 1)
        )

    @classmethod
    def from_y_coeffs(cls, polys):
        polys = list(polys)
        while polys and polys[-1].is_zero:
            polys.pop()
        if not polys:
            return cls()
        nx = max(len(p.coeffs) for p in polys)
        rows = [[Fraction(0)] * len(polys) for _ in range(nx)]
        for j, p in enumerate(polys):
            for i, c in enumerate(p.coeffs):
                rows[i][j] = c
        return cls(rows)


def slice_at_x(g, x, counters=None):
    """The univariate polynomial y -> g(x, y); Horner in x per y-coefficient."""
    return UnivarPoly(tuple(eval_univar(c, x, counters) for c in g.y_coeffs()))


def eval_bivar(g, x, y, counters=None):
    """g(x, y) by nested Horner: collect powers of y, then Horner in y."""
    return eval_univar(slice_at_x(g, x, counters), y, counters)


def partial_y(g, order=1):
    """order-th partial derivative with respect to y."""
    if order < 1:
        raise ValueError("order must be >= 1")
    cs = list(g.y_coeffs())
    for _ in range(order):
        cs = [cs[j] * j for j in range(1, len(cs))]
    return BivarPoly.from_y_coeffs(cs)


def partial_x(g, order=1):
    if order < 1:
        raise ValueError("order must be >= 1")
    cs = [UnivarPoly(p.coeffs).derivative(order) for p in g.y_coeffs()]
    return BivarPoly.from_y_coeffs(cs)


def shear(g, t):
    """Substitute x -> x + t*y; the zero set is sheared in the opposite direction."""
    t = _rat(t)
    if t == 0 or g.is_zero:
        return g
    terms = {}
    for (i, j), c in g.terms():
        for a in range(i + 1):
            key = (a, i - a + j)
            terms[key] = terms.get(key, Fraction(0)) + c * comb(i, a) * t ** (i - a)
    return BivarPoly.from_terms(terms)


# -- resultants via the subresultant remainder sequence ----------------------
#
# Polynomials in y with coefficients in Q[x] are handled as trimmed lists of
# UnivarPoly.  The bookkeeping follows the classical subresultant scheme so
# the final value differs from the true resultant by at most a nonzero
# rational; in particular its x-roots are exactly the resultant's roots.


def _ytrim(ps):
    ps = list(ps)
    while ps and ps[-1].is_zero:
        ps.pop()
    return ps


def _ycontent(ps):
    c = UnivarPoly.zero()
    for p in ps:
        if not p.is_zero:
            c = gcd_univar(c, p)
            if c.degree == 0:
                return UnivarPoly.one()
    return c if not c.is_zero else UnivarPoly.one()


def _ydiv_coeff(ps, d):
    if d == UnivarPoly.one():
        return list(ps)
    return [exact_div_univar(p, d) if not p.is_zero else p for p in ps]


def _yprem(A, B):
    """Pseudo-remainder: lc(B)^(deg A - deg B + 1) * A reduced modulo B."""
    lead = B[-1]
    R = list(A)
    e = len(A) - len(B) + 1
    while R and len(R) >= len(B):
        lcR = R[-1]
        k = len(R) - len(B)
        R = [c * lead for c in R]
        for i, bc in enumerate(B):
            R[k + i] = R[k + i] - lcR * bc
        R.pop()
        R = _ytrim(R)
        e -= 1
    if e > 0:
        le = lead ** e
        R = [c * le for c in R]
    return R


def _poly_pow(p, n):
    out = UnivarPoly.one()
    for _ in range(n):
        out = out * p
    return out


def _resultant_ypoly(A, B):
    """Resultant with respect to y, exact up to a nonzero rational factor."""
    A, B = _ytrim(A), _ytrim(B)
    if not A or not B:
        raise ZeroPolynomial("resultant of the zero polynomial")
    m, n = len(A) - 1, len(B) - 1
    sign = 1
    if m < n:
        A, B = B, A
        if m % 2 == 1 and n % 2 == 1:
            sign = -sign
        m, n = n, m
    if n == 0:
        return _poly_pow(B[0], m) * sign
    ca, cb = _ycontent(A), _ycontent(B)
    A, B = _ydiv_coeff(A, ca), _ydiv_coeff(B, cb)
    scale = _poly_pow(ca, n) * _poly_pow(cb, m)
    g = UnivarPoly.one()
    h = UnivarPoly.one()
    while True:
        m, n = len(A) - 1, len(B) - 1
        delta = m - n
        if m % 2 == 1 and n % 2 == 1:
            sign = -sign
        R = _yprem(A, B)
        A = B
        divisor = g * _poly_pow(h, delta)
        B = _ytrim(_ydiv_coeff(R, divisor))
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = exact_div_univar(_poly_pow(g, delta), _poly_pow(h, delta - 1))
        if not B:
            return UnivarPoly.zero()
        if len(B) == 1:
            dA = len(A) - 1
            final = exact_div_univar(_poly_pow(B[0], dA), _poly_pow(h, dA - 1))
            return scale * final * sign


def discriminant_y(g):
    """Res_y(g, g_y) as a polynomial in x, up to a nonzero rational factor.

    Zero exactly when g and g_y share a factor of positive y-degree, i.e.
    when g has a repeated factor involving y.
    """
    if g.is_zero:
        raise ZeroPolynomial("discriminant of the zero polynomial")
    if g.deg_y < 1:
        raise ValueError("discriminant_y requires positive degree in y")
    return _resultant_ypoly(g.y_coeffs(), partial_y(g).y_coeffs())


def resultant_y(g, h):
    """Res_y(g, h) up to a nonzero rational factor."""
    if g.is_zero or h.is_zero:
        raise ZeroPolynomial("resultant of the zero polynomial")
    return _resultant_ypoly(g.y_coeffs(), h.y_coeffs())


# -- gcd and squarefree part --------------------------------------------------


def _ygcd(A, B):
    """gcd in Q[x][y] up to a rational unit, by a primitive remainder sequence."""
    A, B = _ytrim(A), _ytrim(B)
    if not A:
        return B
    if not B:
        return A
    ca, cb = _ycontent(A), _ycontent(B)
    cont = gcd_univar(ca, cb)
    A, B = _ydiv_coeff(A, ca), _ydiv_coeff(B, cb)
    if len(A) < len(B):
        A, B = B, A
    while True:
        if len(B) == 1:
            prim = [UnivarPoly.one()]
            break
        R = _ytrim(_yprem(A, B))
        if not R:
            prim = _ydiv_coeff(B, _ycontent(B))
            break
        A, B = B, _ydiv_coeff(R, _ycontent(R))
    return [p * cont for p in prim]


def _ydivexact(A, D):
    """Exact division in Q[x][y]; valid whenever D divides A."""
    A, D = _ytrim(A), _ytrim(D)
    if not D:
        raise ZeroDivisionError
    Q = [UnivarPoly.zero()] * (len(A) - len(D) + 1)
    R = list(A)
    while R and len(R) >= len(D):
        c = exact_div_univar(R[-1], D[-1])
        k = len(R) - len(D)
        Q[k] = c
        for i, dc in enumerate(D):
            R[k + i] = R[k + i] - c * dc
        R = _ytrim(R)
    if R:
        raise ValueError("bivariate division is not exact")
    return Q


def content_x(g):
    """gcd over Q[x] of the y-coefficients of g (monic)."""
    if g.is_zero:
        raise ZeroPolynomial("content of the zero polynomial")
    return _ycontent(g.y_coeffs())


def remove_content_x(g):
    """Split g into (content in x, primitive part)."""
    c = content_x(g)
    if c.degree <= 0:
        return UnivarPoly.one(), g
    return c, BivarPoly.from_y_coeffs(_ydiv_coeff(g.y_coeffs(), c))


def _squarefree_univar(p):
    if p.is_zero:
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    if p.degree <= 1:
        return p
    g = gcd_univar(p, p.derivative())
    if g.degree == 0:
        return p
    return exact_div_univar(p, g)


def _squarefree_bivar(g):
    if g.is_zero:
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    cont, prim = remove_content_x(g)
    prim_cs = prim.y_coeffs()
    if g.deg_y >= 1:
        d = _ygcd(prim_cs, partial_y(prim).y_coeffs())
        if len(d) > 1 or d[0].degree > 0:
            prim_cs = _ydivexact(prim_cs, d)
    sf_cont = _squarefree_univar(cont) if cont.degree > 0 else cont
    return BivarPoly.from_y_coeffs([p * sf_cont for p in prim_cs])


def squarefree_part(p):
    """p divided by gcd(p, dp/dy); same zero set, no repeated factors.

    Univariate input differentiates in its own variable; bivariate input is
    treated as a polynomial in y and its x-content is made squarefree too.
    """
    if isinstance(p, UnivarPoly):
        return _squarefree_univar(p)
    return _squarefree_bivar(p)
