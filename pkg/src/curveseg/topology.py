"""Completing fiber tables to branch-count data and building the isotopic graph.

Regular points carry one half-branch on each side.  Summing half-branches
across a gap must balance, so the counts at the single unresolved critical
point of a flagged fiber follow from its neighbours by integer additions
alone.  Smooth critical points can instead be classified directly from the
first nonvanishing vertical derivative.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .algebra import (
    eval_bivar,
    eval_univar,
    gcd_univar,
    partial_x,
    partial_y,
    slice_at_x,
)
from .certified import Sign, _localized_sign
from .counters import OpCounters
from .errors import (
    AllDerivativesVanish,
    ConservationViolation,
    DuplicateAbscissa,
    GeneralPositionFailure,
    NegativeBranchCount,
    NotRegularValue,
    ShrinkEpsilon,
)
from .roots import sign_variations, to_bernstein
from .sweep import FiberTable, GoodPartition, PartitionEntry, compute_fiber


@dataclass(frozen=True)
class BranchClass:
    """Half-branch counts (left, right) of a smooth critical point."""

    left: int
    right: int

    def __post_init__(self):
        if (self.left, self.right) not in ((1, 1), (2, 0), (0, 2)):
            raise ValueError(f"impossible smooth classification {(self.left, self.right)}")


@dataclass(frozen=True)
class CurveData:
    """A fiber table together with its left/right half-branch count matrices."""

    table: FiberTable
    L: tuple
    R: tuple


class Vertex(NamedTuple):
    fiber: int
    rank: int
    x: Fraction
    y: Fraction
    critical: bool


@dataclass(frozen=True)
class TopoGraph:
    """Fiber points with straight edges joining consecutive fibers."""

    vertices: tuple
    edges: tuple


def _branch_class(order, product_sign):
    if order % 2 == 1:
        return BranchClass(1, 1)
    return BranchClass(2, 0) if product_sign > 0 else BranchClass(0, 2)


def derivative_test(g, x, y, max_order=None):
    """Classify a smooth critical point at an exact rational point.

    Scans g_yy, g_yyy, ... for the first nonvanishing value at (x, y); odd
    order gives one branch per side, even order sends both branches left or
    right according to the sign of the product with g_x.
    """
    x, y = Fraction(x), Fraction(y)
    d = g.total_degree if max_order is None else max_order
    if eval_bivar(g, x, y) != 0 or eval_bivar(partial_y(g), x, y) != 0:
        raise ValueError("derivative_test requires g = g_y = 0 at the point")
    gx = eval_bivar(partial_x(g), x, y) if g.deg_x >= 1 else Fraction(0)
    if gx == 0:
        raise ValueError("derivative_test requires g_x != 0 at the point")
    for order in range(2, d + 1):
        v = eval_bivar(partial_y(g, order), x, y)
        if v != 0:
            return _branch_class(order, v * gx)
    raise AllDerivativesVanish(f"all y-derivatives up to order {d} vanish at ({x}, {y})")


def _sign_at_root(q, w, iv):
    """Sign of q at the unique root of squarefree w inside the interval iv.

    Returns 0 exactly when q vanishes there; otherwise narrows iv (by
    bisection on w's sign change) until q is sign-constant across it.
    """
    if q.is_zero:
        return 0
    if iv.exact:
        v = eval_univar(q, iv.lo)
        return (v > 0) - (v < 0)
    shared = gcd_univar(w, q)
    if shared.degree >= 1:
        a, b = eval_univar(shared, iv.lo), eval_univar(shared, iv.hi)
        if a * b < 0:
            return 0
    lo, hi = iv.lo, iv.hi
    w_lo = eval_univar(w, lo)
    s_w = (w_lo > 0) - (w_lo < 0)
    while True:
        bp = to_bernstein(q, lo, hi)
        if sign_variations(bp) == 0:
            for c in bp.coeffs:
                if c:
                    return 1 if c > 0 else -1
        m = (lo + hi) / 2
        wm = eval_univar(w, m)
        if wm == 0:
            v = eval_univar(q, m)
            return (v > 0) - (v < 0)
        if ((wm > 0) - (wm < 0)) == s_w:
            lo = m
        else:
            hi = m


def _classify_exact(g, x, w, iv, degree, tmp):
    gx_slice = slice_at_x(partial_x(g), x, tmp) if g.deg_x >= 1 else None
    s_gx = _sign_at_root(gx_slice, w, iv) if gx_slice is not None else 0
    if s_gx == 0:
        raise ValueError("exact classification requires a smooth point")
    for order in range(2, degree + 1):
        q = slice_at_x(partial_y(g, order), x, tmp)
        s = _sign_at_root(q, w, iv)
        if s != 0:
            return _branch_class(order, s * s_gx)
    raise AllDerivativesVanish(f"all y-derivatives up to order {degree} vanish over x = {x}")


def _classify_box(g, box, degree, counters):
    gy = partial_y(g)
    gx = partial_x(g)
    cost = (max(g.deg_x, 0) + 1) * (max(g.deg_y, 0) + 1)

    def query(h):
        if counters is not None:
            counters.derivative_ops += cost
        return _localized_sign(h, [g, gy], box)

    sx = query(gx)
    if sx is Sign.UNKNOWN:
        raise ShrinkEpsilon("cannot certify the sign of g_x at a critical box")
    s_gx = 1 if sx is Sign.POSITIVE else -1
    for order in range(2, degree + 1):
        h = partial_y(g, order)
        if h.is_zero:
            break
        s = query(h)
        if s is Sign.UNKNOWN:
            raise ShrinkEpsilon(f"cannot certify the sign of the order-{order} y-derivative")
        return _branch_class(order, (1 if s is Sign.POSITIVE else -1) * s_gx)
    raise AllDerivativesVanish("all y-derivatives vanish on the critical box")


def _classify_point(g, point, degree, counters):
    kind = point.witness[0] if point.witness else None
    if kind == "exact":
        _, x, w, iv = point.witness
        tmp = OpCounters()
        bc = _classify_exact(g, x, w, iv, degree, tmp)
        if counters is not None:
            counters.derivative_ops += tmp.rational_ops
        return bc
    if kind == "box":
        return _classify_box(g, point.witness[1], degree, counters)
    raise ValueError("critical point carries no classification witness")


def complete_to_data(table, use_derivative_test=True, counters=None):
    """Fill the left/right half-branch matrices of a fiber table.

    Regular points start at (1, 1).  Smooth critical points are classified by
    the derivative test when enabled; the single remaining critical point of
    each flagged fiber receives whatever counts balance its two neighbours.
    """
    n = len(table.fibers)
    d = max(table.degree, 0)
    L = [[0] * d for _ in range(n)]
    R = [[0] * d for _ in range(n)]
    adds = 0

    for i, fiber in enumerate(table.fibers):
        for j, p in enumerate(fiber):
            if p.delta:
                L[i][j] = R[i][j] = 1

    def row_sum(M, i):
        nonlocal adds
        total = 0
        for v in M[i]:
            total += v
            adds += 1
        return total

    for i, (entry, fiber) in enumerate(zip(table.partition.entries, table.fibers)):
        if not entry.critical:
            continue
        unresolved = []
        for j, p in enumerate(fiber):
            if p.delta:
                continue
            if use_derivative_test and p.gx_nonzero is True:
                bc = _classify_point(table.curve, p, d, counters)
                L[i][j], R[i][j] = bc.left, bc.right
            else:
                unresolved.append(j)
        if len(unresolved) > 1:
            raise GeneralPositionFailure(
                f"fiber {i} holds {len(unresolved)} unresolved critical points", ()
            )
        if unresolved:
            j = unresolved[0]
            r = row_sum(L, i + 1) - row_sum(R, i)
            l = row_sum(R, i - 1) - row_sum(L, i)
            if r < 0 or l < 0:
                raise NegativeBranchCount(
                    f"fiber {i}, rank {j}: balancing gives (left, right) = ({l}, {r})"
                )
            R[i][j] = r
            L[i][j] = l

    for i in range(n - 1):
        if row_sum(R, i) != row_sum(L, i + 1):
            raise ConservationViolation(
                f"half-branch totals disagree between fibers {i} and {i + 1}"
            )

    if counters is not None:
        counters.data_adds += adds
    return CurveData(table, tuple(map(tuple, L)), tuple(map(tuple, R)))


def build_graph(data, counters=None):
    """Greedy left-to-right matching of half-branches into straight edges.

    Scanning each gap in rank order and always connecting to the lowest-rank
    vertex with remaining left half-branches yields a non-crossing graph.
    Boundary columns (left counts of the first fiber, right counts of the
    last) are initialization only and produce no edges.
    """
    table = data.table
    entries = table.partition.entries
    vertices = []
    for i, (entry, fiber) in enumerate(zip(entries, table.fibers)):
        for j, p in enumerate(fiber):
            vertices.append(Vertex(i, j, entry.sample, p.sample, not p.delta))
    edges = []
    adds = 0
    for i in range(len(entries) - 1):
        right_res = list(data.R[i])
        left_res = list(data.L[i + 1])
        d = len(left_res)
        k = 0
        for j in range(len(table.fibers[i])):
            while right_res[j] > 0:
                while k < d and left_res[k] == 0:
                    k += 1
                if k >= d:
                    raise ConservationViolation(
                        f"right half-branch at fiber {i}, rank {j} finds no left partner"
                    )
                edges.append(((i, j), (i + 1, k)))
                right_res[j] -= 1
                left_res[k] -= 1
                adds += 2
        if any(left_res):
            raise ConservationViolation(f"unmatched left half-branches entering fiber {i + 1}")
    assert len(set(edges)) == len(edges), "parallel edges cannot arise from a good partition"
    if counters is not None:
        counters.graph_adds += adds
    return TopoGraph(tuple(vertices), tuple(edges))


def connected_components(graph):
    """Number of connected components; isolated vertices count."""
    adjacency = {(v.fiber, v.rank): [] for v in graph.vertices}
    for a, b in graph.edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    seen = set()
    components = 0
    for node in adjacency:
        if node in seen:
            continue
        components += 1
        stack = [node]
        seen.add(node)
        while stack:
            cur = stack.pop()
            for nxt in adjacency[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return components


def refine(data, x, eps, counters=None):
    """Insert a regular abscissa and its all-ones count column into the data.

    Only the one new fiber is computed (a single univariate isolation); the
    matrices gain a column of ones at the fiber's points and zeros elsewhere.
    """
    x = Fraction(x)
    table = data.table
    entries = table.partition.entries
    for e in entries:
        if e.critical and e.contains(x):
            raise NotRegularValue(f"x = {x} lies in a critical interval")
    for e in entries:
        if e.contains(x):
            raise DuplicateAbscissa(f"x = {x} collides with an existing sample")
    fiber = compute_fiber(table.curve, x, eps, counters)
    if any(not p.delta for p in fiber):
        raise NotRegularValue(f"x = {x} is a critical value")
    pos = bisect.bisect_left([e.lo for e in entries], x)
    d = max(table.degree, 0)
    ones = tuple(1 if j < len(fiber) else 0 for j in range(d))
    new_entries = entries[:pos] + (PartitionEntry(x, x, False),) + entries[pos:]
    new_fibers = table.fibers[:pos] + (fiber,) + table.fibers[pos:]
    new_table = FiberTable(
        table.curve, GoodPartition(new_entries), new_fibers, table.degree, table.mode
    )
    return CurveData(
        new_table,
        data.L[:pos] + (ones,) + data.L[pos:],
        data.R[:pos] + (ones,) + data.R[pos:],
    )
