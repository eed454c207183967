"""Interval mode: rational boxes, tensor Bernstein forms, sign determination.

Bernstein coefficient signs bound the polynomial's sign on a box, which gives
a subdivision scheme for covering fibers and localizing critical points with
rational arithmetic only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .algebra import UnivarPoly, partial_x, partial_y, slice_at_x
from .errors import CoverTooCoarse, EmptyDomain, ShrinkEpsilon
from .roots import root_bound, to_bernstein


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle with rational corners and positive widths."""

    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction

    def __post_init__(self):
        if self.x_lo >= self.x_hi or self.y_lo >= self.y_hi:
            raise EmptyDomain("box widths must be positive")

    @property
    def x_width(self):
        return self.x_hi - self.x_lo

    @property
    def y_width(self):
        return self.y_hi - self.y_lo


class Sign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TensorBernstein:
    """Tensor-product Bernstein coefficients of a bivariate polynomial on a box.

    ``coeffs[a][b]`` multiplies the degree-(nx, ny) basis element; the four
    corner coefficients equal the polynomial's values at the box corners.
    """

    box: Box
    coeffs: tuple


def to_tensor_bernstein(g, box):
    """Exact tensor-product basis conversion of g over the box."""
    nx = max(g.deg_x, 0)
    ny = max(g.deg_y, 0)
    ycs = g.y_coeffs() or (UnivarPoly.zero(),)
    # x-direction first: one univariate conversion per y-power
    cols = []
    for j in range(ny + 1):
        p = ycs[j] if j < len(ycs) else UnivarPoly.zero()
        bp = to_bernstein(p, box.x_lo, box.x_hi, degree=nx)
        cols.append(bp.coeffs)
    # then y-direction per x-row
    rows = []
    for a in range(nx + 1):
        p = UnivarPoly(tuple(cols[j][a] for j in range(ny + 1)))
        bp = to_bernstein(p, box.y_lo, box.y_hi, degree=ny)
        rows.append(bp.coeffs)
    return TensorBernstein(box, tuple(rows))


def _matrix_sign(rows):
    pos = neg = False
    for row in rows:
        for c in row:
            if c > 0:
                pos = True
            elif c < 0:
                neg = True
            else:
                return Sign.UNKNOWN
            if pos and neg:
                return Sign.UNKNOWN
    if pos and not neg:
        return Sign.POSITIVE
    if neg and not pos:
        return Sign.NEGATIVE
    return Sign.UNKNOWN  # identically zero matrix


def sign_on_box(g, box):
    """POSITIVE/NEGATIVE when all Bernstein coefficients agree, else UNKNOWN."""
    return _matrix_sign(to_tensor_bernstein(g, box).coeffs)


def _halve_rows_y(rows):
    lower, upper = [], []
    for row in rows:
        cur = list(row)
        n = len(cur) - 1
        lo = [cur[0]]
        hi = [cur[n]]
        for _ in range(n):
            cur = [(cur[i] + cur[i + 1]) / 2 for i in range(len(cur) - 1)]
            lo.append(cur[0])
            hi.append(cur[-1])
        hi.reverse()
        lower.append(tuple(lo))
        upper.append(tuple(hi))
    return tuple(lower), tuple(upper)


def _split_tensor_y(tb):
    mid = (tb.box.y_lo + tb.box.y_hi) / 2
    lower, upper = _halve_rows_y(tb.coeffs)
    b = tb.box
    return (
        TensorBernstein(Box(b.x_lo, b.x_hi, b.y_lo, mid), lower),
        TensorBernstein(Box(b.x_lo, b.x_hi, mid, b.y_hi), upper),
    )


def _split_tensor_x(tb):
    mid = (tb.box.x_lo + tb.box.x_hi) / 2
    cols = list(zip(*tb.coeffs))
    lower_t, upper_t = _halve_rows_y(cols)
    b = tb.box
    lower = tuple(zip(*lower_t))
    upper = tuple(zip(*upper_t))
    return (
        TensorBernstein(Box(b.x_lo, mid, b.y_lo, b.y_hi), lower),
        TensorBernstein(Box(mid, b.x_hi, b.y_lo, b.y_hi), upper),
    )


def _split_box(box):
    ymid = (box.y_lo + box.y_hi) / 2
    return (
        Box(box.x_lo, box.x_hi, box.y_lo, ymid),
        Box(box.x_lo, box.x_hi, ymid, box.y_hi),
    )


def fiber_box_cover(g, x_lo, x_hi, eps, y_lo=None, y_hi=None):
    """Disjoint boxes over [x_lo, x_hi] covering {g = 0} there.

    Bisects the y-range, discarding boxes where g has a certified sign, until
    survivors have height <= eps; touching survivors merge into one box.
    Raises CoverTooCoarse when the merged cover has more boxes than the fiber
    can have points, which signals that eps must shrink.
    """
    x_lo, x_hi, eps = Fraction(x_lo), Fraction(x_hi), Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if y_lo is None or y_hi is None:
        bound = max(root_bound(slice_at_x(g, x_lo)), root_bound(slice_at_x(g, x_hi))) + 1
        y_lo = -bound if y_lo is None else Fraction(y_lo)
        y_hi = bound if y_hi is None else Fraction(y_hi)
    else:
        y_lo, y_hi = Fraction(y_lo), Fraction(y_hi)
    root = to_tensor_bernstein(g, Box(x_lo, x_hi, y_lo, y_hi))
    survivors = []
    stack = [root]
    while stack:
        tb = stack.pop()
        if _matrix_sign(tb.coeffs) is not Sign.UNKNOWN:
            continue
        if tb.box.y_width <= eps:
            survivors.append(tb.box)
            continue
        stack.extend(_split_tensor_y(tb))
    survivors.sort(key=lambda b: b.y_lo)
    merged = []
    for box in survivors:
        if merged and merged[-1].y_hi == box.y_lo:
            prev = merged.pop()
            merged.append(Box(prev.x_lo, prev.x_hi, prev.y_lo, box.y_hi))
        else:
            merged.append(box)
    if len(merged) > max(g.deg_y, 0):
        raise CoverTooCoarse(
            f"cover has {len(merged)} boxes but the fiber holds at most {g.deg_y} points"
        )
    return merged


def _localized_sign(h, constraints, box, rounds=14):
    """Sign of h at the (unique) solution of the constraints inside the box.

    Shrinks the box toward the sub-box where every constraint polynomial still
    has uncertain sign; returns UNKNOWN when h cannot be certified within the
    round budget (for example because h really vanishes at the point).
    """
    cur = box
    for _ in range(rounds):
        s = sign_on_box(h, cur)
        if s is not Sign.UNKNOWN:
            return s
        kept = [b for b in _split_box(cur) if all(sign_on_box(c, b) is Sign.UNKNOWN for c in constraints)]
        if len(kept) != 1:
            xmid = (cur.x_lo + cur.x_hi) / 2
            halves = (
                Box(cur.x_lo, xmid, cur.y_lo, cur.y_hi),
                Box(xmid, cur.x_hi, cur.y_lo, cur.y_hi),
            )
            kept = [b for b in halves if all(sign_on_box(c, b) is Sign.UNKNOWN for c in constraints)]
            if len(kept) != 1:
                break
        cur = kept[0]
    return sign_on_box(h, cur)


def classify_boxes(g, cover, max_unknown=1):
    """Interval-valued fiber points for a cover; delta certifies g_y != 0.

    Each box where the sign of g_y stays uncertain is a critical-point
    candidate; more than max_unknown of them raises ShrinkEpsilon so the
    caller can retry with a smaller box width.
    """
    from .sweep import FiberPoint

    gy = partial_y(g)
    gx = partial_x(g) if g.deg_x >= 1 else None
    points = []
    unknown = 0
    for box in cover:
        s = _localized_sign(gy, [g], box)
        delta = s is not Sign.UNKNOWN
        gxn = None
        witness = None
        if not delta:
            unknown += 1
            if gx is None:
                gxn = False
            else:
                sx = _localized_sign(gx, [g, gy], box)
                gxn = True if sx is not Sign.UNKNOWN else None
            witness = ("box", box)
        points.append(
            FiberPoint(y_lo=box.y_lo, y_hi=box.y_hi, delta=delta, gx_nonzero=gxn, witness=witness)
        )
    if unknown > max_unknown:
        raise ShrinkEpsilon(
            f"{unknown} unclassified boxes in one fiber (at most {max_unknown} allowed)"
        )
    return points


def locate_critical_boxes(g, region, eps):
    """Boxes of width <= eps covering {g = g_y = 0} inside the region.

    Discriminant-free localization: subdivide, discarding boxes where g or
    g_y has a certified sign.  The result is a superset cover with no
    uniqueness certificate, a strictly weaker contract than discriminant
    root isolation.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    gy = partial_y(g)
    survivors = []
    stack = [region]
    while stack:
        box = stack.pop()
        if sign_on_box(g, box) is not Sign.UNKNOWN:
            continue
        if sign_on_box(gy, box) is not Sign.UNKNOWN:
            continue
        wide_x = box.x_width > eps
        wide_y = box.y_width > eps
        if not wide_x and not wide_y:
            survivors.append(box)
            continue
        xs = (box.x_lo, (box.x_lo + box.x_hi) / 2, box.x_hi) if wide_x else (box.x_lo, box.x_hi)
        ys = (box.y_lo, (box.y_lo + box.y_hi) / 2, box.y_hi) if wide_y else (box.y_lo, box.y_hi)
        for i in range(len(xs) - 1):
            for j in range(len(ys) - 1):
                stack.append(Box(xs[i], xs[i + 1], ys[j], ys[j + 1]))
    return _merge_clusters(survivors)


def _touches(a, b):
    return not (
        a.x_hi < b.x_lo or b.x_hi < a.x_lo or a.y_hi < b.y_lo or b.y_hi < a.y_lo
    )


def _merge_clusters(boxes):
    """Bounding box per connected cluster of touching boxes, sorted."""
    n = len(boxes)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if _touches(boxes[i], boxes[j]):
                parent[find(i)] = find(j)
    groups = {}
    for i, box in enumerate(boxes):
        groups.setdefault(find(i), []).append(box)
    out = []
    for members in groups.values():
        out.append(
            Box(
                min(b.x_lo for b in members),
                max(b.x_hi for b in members),
                min(b.y_lo for b in members),
                max(b.y_hi for b in members),
            )
        )
    out.sort(key=lambda b: (b.x_lo, b.y_lo))
    return out
