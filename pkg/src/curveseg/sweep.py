"""Sweep stage: critical abscissas, good partitions, fibers, general position.

A good partition lists sample abscissas with every critical value of the
vertical projection flagged and flanked by regular samples.  Fibers carry,
per point, whether the vertical derivative vanishes there (the point is
critical) and, at critical points, whether the curve is smooth.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    BivarPoly,
    discriminant_y,
    eval_univar,
    gcd_univar,
    partial_x,
    partial_y,
    remove_content_x,
    shear,
    slice_at_x,
    squarefree_part,
)
from .certified import Box, classify_boxes, fiber_box_cover, locate_critical_boxes
from .counters import OpCounters
from .errors import (
    ConservationViolation,
    CoverTooCoarse,
    GeneralPositionFailure,
    InvalidRange,
    NegativeBranchCount,
    NonSquarefree,
    ShrinkEpsilon,
    VerticalLineComponent,
    ZeroPolynomial,
)
from .roots import isolate_roots, refine_interval, root_bound

EPS_FLOOR = Fraction(1, 2**40)


@dataclass(frozen=True)
class PartitionEntry:
    """One sample abscissa; critical entries may carry an isolating interval."""

    lo: Fraction
    hi: Fraction
    critical: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("entry endpoints out of order")

    @property
    def sample(self):
        return (self.lo + self.hi) / 2

    def contains(self, x):
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class GoodPartition:
    entries: tuple

    def __post_init__(self):
        es = self.entries
        if len(es) < 2:
            raise ValueError("a good partition needs at least two abscissas")
        for a, b in zip(es, es[1:]):
            if a.hi >= b.lo:
                raise ValueError("partition entries must be disjoint and sorted")
        if es[0].critical or es[-1].critical:
            raise ValueError("critical entries must be interior")

    def __len__(self):
        return len(self.entries)

    @property
    def xs(self):
        return tuple(e.sample for e in self.entries)

    @property
    def flags(self):
        return tuple(e.critical for e in self.entries)


@dataclass(frozen=True)
class FiberPoint:
    """One point of a fiber: y-interval, criticality flag, smoothness evidence.

    delta is True when g_y is certified nonzero at the point.  gx_nonzero is
    True/False when the sign of g_x there was decided, None when undetermined
    (candidate singularity).  witness carries the data the higher-derivative
    classifier needs and does not affect equality.
    """

    y_lo: Fraction
    y_hi: Fraction
    delta: bool
    gx_nonzero: object = field(default=None, compare=False)
    witness: object = field(default=None, compare=False, repr=False)

    @property
    def sample(self):
        return (self.y_lo + self.y_hi) / 2


@dataclass(frozen=True)
class FiberTable:
    curve: BivarPoly
    partition: GoodPartition
    fibers: tuple
    degree: int
    mode: str = "float"

    def __post_init__(self):
        if len(self.fibers) != len(self.partition.entries):
            raise ValueError("one fiber per partition entry required")
        for fiber in self.fibers:
            if len(fiber) > max(self.degree, 0):
                raise ValueError("fiber larger than the curve degree")
            for a, b in zip(fiber, fiber[1:]):
                if a.y_hi >= b.y_lo:
                    raise ValueError("fiber points must be disjoint and sorted")

    @property
    def size(self):
        return len(self.partition.entries)


@dataclass(frozen=True)
class GeneralPositionResult:
    passed: bool
    violations: tuple = ()

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class PipelineResult:
    curve: BivarPoly
    shear: Fraction
    table: FiberTable


def _has_real_roots(p):
    if p.degree < 1:
        return False
    return bool(isolate_roots(squarefree_part(p)))


def normalize_curve(g):
    """Reject vertical lines, drop real-root-free x-content, take the squarefree part.

    The returned polynomial has the same real zero set as g.  A constant
    result means the real curve is empty.
    """
    if g.is_zero:
        raise ZeroPolynomial("the zero polynomial does not define a curve")
    if g.deg_y < 1:
        p = g.y_coeffs()[0]
        if _has_real_roots(p):
            raise VerticalLineComponent("equation does not involve y: every root is a vertical line")
        return BivarPoly.constant(1)
    cont, prim = remove_content_x(g)
    if cont.degree >= 1 and _has_real_roots(cont):
        raise VerticalLineComponent(
            "curve contains a vertical line (x-only factor with a real root); shear it explicitly"
        )
    return squarefree_part(prim)


def critical_values(g, counters=None):
    """Isolating intervals for the real roots of the y-discriminant, sorted."""
    if g.is_zero:
        raise ZeroPolynomial("the zero polynomial does not define a curve")
    if g.deg_y < 1:
        if _has_real_roots(g.y_coeffs()[0]):
            raise VerticalLineComponent("equation does not involve y")
        return []
    cont, _ = remove_content_x(g)
    if cont.degree >= 1 and _has_real_roots(cont):
        raise VerticalLineComponent("curve contains a vertical line")
    disc = discriminant_y(g)
    if disc.is_zero:
        raise NonSquarefree("discriminant vanishes identically; take the squarefree part first")
    if disc.degree < 1:
        return []
    return isolate_roots(squarefree_part(disc), counters=counters)


def build_good_partition(crit, margin, x_range=None, sample_width=0):
    """Interleave regular samples between critical intervals, with outer margins.

    ``sample_width`` > 0 widens regular samples into intervals of at most that
    width (certified mode); width shrinks near critical intervals so entries
    stay disjoint.
    """
    margin = Fraction(margin)
    if margin <= 0:
        raise ValueError("margin must be positive")
    sample_width = Fraction(sample_width)
    crit = list(crit)
    for a, b in zip(crit, crit[1:]):
        if a.hi >= b.lo:
            raise ValueError("critical intervals must be disjoint and sorted")
    if x_range is not None:
        lo, hi = Fraction(x_range[0]), Fraction(x_range[1])
        if lo >= hi:
            raise InvalidRange(f"empty x-range [{lo}, {hi}]")
        for iv in crit:
            if iv.lo <= lo <= iv.hi or iv.lo <= hi <= iv.hi:
                raise InvalidRange("x-range endpoint lies inside a critical interval")
        crit = [iv for iv in crit if lo < iv.lo and iv.hi < hi]
        left, right = lo, hi
    elif crit:
        left, right = crit[0].lo - margin, crit[-1].hi + margin
    else:
        left, right = -margin, margin

    def regular(x, gap_to_next):
        if sample_width <= 0:
            return PartitionEntry(x, x, False)
        w = sample_width if gap_to_next is None else min(sample_width, gap_to_next / 2)
        return PartitionEntry(x, x + w, False)

    entries = []
    if not crit:
        entries.append(regular(left, (right - left) / 2))
        entries.append(regular(right, None))
    else:
        entries.append(regular(left, crit[0].lo - left))
        for i, iv in enumerate(crit):
            entries.append(PartitionEntry(iv.lo, iv.hi, True))
            if i + 1 < len(crit):
                mid = (iv.hi + crit[i + 1].lo) / 2
                entries.append(regular(mid, crit[i + 1].lo - mid))
            else:
                entries.append(regular(right, None))
    return GoodPartition(tuple(entries))


def _isolates_root(q, iv, _defining):
    """Whether q (whose roots are among the defining roots) vanishes at iv's root."""
    if iv.exact:
        return eval_univar(q, iv.lo) == 0
    lo, hi = eval_univar(q, iv.lo), eval_univar(q, iv.hi)
    return lo * hi < 0


def compute_fiber(g, x, eps, counters=None):
    """Sorted fiber points of g over the rational abscissa x, refined to width <= eps.

    Repeated slice roots (the abscissa is an exact critical value) are handled
    via the squarefree part: each such root is reported once, flagged critical,
    with an exact smooth/singular decision from the x-derivative.
    """
    x, eps = Fraction(x), Fraction(eps)
    s = slice_at_x(g, x, counters)
    if s.is_zero:
        raise VerticalLineComponent(f"the fiber over x = {x} is the whole vertical line")
    if s.degree == 0:
        return ()
    sf = squarefree_part(s)
    mult = gcd_univar(s, s.derivative())
    critical_slice = mult.degree >= 1
    hsf = squarefree_part(mult) if critical_slice else None
    gx_slice = slice_at_x(partial_x(g), x) if critical_slice and g.deg_x >= 1 else None
    points = []
    for iv in isolate_roots(sf, counters=counters):
        iv = refine_interval(sf, iv, eps)
        delta, gxn, witness = True, None, None
        if critical_slice and _isolates_root(hsf, iv, sf):
            delta = False
            if gx_slice is None or gx_slice.is_zero:
                gxn = False
            else:
                v = gcd_univar(hsf, gx_slice)
                gxn = not (v.degree >= 1 and _isolates_root(v, iv, sf))
            witness = ("exact", x, sf, iv)
        points.append(FiberPoint(iv.lo, iv.hi, delta, gxn, witness))
    return tuple(points)


def _critical_fiber_box(g, entry, eps, max_unknown, counters=None):
    """Fiber over an isolating interval for an irrational critical value."""
    cover = fiber_box_cover(g, entry.lo, entry.hi, eps)
    return tuple(classify_boxes(g, cover, max_unknown=max_unknown))


def _certified_regular_fiber(g, entry, eps, counters=None):
    """Box-certified fiber over a regular interval, cross-checked point counts."""
    exact = compute_fiber(g, entry.lo, eps, counters)
    cover = fiber_box_cover(g, entry.lo, entry.hi, eps)
    if len(cover) != len(exact):
        raise ShrinkEpsilon(
            f"cover over regular interval at {entry.lo} has {len(cover)} boxes, fiber has {len(exact)} points"
        )
    points = classify_boxes(g, cover, max_unknown=0)
    return tuple(points)


def check_general_position(table, strict=False):
    """Verify the one-critical-point-per-fiber discipline.

    Strict mode allows at most one critical point per flagged fiber; relaxed
    mode allows several provided all but at most one are certified smooth
    (g_x nonzero), leaving them to the higher-derivative classifier.
    """
    violations = []
    for i, (entry, fiber) in enumerate(zip(table.partition.entries, table.fibers)):
        critical_ranks = [j for j, p in enumerate(fiber) if not p.delta]
        if not entry.critical:
            if critical_ranks:
                violations.append(f"fiber {i}: critical point over a regular abscissa")
            continue
        if strict:
            if len(critical_ranks) > 1:
                violations.append(f"fiber {i}: {len(critical_ranks)} critical points share one fiber")
        else:
            hard = [j for j in critical_ranks if fiber[j].gx_nonzero is not True]
            if len(hard) > 1:
                violations.append(f"fiber {i}: {len(hard)} possibly singular points share one fiber")
    return GeneralPositionResult(not violations, tuple(violations))


def _critical_intervals_no_disc(g, eps):
    """Critical x-intervals located by box subdivision instead of the discriminant.

    The search region is a heuristic coefficient bound, so this path carries
    no completeness or uniqueness certificate; downstream consistency checks
    are the only validation.
    """
    bound_x = Fraction(1)
    for p in g.y_coeffs():
        if not p.is_zero:
            bound_x = max(bound_x, root_bound(p))
    bound_x += 1
    bound_y = Fraction(1)
    for x in (-bound_x, Fraction(0), bound_x):
        s = slice_at_x(g, x)
        if not s.is_zero:
            bound_y = max(bound_y, root_bound(s))
    bound_y += 1
    clusters = locate_critical_boxes(g, Box(-bound_x, bound_x, -bound_y, bound_y), eps)
    spans = sorted((b.x_lo, b.x_hi) for b in clusters)
    merged = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    from .roots import RootInterval

    return [RootInterval(lo, hi, lo == hi) for lo, hi in merged]


def _shear_sequence(seed):
    candidates = [Fraction(s, k) for k in range(2, 18) for s in (1, -1)]
    rng = random.Random(seed)
    rng.shuffle(candidates)

    def extra():
        k = 18
        while True:
            yield Fraction(1, k)
            yield Fraction(-1, k)
            k += 1

    return itertools.chain([Fraction(0)], candidates, extra())


def _build_table(g, disc_sf, crit_raw, eps, margin, x_range, mode, max_unknown, counters):
    if crit_raw and disc_sf is not None:
        crit = [refine_interval(disc_sf, iv, eps) for iv in crit_raw]
    else:
        crit = list(crit_raw)
    width = eps if mode == "certified" else 0
    part = build_good_partition(crit, margin, x_range=x_range, sample_width=width)
    fibers = []
    for entry in part.entries:
        if entry.critical:
            if entry.lo == entry.hi:
                fiber = compute_fiber(g, entry.lo, eps, counters)
            else:
                fiber = _critical_fiber_box(g, entry, eps, max_unknown, counters)
        elif mode == "certified" and entry.lo < entry.hi:
            fiber = _certified_regular_fiber(g, entry, eps, counters)
        else:
            fiber = compute_fiber(g, entry.sample, eps, counters)
        fibers.append(tuple(fiber))
    return FiberTable(g, part, tuple(fibers), max(g.total_degree, 0), mode)


def general_position_pipeline(
    g,
    max_attempts=20,
    rng_seed=0,
    mode="float",
    epsilon=Fraction(1, 1024),
    margin=1,
    x_range=None,
    use_derivative_test=True,
    no_discriminant=False,
    counters=None,
):
    """Shear g until the sweep data is consistent; returns the accepted setup.

    Tries the identity shear first, then seeded random shears t = +/-1/k.  An
    attempt is accepted when the general-position check passes and a trial
    branch-count completion succeeds; box widths are halved on retryable
    failures before moving to the next shear.
    """
    if mode not in ("float", "certified"):
        raise ValueError(f"unknown mode {mode!r}")
    epsilon, margin = Fraction(epsilon), Fraction(margin)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    from .topology import complete_to_data  # deferred: topology builds on this module

    g0 = normalize_curve(g)
    last = ["no attempt was made"]
    shears = _shear_sequence(rng_seed)
    for _, t in zip(range(max_attempts), shears):
        gt = shear(g0, t)
        lead = gt.y_coeffs()[-1]
        if lead.degree >= 1 and _has_real_roots(lead):
            last = [f"shear {t}: leading y-coefficient vanishes at a real abscissa"]
            continue
        disc_sf = None
        crit_raw = []
        if gt.deg_y >= 1 and not no_discriminant:
            disc = discriminant_y(gt)
            if disc.is_zero:
                last = [f"shear {t}: discriminant vanished identically"]
                continue
            if disc.degree >= 1:
                disc_sf = squarefree_part(disc)
                crit_raw = isolate_roots(disc_sf)
        max_unknown = 1 if not use_derivative_test else max(gt.deg_y, 1)
        eps_cur = epsilon
        while eps_cur >= EPS_FLOOR:
            try:
                if no_discriminant and gt.deg_y >= 1:
                    crit_raw = _critical_intervals_no_disc(gt, eps_cur)
                table = _build_table(
                    gt, disc_sf, crit_raw, eps_cur, margin, x_range, mode, max_unknown, counters
                )
                result = check_general_position(table, strict=not use_derivative_test)
                if not result.passed:
                    last = [f"shear {t}: {v}" for v in result.violations]
                    break
                complete_to_data(table, use_derivative_test=use_derivative_test)
                return PipelineResult(gt, Fraction(t), table)
            except (ShrinkEpsilon, CoverTooCoarse, NegativeBranchCount, ConservationViolation) as exc:
                last = [f"shear {t}: {exc}"]
                eps_cur = eps_cur / 2
            except NonSquarefree as exc:
                last = [f"shear {t}: {exc}"]
                break
    raise GeneralPositionFailure(
        f"no general position found in {max_attempts} attempts: {'; '.join(last)}", last
    )
