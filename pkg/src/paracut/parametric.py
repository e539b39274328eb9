"""Min-cut sweeps over λ: warm-started sequences and full breakpoint envelopes.

For a fixed source set the reduced cut value (cut minus total source-side
capacity) is an affine function of λ; the minimum over all sets is therefore
a piecewise-linear concave function whose kinks are the breakpoints.  The
full envelope is found by the classic divide-and-conquer on line
intersections, with every λ handled as an exact rational.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import ContractViolationError, ValidationError
from .graph import NodeSubset
from .mincut import MAXIMAL, MINIMAL, CutSolution, SolverState, solve_mincut
from .network import SOURCE_DECREASING, InstantiatedNetwork, ParametricNetwork

CONCAVE_MAX = "concave-max"
CONVEX_MIN = "convex-min"


@dataclass
class Breakpoint:
    """A λ where the min-cut source set changes.

    ``source_set`` is the set just left of λ for shrinking sweeps
    (maximization) and just right for growing sweeps (minimization); either
    way it is the larger of the two sets meeting at the breakpoint, and the
    one whose (budget, benefit) point anchors the envelope segment of
    slope λ.
    """

    lam: Fraction
    source_set: NodeSubset
    budget: int
    benefit: int

    @property
    def set_size(self) -> int:
        return len(self.source_set)

    @property
    def point(self) -> tuple[int, int]:
        return (self.budget, self.benefit)


@dataclass
class Envelope:
    """Ordered breakpoints of a parametric sweep plus the closing hull point."""

    breakpoints: list[Breakpoint]
    sense: str  # CONCAVE_MAX or CONVEX_MIN
    anchor_point: tuple[int, int] = (0, 0)
    cut_solve_count: int = 0

    def __len__(self) -> int:
        return len(self.breakpoints)

    def hull_points(self) -> list[tuple[int, int]]:
        """(budget, benefit) vertices; segment k has slope = breakpoint k's λ."""
        pts = [bp.point for bp in self.breakpoints]
        if self.sense == CONCAVE_MAX:
            return pts + [self.anchor_point]
        return [self.anchor_point] + pts


def leftmost_breakpoint(env: Envelope) -> Breakpoint:
    """The breakpoint with the smallest budget: the optimal-ratio solution.

    Its λ equals the best ratio achievable, provided the sweep interval
    covered it (largest λ for maximization, smallest for minimization).
    """
    if not env.breakpoints:
        raise ValidationError("envelope has no breakpoints")
    if env.sense == CONCAVE_MAX:
        return env.breakpoints[-1]
    return env.breakpoints[0]


# -- warm-started sequences ---------------------------------------------------


def simple_parametric(
    net: ParametricNetwork, lambdas, kind: str = MAXIMAL
) -> list[CutSolution]:
    """Min-cuts for a strictly ascending list of rational λ values.

    All instantiations share one common denominator so a single retained
    solver state sweeps the whole list; source sets come out nested.
    """
    lams = [Fraction(x) for x in lambdas]
    if not lams:
        return []
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise ContractViolationError("lambda list must be strictly ascending")
    common = lcm(*[x.denominator for x in lams]) if len(lams) > 1 else lams[0].denominator
    out = []
    state = None
    for lam in lams:
        inst = InstantiatedNetwork(net, lam, common // lam.denominator)
        if state is None:
            sol, state = solve_mincut(inst, sweep="up", kind=kind)
        else:
            state.update(inst)
            sol = state.solution(kind)
        out.append(sol)
    return out


# -- full envelope ------------------------------------------------------------


class _LineProbe:
    """Exact reduced-cut lines h_S(λ) via evaluation at two fixed rationals."""

    def __init__(self, net: ParametricNetwork, lam_a: Fraction, lam_b: Fraction):
        self.net = net
        self.lam_a = lam_a
        self.lam_b = lam_b
        self.inst_a = InstantiatedNetwork(net, lam_a)
        self.inst_b = InstantiatedNetwork(net, lam_b)

    def reduced(self, inst: InstantiatedNetwork, subset: NodeSubset) -> Fraction:
        return Fraction(
            inst.cut_value(subset) - inst.total_source_capacity, inst.scale
        )

    def line(self, subset: NodeSubset) -> tuple[Fraction, Fraction]:
        """(slope, intercept) of h_S; exact for any λ since h_S is affine."""
        ya = self.reduced(self.inst_a, subset)
        yb = self.reduced(self.inst_b, subset)
        slope = (yb - ya) / (self.lam_b - self.lam_a)
        return slope, ya - slope * self.lam_a


def _cold(net, lam):
    inst = InstantiatedNetwork(net, Fraction(lam))
    state = SolverState(inst, sweep="up")
    reduced = Fraction(
        state.cut_value(inst.scale) - inst.total_source_capacity, inst.scale
    )
    return state, reduced


def fully_parametric(
    net: ParametricNetwork,
    lam_lo,
    lam_hi,
    precision: Fraction = Fraction(1, 10**4),
) -> Envelope:
    """Every breakpoint in (λ_lo, λ_hi] with its source set, exactly.

    Recursive bisection: solve both ends, intersect the two reduced-cut
    lines, solve at the intersection; if the optimum there is strictly below
    both lines recurse on each half, otherwise the intersection is the only
    breakpoint in the span.  Midpoint solves are cold; intersections are
    exact rationals.  Intervals narrower than ``precision`` are not split
    further (near-coincident breakpoints merge into one).
    """
    lam_lo = Fraction(lam_lo)
    lam_hi = Fraction(lam_hi)
    if not lam_lo < lam_hi:
        raise ValidationError("need lam_lo < lam_hi")
    shrink = net.direction == SOURCE_DECREASING
    sense = CONCAVE_MAX if shrink else CONVEX_MIN
    probe = _LineProbe(net, lam_lo, lam_hi)
    solves = [0]

    def reps(lam):
        """(just-left set, just-right set, reduced optimum) at λ."""
        state, reduced = _cold(net, lam)
        solves[0] += 1
        big = state.source_set(MAXIMAL)
        small = state.source_set(MINIMAL)
        left, right = (big, small) if shrink else (small, big)
        return left, right, reduced

    breakpoints: list[Breakpoint] = []

    def hull_coords(subset):
        """Integer (budget, benefit) of a set, recovered from its exact line."""
        slope, intercept = probe.line(subset)
        budget, benefit = (slope, -intercept) if shrink else (-slope, intercept)
        if budget.denominator != 1 or benefit.denominator != 1:
            raise AssertionError("reduced-cut line is not integral")
        return int(budget), int(benefit)

    def record(lam, left_set, right_set):
        keeper = left_set if shrink else right_set
        budget, benefit = hull_coords(keeper)
        breakpoints.append(Breakpoint(lam, keeper, budget, benefit))

    def find(a, line_a, b, line_b):
        if line_a == line_b:
            return
        slope_a, int_a = line_a
        slope_b, int_b = line_b
        if slope_a == slope_b:  # distinct parallel lines never both touch Z
            return
        lam_star = (int_b - int_a) / (slope_a - slope_b)
        if not a < lam_star <= b:
            raise AssertionError("line intersection escaped the search interval")
        cross = slope_a * lam_star + int_a
        left, right, reduced = reps(lam_star)
        if reduced == cross or (b - a) < precision:
            record(lam_star, left, right)
            return
        line_left = probe.line(left)
        line_right = probe.line(right)
        if line_left != line_right:
            # the probe λ* is itself a breakpoint (the recursions on either
            # side both exclude it)
            record(lam_star, left, right)
        find(a, line_a, lam_star, line_left)
        find(lam_star, line_right, b, line_b)

    # seed both ends with the just-right-of-λ representative so a set change
    # at exactly λ_hi is reported and one at exactly λ_lo is not
    _, right_lo, _ = reps(lam_lo)
    _, right_hi, _ = reps(lam_hi)
    find(lam_lo, probe.line(right_lo), lam_hi, probe.line(right_hi))
    breakpoints.sort(key=lambda bp: bp.lam)

    # the hull closes with the set active beyond the extreme breakpoint
    anchor = hull_coords(right_hi if shrink else right_lo)
    env = Envelope(breakpoints, sense, anchor)
    env.cut_solve_count = solves[0]
    return env


def write_envelope_csv(env: Envelope, stream, precision: int = 4) -> None:
    """One row per breakpoint: decimal λ at the given precision, hull data,
    and the exact rational λ."""
    writer = csv.writer(stream)
    writer.writerow(["lambda", "budget", "benefit", "set_size", "lambda_exact"])
    for bp in env.breakpoints:
        writer.writerow(
            [
                f"{float(bp.lam):.{precision}f}",
                bp.budget,
                bp.benefit,
                bp.set_size,
                f"{bp.lam.numerator}/{bp.lam.denominator}",
            ]
        )
