"""Exact optimal covers at desk scale.

Two engines: literal exhaustion over all 2^n subsets (bitmask DP, hard cap
n <= 25), and depth-first branch-and-bound that branches on the lowest
uncovered element, visits the sets containing it cheapest-first, and prunes
against the incumbent using the greedy trace bound rearranged into a lower
bound on the residual optimum, w(Gr_sub)/G(s_sub), optionally strengthened
by an LP relaxation bound.

Weight arithmetic inside both engines runs on integers (all weights scaled
by the common denominator), so comparisons stay exact and fast; results are
converted back to Fractions at the boundary.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonPositiveWeight, TooManySets, TooManySetsForExhaustive
from .greedy import greedy
from .instance import Cover, Instance, element_masks, validate

EXHAUSTIVE_CAP = 25
AUTO_EXHAUSTIVE_MAX_N = 18
DP_MAX_BITS = 20

METHOD_EXHAUSTIVE = "exhaustive"
METHOD_BNB = "branch-and-bound"
METHOD_AUTO = "auto"

STATUS_OPTIMAL = "proven-optimal"
STATUS_BUDGET = "budget-exceeded"


@dataclass(frozen=True)
class SolveBudget:
    node_limit: int = 10_000_000
    time_limit: float = 60.0
    method: str = METHOD_AUTO

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise ValueError("budget limits must be positive")
        if self.method not in (METHOD_EXHAUSTIVE, METHOD_BNB, METHOD_AUTO):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class NodeSample:
    """Audit record for one branch-and-bound node (test plumbing)."""

    covered_mask: int
    weight_so_far: Fraction
    greedy_bound: Fraction


@dataclass(frozen=True)
class ExactResult:
    cover: Cover
    weight: Fraction
    status: str
    nodes: int
    bound_stats: dict = field(default_factory=dict)
    node_samples: tuple[NodeSample, ...] = ()


def _scaled_weights(instance: Instance) -> tuple[list[int], int]:
    """Weights as integers over their common denominator."""
    denom = math.lcm(*(e.weight.denominator for e in instance.sets))
    return [int(e.weight * denom) for e in instance.sets], denom


def _dp_scan(masks, weights, full, lo_bits):
    """Best (weight, subset) over all subsets, via a lo/hi table product."""
    n = len(masks)
    lo_n = min(n, lo_bits)
    lo_union = [0] * (1 << lo_n)
    lo_weight = [0] * (1 << lo_n)
    for s in range(1, 1 << lo_n):
        low = s & -s
        rest = s ^ low
        i = low.bit_length() - 1
        lo_union[s] = lo_union[rest] | masks[i]
        lo_weight[s] = lo_weight[rest] + weights[i]
    hi_n = n - lo_n
    hi_union = [0] * (1 << hi_n)
    hi_weight = [0] * (1 << hi_n)
    for s in range(1, 1 << hi_n):
        low = s & -s
        rest = s ^ low
        i = low.bit_length() - 1 + lo_n
        hi_union[s] = hi_union[rest] | masks[i]
        hi_weight[s] = hi_weight[rest] + weights[i]
    best_w = None
    best_subset = 0
    for hi in range(1 << hi_n):
        hu = hi_union[hi]
        hw = hi_weight[hi]
        for lo in range(1 << lo_n):
            if hu | lo_union[lo] == full:
                w = hw + lo_weight[lo]
                if best_w is None or w < best_w:
                    best_w = w
                    best_subset = hi << lo_n | lo
    return best_w, best_subset


def _exhaustive(instance: Instance) -> tuple[Fraction, tuple[int, ...], int]:
    n = instance.n
    if n > EXHAUSTIVE_CAP:
        raise TooManySetsForExhaustive(
            f"exhaustive method enumerates 2^n subsets; n={n} > {EXHAUSTIVE_CAP}"
        )
    masks = element_masks(instance)
    weights, denom = _scaled_weights(instance)
    full = (1 << instance.m) - 1
    best_w, best_subset = _dp_scan(masks, weights, full, DP_MAX_BITS)
    indices = tuple(i for i in range(n) if best_subset >> i & 1)
    return Fraction(best_w, denom), indices, 1 << n


def _residual_greedy_bound(masks, weights, covered, full):
    """Exact lower bound w(Gr_sub)/G(s_sub) on the residual optimum (scaled).

    Runs the charged greedy on the residual sets; returns a Fraction in the
    scaled-weight unit, or 0 when nothing remains.
    """
    uncovered = full & ~covered
    if uncovered == 0:
        return Fraction(0)
    total = 0
    g = Fraction(0)
    remaining = uncovered.bit_count()
    residuals = [m & uncovered for m in masks]
    counts = [r.bit_count() for r in residuals]
    while remaining:
        best = None
        best_ratio = None
        for i, cnt in enumerate(counts):
            if cnt == 0:
                continue
            ratio = Fraction(weights[i], cnt)
            if best is None or ratio < best_ratio:
                best, best_ratio = i, ratio
        gained = counts[best]
        total += weights[best]
        g += Fraction(gained, remaining)
        remaining -= gained
        sel = residuals[best]
        for i in range(len(residuals)):
            if residuals[i] & sel:
                residuals[i] &= ~sel
                counts[i] = residuals[i].bit_count()
    return Fraction(total) / g


def _subinstance(instance: Instance, covered: int) -> Instance | None:
    """Residual instance on the uncovered elements (renumbered), or None."""
    full = (1 << instance.m) - 1
    uncovered = full & ~covered
    if uncovered == 0:
        return None
    renumber = {}
    for e in range(1, instance.m + 1):
        if uncovered >> (e - 1) & 1:
            renumber[e] = len(renumber) + 1
    sets = []
    for entry in instance.sets:
        els = tuple(renumber[e] for e in entry.elements if e in renumber)
        if els:
            sets.append((els, entry.weight))
    if not sets:
        return None
    from .instance import make_instance

    return make_instance(len(renumber), sets)


def _branch_and_bound(instance, budget, use_lp_bound, sample_nodes):
    from . import lp as lp_mod

    masks = element_masks(instance)
    weights, denom = _scaled_weights(instance)
    full = (1 << instance.m) - 1
    n = instance.n

    seed = greedy(instance)
    incumbent_w = sum(weights[i] for i in seed.chosen)
    incumbent = tuple(sorted(seed.chosen))

    by_element = []
    for e in range(instance.m):
        holders = [i for i in range(n) if masks[i] >> e & 1]
        holders.sort(key=lambda i: (weights[i], i))
        by_element.append(holders)

    stats = {"greedy_g": 0, "lp": 0}
    samples: list[NodeSample] = []
    nodes = 0
    hit_limit = False
    deadline = time.monotonic() + budget.time_limit
    stack: list[tuple[int, int, tuple[int, ...]]] = [(0, 0, ())]

    while stack:
        if nodes >= budget.node_limit:
            hit_limit = True
            break
        if nodes % 256 == 0 and time.monotonic() > deadline:
            hit_limit = True
            break
        covered, w_so_far, chosen = stack.pop()
        nodes += 1
        if covered == full:
            if w_so_far < incumbent_w:
                incumbent_w = w_so_far
                incumbent = tuple(sorted(chosen))
            continue
        g_bound = _residual_greedy_bound(masks, weights, covered, full)
        if len(samples) < sample_nodes:
            samples.append(NodeSample(
                covered_mask=covered,
                weight_so_far=Fraction(w_so_far, denom),
                greedy_bound=g_bound / denom,
            ))
        if w_so_far + g_bound >= incumbent_w:
            stats["greedy_g"] += 1
            continue
        if use_lp_bound:
            sub = _subinstance(instance, covered)
            if sub is not None:
                outcome = lp_mod.solve_lp(sub)
                if outcome.status == lp_mod.STATUS_OPTIMAL:
                    if outcome.exact_objective is not None:
                        lp_bound = outcome.exact_objective * denom
                    else:
                        slack = 10 * outcome.tol * (1 + abs(outcome.objective))
                        lp_bound = (outcome.objective - slack) * denom
                    if w_so_far + lp_bound >= incumbent_w:
                        stats["lp"] += 1
                        continue
        e = ((full & ~covered) & -(full & ~covered)).bit_length() - 1
        for i in reversed(by_element[e]):
            stack.append((covered | masks[i], w_so_far + weights[i], chosen + (i,)))

    status = STATUS_BUDGET if hit_limit else STATUS_OPTIMAL
    return (Fraction(incumbent_w, denom), incumbent, nodes, status, stats,
            tuple(samples))


def exact_opt(instance: Instance, budget: SolveBudget | None = None, *,
              use_lp_bound: bool = False, sample_nodes: int = 0) -> ExactResult:
    """Minimum-weight cover, proven optimal unless the budget runs out."""
    validate(instance)
    for i, entry in enumerate(instance.sets):
        if entry.weight <= 0:
            raise NonPositiveWeight(f"set {i} has non-positive weight")
    budget = budget or SolveBudget()
    method = budget.method
    if method == METHOD_AUTO:
        method = (METHOD_EXHAUSTIVE if instance.n <= AUTO_EXHAUSTIVE_MAX_N
                  else METHOD_BNB)
    if method == METHOD_EXHAUSTIVE:
        weight, indices, nodes = _exhaustive(instance)
        return ExactResult(
            cover=Cover(set_indices=indices, weight=weight),
            weight=weight, status=STATUS_OPTIMAL, nodes=nodes,
        )
    weight, indices, nodes, status, stats, samples = _branch_and_bound(
        instance, budget, use_lp_bound, sample_nodes
    )
    return ExactResult(
        cover=Cover(set_indices=indices, weight=weight),
        weight=weight, status=status, nodes=nodes,
        bound_stats=stats, node_samples=samples,
    )


def verify_cover_optimal(instance: Instance, cover: Cover) -> bool:
    """Exhaustively confirm no strictly cheaper cover exists.

    Deliberately naive and independent of exact_opt: every subset is
    re-unioned and re-weighed from scratch.
    """
    if instance.n > EXHAUSTIVE_CAP:
        raise TooManySets(f"verification needs n <= {EXHAUSTIVE_CAP}")
    masks = element_masks(instance)
    full = (1 << instance.m) - 1
    for subset in range(1, 1 << instance.n):
        union = 0
        w = Fraction(0)
        for i in range(instance.n):
            if subset >> i & 1:
                union |= masks[i]
                w += instance.sets[i].weight
        if union == full and w < cover.weight:
            return False
    return True


def result_to_kv(result: ExactResult) -> str:
    """Same flat key=value shape as the bound report."""
    lines = [
        f"weight={result.weight}",
        f"status={result.status}",
        f"nodes={result.nodes}",
        f"cover={' '.join(str(i) for i in result.cover.set_indices)}",
    ]
    for key, val in sorted(result.bound_stats.items()):
        lines.append(f"prunes_{key}={val}")
    return "\n".join(lines) + "\n"
