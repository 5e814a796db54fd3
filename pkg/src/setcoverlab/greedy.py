"""Charged-weight greedy solver with a full per-iteration trace.

Each iteration charges every still-useful set the ratio weight / (count of
its not-yet-covered elements) and picks a minimizer.  The trace records the
chosen indices, the newly-covered counts s_k, the residual counts m_k, the
charged ratios and the accumulated cover weight: everything the bound
machinery needs, as exact rationals.

Residual sets are maintained incrementally (the chosen set is subtracted
from every other set each iteration); the trace stores counts only.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidTrace, NonPositiveWeight
from .instance import Instance, element_masks, validate

TIE_LOWEST_INDEX = "lowest-index"
TIE_MAX_RESIDUAL = "largest-residual-then-lowest-index"
TIE_POLICIES = (TIE_LOWEST_INDEX, TIE_MAX_RESIDUAL)


@dataclass(frozen=True)
class GreedyTrace:
    """Everything the greedy run did, in order.

    residuals has length l+1 and starts at m_0 = m; chosen, s and ratios
    all have length l.  total_weight is w(Gr).
    """

    chosen: tuple[int, ...]
    s: tuple[int, ...]
    residuals: tuple[int, ...]
    ratios: tuple[Fraction, ...]
    total_weight: Fraction
    tie: str = TIE_LOWEST_INDEX


def _pick(residual_counts, weights, tie):
    """Index minimizing weight/residual under the given tie policy."""
    best = None
    best_ratio = None
    for i, cnt in enumerate(residual_counts):
        if cnt == 0:
            continue
        ratio = Fraction(weights[i], cnt)
        if best is None or ratio < best_ratio:
            best, best_ratio = i, ratio
        elif ratio == best_ratio and tie == TIE_MAX_RESIDUAL:
            if cnt > residual_counts[best]:
                best = i
    return best, best_ratio


def greedy(instance: Instance, tie: str = TIE_LOWEST_INDEX) -> GreedyTrace:
    """Run the charged-weight greedy algorithm and record its trace.

    Requires strictly positive weights.  Ties in the charged ratio are
    resolved by the tie policy; the default (lowest original set index)
    makes every run deterministic and makes the sequence-class generator
    reproduce its sequence exactly.
    """
    if tie not in TIE_POLICIES:
        raise ValueError(f"unknown tie policy {tie!r}")
    validate(instance)
    weights = [entry.weight for entry in instance.sets]
    for i, w in enumerate(weights):
        if w <= 0:
            raise NonPositiveWeight(f"set {i} has non-positive weight {w}")

    masks = element_masks(instance)
    counts = [m.bit_count() for m in masks]
    uncovered = instance.m

    chosen: list[int] = []
    s: list[int] = []
    residuals = [instance.m]
    ratios: list[Fraction] = []
    total = Fraction(0)

    while uncovered > 0:
        k, ratio = _pick(counts, weights, tie)
        gained = counts[k]
        chosen.append(k)
        s.append(gained)
        uncovered -= gained
        residuals.append(uncovered)
        ratios.append(ratio)
        total += weights[k]
        sel = masks[k]
        for i in range(len(masks)):
            if masks[i] & sel:
                masks[i] &= ~sel
                counts[i] = masks[i].bit_count()

    return GreedyTrace(
        chosen=tuple(chosen),
        s=tuple(s),
        residuals=tuple(residuals),
        ratios=tuple(ratios),
        total_weight=total,
        tie=tie,
    )


def check_trace_shape(trace: GreedyTrace) -> None:
    """Raise InvalidTrace unless the structural trace invariants hold."""
    l = len(trace.chosen)
    if len(trace.s) != l or len(trace.ratios) != l or len(trace.residuals) != l + 1:
        raise InvalidTrace("trace field lengths disagree")
    if l == 0:
        raise InvalidTrace("empty trace")
    if len(set(trace.chosen)) != l:
        raise InvalidTrace("chosen set indices repeat")
    m = trace.residuals[0]
    for k, sk in enumerate(trace.s):
        if sk < 1:
            raise InvalidTrace(f"s_{k + 1} = {sk} < 1")
        if trace.residuals[k + 1] != trace.residuals[k] - sk:
            raise InvalidTrace("residual counts do not telescope")
    if trace.residuals[-1] != 0:
        raise InvalidTrace("trace does not end with an empty residual")
    if sum(trace.s) != m:
        raise InvalidTrace("covered counts do not sum to m")


def replay_diff(instance: Instance, trace: GreedyTrace) -> str | None:
    """Re-derive the greedy run step by step; describe the first divergence.

    Returns None when the trace is exactly what greedy(instance, trace.tie)
    would produce, including ratios and the accumulated weight.
    """
    try:
        check_trace_shape(trace)
    except InvalidTrace as exc:
        return f"malformed trace: {exc}"
    if trace.residuals[0] != instance.m:
        return f"trace starts at m={trace.residuals[0]}, instance has m={instance.m}"
    fresh = greedy(instance, tie=trace.tie)
    for k in range(max(len(fresh.chosen), len(trace.chosen))):
        if k >= len(trace.chosen) or k >= len(fresh.chosen):
            return f"iteration {k}: trace length differs"
        if trace.chosen[k] != fresh.chosen[k]:
            return (f"iteration {k}: trace chose set {trace.chosen[k]}, "
                    f"greedy chooses {fresh.chosen[k]}")
        if trace.s[k] != fresh.s[k]:
            return f"iteration {k}: s_k {trace.s[k]} != {fresh.s[k]}"
        if trace.ratios[k] != fresh.ratios[k]:
            return f"iteration {k}: ratio {trace.ratios[k]} != {fresh.ratios[k]}"
    if trace.total_weight != fresh.total_weight:
        return f"total weight {trace.total_weight} != {fresh.total_weight}"
    return None


def replay_check(instance: Instance, trace: GreedyTrace) -> bool:
    """True iff the trace replays exactly; see replay_diff for the report."""
    return replay_diff(instance, trace) is None


def trace_to_csv(trace: GreedyTrace) -> str:
    """One row per iteration: iter, set_index, s_k, m_k, ratio, cum_weight."""
    out = io.StringIO()
    out.write("iter,set_index,s_k,m_k,ratio,cumulative_weight\n")
    cum = Fraction(0)
    for k, idx in enumerate(trace.chosen):
        cum += trace.ratios[k] * trace.s[k]
        out.write(
            f"{k},{idx},{trace.s[k]},{trace.residuals[k + 1]},"
            f"{trace.ratios[k]},{cum}\n"
        )
    return out.getvalue()
