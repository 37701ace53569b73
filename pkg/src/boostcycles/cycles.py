"""Limit-cycle detection on boosting traces and the structural identities that
hold on them: the four-term edge decomposition, the simplified edge update
under the periodic learning condition, subsum values, per-weight contribution
shares, Farey-word matching, and the window-agreement property.

Iteration indexing follows the engine: the transition "into" step t uses the
weights and dichotomy of step t-1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .engine import BoostTrace
from .farey import FareyWord, inv_L, inv_R
from .simplex import (
    MistakeDichotomy,
    MistakeLattice,
    Scalar,
    WeightVector,
    check_periodic_learning,
    is_exact,
)


class PeriodicLearningRequired(ValueError):
    """The step misclassifies some point twice in a row (J- is nonempty)."""


class DegenerateGroup(ValueError):
    """A contribution group is empty or carries zero mass."""


@dataclass(frozen=True)
class IndexPartition:
    """Indices split by correctness at the current and previous iteration.

    i_plus: correct now, correct before.     i_minus: correct now, wrong before.
    j_plus: wrong now, correct before.       j_minus: wrong at both.
    j_minus is empty exactly when the periodic learning condition holds
    across this pair of iterations.
    """

    i_plus: frozenset
    i_minus: frozenset
    j_plus: frozenset
    j_minus: frozenset

    @property
    def periodic_learning_holds(self) -> bool:
        return not self.j_minus


def partition(eta_prev: MistakeDichotomy, eta_cur: MistakeDichotomy) -> IndexPartition:
    if len(eta_prev) != len(eta_cur):
        raise ValueError("dichotomy length mismatch")
    groups: Dict[Tuple[int, int], List[int]] = {
        (1, 1): [], (-1, 1): [], (1, -1): [], (-1, -1): []
    }
    for i, (p, c) in enumerate(zip(eta_prev, eta_cur)):
        groups[(p, c)].append(i)
    return IndexPartition(
        i_plus=frozenset(groups[(1, 1)]),
        i_minus=frozenset(groups[(-1, 1)]),
        j_plus=frozenset(groups[(1, -1)]),
        j_minus=frozenset(groups[(-1, -1)]),
    )


def _check_partition_covers(part: IndexPartition, eta_cur: MistakeDichotomy) -> None:
    correct = part.i_plus | part.i_minus
    wrong = part.j_plus | part.j_minus
    for i, e in enumerate(eta_cur):
        if (e == 1) != (i in correct) or (e == -1) != (i in wrong):
            raise ValueError(f"partition inconsistent with current dichotomy at index {i}")


def four_term_edge(
    w_prev: WeightVector,
    r_prev: Scalar,
    part: IndexPartition,
    eta_cur: MistakeDichotomy,
) -> Scalar:
    """The current edge written over the previous weights and edge:

        sum_{I+} w/(1+r) - sum_{J+} w/(1+r) + sum_{I-} w/(1-r) - sum_{J-} w/(1-r)

    Equals the plain dot-product edge of the updated weights against eta_cur,
    exactly so in rational mode.
    """
    _check_partition_covers(part, eta_cur)
    shrink = 1 + r_prev
    grow = 1 - r_prev
    return (
        sum(w_prev[i] for i in part.i_plus) / shrink
        - sum(w_prev[j] for j in part.j_plus) / shrink
        + sum(w_prev[i] for i in part.i_minus) / grow
        - sum(w_prev[j] for j in part.j_minus) / grow
    )


@dataclass(frozen=True)
class EdgeUpdateReport:
    """Per-iteration comparison of the simplified edge update against truth.

    matches is true exactly when no point was misclassified twice in a
    row entering this iteration; the gap is 2 * sum_{J-} w_prev/(1-r_prev),
    strictly positive whenever J- is nonempty.
    """

    t: int
    j_minus_empty: bool
    simplified_edge: Scalar
    actual_edge: Scalar
    matches: bool


def check_edge_update(trace: BoostTrace, tol: float = 1e-12) -> List[EdgeUpdateReport]:
    """Evaluate r_t = (1 + r_prev - 2*sum_{J+} w_prev) / (1 + r_prev) at every
    iteration t >= 1 and report where it reproduces the true edge.

    Exact traces compare with equality; float traces within tol.
    """
    if len(trace) < 2:
        raise ValueError("need at least 2 steps")
    reports = []
    for t in range(1, len(trace)):
        prev_step = trace.steps[t - 1]
        cur_step = trace.steps[t]
        w_prev = trace.weights_before(t - 1)
        r_prev = prev_step.edge
        part = partition(prev_step.eta, cur_step.eta)
        simplified = (1 + r_prev - 2 * sum(w_prev[j] for j in part.j_plus)) / (1 + r_prev)
        if trace.mode == "exact":
            matches = simplified == cur_step.edge
        else:
            matches = abs(simplified - cur_step.edge) <= tol
        reports.append(
            EdgeUpdateReport(t, part.periodic_learning_holds, simplified, cur_step.edge, matches)
        )
    return reports


@dataclass(frozen=True)
class SubsumReport:
    """The three scaled subsums of the edge under the periodic learning
    condition, plus the edge they produce: i_plus = r/2, i_minus = 1/2,
    j_plus = (1-r)/2."""

    i_plus: Scalar
    i_minus: Scalar
    j_plus: Scalar
    edge: Scalar


def subsums(w_prev: WeightVector, r_prev: Scalar, part: IndexPartition) -> SubsumReport:
    """Compute the three-term decomposition of the edge for a step where no
    point is misclassified twice in a row.

    In rational mode the identities i_minus == 1/2 and i_plus + j_plus == 1/2
    (equivalently sum_{I-} w_prev == (1 - r_prev)/2) are verified; failure
    means r_prev is not the true edge of the previous dichotomy on w_prev.
    """
    if part.j_minus:
        raise PeriodicLearningRequired("J- must be empty for the three-term form")
    shrink = 1 + r_prev
    grow = 1 - r_prev
    a = sum(w_prev[i] for i in part.i_plus) / shrink
    b = sum(w_prev[i] for i in part.i_minus) / grow
    c = sum(w_prev[j] for j in part.j_plus) / shrink
    edge = a - c + b
    if is_exact(w_prev.components) and isinstance(r_prev, (int, Fraction)):
        half = Fraction(1, 2)
        if b != half or a + c != half:
            raise ValueError(
                "subsums inconsistent: r_prev is not the edge of the previous "
                "dichotomy on these weights"
            )
    return SubsumReport(a, b, c, edge)


@dataclass(frozen=True)
class ContributionVector:
    """Per-index rational shares of the three subsum groups; each group's
    shares sum to 1. In float mode shares are reconstructed as rationals
    (denominator-capped); indices that resist reconstruction are listed in
    failures with their raw float share."""

    i_plus: Dict[int, Fraction]
    i_minus: Dict[int, Fraction]
    j_plus: Dict[int, Fraction]
    failures: Tuple[Tuple[int, float], ...] = ()


def contributions(
    w_prev: WeightVector,
    r_prev: Scalar,
    part: IndexPartition,
    rationalize_cap: int = 10**6,
    rationalize_tol: float = 1e-9,
) -> ContributionVector:
    """Each weight's share of its subsum group, after the update into the
    current iteration: share_i = w_i,t / (group total).

    Group totals are r_t/2, 1/2 and (1-r_t)/2 for I+, I-, J+, so the updated
    weight factors as share * group total.
    """
    if part.j_minus:
        raise PeriodicLearningRequired("J- must be empty for contribution shares")
    shrink = 1 + r_prev
    grow = 1 - r_prev
    exact = is_exact(w_prev.components) and isinstance(r_prev, (int, Fraction))

    groups = {}
    failures = []
    for name, members, factor in (
        ("i_plus", part.i_plus, shrink),
        ("i_minus", part.i_minus, grow),
        ("j_plus", part.j_plus, shrink),
    ):
        updated = {i: w_prev[i] / factor for i in sorted(members)}
        total = sum(updated.values())
        if not updated or total == 0:
            raise DegenerateGroup(f"group {name} is empty or carries no mass")
        shares = {}
        for i, v in updated.items():
            share = v / total
            if exact:
                shares[i] = share
            else:
                frac = Fraction(share).limit_denominator(rationalize_cap)
                if abs(float(frac) - share) <= rationalize_tol:
                    shares[i] = frac
                else:
                    failures.append((i, share))
        groups[name] = shares
    if exact:
        for shares in groups.values():
            assert sum(shares.values()) == 1
    return ContributionVector(
        groups["i_plus"], groups["i_minus"], groups["j_plus"], tuple(failures)
    )


@dataclass(frozen=True)
class CycleReport:
    """A detected limit cycle.

    period is the primitive period of the full state (weights and edges
    together); edge_period divides it and is the primitive period of the
    edge sequence alone. phase is the first iteration from which deviations
    stay below tol. edge_values and weight_cycle are taken from the final
    period of the trace, in iteration order.
    """

    period: int
    edge_period: int
    phase: int
    edge_values: Tuple[Scalar, ...]
    weight_cycle: Tuple[WeightVector, ...]
    periodic_violation: Optional[Tuple[int, int]]
    residual: float
    tol: float
    edges_distinct: bool
    farey_word: Optional[FareyWord] = None

    @property
    def periodic_learning_holds(self) -> bool:
        return self.periodic_violation is None


def _state_distance(
    edges: Sequence[Scalar], weights: Sequence[WeightVector], s: int, t: int
) -> float:
    d = abs(float(edges[s]) - float(edges[t]))
    for a, b in zip(weights[s], weights[t]):
        d = max(d, abs(float(a) - float(b)))
    return d


def _window_periodic(
    edges: Sequence[Scalar],
    weights: Sequence[WeightVector],
    k: int,
    start: int,
    end: int,
    tol: float,
) -> Optional[float]:
    """Max deviation between states k apart over [start, end-k), or None if
    any pair exceeds tol."""
    worst = 0.0
    for t in range(start, end - k):
        d = _state_distance(edges, weights, t, t + k)
        if d > tol:
            return None
        worst = max(worst, d)
    return worst


def _prime_factors(n: int) -> List[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def detect_cycle(
    trace: BoostTrace,
    tol: float = 1e-9,
    min_repeats: int = 3,
    burn_in: Optional[int] = None,
) -> Optional[CycleReport]:
    """Find the smallest period k such that edges and weight vectors repeat
    within tol over min_repeats consecutive trailing periods.

    Candidate periods come from quantized-state collisions with the final
    state (plus a direct scan of small periods), then each candidate is
    verified by a tolerance sweep and reduced to its primitive period.
    Returns None when nothing qualifies.
    """
    n_steps = len(trace)
    if min_repeats < 2:
        raise ValueError("min_repeats must be at least 2")
    if burn_in is None:
        burn_in = n_steps // 2
    k_max = (n_steps - burn_in) // min_repeats
    if k_max < 1:
        return None

    edges = [s.edge for s in trace.steps]
    weights = [s.weights_after for s in trace.steps]

    def verified(k: int) -> Optional[float]:
        return _window_periodic(edges, weights, k, n_steps - min_repeats * k, n_steps, tol)

    candidates = set(range(1, min(k_max, 64) + 1))
    if trace.mode == "float":
        quantum = tol / 10
        last_key = tuple(round(float(v) / quantum) for v in (edges[-1], *weights[-1]))
        for t in range(n_steps - 2, burn_in - 1, -1):
            key = tuple(round(float(v) / quantum) for v in (edges[t], *weights[t]))
            if key == last_key:
                candidates.add(n_steps - 1 - t)
    else:
        last = (edges[-1], weights[-1].components)
        for t in range(n_steps - 2, burn_in - 1, -1):
            if (edges[t], weights[t].components) == last:
                candidates.add(n_steps - 1 - t)

    period = None
    residual = 0.0
    for k in sorted(c for c in candidates if c <= k_max):
        res = verified(k)
        if res is not None:
            period, residual = k, res
            break
    if period is None:
        return None

    # collapse to the primitive period if a proper divisor also verifies
    reduced = True
    while reduced:
        reduced = False
        for f in _prime_factors(period):
            res = verified(period // f)
            if res is not None:
                period, residual = period // f, res
                reduced = True
                break

    phase = n_steps - min_repeats * period
    while phase > 0 and _state_distance(edges, weights, phase - 1, phase - 1 + period) <= tol:
        phase -= 1

    edge_period = period
    for e in sorted(d for d in range(1, period) if period % d == 0):
        ok = all(
            abs(float(edges[t]) - float(edges[t + e])) <= tol
            for t in range(n_steps - min_repeats * period, n_steps - e)
        )
        if ok:
            edge_period = e
            break

    edge_values = tuple(edges[n_steps - edge_period:])
    weight_cycle = tuple(weights[n_steps - period:])
    window_lattice = MistakeLattice(tuple(s.eta for s in trace.steps[phase:]))
    violation = check_periodic_learning(window_lattice) if len(window_lattice) >= 2 else None
    if violation is not None:
        violation = (violation[0], violation[1] + phase)
    distinct = all(
        abs(float(edge_values[i]) - float(edge_values[j])) > tol
        for i in range(edge_period)
        for j in range(i + 1, edge_period)
    )
    return CycleReport(
        period=period,
        edge_period=edge_period,
        phase=phase,
        edge_values=edge_values,
        weight_cycle=weight_cycle,
        periodic_violation=violation,
        residual=residual,
        tol=tol,
        edges_distinct=distinct,
    )


def match_farey(report: CycleReport, tol: Optional[float] = None) -> Optional[FareyWord]:
    """Classify each consecutive edge pair of the cycle as an application of
    the left or right inverse branch; returns the word when every step
    classifies, None otherwise.

    The word maps value i to value i+1 (cyclically), so replaying it from
    the first edge value reproduces the cycle.
    """
    if tol is None:
        tol = report.tol
    values = [float(v) for v in report.edge_values]
    letters = []
    k = len(values)
    for i in range(k):
        cur, nxt = values[i], values[(i + 1) % k]
        if abs(nxt - float(inv_R(cur))) <= tol:
            letters.append("R")
        elif abs(nxt - float(inv_L(cur))) <= tol:
            letters.append("L")
        else:
            return None
    return FareyWord(tuple(letters))


def attach_farey(report: CycleReport, tol: Optional[float] = None) -> CycleReport:
    """Return the report with its matched Farey word filled in (if any)."""
    return replace(report, farey_word=match_farey(report, tol))


@dataclass(frozen=True)
class AgreementReport:
    """Outcome of the window-agreement check.

    status is one of "agree_everywhere", "disagreement" (a counterexample to
    the cycling-determinism property) or "precondition_failed" (the inputs
    do not satisfy the property's hypotheses); reason and offset locate the
    finding.
    """

    status: str
    reason: Optional[str] = None
    offset: Optional[int] = None


def _weights_close(a: WeightVector, b: WeightVector, tol: float) -> bool:
    if len(a) != len(b):
        return False
    return all(abs(float(x) - float(y)) <= tol for x, y in zip(a, b))


def aligned_weight_distance(a: WeightVector, b: WeightVector) -> float:
    """Max componentwise gap after the best permutation alignment.

    Cycles can permute which point carries which weight value, so comparing
    a detected weight cycle against a reference set goes through sorted
    components (the optimal alignment for scalar multisets).
    """
    if len(a) != len(b):
        raise ValueError("weight vectors must have equal length")
    xs = sorted(float(v) for v in a)
    ys = sorted(float(v) for v in b)
    return max(abs(x - y) for x, y in zip(xs, ys))


def lattice_agreement(
    trace_a: BoostTrace,
    trace_b: BoostTrace,
    window_a: Tuple[int, int],
    window_b: Tuple[int, int],
    q: int,
    tol: float = 1e-9,
) -> AgreementReport:
    """Check that two cycling trace windows agreeing at one iteration agree
    at every iteration, forward and backward.

    window_a and window_b are (start, length) in iteration indices; q is a
    common offset into both windows where weights and dichotomy must agree.
    Precondition failures (windows out of range, traces not cycling on the
    same edge values, periodic learning condition broken, or no agreement
    at q) are reported distinctly from genuine disagreements.
    """
    start_a, length = window_a
    start_b, length_b = window_b
    if length != length_b or length < 2:
        return AgreementReport("precondition_failed", "windows must have equal length >= 2")
    if not (0 <= start_a and start_a + length <= len(trace_a)):
        return AgreementReport("precondition_failed", "window out of range for first trace")
    if not (0 <= start_b and start_b + length <= len(trace_b)):
        return AgreementReport("precondition_failed", "window out of range for second trace")
    if not 0 <= q < length:
        return AgreementReport("precondition_failed", "q outside the windows")

    rep_a = detect_cycle(trace_a, tol=tol)
    rep_b = detect_cycle(trace_b, tol=tol)
    if rep_a is None or rep_b is None:
        return AgreementReport("precondition_failed", "both traces must cycle")
    if rep_a.edge_period != rep_b.edge_period or not all(
        any(abs(float(x) - float(y)) <= 2 * tol for y in rep_b.edge_values)
        for x in rep_a.edge_values
    ):
        return AgreementReport("precondition_failed", "edge cycles differ")

    for trace, start in ((trace_a, start_a), (trace_b, start_b)):
        cols = tuple(s.eta for s in trace.steps[start : start + length])
        if check_periodic_learning(MistakeLattice(cols)) is not None:
            return AgreementReport(
                "precondition_failed", "periodic learning condition fails on a window"
            )

    def state(trace: BoostTrace, t: int) -> Tuple[MistakeDichotomy, WeightVector]:
        return trace.steps[t].eta, trace.weights_before(t)

    eta_qa, w_qa = state(trace_a, start_a + q)
    eta_qb, w_qb = state(trace_b, start_b + q)
    if eta_qa != eta_qb or not _weights_close(w_qa, w_qb, tol):
        return AgreementReport("precondition_failed", "windows do not agree at q")

    for offset in list(range(q, length)) + list(range(q - 1, -1, -1)):
        eta_a, w_a = state(trace_a, start_a + offset)
        eta_b, w_b = state(trace_b, start_b + offset)
        if eta_a != eta_b:
            return AgreementReport("disagreement", "mistake dichotomies differ", offset)
        if not _weights_close(w_a, w_b, tol):
            return AgreementReport("disagreement", "weights differ beyond tolerance", offset)
    return AgreementReport("agree_everywhere")
