"""The iterative boosting map: selection, weight update, trace recording.

The primary update is the rational form w_i -> w_i / (1 + eta_i * r), which is
self-normalizing: when r is the true edge of eta on w, the output sums to 1
with no renormalization. The exponential form w_i * exp(-eta_i * alpha) / Z
is kept as an independent oracle for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from .simplex import (
    DimensionMismatch,
    HypothesisPool,
    MistakeDichotomy,
    MistakeLattice,
    Scalar,
    WeightVector,
    edge_dot,
    is_exact,
    uniform_weights,
)


class WeakLearningFailure(RuntimeError):
    """No available dichotomy has a positive edge."""


class PerfectClassification(RuntimeError):
    """Edge reached 1; the rational update divides by zero at 1 - r."""


@dataclass(frozen=True)
class Optimal:
    """Pick the row maximizing the edge; ties break to the lowest index."""


@dataclass(frozen=True)
class FirstAbove:
    """Deliberately sub-optimal selection: scan the edges in increasing order
    and pick the first at or above theta (ties break to the lowest row index).

    Falls back to Optimal when nothing qualifies, so a selection is always
    made as long as some edge is positive. The at-or-above comparison matters:
    the trajectory that settles on the sqrt(2) two-cycle passes through an
    edge exactly equal to the 2/5 threshold.
    """

    theta: Scalar

    def __post_init__(self) -> None:
        if not 0 < self.theta < 1:
            raise ValueError("threshold must lie in (0, 1)")


@dataclass(frozen=True)
class FixedSequence:
    """Replay a scheduled row sequence, repeating it cyclically past its end."""

    rows: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("empty row schedule")


SelectionRule = Union[Optimal, FirstAbove, FixedSequence]


def select(
    w: WeightVector, pool: HypothesisPool, rule: SelectionRule, t: int = 0
) -> Tuple[int, MistakeDichotomy, Scalar]:
    """Choose a dichotomy from the pool; returns (row index, dichotomy, edge).

    The iteration index t only matters for FixedSequence schedules.
    Raises WeakLearningFailure when Optimal (or the FirstAbove fallback)
    finds no positive edge.
    """
    if isinstance(rule, FixedSequence):
        row = rule.rows[t % len(rule.rows)]
        if not 0 <= row < len(pool):
            raise IndexError(f"scheduled row {row} outside pool of {len(pool)} rows")
        return row, pool[row], edge_dot(w, pool[row])

    edges = [edge_dot(w, eta) for eta in pool.rows]

    if isinstance(rule, FirstAbove):
        qualifying = [(r, row) for row, r in enumerate(edges) if r >= rule.theta]
        if qualifying:
            r, row = min(qualifying)
            return row, pool[row], r
        # nothing at the threshold: fall back to the optimal choice

    best = max(range(len(edges)), key=lambda i: (edges[i], -i))
    if edges[best] <= 0:
        raise WeakLearningFailure("all available edges are <= 0")
    return best, pool[best], edges[best]


def alpha(r: Scalar) -> float:
    """The hypothesis coefficient 0.5 * ln((1+r)/(1-r)), increasing on (0,1).

    Always a float: the value is transcendental in r, so it is never part of
    the exact-mode weight arithmetic.
    """
    if not 0 < r < 1:
        raise ValueError(f"edge {r!r} outside (0, 1)")
    return 0.5 * math.log((1 + float(r)) / (1 - float(r)))


def weight_update(w: WeightVector, eta: MistakeDichotomy, r: Scalar) -> WeightVector:
    """Rational update w_i -> w_i / (1 + eta_i * r).

    Correct points shrink by 1/(1+r), misclassified ones grow by 1/(1-r).
    Requires 0 < r < 1 and r equal to the edge of eta on w; under that
    consistency the output sums to 1 identically.
    """
    if len(w) != len(eta):
        raise DimensionMismatch("weight/dichotomy length mismatch")
    if r >= 1:
        raise PerfectClassification("edge reached 1; rational update undefined")
    if r <= 0:
        raise ValueError(f"invalid edge {r!r}: must be positive")
    new = tuple(c / (1 + e * r) for c, e in zip(w, eta))
    if not is_exact(new):
        total = sum(new)
        new = tuple(c / total for c in new)
    return WeightVector(new)


def exponential_update(w: WeightVector, eta: MistakeDichotomy, a: float) -> WeightVector:
    """Oracle form w_i -> w_i * exp(-eta_i * a) / Z with Z the normalizer.

    Computed in floats regardless of input mode; a = alpha(r) reproduces
    weight_update to floating-point accuracy.
    """
    if len(w) != len(eta):
        raise DimensionMismatch("weight/dichotomy length mismatch")
    if a < 0:
        raise ValueError("alpha must be nonnegative")
    scaled = [float(c) * math.exp(-e * a) for c, e in zip(w, eta)]
    z = sum(scaled)
    return WeightVector(tuple(s / z for s in scaled))


@dataclass(frozen=True)
class BoostStep:
    """One iteration: chosen row, its dichotomy, edge, alpha, resulting weights."""

    t: int
    row: int
    eta: MistakeDichotomy
    edge: Scalar
    alpha: float
    weights_after: WeightVector


@dataclass(frozen=True)
class BoostTrace:
    """Full record of a run. halt is None, or the reason the loop ended early."""

    mode: str
    pool: HypothesisPool
    rule: SelectionRule
    initial_weights: WeightVector
    steps: Tuple[BoostStep, ...]
    halt: Optional[str] = None

    def __len__(self) -> int:
        return len(self.steps)

    def edges(self) -> Tuple[Scalar, ...]:
        return tuple(s.edge for s in self.steps)

    def weights_before(self, t: int) -> WeightVector:
        """The weight vector the selection at iteration t saw."""
        return self.initial_weights if t == 0 else self.steps[t - 1].weights_after

    def lattice(self) -> MistakeLattice:
        if not self.steps:
            raise ValueError("empty trace has no lattice")
        return MistakeLattice(tuple(s.eta for s in self.steps))


def run(pool: HypothesisPool, rule: SelectionRule, t_max: int, mode: str = "exact") -> BoostTrace:
    """Run the boosting loop for t_max iterations from uniform weights.

    Deterministic: identical inputs give bit-identical traces. Halts early
    (recording the reason) if no positive edge exists or an edge reaches 1.
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    w = uniform_weights(pool.n_points, mode)
    initial = w
    steps = []
    halt = None
    for t in range(t_max):
        try:
            row, eta, r = select(w, pool, rule, t)
        except WeakLearningFailure:
            halt = "weak_learning_failure"
            break
        if r <= 0:
            halt = "weak_learning_failure"
            break
        if r >= 1:
            halt = "perfect_classification"
            break
        a = alpha(r)
        w = weight_update(w, eta, r)
        steps.append(BoostStep(t, row, eta, r, a, w))
    return BoostTrace(mode, pool, rule, initial, tuple(steps), halt)


@dataclass(frozen=True)
class StrongClassification:
    """Signs of the combined classifier; exact-zero margins flagged as ties."""

    labels: Tuple[int, ...]
    ties: Tuple[bool, ...]
    margins: Tuple[float, ...]


def strong_classify(
    trace: BoostTrace, pool_predictions: Optional[Sequence[Sequence[float]]] = None
) -> StrongClassification:
    """Sign of sum_t alpha_t * h_t(x_i) per point.

    pool_predictions[row][i] gives h(x_i) for each pool row; by default the
    pool's own dichotomy entries are used (the all-correct-labels convention
    for synthetic pools, where eta and h coincide). Zero margins are reported
    as +1 with the tie flag set.
    """
    if not trace.steps:
        raise ValueError("empty trace")
    n = trace.pool.n_points
    if pool_predictions is None:
        pool_predictions = [row.entries for row in trace.pool.rows]
    margins = [0.0] * n
    for step in trace.steps:
        preds = pool_predictions[step.row]
        for i in range(n):
            margins[i] += step.alpha * preds[i]
    labels = tuple(1 if m >= 0 else -1 for m in margins)
    ties = tuple(m == 0 for m in margins)
    return StrongClassification(labels, ties, tuple(margins))
