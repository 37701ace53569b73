"""Real-dataset pipeline: CSV ingestion, seeded sampling, weighted decision
trees, and dataset-driven boosting runs.

The tree learner is greedy: best-first growth, splitting on weighted
misclassification so that tree selection aligns with edge maximization.
Split scores are computed in floats even for exact-mode runs; only the
weight/edge arithmetic of the trace follows the numeric mode.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .engine import BoostStep, BoostTrace, Optimal, alpha, weight_update
from .simplex import (
    HypothesisPool,
    MistakeDichotomy,
    WeightVector,
    uniform_weights,
)


@dataclass(frozen=True)
class Dataset:
    """Numeric feature matrix with ±1 labels and loading provenance."""

    x: np.ndarray  # (n, m) float64
    y: Tuple[int, ...]
    feature_names: Tuple[str, ...]
    provenance: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.x.ndim != 2 or self.x.shape[0] != len(self.y):
            raise ValueError("feature matrix and labels disagree")
        if any(label not in (1, -1) for label in self.y):
            raise ValueError("labels must be +1 or -1")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def m(self) -> int:
        return self.x.shape[1]


def load_csv(path: str, label_column: str, positive: str) -> Dataset:
    """Load a comma-separated file with a header row.

    Rows whose feature cells fail numeric parsing are dropped (the count is
    recorded in provenance); a column that never parses is rejected outright.
    Labels become +1 when the label cell equals `positive`, else -1.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        rows = [row for row in reader if row]
    if label_column not in header:
        raise ValueError(f"{path}: no column named {label_column!r} in header")
    label_idx = header.index(label_column)
    feature_idx = [i for i in range(len(header)) if i != label_idx]
    if not feature_idx:
        raise ValueError(f"{path}: no feature columns besides the label")

    bad_by_column = {i: 0 for i in feature_idx}
    kept_x: List[List[float]] = []
    kept_y: List[int] = []
    dropped = 0
    for row in rows:
        if len(row) != len(header):
            dropped += 1
            continue
        feats = []
        ok = True
        for i in feature_idx:
            try:
                feats.append(float(row[i]))
            except ValueError:
                bad_by_column[i] += 1
                ok = False
        if not ok:
            dropped += 1
            continue
        kept_x.append(feats)
        kept_y.append(1 if row[label_idx].strip() == positive else -1)

    for i, bad in bad_by_column.items():
        if rows and bad == len(rows):
            raise ValueError(f"{path}: feature column {header[i]!r} is not numeric")
    if not kept_x:
        raise ValueError(f"{path}: no usable rows")
    if dropped:
        warnings.warn(f"{path}: dropped {dropped} rows with unusable cells", stacklevel=2)
    if len(set(kept_y)) < 2:
        raise ValueError(
            f"{path}: single-class dataset for positive={positive!r}; nothing to learn"
        )
    return Dataset(
        x=np.asarray(kept_x, dtype=np.float64),
        y=tuple(kept_y),
        feature_names=tuple(header[i] for i in feature_idx),
        provenance={
            "path": path,
            "label_column": label_column,
            "positive": positive,
            "dropped_rows": dropped,
            "n_rows": len(kept_x),
        },
    )


def sample(ds: Dataset, size: int, seed: int) -> Dataset:
    """Uniform sample without replacement, deterministic per seed (PCG64).

    Row order of the original dataset is preserved.
    """
    if size > ds.n:
        raise ValueError(f"sample size {size} exceeds dataset size {ds.n}")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(ds.n, size=size, replace=False))
    provenance = dict(ds.provenance)
    provenance.update({"sample_size": size, "seed": seed})
    return Dataset(
        x=ds.x[idx],
        y=tuple(ds.y[i] for i in idx),
        feature_names=ds.feature_names,
        provenance=provenance,
    )


@dataclass(frozen=True)
class TreeNode:
    """Internal split (feature, threshold, children) or a ±1 leaf."""

    label: Optional[int] = None
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.label is not None


@dataclass(frozen=True)
class TreeHypothesis:
    """A bounded binary decision tree over numeric features."""

    root: TreeNode
    depth: int
    n_leaves: int

    def predict(self, x: np.ndarray) -> np.ndarray:
        out = np.empty(x.shape[0], dtype=np.int64)

        def fill(node: TreeNode, mask: np.ndarray) -> None:
            if node.is_leaf:
                out[mask] = node.label
                return
            go_left = mask & (x[:, node.feature] <= node.threshold)
            fill(node.left, go_left)
            fill(node.right, mask & ~go_left)

        fill(self.root, np.ones(x.shape[0], dtype=bool))
        return out


def _best_split(
    x: np.ndarray, wy: np.ndarray, idx: np.ndarray
) -> Optional[Tuple[float, int, float]]:
    """Best (score gain, feature, threshold) for the points in idx.

    Score of a split is |sum wy left| + |sum wy right|; the gain is measured
    against the unsplit |sum wy|. Candidate thresholds are midpoints between
    consecutive distinct sorted values. Ties break to the lowest feature
    index, then the lowest threshold. Returns None when no cut exists.
    """
    node_wy = wy[idx]
    base = abs(float(node_wy.sum()))
    best = None
    for f in range(x.shape[1]):
        vals = x[idx, f]
        order = np.argsort(vals, kind="stable")
        v_sorted = vals[order]
        cuts = np.nonzero(v_sorted[:-1] < v_sorted[1:])[0]
        if cuts.size == 0:
            continue
        prefix = np.cumsum(node_wy[order])
        total = prefix[-1]
        scores = np.abs(prefix[cuts]) + np.abs(total - prefix[cuts])
        pbest = int(np.argmax(scores))  # first max: lowest threshold wins ties
        gain = float(scores[pbest]) - base
        if gain <= 0:
            continue
        p = int(cuts[pbest])
        threshold = float((v_sorted[p] + v_sorted[p + 1]) / 2.0)
        if best is None or gain > best[0]:  # strict: lowest feature wins ties
            best = (gain, f, threshold)
    return best


def train_tree(
    ds: Dataset,
    w: Union[WeightVector, Sequence[float]],
    max_depth: int,
    max_leaves: int,
) -> TreeHypothesis:
    """Grow a tree greedily, always applying the split with the largest
    weighted-accuracy gain, until the depth/leaf bounds bind or no split
    improves. Deterministic for identical inputs.

    The first split applied is exactly the best decision stump, so the
    returned tree never scores below it. If the finished tree somehow had a
    negative edge it would be sign-flipped, keeping the edge nonnegative.
    """
    if max_depth < 1 or max_leaves < 1:
        raise ValueError("tree bounds must be at least 1")
    weights = np.asarray(
        w.as_floats() if isinstance(w, WeightVector) else w, dtype=np.float64
    )
    if weights.shape[0] != ds.n:
        raise ValueError("weight vector does not match dataset size")
    y = np.asarray(ds.y, dtype=np.float64)
    wy = weights * y

    def leaf_label(idx: np.ndarray) -> int:
        s = wy[idx].sum()
        return 1 if s >= 0 else -1

    all_idx = np.arange(ds.n)
    splits: Dict[int, Tuple[int, float, int, int]] = {}  # leaf id -> (feature, thr, left id, right id)
    next_id = 1
    ids = {0: (0, all_idx)}  # leaf id -> (depth, members)

    while len(ids) < max_leaves:
        best_leaf = None
        best_split = None
        for leaf_id in sorted(ids):
            depth, idx = ids[leaf_id]
            if depth >= max_depth:
                continue
            found = _best_split(ds.x, wy, idx)
            if found is None:
                continue
            if best_split is None or found[0] > best_split[0]:
                best_leaf, best_split = leaf_id, found
        if best_leaf is None:
            break
        _, feature, threshold = best_split
        depth, idx = ids.pop(best_leaf)
        go_left = ds.x[idx, feature] <= threshold
        left_id, right_id = next_id, next_id + 1
        next_id += 2
        ids[left_id] = (depth + 1, idx[go_left])
        ids[right_id] = (depth + 1, idx[~go_left])
        splits[best_leaf] = (feature, threshold, left_id, right_id)

    def build(node_id: int, flip: int) -> TreeNode:
        if node_id in splits:
            feature, threshold, left_id, right_id = splits[node_id]
            return TreeNode(
                feature=feature,
                threshold=threshold,
                left=build(left_id, flip),
                right=build(right_id, flip),
            )
        return TreeNode(label=flip * leaf_label(ids[node_id][1]))

    def tree_depth(node_id: int) -> int:
        if node_id in splits:
            _, _, l, r = splits[node_id]
            return 1 + max(tree_depth(l), tree_depth(r))
        return 0

    tree = TreeHypothesis(build(0, 1), tree_depth(0), len(ids))
    raw_edge = float(np.dot(wy, tree.predict(ds.x)))
    if raw_edge < 0:
        tree = TreeHypothesis(build(0, -1), tree.depth, tree.n_leaves)
    return tree


def dichotomy_of(h: TreeHypothesis, ds: Dataset) -> MistakeDichotomy:
    """eta_i = y_i * h(x_i): +1 where the tree agrees with the label."""
    preds = h.predict(ds.x)
    return MistakeDichotomy(tuple(int(label * p) for label, p in zip(ds.y, preds)))


def run_on_dataset(
    ds: Dataset,
    max_depth: int,
    max_leaves: int,
    t_max: int,
    mode: str = "float",
) -> BoostTrace:
    """Boost over freshly trained trees: each iteration fits a tree to the
    current weights, converts it to a dichotomy, and applies the rational
    weight update.

    The trace's pool collects the distinct dichotomies encountered, so every
    analysis that works on synthetic-pool traces works here too. Halts with
    a recorded reason when the edge leaves (0, 1).
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    w = uniform_weights(ds.n, mode)
    initial = w
    row_of: Dict[Tuple[int, ...], int] = {}
    pool_rows: List[MistakeDichotomy] = []
    steps: List[BoostStep] = []
    halt = None
    for t in range(t_max):
        tree = train_tree(ds, w, max_depth, max_leaves)
        eta = dichotomy_of(tree, ds)
        if mode == "exact":
            r = sum(e * c for e, c in zip(eta, w))
        else:
            r = float(np.dot(np.asarray(w.as_floats()), np.asarray(eta.entries, dtype=np.float64)))
        if r <= 0:
            halt = "weak_learning_failure"
            break
        if r >= 1:
            halt = "perfect_classification"
            break
        if eta.entries not in row_of:
            row_of[eta.entries] = len(pool_rows)
            pool_rows.append(eta)
        a = alpha(r)
        w = weight_update(w, eta, r)
        steps.append(BoostStep(t, row_of[eta.entries], eta, r, a, w))
    if not pool_rows:
        # halted before any usable step; keep a one-row pool so the trace is valid
        pool_rows = [eta]
    pool = HypothesisPool(tuple(pool_rows), origin="learned")
    return BoostTrace(mode, pool, Optimal(), initial, tuple(steps), halt)
