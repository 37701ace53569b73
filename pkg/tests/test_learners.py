import random
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest

from boostcycles import (
    Dataset,
    WeightVector,
    detect_cycle,
    dichotomy_of,
    edge_dot,
    load_csv,
    run_on_dataset,
    sample,
    train_tree,
)
from boostcycles.learners import TreeHypothesis, TreeNode

DATA = resources.files("boostcycles") / "data"
IRIS = str(DATA / "iris.csv")
SYNTH3 = str(DATA / "synthetic3.csv")


def make_dataset(x_rows, y):
    return Dataset(
        x=np.asarray(x_rows, dtype=np.float64),
        y=tuple(y),
        feature_names=tuple(f"f{i}" for i in range(len(x_rows[0]))),
    )


def uniform(n):
    return WeightVector(tuple(Fraction(1, n) for _ in range(n)))


def brute_force_best_stump_accuracy(ds, weights):
    """Independent oracle: exhaustive stump search over midpoints and signs,
    plus the two constant hypotheses."""
    w = np.asarray(weights, dtype=np.float64)
    y = np.asarray(ds.y, dtype=np.float64)
    best = max(float(np.sum(w[y == 1])), float(np.sum(w[y == -1])))
    for f in range(ds.m):
        values = sorted(set(ds.x[:, f]))
        for lo, hi in zip(values, values[1:]):
            thr = (lo + hi) / 2
            for sign in (1, -1):
                pred = np.where(ds.x[:, f] <= thr, sign, -sign)
                best = max(best, float(np.sum(w[pred == y])))
    return best


def tree_accuracy(tree, ds, weights):
    w = np.asarray(weights, dtype=np.float64)
    y = np.asarray(ds.y, dtype=np.float64)
    return float(np.sum(w[tree.predict(ds.x) == y]))


class TestLoadCsv:
    def test_iris_shape(self):
        ds = load_csv(IRIS, "species", "setosa")
        assert (ds.n, ds.m) == (150, 4)
        assert sum(1 for label in ds.y if label == 1) == 50
        assert ds.feature_names == (
            "sepal_length",
            "sepal_width",
            "petal_length",
            "petal_width",
        )
        assert ds.provenance["dropped_rows"] == 0

    def test_missing_label_column(self):
        with pytest.raises(ValueError, match="no column"):
            load_csv(IRIS, "flavor", "setosa")

    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="single-class"):
            load_csv(IRIS, "species", "rose")

    def test_bad_rows_dropped_and_counted(self, tmp_path):
        path = tmp_path / "holes.csv"
        path.write_text("a,b,label\n1,2,x\n1,oops,y\n3,4,y\n")
        with pytest.warns(UserWarning, match="dropped 1 rows"):
            ds = load_csv(str(path), "label", "x")
        assert ds.n == 2
        assert ds.provenance["dropped_rows"] == 1

    def test_non_numeric_feature_rejected(self, tmp_path):
        path = tmp_path / "words.csv"
        path.write_text("a,b,label\nred,2,x\nblue,4,y\n")
        with pytest.raises(ValueError, match="not numeric"):
            load_csv(str(path), "label", "x")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="empty"):
            load_csv(str(path), "label", "x")


class TestSample:
    def test_size_and_determinism(self):
        ds = load_csv(IRIS, "species", "versicolor")
        a = sample(ds, 50, seed=42)
        b = sample(ds, 50, seed=42)
        assert a.n == 50
        assert np.array_equal(a.x, b.x) and a.y == b.y
        assert a.provenance["sample_size"] == 50 and a.provenance["seed"] == 42

    def test_different_seed_differs(self):
        ds = load_csv(IRIS, "species", "versicolor")
        a = sample(ds, 50, seed=1)
        b = sample(ds, 50, seed=2)
        assert not np.array_equal(a.x, b.x)

    def test_full_size_identity(self):
        ds = load_csv(IRIS, "species", "versicolor")
        full = sample(ds, ds.n, seed=0)
        assert np.array_equal(full.x, ds.x) and full.y == ds.y

    def test_oversample_rejected(self):
        ds = load_csv(IRIS, "species", "versicolor")
        with pytest.raises(ValueError, match="exceeds"):
            sample(ds, ds.n + 1, seed=0)


class TestTrainTree:
    def test_separable_single_feature_stump(self):
        ds = make_dataset([[0.0], [1.0], [2.0], [3.0]], [-1, -1, 1, 1])
        tree = train_tree(ds, uniform(4), max_depth=3, max_leaves=4)
        assert tree.depth == 1 and tree.n_leaves == 2
        assert tree_accuracy(tree, ds, [0.25] * 4) == pytest.approx(1.0)
        assert tree.root.threshold == pytest.approx(1.5)

    def test_stump_bounds(self):
        ds = make_dataset([[0.0], [1.0], [2.0]], [1, -1, 1])
        tree = train_tree(ds, uniform(3), max_depth=1, max_leaves=2)
        assert tree.n_leaves <= 2 and tree.depth <= 1

    def test_concentrated_weight_point_classified(self):
        rng = random.Random(21)
        for _ in range(25):
            n = 6
            x = [[rng.random(), rng.random()] for _ in range(n)]
            y = [rng.choice((1, -1)) for _ in range(n)]
            if len(set(y)) == 1:
                continue
            heavy = rng.randrange(n)
            w = [Fraction(1, 100)] * n
            w[heavy] = Fraction(1) - Fraction(n - 1, 100)
            ds = make_dataset(x, y)
            weights = WeightVector(tuple(w))
            tree = train_tree(ds, weights, max_depth=2, max_leaves=4)
            assert int(tree.predict(ds.x)[heavy]) == y[heavy]
            acc = tree_accuracy(tree, ds, weights.as_floats())
            assert acc >= brute_force_best_stump_accuracy(ds, weights.as_floats()) - 1e-12

    def test_deterministic(self):
        ds = load_csv(IRIS, "species", "versicolor")
        w = uniform(ds.n)
        assert train_tree(ds, w, 3, 4) == train_tree(ds, w, 3, 4)

    def test_never_below_best_stump_fuzz(self):
        rng = random.Random(22)
        for _ in range(20):
            n = rng.randint(4, 12)
            m = rng.randint(1, 3)
            x = [[rng.randint(0, 5) for _ in range(m)] for _ in range(n)]
            y = [rng.choice((1, -1)) for _ in range(n)]
            raw = [rng.random() + 0.01 for _ in range(n)]
            total = sum(raw)
            weights = [v / total for v in raw]
            ds = make_dataset(x, y)
            tree = train_tree(ds, weights, max_depth=3, max_leaves=4)
            assert (
                tree_accuracy(tree, ds, weights)
                >= brute_force_best_stump_accuracy(ds, weights) - 1e-12
            )

    def test_degenerate_features_constant(self):
        ds = make_dataset([[1.0], [1.0], [1.0]], [1, -1, 1])
        tree = train_tree(ds, uniform(3), max_depth=3, max_leaves=4)
        assert tree.n_leaves == 1
        assert list(tree.predict(ds.x)) == [1, 1, 1]

    def test_bounds_validated(self):
        ds = make_dataset([[0.0], [1.0]], [1, -1])
        with pytest.raises(ValueError):
            train_tree(ds, uniform(2), 0, 2)


class TestDichotomyOf:
    def test_perfect_classifier(self):
        ds = make_dataset([[0.0], [1.0]], [-1, 1])
        tree = train_tree(ds, uniform(2), 1, 2)
        assert dichotomy_of(tree, ds).entries == (1, 1)

    def test_all_wrong_hypothesis_rejected(self):
        # a dichotomy with no correct point is not representable; flip the tree
        ds = make_dataset([[0.0], [1.0]], [-1, 1])
        wrong = TreeHypothesis(
            TreeNode(feature=0, threshold=0.5, left=TreeNode(label=1), right=TreeNode(label=-1)),
            1,
            2,
        )
        with pytest.raises(ValueError, match="at least one"):
            dichotomy_of(wrong, ds)
        # one mistake, one hit is fine
        half = make_dataset([[0.0], [1.0]], [1, 1])
        lopsided = TreeHypothesis(
            TreeNode(feature=0, threshold=0.5, left=TreeNode(label=-1), right=TreeNode(label=1)),
            1,
            2,
        )
        assert dichotomy_of(lopsided, half).entries == (-1, 1)

    def test_edge_nonnegative_fuzz(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.randint(3, 10)
            x = [[rng.random()] for _ in range(n)]
            y = [rng.choice((1, -1)) for _ in range(n)]
            if len(set(y)) == 1:
                continue
            raw = [rng.random() + 0.01 for _ in range(n)]
            total = sum(raw)
            w = WeightVector(tuple(v / total for v in raw))
            ds = make_dataset(x, y)
            tree = train_tree(ds, w, rng.randint(1, 3), rng.randint(2, 5))
            assert edge_dot(w, dichotomy_of(tree, ds)) >= 0


class TestRunOnDataset:
    def test_synthetic3_reproduces_golden_cycle(self):
        ds = load_csv(SYNTH3, "label", "a")
        trace = run_on_dataset(ds, 1, 2, 400, "float")
        assert trace.halt is None and len(trace) == 400
        report = detect_cycle(trace, tol=1e-9, min_repeats=3)
        assert report is not None
        assert report.edge_period == 1
        assert abs(float(report.edge_values[0]) - 0.6180339887498949) < 1e-9
        assert report.periodic_learning_holds

    def test_synthetic3_deeper_tree_is_perfect(self):
        # at uniform weights no split improves, but one boosting step later the
        # depth-2 tree shatters the three values and the run halts
        ds = load_csv(SYNTH3, "label", "a")
        trace = run_on_dataset(ds, 3, 4, 10, "float")
        assert trace.halt == "perfect_classification"
        assert len(trace) == 1

    def test_single_iteration(self):
        ds = load_csv(IRIS, "species", "versicolor")
        trace = run_on_dataset(ds, 3, 4, 1, "float")
        assert len(trace) == 1
        assert detect_cycle(trace, min_repeats=3) is None

    def test_pool_accumulates_distinct_rows(self):
        ds = load_csv(SYNTH3, "label", "a")
        trace = run_on_dataset(ds, 1, 2, 50, "float")
        rows = {s.eta.entries for s in trace.steps}
        assert {row.entries for row in trace.pool.rows} == rows
        for s in trace.steps:
            assert trace.pool[s.row] == s.eta

    def test_exact_mode_runs(self):
        ds = load_csv(SYNTH3, "label", "a")
        trace = run_on_dataset(ds, 1, 2, 8, "exact")
        assert trace.mode == "exact"
        assert all(isinstance(s.edge, Fraction) for s in trace.steps)
        assert sum(trace.steps[-1].weights_after) == 1

    def test_setosa_separable_halts(self):
        ds = load_csv(IRIS, "species", "setosa")
        trace = run_on_dataset(ds, 3, 4, 5, "float")
        assert trace.halt == "perfect_classification"
